from fractions import Fraction

import pytest

from conftest import FIX, count_a, two_pid_composite
from seriesreal import formats
from seriesreal.errors import FormatError
from seriesreal.series import TruncatedSeries

HEADER = '{"truncation": 2, "alphabet": {"pids": ["1", "2"], "labels": ["a", "b"], "generators": ["s", "t"]}}'


def test_round_trip_simple_and_labeled():
    for p in (count_a(4), two_pid_composite(3)):
        text = formats.dumps_series(p)
        assert formats.loads_series(text) == p
        assert formats.dumps_series(formats.loads_series(text)) == text


def test_empty_records_is_zero_series():
    p = formats.loads_series(HEADER + "\n")
    assert p == TruncatedSeries.labeled(FIX, 2)


def test_ingest_emit_byte_identical(tmp_path):
    text = "\n".join([
        HEADER,
        '{"id": "w1", "word": [["1", "a", "s"]], "coeff": "1/2"}',
        '{"id": "w2", "word": [["2", "b", "t"], ["1", "a", "s"]], "coeff": "-3/1"}',
    ]) + "\n"
    path = tmp_path / "log.jsonl"
    path.write_text(text)
    assert formats.emit(formats.ingest(path)) == text


def test_learning_sequence_log():
    log = formats.parse_log([HEADER, '{"word": [["1", "a", "s"]]}', '{"word": [["1", "a", "s"]]}'])
    assert not log.is_series and len(log.records) == 2
    with pytest.raises(FormatError):
        log.to_series()


@pytest.mark.parametrize(
    "lines, lineno, fragment",
    [
        ([], 1, "missing header"),
        (["{not json"], 1, "header"),
        ([HEADER, '{"word": [["1", "a", "s"]], "coeff": "1"}', '{"word": [["1", "a", "s"]], "coeff": "2"}'], 3, "duplicate word"),
        ([HEADER, '{"word": [["9", "a", "s"]], "coeff": "1"}'], 2, "9"),
        ([HEADER, '{"word": [["1", "a", "s"]], "coeff": 0.5}'], 2, "exact"),
        ([HEADER, '{"word": [["1", "a", "s"]], "coeff": "0.5"}'], 2, "exact"),
        ([HEADER, '{"word": [["1","a","s"],["1","a","s"],["1","a","s"]], "coeff": "1"}'], 2, "exceeds"),
        ([HEADER, '{"id": 1, "word": [], "coeff": "1"}', '{"id": 1, "word": [["1","a","s"]], "coeff": "1"}'], 3, "duplicate id"),
        ([HEADER, "", '[1, 2]'], 3, "object"),
    ],
)
def test_parse_errors_carry_line_numbers(lines, lineno, fragment):
    with pytest.raises(FormatError) as info:
        formats.parse_log(lines)
    assert info.value.line == lineno
    assert fragment in str(info.value)
    assert str(info.value).startswith(f"line {lineno}:")


def test_mixed_records_rejected():
    with pytest.raises(FormatError):
        formats.parse_log([HEADER, '{"word": [], "coeff": "1"}', '{"word": [["1","a","s"]]}'])


def test_coefficients_always_num_den():
    p = TruncatedSeries.simple(("a",), 1, {(): 3, ("a",): Fraction(-1, 2)})
    assert formats.dumps_series(p).splitlines()[1:] == [
        '{"word": [], "coeff": "3/1"}',
        '{"word": ["a"], "coeff": "-1/2"}',
    ]

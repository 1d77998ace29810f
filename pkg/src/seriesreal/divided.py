"""Truncated power series in n variables, read through divided powers.

``coeffs[alpha]`` is the ordinary coefficient c_alpha of ``x**alpha``; the
divided-power coefficient ``c_alpha * alpha!`` is what a dual basis element
``e**alpha`` reads off.  The derivative along variable i is the right action
of the i-th primitive generator; it shifts divided-power coefficients.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, prod
from typing import Mapping


def multi_factorial(alpha: tuple) -> int:
    return prod(factorial(a) for a in alpha)


@dataclass(frozen=True, eq=False)
class DividedPowerSeries:
    n_vars: int
    degree: int
    coeffs: Mapping[tuple, Fraction]

    def __post_init__(self):
        clean = {}
        for alpha, c in self.coeffs.items():
            alpha = tuple(int(a) for a in alpha)
            if len(alpha) != self.n_vars or any(a < 0 for a in alpha):
                raise ValueError(f"bad exponent {alpha} for {self.n_vars} variables")
            if sum(alpha) > self.degree:
                raise ValueError(f"exponent {alpha} exceeds degree {self.degree}")
            c = Fraction(c)
            if c != 0:
                clean[alpha] = c
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def from_divided(cls, n_vars: int, degree: int, values: Mapping[tuple, Fraction]) -> "DividedPowerSeries":
        """Build from divided-power coefficients ``d_alpha`` (f = sum d_alpha x^alpha / alpha!)."""
        return cls(n_vars, degree, {a: Fraction(v) / multi_factorial(a) for a, v in values.items()})

    def coefficient(self, alpha: tuple) -> Fraction:
        return self.coeffs.get(tuple(alpha), Fraction(0))

    def divided_coefficient(self, alpha: tuple) -> Fraction:
        return self.coefficient(alpha) * multi_factorial(tuple(alpha))

    def counit(self) -> Fraction:
        """Augmentation: the constant term."""
        return self.coefficient((0,) * self.n_vars)

    def derivative(self, var: int = 0) -> "DividedPowerSeries":
        """Right action of the primitive generator ``e_var``; loses one degree."""
        out = {}
        for alpha, c in self.coeffs.items():
            if alpha[var] == 0:
                continue
            beta = alpha[:var] + (alpha[var] - 1,) + alpha[var + 1:]
            out[beta] = c * alpha[var]
        return DividedPowerSeries(self.n_vars, max(self.degree - 1, 0), out)

    def truncate(self, degree: int) -> "DividedPowerSeries":
        return DividedPowerSeries(
            self.n_vars, degree, {a: c for a, c in self.coeffs.items() if sum(a) <= degree}
        )

    def __mul__(self, other: "DividedPowerSeries") -> "DividedPowerSeries":
        if self.n_vars != other.n_vars:
            raise ValueError("variable count mismatch")
        degree = min(self.degree, other.degree)
        out: dict = {}
        for (a, x), (b, y) in itertools.product(self.coeffs.items(), other.coeffs.items()):
            g = tuple(i + j for i, j in zip(a, b))
            if sum(g) <= degree:
                out[g] = out.get(g, 0) + x * y
        return DividedPowerSeries(self.n_vars, degree, out)

    def __add__(self, other: "DividedPowerSeries") -> "DividedPowerSeries":
        degree = min(self.degree, other.degree)
        out = dict(self.truncate(degree).coeffs)
        for a, c in other.truncate(degree).coeffs.items():
            out[a] = out.get(a, 0) + c
        return DividedPowerSeries(self.n_vars, degree, out)

    def __eq__(self, other):
        if not isinstance(other, DividedPowerSeries):
            return NotImplemented
        return (self.n_vars, self.degree, self.coeffs) == (other.n_vars, other.degree, other.coeffs)

    __hash__ = None

    def __repr__(self):
        terms = " + ".join(f"{c}*x^{a}" for a, c in sorted(self.coeffs.items()))
        return f"DividedPowerSeries(n={self.n_vars}, D={self.degree}: {terms or '0'})"

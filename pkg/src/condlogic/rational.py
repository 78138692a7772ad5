"""Exact rationals: parsing, canonical ``num/den`` rendering, closed intervals."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Union[Fraction, int, str]


def q(x: Rational) -> Fraction:
    """Coerce to :class:`Fraction`; floats are refused to keep results exact."""
    if isinstance(x, float):
        raise TypeError(f"refusing inexact float {x!r}; pass a Fraction or 'num/den'")
    return Fraction(x)


def fmt(x: Fraction) -> str:
    """Lowest terms, always with a denominator: ``1/2``, ``0/1``, ``1/1``."""
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def in_unit(x: Fraction) -> bool:
    return 0 <= x <= 1


@dataclass(frozen=True)
class Interval:
    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{fmt(self.lo)}, {fmt(self.hi)}]")

    def __contains__(self, x: object) -> bool:
        return isinstance(x, (Fraction, int)) and self.lo <= x <= self.hi

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def hull(self, other: Interval) -> Interval:
        return Interval(min(self.lo, other.lo), max(self.hi, other.hi))

    def __str__(self) -> str:
        return f"[{fmt(self.lo)}, {fmt(self.hi)}]"

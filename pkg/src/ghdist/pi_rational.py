"""Exact rational multiples of pi.

Every distance in a regular polygon vertex set, and every closed-form distance between two such
sets, is a rational multiple of pi. Keeping the rational coefficient lets polygon results be
compared bit-exactly; the float is only produced at the comparison boundary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering

from ghdist.types import DomainError

# Largest denominator recovered from a float by from_float_multiple_of_pi()
DEFAULT_MAX_DENOMINATOR = 10**4


@total_ordering
@dataclass(frozen=True)
class PiRational:
    """A number of the form num/den times pi, kept in lowest terms with den > 0."""

    num: int
    den: int = 1

    def __post_init__(self):
        if self.den == 0:
            msg = "Denominator of a PiRational must be nonzero."
            raise DomainError(msg)

        g = math.gcd(self.num, self.den)
        sign = -1 if self.den < 0 else 1
        object.__setattr__(self, "num", sign * self.num // g)
        object.__setattr__(self, "den", sign * self.den // g)

    @classmethod
    def from_fraction(cls, q: Fraction | int) -> PiRational:
        """Build the value q times pi."""
        q = Fraction(q)
        return cls(q.numerator, q.denominator)

    @classmethod
    def from_float_multiple_of_pi(
        cls, x: float, max_denominator: int = DEFAULT_MAX_DENOMINATOR
    ) -> PiRational:
        """Recover the rational coefficient of a float known to be a rational multiple of pi.

        Args:
            x: A float equal to q * pi up to rounding.
            max_denominator: The largest denominator q may have.

        Raises:
            DomainError: If x is not finite.
        """
        if not math.isfinite(x):
            msg = f"Cannot express {x} as a rational multiple of pi."
            raise DomainError(msg)
        return cls.from_fraction(Fraction(x / math.pi).limit_denominator(max_denominator))

    @property
    def coefficient(self) -> Fraction:
        """The rational coefficient of pi."""
        return Fraction(self.num, self.den)

    def value(self) -> float:
        """The float value of the number."""
        return self.num / self.den * math.pi

    def __float__(self) -> float:
        return self.value()

    def __add__(self, other: PiRational) -> PiRational:
        return PiRational.from_fraction(self.coefficient + other.coefficient)

    def __sub__(self, other: PiRational) -> PiRational:
        return PiRational.from_fraction(self.coefficient - other.coefficient)

    def __neg__(self) -> PiRational:
        return PiRational(-self.num, self.den)

    def __abs__(self) -> PiRational:
        return PiRational(abs(self.num), self.den)

    def __mul__(self, factor: Fraction | int) -> PiRational:
        return PiRational.from_fraction(self.coefficient * Fraction(factor))

    __rmul__ = __mul__

    def __truediv__(self, divisor: Fraction | int) -> PiRational:
        return PiRational.from_fraction(self.coefficient / Fraction(divisor))

    def __lt__(self, other: PiRational) -> bool:
        return self.coefficient < other.coefficient

    def is_zero(self) -> bool:
        """Whether the number is exactly zero."""
        return self.num == 0

    def __str__(self) -> str:
        if self.num == 0:
            return "0"
        sign = "-" if self.num < 0 else ""
        magnitude = abs(self.num)
        head = "π" if magnitude == 1 else f"{magnitude}π"
        return f"{sign}{head}" if self.den == 1 else f"{sign}{head}/{self.den}"


ZERO = PiRational(0)
PI = PiRational(1)

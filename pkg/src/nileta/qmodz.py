"""Exact rationals modulo one.

Carrier for discriminant quadratic form values and for reduced eta
invariants: every value is stored as its canonical lift in [0, 1).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction


def _reduce(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True, order=True)
class QmodZ:
    """A rational number modulo Z, reduced to its lift in [0, 1)."""

    value: Fraction

    def __post_init__(self):
        if not (0 <= self.value < 1):
            raise ValueError(f"lift {self.value} outside [0, 1); use QmodZ.of()")

    @classmethod
    def of(cls, x: Fraction | int) -> "QmodZ":
        return cls(_reduce(Fraction(x)))

    @property
    def lift(self) -> Fraction:
        return self.value

    def __add__(self, other: "QmodZ") -> "QmodZ":
        return QmodZ.of(self.value + other.value)

    def __sub__(self, other: "QmodZ") -> "QmodZ":
        return QmodZ.of(self.value - other.value)

    def __neg__(self) -> "QmodZ":
        return QmodZ.of(-self.value)

    def scale(self, n: int) -> "QmodZ":
        """Integer multiple n*x mod Z."""
        return QmodZ.of(n * self.value)

    def is_zero(self) -> bool:
        return self.value == 0

    def __str__(self) -> str:
        return str(self.value)


ZERO = QmodZ(Fraction(0))

"""Exact coefficient fields: the rationals and prime fields F_p.

Scalars are plain python values (Fraction for Q, int in [0, p) for F_p);
the Field descriptor supplies the arithmetic and is shared ring-wide.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ContextError, InputError


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


@dataclass(frozen=True)
class Field:
    """Field descriptor: char == 0 means Q, char == p means F_p."""

    char: int

    def __post_init__(self):
        if self.char != 0 and not _is_prime(self.char):
            raise InputError(f"field characteristic must be 0 or prime, got {self.char}")

    @property
    def is_rational(self) -> bool:
        return self.char == 0

    @property
    def zero(self):
        return Fraction(0) if self.char == 0 else 0

    @property
    def one(self):
        return Fraction(1) if self.char == 0 else 1

    def from_int(self, n: int):
        if self.char == 0:
            return Fraction(n)
        return n % self.char

    def from_fraction(self, q: Fraction):
        if self.char == 0:
            return Fraction(q)
        den = q.denominator % self.char
        if den == 0:
            raise InputError(f"denominator {q.denominator} is zero mod {self.char}")
        return (q.numerator * pow(den, self.char - 2, self.char)) % self.char

    def add(self, a, b):
        return a + b if self.char == 0 else (a + b) % self.char

    def sub(self, a, b):
        return a - b if self.char == 0 else (a - b) % self.char

    def mul(self, a, b):
        return a * b if self.char == 0 else (a * b) % self.char

    def neg(self, a):
        return -a if self.char == 0 else (-a) % self.char

    def inv(self, a):
        if not a:
            raise ZeroDivisionError("inverse of zero field element")
        if self.char == 0:
            return Fraction(1) / a
        return pow(a, self.char - 2, self.char)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def format(self, a) -> str:
        return str(a)

    def name(self) -> str:
        return "Q" if self.char == 0 else f"Fp:{self.char}"

    @staticmethod
    def from_name(name: str) -> "Field":
        if name == "Q":
            return QQ
        if name.startswith("Fp:"):
            return Field(int(name[3:]))
        raise InputError(f"unknown field name {name!r}")


QQ = Field(0)


def GF(p: int) -> Field:
    return Field(p)


def check_same_field(a: Field, b: Field) -> None:
    if a != b:
        raise ContextError(f"mixed coefficient fields {a.name()} and {b.name()}")

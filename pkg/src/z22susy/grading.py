"""Z_2^n degrees, the Koszul sign rule and Lorentz weights."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

__all__ = [
    "Degree",
    "DimensionError",
    "LorentzWeight",
    "degree_add",
    "koszul_sign",
    "display_order",
    "parse_degree",
]

# Boost exponents are plain rationals; the alias documents intent at call sites.
LorentzWeight = Fraction


class DimensionError(ValueError):
    """Raised when degrees of different length are combined."""


@dataclass(frozen=True, order=True)
class Degree:
    bits: tuple[int, ...] = (0, 0)

    def __post_init__(self):
        bits = tuple(int(b) for b in self.bits)
        if any(b not in (0, 1) for b in bits):
            raise ValueError(f"degree bits must be 0 or 1, got {self.bits!r}")
        object.__setattr__(self, "bits", bits)

    @classmethod
    def zero(cls, n: int = 2) -> "Degree":
        return cls((0,) * n)

    @property
    def n(self) -> int:
        return len(self.bits)

    def __add__(self, other: "Degree") -> "Degree":
        return degree_add(self, other)

    def __str__(self) -> str:
        return "(" + ",".join(str(b) for b in self.bits) + ")"

    def __repr__(self) -> str:
        return f"Degree{self}"

    @property
    def is_zero(self) -> bool:
        return not any(self.bits)

    @property
    def parity(self) -> int:
        """Total degree mod 2; 0 for (0,0),(1,1) and 1 for (0,1),(1,0)."""
        return sum(self.bits) % 2

    @property
    def self_sign(self) -> int:
        return koszul_sign(self, self)


def _check(d1: Degree, d2: Degree) -> None:
    if d1.n != d2.n:
        raise DimensionError(f"cannot combine {d1} (n={d1.n}) with {d2} (n={d2.n})")


def degree_add(d1: Degree, d2: Degree) -> Degree:
    _check(d1, d2)
    return Degree(tuple(a ^ b for a, b in zip(d1.bits, d2.bits)))


def koszul_sign(d1: Degree, d2: Degree) -> int:
    """(-1)^<d1,d2> for the standard scalar product mod 2."""
    _check(d1, d2)
    return -1 if sum(a & b for a, b in zip(d1.bits, d2.bits)) % 2 else 1


def display_order(n: int = 2) -> list[Degree]:
    """Degrees ordered with zeros filled from the left, even total degree first.

    For n=2 this is (0,0), (1,1), (0,1), (1,0).
    """
    all_bits = [tuple((k >> (n - 1 - i)) & 1 for i in range(n)) for k in range(2**n)]
    all_bits.sort(key=lambda b: (sum(b), b))
    even = [Degree(b) for b in all_bits if sum(b) % 2 == 0]
    odd = [Degree(b) for b in all_bits if sum(b) % 2 == 1]
    return even + odd


_DEG_RE = re.compile(r"^\s*\(\s*([01](?:\s*,\s*[01])*)\s*\)\s*$")


def parse_degree(text: str) -> Degree:
    m = _DEG_RE.match(text)
    if not m:
        raise ValueError(f"not a degree: {text!r}")
    return Degree(tuple(int(b) for b in m.group(1).split(",")))


def total(degrees: Iterable[Degree], n: int = 2) -> Degree:
    out = Degree.zero(n)
    for d in degrees:
        out = out + d
    return out

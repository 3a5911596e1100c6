"""Canonical integer representatives of points of P^N(Q)."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Iterable

from .poly import z_content


@dataclass(frozen=True, order=True)
class ProjPoint:
    """Primitive integer vector with first nonzero coordinate positive."""

    coords: tuple[int, ...]

    def __post_init__(self):
        cs = tuple(int(c) for c in self.coords)
        if not any(cs):
            raise ValueError("the zero vector is not a projective point")
        g = z_content(cs)
        first = next(c for c in cs if c)
        if first < 0:
            g = -g
        object.__setattr__(self, "coords", tuple(c // g for c in cs))

    @classmethod
    def from_rationals(cls, values: Iterable) -> "ProjPoint":
        fr = [Fraction(v) for v in values]
        den = lcm(1, *(v.denominator for v in fr))
        return cls(tuple(int(v * den) for v in fr))

    @classmethod
    def affine(cls, *xy) -> "ProjPoint":
        """``(x, y) -> (x : y : 1)``; the line at infinity is ``z = 0``."""
        return cls.from_rationals((*xy, 1))

    @property
    def norm(self) -> int:
        return max(abs(c) for c in self.coords)

    def height(self, exponent: int = 3) -> int:
        """Anticanonical height ``||x||_inf ** exponent`` (3 on the plane)."""
        return self.norm**exponent

    def __iter__(self):
        return iter(self.coords)

    def __len__(self):
        return len(self.coords)

    def __str__(self) -> str:
        return " ".join(map(str, self.coords))

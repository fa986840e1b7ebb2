"""Exact points of the 2-torus, the Weyl group D12 of G2 and its S3 subgroup.

A torus point (theta1, theta2) stands for (exp(2 pi i theta1), exp(2 pi i theta2)).
All orbit arithmetic is done with exact rationals so that atoms of discrete
measures can be deduplicated without tolerances.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

import numpy as np


def _lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


@dataclass(frozen=True, order=True)
class TorusPoint:
    """Rational point (num1/den, num2/den) of R^2/Z^2.

    Construct with :meth:`of`; the stored triple is canonical, so ``==`` and
    ``hash`` implement exact equality mod 1.
    """

    num1: int
    num2: int
    den: int

    def __post_init__(self):
        if self.den <= 0:
            raise ValueError("den must be positive")
        f1 = Fraction(self.num1, self.den) % 1
        f2 = Fraction(self.num2, self.den) % 1
        den = _lcm(f1.denominator, f2.denominator)
        object.__setattr__(self, "num1", f1.numerator * (den // f1.denominator))
        object.__setattr__(self, "num2", f2.numerator * (den // f2.denominator))
        object.__setattr__(self, "den", den)

    @classmethod
    def of(cls, t1, t2) -> "TorusPoint":
        """Build from two rationals (int, Fraction or string like '4/21')."""
        f1, f2 = Fraction(t1), Fraction(t2)
        den = _lcm(f1.denominator, f2.denominator)
        return cls(f1.numerator * (den // f1.denominator), f2.numerator * (den // f2.denominator), den)

    @property
    def theta(self) -> tuple[Fraction, Fraction]:
        return Fraction(self.num1, self.den), Fraction(self.num2, self.den)

    def as_float(self) -> np.ndarray:
        return np.array([self.num1 / self.den, self.num2 / self.den])

    def __str__(self):
        t1, t2 = self.theta
        return f"({t1},{t2})"


@dataclass(frozen=True)
class WeylElement:
    """Integer 2x2 matrix acting on torus coordinates by theta -> A theta mod 1."""

    a11: int
    a12: int
    a21: int
    a22: int

    @property
    def det(self) -> int:
        return self.a11 * self.a22 - self.a12 * self.a21

    def matrix(self) -> np.ndarray:
        return np.array([[self.a11, self.a12], [self.a21, self.a22]], dtype=np.int64)

    def __matmul__(self, other: "WeylElement") -> "WeylElement":
        return WeylElement(
            self.a11 * other.a11 + self.a12 * other.a21,
            self.a11 * other.a12 + self.a12 * other.a22,
            self.a21 * other.a11 + self.a22 * other.a21,
            self.a21 * other.a12 + self.a22 * other.a22,
        )

    def __neg__(self) -> "WeylElement":
        return WeylElement(-self.a11, -self.a12, -self.a21, -self.a22)

    def __call__(self, p: TorusPoint) -> TorusPoint:
        return TorusPoint(
            self.a11 * p.num1 + self.a12 * p.num2,
            self.a21 * p.num1 + self.a22 * p.num2,
            p.den,
        )

    def act_float(self, theta: np.ndarray) -> np.ndarray:
        """Act on an array of points with last axis of length 2 (no reduction mod 1)."""
        return np.asarray(theta, dtype=float) @ self.matrix().T.astype(float)

    def act_weight(self, e: tuple[int, int]) -> tuple[int, int]:
        """Dual action on character exponents: mu . (A theta) = (A^T mu) . theta."""
        return (self.a11 * e[0] + self.a21 * e[1], self.a12 * e[0] + self.a22 * e[1])


IDENTITY = WeylElement(1, 0, 0, 1)
T2 = WeylElement(0, -1, -1, 0)
T6 = WeylElement(0, 1, -1, 1)


def _generate(gens: list[WeylElement]) -> list[WeylElement]:
    elems = [IDENTITY]
    frontier = [IDENTITY]
    while frontier:
        new = []
        for a in frontier:
            for g in gens:
                b = g @ a
                if b not in elems:
                    elems.append(b)
                    new.append(b)
        frontier = new
    return elems


@lru_cache(maxsize=None)
def _d12() -> tuple[WeylElement, ...]:
    return tuple(_generate([T2, T6]))


@lru_cache(maxsize=None)
def _s3() -> tuple[WeylElement, ...]:
    return tuple(_generate([T2, -T6]))


def d12_elements() -> list[WeylElement]:
    """The 12 elements of D12 = <T2, T6>."""
    return list(_d12())


def s3_elements() -> list[WeylElement]:
    """The 6 elements of S3 = <T2, -T6>."""
    return list(_s3())


def orbit(p: TorusPoint, group: list[WeylElement] | None = None) -> set[TorusPoint]:
    if group is None:
        group = d12_elements()
    return {g(p) for g in group}


def in_fundamental_domain(p: TorusPoint, strict: bool = False) -> bool:
    """Membership of p in the triangle theta1+theta2 >= 1, 2 theta1 <= theta2, theta2 <= 1.

    The closed test lets a zero coordinate be read as 1, so the corner (0,1)
    of the triangle, i.e. the identity of the torus, is accepted.  With
    ``strict=True`` all three inequalities must hold strictly.
    """
    t1, t2 = p.theta
    if strict:
        return t1 + t2 > 1 and 2 * t1 < t2 and t2 < 1
    for a in ((t1, t1 + 1) if t1 == 0 else (t1,)):
        for b in ((t2, t2 + 1) if t2 == 0 else (t2,)):
            if a + b >= 1 and 2 * a <= b and b <= 1:
                return True
    return False


def fundamental_representative(p: TorusPoint, strict: bool = False) -> list[TorusPoint]:
    """All D12 images of p lying in the fundamental domain (closed unless strict)."""
    return sorted(q for q in orbit(p) if in_fundamental_domain(q, strict=strict))

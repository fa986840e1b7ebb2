"""Characters of G2 restricted to the maximal torus.

Exponents of Laurent polynomials are written in torus coordinates, so the
monomial (e1, e2) evaluates to exp(2 pi i (e1 theta1 + e2 theta2)).  In these
coordinates the fundamental weights are (1, 0) (short, the 7-dimensional
representation) and (2, -1) (long, the adjoint), and a weight with Dynkin
labels (a, b) has exponent a*(1, 0) + b*(2, -1).
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from ._numeric import as_theta, cos2pi
from .weyl_torus import TorusPoint, WeylElement, d12_elements


class SingularPoint(ArithmeticError):
    """Limit evaluation at a zero of the Weyl denominator did not converge."""


class LaurentPoly2:
    """Two-variable Laurent polynomial with Python-int coefficients."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        self.coeffs: dict[tuple[int, int], int] = {}
        if coeffs:
            for e, c in dict(coeffs).items():
                c = int(c)
                if c:
                    self.coeffs[(int(e[0]), int(e[1]))] = c

    @classmethod
    def monomial(cls, e1: int, e2: int, c: int = 1) -> "LaurentPoly2":
        return cls({(e1, e2): c})

    @classmethod
    def one(cls) -> "LaurentPoly2":
        return cls({(0, 0): 1})

    def __eq__(self, other):
        return isinstance(other, LaurentPoly2) and self.coeffs == other.coeffs

    def __repr__(self):
        terms = sorted(self.coeffs.items())
        return f"LaurentPoly2({dict(terms)})"

    def __getitem__(self, e) -> int:
        return self.coeffs.get(tuple(e), 0)

    def __len__(self):
        return len(self.coeffs)

    @property
    def bound(self) -> int:
        """Support bound max(|e1|, |e2|) over the support (0 for the zero polynomial)."""
        return max((max(abs(a), abs(b)) for a, b in self.coeffs), default=0)

    def __add__(self, other: "LaurentPoly2") -> "LaurentPoly2":
        out = defaultdict(int, self.coeffs)
        for e, c in other.coeffs.items():
            out[e] += c
        return LaurentPoly2(out)

    def __sub__(self, other: "LaurentPoly2") -> "LaurentPoly2":
        return self + other.scale(-1)

    def scale(self, c: int) -> "LaurentPoly2":
        return LaurentPoly2({e: c * v for e, v in self.coeffs.items()})

    def shift(self, d1: int, d2: int) -> "LaurentPoly2":
        return LaurentPoly2({(a + d1, b + d2): c for (a, b), c in self.coeffs.items()})

    def __mul__(self, other: "LaurentPoly2") -> "LaurentPoly2":
        out: dict[tuple[int, int], int] = defaultdict(int)
        for (a1, b1), c1 in self.coeffs.items():
            for (a2, b2), c2 in other.coeffs.items():
                out[(a1 + a2, b1 + b2)] += c1 * c2
        return LaurentPoly2(out)

    def __pow__(self, n: int) -> "LaurentPoly2":
        if n < 0:
            raise ValueError("negative powers are not supported")
        result, base = LaurentPoly2.one(), self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def constant_term(self) -> int:
        return self.coeffs.get((0, 0), 0)

    def coefficient_sum(self) -> int:
        return sum(self.coeffs.values())

    def weyl_image(self, g: WeylElement) -> "LaurentPoly2":
        """The polynomial p(g theta), i.e. exponents transformed by g^T."""
        return LaurentPoly2({g.act_weight(e): c for e, c in self.coeffs.items()})

    def evaluate(self, theta) -> np.ndarray:
        """Value at theta (array with last axis 2); real part only for self-conjugate polys."""
        th = np.asarray(theta, dtype=float)
        out = np.zeros(th.shape[:-1], dtype=complex)
        for (a, b), c in self.coeffs.items():
            out += c * np.exp(2j * np.pi * (a * th[..., 0] + b * th[..., 1]))
        return out


@dataclass(frozen=True, order=True)
class DominantWeight:
    """Dominant weight in partition labels mu1 >= mu2 >= 0."""

    mu1: int
    mu2: int

    def __post_init__(self):
        if not (self.mu1 >= self.mu2 >= 0):
            raise ValueError(f"not dominant: ({self.mu1},{self.mu2})")

    @classmethod
    def from_dynkin(cls, l1: int, l2: int) -> "DominantWeight":
        return cls(l1 + l2, l2)

    @property
    def dynkin(self) -> tuple[int, int]:
        return (self.mu1 - self.mu2, self.mu2)

    @property
    def exponent(self) -> tuple[int, int]:
        a, b = self.dynkin
        return (a + 2 * b, -b)

    def dimension(self) -> int:
        a, b = self.dynkin
        return (a + 1) * (b + 1) * (a + b + 2) * (a + 2 * b + 3) * (a + 3 * b + 4) * (2 * a + 3 * b + 5) // 120


SHORT_ROOTS = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1))
LONG_ROOTS = ((1, 1), (-1, -1), (2, -1), (-2, 1), (1, -2), (-1, 2))
POSITIVE_ROOTS = ((1, 0), (0, 1), (1, -1), (1, 1), (2, -1), (1, -2))
RHO_EXPONENT = (3, -1)


def _dominant_dynkin(e: tuple[int, int]) -> tuple[int, int] | None:
    b = -e[1]
    a = e[0] - 2 * b
    return (a, b) if a >= 0 and b >= 0 else None


@lru_cache(maxsize=2)
def chi_fund_laurent(j: int) -> LaurentPoly2:
    """Restriction to the torus of the fundamental character chi_j (7 or 15 monomials)."""
    if j == 1:
        return LaurentPoly2({e: 1 for e in ((0, 0),) + SHORT_ROOTS})
    if j == 2:
        poly = LaurentPoly2({e: 1 for e in ((0, 0),) + SHORT_ROOTS + LONG_ROOTS})
        return poly + LaurentPoly2.one()
    raise ValueError("j must be 1 or 2")


def _as_theta(p) -> np.ndarray:
    if isinstance(p, TorusPoint):
        return p.as_float()
    return as_theta(p)


def chi_fund_eval(j: int, p) -> np.ndarray | float:
    """Cosine closed form of chi_j at theta; accepts a TorusPoint or an array (..., 2)."""
    th = _as_theta(p)
    c = cos2pi
    t1, t2 = th[..., 0], th[..., 1]
    x = 1 + 2 * c(t1) + 2 * c(t2) + 2 * c(t1 - t2)
    if j == 1:
        return x
    if j == 2:
        return x + 1 + 2 * c(t1 + t2) + 2 * c(2 * t1 - t2) + 2 * c(t1 - 2 * t2)
    raise ValueError("j must be 1 or 2")


@lru_cache(maxsize=None)
def _half_group() -> tuple[WeylElement, ...]:
    # one representative of each {g, -g} pair
    reps: list[WeylElement] = []
    for g in d12_elements():
        if -g not in reps:
            reps.append(g)
    return tuple(reps)


def alternant_laurent(e: tuple[int, int]) -> LaurentPoly2:
    """Sum over D12 of det(g) x^{g^T e}."""
    out = LaurentPoly2()
    for g in d12_elements():
        out = out + LaurentPoly2.monomial(*g.act_weight(e), g.det)
    return out


def _divide_one_minus(q: LaurentPoly2, alpha: tuple[int, int]) -> LaurentPoly2:
    """Exact quotient r of q by (1 - x^{-alpha}); raises if not divisible.

    From q_e = r_e - r_{e+alpha}, r_e is the sum of q along the ray e + j*alpha, j >= 0.
    """
    a1, a2 = alpha
    step = a1 * a1 + a2 * a2
    lines: dict[int, list[tuple[int, tuple[int, int], int]]] = defaultdict(list)
    for e, c in q.coeffs.items():
        lines[e[0] * a2 - e[1] * a1].append((e[0] * a1 + e[1] * a2, e, c))
    out = {}
    for pts in lines.values():
        if sum(c for _, _, c in pts) != 0:
            raise ArithmeticError("polynomial not divisible by (1 - x^-alpha)")
        pts.sort()
        t0, e0 = pts[0][0], pts[0][1]
        by_index = {(t - t0) // step: c for t, _, c in pts}
        acc = 0
        for k in range(max(by_index), -1, -1):
            acc += by_index.get(k, 0)
            if acc:
                out[(e0[0] + k * a1, e0[1] + k * a2)] = acc
    return LaurentPoly2(out)


@lru_cache(maxsize=256)
def chi_weyl_laurent(w: DominantWeight) -> LaurentPoly2:
    """Exact torus character via the Weyl character formula with Laurent division."""
    e = w.exponent
    num = alternant_laurent((e[0] + RHO_EXPONENT[0], e[1] + RHO_EXPONENT[1]))
    q = num.shift(-RHO_EXPONENT[0], -RHO_EXPONENT[1])
    for alpha in POSITIVE_ROOTS:
        q = _divide_one_minus(q, alpha)
    return q


def chi_fusion_laurent(w: DominantWeight) -> LaurentPoly2:
    """Exact torus character built by repeated fusion from the trivial weight.

    Uses chi_1 * chi_(mu1-1, mu2) and chi_2 * chi_(mu1-1, mu2-1) together with
    the fusion case lists, solving for the single new top term each time.
    """
    return _fusion_laurent(w.mu1, w.mu2)


@lru_cache(maxsize=None)
def _fusion_laurent(mu1: int, mu2: int) -> LaurentPoly2:
    if (mu1, mu2) == (0, 0):
        return LaurentPoly2.one()
    if mu2 == 0:
        j, src = 1, DominantWeight(mu1 - 1, 0)
    elif mu1 == mu2:
        j, src = 2, DominantWeight(mu1 - 1, mu2 - 1)
    else:
        j, src = 1, DominantWeight(mu1 - 1, mu2)
    target = DominantWeight(mu1, mu2)
    prod_poly = chi_fund_laurent(j) * _fusion_laurent(src.mu1, src.mu2)
    terms = fuse_with_fundamental(j, src)
    if terms.count(target) != 1:
        raise ArithmeticError(f"fusion step does not isolate {target}")
    for t in terms:
        if t != target:
            prod_poly = prod_poly - _fusion_laurent(t.mu1, t.mu2)
    return prod_poly


def _alternant_eval(e: tuple[int, int], th: np.ndarray) -> np.ndarray:
    out = np.zeros(th.shape[:-1])
    for g in _half_group():
        a, b = g.act_weight(e)
        out += 2 * g.det * np.cos(2 * np.pi * (a * th[..., 0] + b * th[..., 1]))
    return out


def _ratio_mp(e: tuple[int, int], t1, t2):
    num = mpmath.mpf(0)
    den = mpmath.mpf(0)
    for g in _half_group():
        a, b = g.act_weight(e)
        ra, rb = g.act_weight(RHO_EXPONENT)
        num += g.det * mpmath.cos(2 * mpmath.pi * (a * t1 + b * t2))
        den += g.det * mpmath.cos(2 * mpmath.pi * (ra * t1 + rb * t2))
    return num / den


# offset direction transverse to every reflection line
_LIMIT_DIRECTION = (0.6, 0.8)


def _limit_value(e: tuple[int, int], theta: np.ndarray, h: float = 1e-5) -> float:
    with mpmath.workdps(60):
        t1, t2 = mpmath.mpf(float(theta[0])), mpmath.mpf(float(theta[1]))
        d1, d2 = mpmath.mpf(_LIMIT_DIRECTION[0]), mpmath.mpf(_LIMIT_DIRECTION[1])
        f = [_ratio_mp(e, t1 + s * d1, t2 + s * d2) for s in (mpmath.mpf(h), mpmath.mpf(h) / 2, mpmath.mpf(h) / 4)]
        r1 = 2 * f[1] - f[0]
        r1_half = 2 * f[2] - f[1]
        r2 = (4 * r1_half - r1) / 3
        if abs(r2 - r1_half) > 1e-8 * max(1, abs(r2)):
            raise SingularPoint(f"Richardson limit did not converge at theta={tuple(theta)}")
        return float(r2)


def chi_general(w: DominantWeight, theta, singular_tol: float = 1e-7) -> np.ndarray | float:
    """Character chi_w at theta as a ratio of alternating cosine sums.

    Points where the Weyl denominator (nearly) vanishes are evaluated as a
    limit along a fixed transverse offset with two Richardson steps.
    """
    th = np.asarray(_as_theta(theta), dtype=float)
    scalar = th.ndim == 1
    th2 = np.atleast_2d(th)
    e = w.exponent
    lam = (e[0] + RHO_EXPONENT[0], e[1] + RHO_EXPONENT[1])
    num = _alternant_eval(lam, th2)
    den = _alternant_eval(RHO_EXPONENT, th2)
    bad = np.abs(den) < singular_tol
    out = np.empty(th2.shape[0])
    out[~bad] = num[~bad] / den[~bad]
    for i in np.flatnonzero(bad):
        out[i] = _limit_value(lam, th2[i])
    return float(out[0]) if scalar else out.reshape(th.shape[:-1])


def fuse_with_fundamental(j: int, w: DominantWeight) -> list[DominantWeight]:
    """Irreducible summands (with multiplicity) of rho_j tensor w, by the explicit case rules."""
    m1, m2 = w.mu1, w.mu2
    if j == 1:
        if m1 != m2:
            cand = [(m1, m2), (m1 + 1, m2), (m1 - 1, m2), (m1, m2 - 1), (m1, m2 + 1), (m1 - 1, m2 + 1), (m1 + 1, m2 - 1)]
        else:
            cand = [(m1 + 1, m2), (m1, m2 - 1), (m1 + 1, m2 - 1)]
    elif j == 2:
        if m2 == 0:
            if m1 == 0:
                cand = [(1, 1)]
            elif m1 == 1:
                cand = [(1, 0), (2, 0), (2, 1)]
            else:
                cand = [(t.mu1, t.mu2) for t in fuse_with_fundamental(1, w)]
                cand += [(m1 + 1, 1), (m1 - 2, 1), (m1 - 1, 2)]
        elif m1 == m2:
            cand = [(m1, m1), (m1 - 1, m1 - 1), (m1 + 1, m1 + 1), (m1 + 1, m1 - 1), (m1 + 1, m1 - 2), (m1 + 2, m1 - 1)]
        elif m1 == m2 + 1:
            cand = [(m1, m2), (m1, m2), (m1 - 1, m2 - 1), (m1 + 1, m2 + 1), (m1 + 1, m2 - 1),
                    (m1 + 1, m2 - 2), (m1 + 2, m2 - 1), (m1 + 1, m2), (m1, m2 - 1)]
        else:
            cand = [(t.mu1, t.mu2) for t in fuse_with_fundamental(1, w)]
            cand += [(m1, m2), (m1 - 1, m2 - 1), (m1 + 1, m2 + 1), (m1 + 1, m2 - 2),
                     (m1 - 1, m2 + 2), (m1 + 2, m2 - 1), (m1 - 2, m2 + 1)]
    else:
        raise ValueError("j must be 1 or 2")
    # zero rule: chi_(a,b) = 0 when b < 0 or a < b
    return sorted(DominantWeight(a, b) for a, b in cand if b >= 0 and a >= b)


def fundamental_polynomial(w: DominantWeight) -> dict[tuple[int, int], int]:
    """Integer coefficients c_(a,b) with chi_w = sum c_(a,b) chi_1^a chi_2^b.

    Peels off the highest dominant exponent of the remainder, which is the
    leading term of chi_1^a chi_2^b for Dynkin labels (a, b).
    """
    rest = chi_weyl_laurent(w)
    coeffs: dict[tuple[int, int], int] = {}
    while rest.coeffs:
        dom = [(e, _dominant_dynkin(e)) for e in rest.coeffs if _dominant_dynkin(e) is not None]
        # height against the dual Weyl vector orders dominant weights compatibly with dominance
        e, (a, b) = max(dom, key=lambda t: 2 * t[0][0] + t[0][1])
        c = rest[e]
        coeffs[(a, b)] = coeffs.get((a, b), 0) + c
        rest = rest - (chi_fund_laurent(1) ** a * chi_fund_laurent(2) ** b).scale(c)
    return coeffs


def evaluate_fundamental_polynomial(coeffs: dict[tuple[int, int], int], theta) -> np.ndarray:
    x = chi_fund_eval(1, theta)
    y = chi_fund_eval(2, theta)
    return sum(c * x**a * y**b for (a, b), c in coeffs.items())


def dimension_of(terms) -> int:
    return sum(t.dimension() for t in terms)


__all__ = [
    "LaurentPoly2", "DominantWeight", "SingularPoint", "chi_fund_laurent", "chi_fund_eval",
    "chi_general", "chi_weyl_laurent", "chi_fusion_laurent", "fuse_with_fundamental",
    "fundamental_polynomial", "evaluate_fundamental_polynomial", "alternant_laurent",
    "dimension_of", "POSITIVE_ROOTS", "SHORT_ROOTS", "LONG_ROOTS", "RHO_EXPONENT",
]

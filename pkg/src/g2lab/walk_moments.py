"""Exact moments of the fundamental adjacency operators, by three independent routes.

Torus moments count closed walks on the lattice graphs whose adjacency is
given by the 7-term and 15-term shift stencils of the restricted fundamental
characters.  Cone moments count closed walks on the dominant-weight graphs
given by tensoring with the fundamental representations.  All arithmetic is
on Python ints.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from math import factorial

from .characters import DominantWeight, chi_fund_laurent, fuse_with_fundamental

# shifts of the non-identity terms of the first operator, indexed k1..k6
K_SHIFTS = ((1, 0), (-1, 0), (0, 1), (0, -1), (1, -1), (-1, 1))
# shifts of the non-identity terms of the second operator, indexed l1..l12
L_SHIFTS = K_SHIFTS + ((1, 1), (-1, -1), (2, -1), (-2, 1), (1, -2), (-1, 2))


@dataclass
class WeightVector:
    """Sparse integer vector on Z^2 (kind 'torus') or on dominant weights (kind 'cone').

    Entries outside the box are dropped: |e_i| <= bound for the lattice,
    mu1 <= bound for the cone.
    """

    kind: str
    bound: int
    entries: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in ("torus", "cone"):
            raise ValueError("kind must be 'torus' or 'cone'")

    @classmethod
    def delta0(cls, kind: str, bound: int) -> "WeightVector":
        key = (0, 0) if kind == "torus" else DominantWeight(0, 0)
        return cls(kind, bound, {key: 1})

    def __getitem__(self, key) -> int:
        if self.kind == "cone" and not isinstance(key, DominantWeight):
            key = DominantWeight(*key)
        return self.entries.get(tuple(key) if self.kind == "torus" else key, 0)

    def inside(self, key) -> bool:
        if self.kind == "torus":
            return abs(key[0]) <= self.bound and abs(key[1]) <= self.bound
        return key.mu1 <= self.bound

    def total(self) -> int:
        return sum(self.entries.values())


def step_torus(j: int, v: WeightVector) -> WeightVector:
    """Apply the 7-term (j=1) or 15-term (j=2) shift stencil."""
    if v.kind != "torus":
        raise ValueError("step_torus needs a torus-lattice vector")
    stencil = chi_fund_laurent(j).coeffs
    out: dict = defaultdict(int)
    for (a, b), c in v.entries.items():
        for (d1, d2), mult in stencil.items():
            out[(a + d1, b + d2)] += mult * c
    res = WeightVector("torus", v.bound)
    res.entries = {e: c for e, c in out.items() if c and res.inside(e)}
    return res


def step_cone(j: int, v: WeightVector) -> WeightVector:
    """Apply the fusion-with-rho_j adjacency on dominant weights."""
    if v.kind != "cone":
        raise ValueError("step_cone needs a dominant-cone vector")
    out: dict = defaultdict(int)
    for w, c in v.entries.items():
        for t in fuse_with_fundamental(j, w):
            out[t] += c
    res = WeightVector("cone", v.bound)
    res.entries = {e: c for e, c in out.items() if c and res.inside(e)}
    return res


def box_bound(m: int, n: int) -> int:
    return 3 * (m + n) + 1


def walk_vector(kind: str, m: int, n: int, bound: int | None = None) -> WeightVector:
    """(v^1)^m (v^2)^n applied to the delta at the origin."""
    if bound is None:
        bound = box_bound(m, n)
    step = step_torus if kind == "torus" else step_cone
    v = WeightVector.delta0(kind, bound)
    for _ in range(m):
        v = step(1, v)
    for _ in range(n):
        v = step(2, v)
    return v


def moment_walk(kind: str, m: int, n: int) -> int:
    """Number of closed walks: m steps on the first graph then n on the second."""
    if m < 0 or n < 0:
        raise ValueError("m, n must be non-negative")
    return walk_vector(kind, m, n)[(0, 0)]


@lru_cache(maxsize=None)
def _fact(n: int) -> int:
    return factorial(n)


def _compositions(total_max: int, parts: int):
    """All tuples of `parts` non-negative ints with sum <= total_max."""
    if parts == 0:
        yield ()
        return
    for first in range(total_max + 1):
        for rest in _compositions(total_max - first, parts - 1):
            yield (first,) + rest


def _shift_weights(steps: int, shifts, identity_mult: int) -> dict:
    """Map net shift -> sum of multinomial weights over exponent tuples of one operator power."""
    out: dict = defaultdict(int)
    for ks in _compositions(steps, len(shifts)):
        rest = steps - sum(ks)
        coef = _fact(steps) // _fact(rest)
        for k in ks:
            coef //= _fact(k)
        coef *= identity_mult ** rest
        r1 = sum(k * s[0] for k, s in zip(ks, shifts))
        r2 = sum(k * s[1] for k, s in zip(ks, shifts))
        out[(r1, r2)] += coef
    return out


def moment_formula_cross(m: int, n: int, printed: bool = False) -> int:
    """Double multinomial sum over k1..k6, l1..l12 with both net shifts zero.

    The second operator contains the identity twice, so each of the
    n - sum(l) identity factors carries weight 2.  ``printed=True`` drops that
    factor, reproducing the sum exactly as usually written, for audit.
    The sum factorizes as sum_r A(r) B(-r) over net shifts r.
    """
    if m < 0 or n < 0:
        raise ValueError("m, n must be non-negative")
    a = _shift_weights(m, K_SHIFTS, 1)
    b = _shift_weights(n, L_SHIFTS, 1 if printed else 2)
    return sum(c * b.get((-r1, -r2), 0) for (r1, r2), c in a.items())


def moment_formula_pure1(m: int) -> int:
    """Single multinomial sum over k1, k2, k3, k5 for the first operator alone."""
    total = 0
    for k1 in range(m + 1):
        for k2 in range(m + 1):
            for k3 in range(m + 1):
                for k5 in range(m + 1):
                    k4 = k1 - k2 + k3
                    k6 = k1 - k2 + k5
                    used = 3 * k1 - k2 + 2 * k3 + 2 * k5
                    if k4 < 0 or k6 < 0 or used > m:
                        continue
                    coef = _fact(m)
                    for k in (k1, k2, k3, k4, k5, k6, m - used):
                        coef //= _fact(k)
                    total += coef
    return total


def moment_formula_pure2(n: int) -> int:
    """Sum of 2^(n - p3) times multinomials over the ten free indices of the second operator."""
    total = 0
    # free indices l1, l2, l3, l5, l7, l8, l9, l10, l11, l12; their sum bounds p3 from below
    for l1, l2, l3, l5, l7, l8, l9, l10, l11, l12 in _compositions(n, 10):
        p1 = l1 - l2 + l3 + 2 * l7 - 2 * l8 + l9 - l10 - l11 + l12
        p2 = l1 - l2 + l5 + l7 - l8 + 2 * l9 - 2 * l10 + l11 - l12
        p3 = 3 * l1 - l2 + 2 * l3 + 2 * l5 + 4 * l7 - 2 * l8 + 4 * l9 - 2 * l10 + l11 + l12
        if p1 < 0 or p2 < 0 or p3 > n:
            continue
        coef = _fact(n)
        for k in (l1, l2, l3, p1, l5, p2, l7, l8, l9, l10, l11, l12, n - p3):
            coef //= _fact(k)
        total += coef * 2 ** (n - p3)
    return total


def moment_constant_term(m: int, n: int) -> int:
    """Constant coefficient of sigma1^m sigma2^n."""
    return (chi_fund_laurent(1) ** m * chi_fund_laurent(2) ** n).constant_term()


@dataclass(frozen=True)
class MomentReport:
    m: int
    n: int
    value_walk: int
    value_formula: int
    value_ct: int

    @property
    def agree(self) -> bool:
        return self.value_walk == self.value_formula == self.value_ct


def moment_report(m: int, n: int) -> MomentReport:
    return MomentReport(m, n, moment_walk("torus", m, n), moment_formula_cross(m, n), moment_constant_term(m, n))


def cone_span_contains(max_word: int = 4, mu1_max: int = 2) -> bool:
    """Whether span{(v^1)^a (v^2)^b delta0 : a+b <= max_word} contains every delta_w, w.mu1 <= mu1_max."""
    from sympy import Matrix

    bound = 3 * max_word + 1
    vectors = [walk_vector("cone", a, b, bound) for a in range(max_word + 1) for b in range(max_word + 1 - a)]
    keys = sorted({w for v in vectors for w in v.entries} | {DominantWeight(a, b) for a in range(mu1_max + 1) for b in range(a + 1)})
    span = Matrix([[v.entries.get(w, 0) for w in keys] for v in vectors])
    rank = span.rank()
    for a in range(mu1_max + 1):
        for b in range(a + 1):
            target = DominantWeight(a, b)
            row = Matrix([[1 if w == target else 0 for w in keys]])
            if span.col_join(row).rank() != rank:
                return False
    return True

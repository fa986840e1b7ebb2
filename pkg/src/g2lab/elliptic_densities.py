"""Spectral densities of chi_1 and chi_2 under the torus and Haar measures.

Each density is the projection of a weight on D onto one coordinate:

    torus:  12 |J|^{-1} dx dy  ->  (3 / pi^2) int dy / sqrt(P)
    Haar:   |J| dx dy / 16 pi^4 ->  (1 / 4 pi^2) int sqrt(P) dy

with P = J^2 / 16 pi^4 the polynomial from jacobian_geometry.  The chi_1
densities also have closed forms in complete elliptic integrals K(m), E(m),
whose argument is the parameter m (not the modulus k = sqrt(m)).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import mpmath
import numpy as np

from .jacobian_geometry import boundary_s_of_y, c1_offset
from .quadrature import tanh_sinh, tanh_sinh_rule

TARGETS = ("torus-v1", "torus-v2", "haar-v1", "haar-v2")
SUPPORT = {"torus-v1": (-2.0, 7.0), "haar-v1": (-2.0, 7.0), "torus-v2": (-2.0, 14.0), "haar-v2": (-2.0, 14.0)}
# interior points where the integration region changes shape; densities are singular or kinked there
BREAKPOINTS = {"torus-v1": (-1.0,), "haar-v1": (-1.0,), "torus-v2": (10 / 27, 5.0), "haar-v2": (10 / 27, 5.0)}


class DivergentK(ArithmeticError):
    """K(m) requested at m >= 1."""


class OutsideSupport(ValueError):
    """Density evaluated outside the open support interval."""


def _agm_terms(m: np.ndarray, m1: np.ndarray | None = None):
    a = np.ones_like(m)
    b = np.sqrt(1.0 - m if m1 is None else m1)
    c2_sum = 0.5 * m  # 2^(n-1) c_n^2 at n = 0
    scale = 0.5
    for _ in range(60):
        c = 0.5 * (a - b)
        a, b = 0.5 * (a + b), np.sqrt(a * b)
        scale *= 2.0
        c2_sum = c2_sum + scale * c * c
        if np.all(np.abs(c) <= 1e-17 * np.abs(a)):
            break
    return a, c2_sum


def ellip_K(m):
    """K(m) = int_0^{pi/2} (1 - m sin^2)^{-1/2}, by the arithmetic-geometric mean."""
    m_arr = np.asarray(m, dtype=float)
    if np.any(m_arr >= 1):
        raise DivergentK("K(m) diverges for m >= 1")
    a, _ = _agm_terms(m_arr)
    out = np.pi / (2 * a)
    return float(out) if out.ndim == 0 else out


def ellip_K_comp(m1):
    """K(1 - m1), accurate when the complementary parameter m1 is tiny."""
    m1_arr = np.asarray(m1, dtype=float)
    if np.any(m1_arr <= 0):
        raise DivergentK("K(m) diverges for m >= 1")
    a, _ = _agm_terms(1.0 - m1_arr, m1_arr)
    out = np.pi / (2 * a)
    return float(out) if out.ndim == 0 else out


def ellip_E(m):
    """E(m) = int_0^{pi/2} (1 - m sin^2)^{1/2}; E(1) = 1."""
    m_arr = np.asarray(m, dtype=float)
    if np.any(m_arr > 1):
        raise ValueError("E(m) is real only for m <= 1")
    one = m_arr == 1
    safe = np.where(one, 0.0, m_arr)
    a, c2_sum = _agm_terms(safe)
    out = np.where(one, 1.0, np.pi / (2 * a) * (1 - c2_sum))
    return float(out) if out.ndim == 0 else out


def _agm_mp(m, m1):
    """K(m), E(m) for mpmath scalars m < 1, m1 = 1 - m, by the same AGM recursion."""
    if m1 <= 0:
        raise DivergentK("K(m) diverges for m >= 1")
    a, b = mpmath.mpf(1), mpmath.sqrt(m1)
    c2_sum, scale = m / 2, mpmath.mpf(1) / 2
    eps = mpmath.mpf(10) ** (5 - mpmath.mp.dps)
    while True:
        c = (a - b) / 2
        a, b = (a + b) / 2, mpmath.sqrt(a * b)
        scale *= 2
        c2_sum += scale * c * c
        if abs(c) <= eps * abs(a):
            break
    k = mpmath.pi / (2 * a)
    return k, k * (1 - c2_sum)


def _gap(x):
    """8 (x+2)^{3/2} - x^2 - 22x - 13 = (3 - s)^3 (s + 1), s = sqrt(x+2); triple zero at x = 7."""
    if isinstance(x, mpmath.mpf):
        s = mpmath.sqrt(x + 2)
    else:
        s = np.sqrt(np.clip(x + 2, 0, None))
    return ((7 - x) / (3 + s)) ** 3 * (s + 1)


def v_of_x(x):
    """v(x) = 16 (x+2)^{3/2} / (8 (x+2)^{3/2} - x^2 - 22x - 13)."""
    x = np.asarray(x, dtype=float)
    s3 = np.clip(x + 2, 0, None) ** 1.5
    return 16 * s3 / _gap(x)


@dataclass(frozen=True)
class DensityProfile:
    target: str
    evaluator: str = "quadrature"

    def __post_init__(self):
        if self.target not in TARGETS:
            raise ValueError(f"unknown target {self.target!r}")
        if self.evaluator not in ("closed-form", "quadrature"):
            raise ValueError("evaluator must be 'closed-form' or 'quadrature'")
        if self.evaluator == "closed-form" and self.target.endswith("v2"):
            raise ValueError(f"no closed form for {self.target}")

    @property
    def support(self) -> tuple[float, float]:
        return SUPPORT[self.target]

    @property
    def normalization(self) -> float:
        """Factor between the boundary integral and the probability density."""
        return 1.0 if self.target.startswith("torus") else 1.0 / (16 * np.pi**4)


# ---- closed forms -------------------------------------------------------------

def torus_v1_closed(x) -> np.ndarray:
    """Piecewise K-form of the chi_1 density under the torus measure; +inf at x = -1."""
    x = np.asarray(x, dtype=float)
    s = np.sqrt(x + 2)
    left = x <= -1
    out = np.empty_like(x)
    xl, xr = x[left], x[~left]
    sl, sr = s[left], s[~left]
    gl = _gap(xl)
    with np.errstate(divide="ignore"):
        # 1 - v and 1 - 1/v, factored so they keep full relative accuracy near x = -1
        m1l = -(xl + 1) / (sl + 1) * (sl + 3) ** 3 / gl
        m1r = (xr + 1) / (sr + 1) * (sr + 3) ** 3 / (16 * sr**3)
        out[left] = 6 / (np.pi**2 * np.sqrt(gl)) * _k_or_inf(m1l)
        out[~left] = 3 / (2 * np.pi**2 * (xr + 2) ** 0.75) * _k_or_inf(m1r)
    return out


def _k_or_inf(m1: np.ndarray) -> np.ndarray:
    out = np.full_like(m1, np.inf)
    pos = m1 > 0
    out[pos] = ellip_K_comp(m1[pos])
    return out


def _haar_v1_closed_scalar(x) -> float:
    x = mpmath.mpf(x)
    s3 = (x + 2) ** mpmath.mpf(1.5)
    quartic = x**4 + 236 * x**3 + 1662 * x**2 + 2876 * x + 1705
    a = x * x + 22 * x + 13
    if x == -1:
        # the K coefficient vanishes there and E(1) = 1
        return float(64 / (15 * mpmath.pi**2))
    g = _gap(x)
    s = mpmath.sqrt(x + 2)
    v = 16 * s3 / g
    if x < -1:
        k, e = _agm_mp(v, -(x + 1) / (s + 1) * (s + 3) ** 3 / g)
        val = mpmath.pi**2 / 15 * mpmath.sqrt(g) * (quartic * e - (8 * s3 + a) * a * k)
    else:
        k, e = _agm_mp(1 / v, (x + 1) / (s + 1) * (s + 3) ** 3 / (16 * s3))
        val = 2 * mpmath.pi**2 / 15 * (x + 2) ** mpmath.mpf(0.75) * (
            2 * quartic * e - (8 * s3 + a) * (24 * s3 + a) * k)
    return float(val / (16 * mpmath.pi**4))


def haar_v1_closed(x, dps: int = 40) -> np.ndarray:
    """J_1^{G2}(x) / 16 pi^4 from the K/E closed form.

    The two bracketed terms cancel to many digits as x -> 7, so the formula
    is evaluated in mpmath at `dps` digits with the same AGM recursion.
    """
    x = np.asarray(x, dtype=float)
    with mpmath.workdps(dps):
        # the y-section shrinks to a point at both ends, where the density vanishes
        out = np.array([0.0 if t in (-2.0, 7.0) else _haar_v1_closed_scalar(float(t)) for t in x.reshape(-1)])
    return out.reshape(x.shape)


# ---- quadrature forms ---------------------------------------------------------

def _y_section(x: np.ndarray):
    """Width of the y-section of D at x and the distance from its lower end to the third root of P.

    With s = sqrt(x+2) the three roots of P in y are -5(x+1) +- 2 s^3 and
    (x^2+2x-7)/4; their differences factor as 4 s^3, (3-s)^3 (s+1) / 4 and
    |s-1| (s+3)^3 / 4, which keeps them accurate at x = -1 and x = 7.
    """
    s = np.sqrt(np.clip(x + 2, 0, None))
    s_minus_1 = (x + 1) / (s + 1)
    gap = np.abs(s_minus_1) * (s + 3) ** 3 / 4
    width = np.where(x <= -1, 4 * s**3, ((7 - x) / (3 + s)) ** 3 * (s + 1) / 4)
    return width, gap


def _safe_power(p: np.ndarray, power: float) -> np.ndarray:
    # nodes whose product rounds to <= 0 sit within rounding of a root; their weight is negligible
    out = np.zeros_like(p)
    pos = p > 0
    out[pos] = p[pos] ** power
    return out


def _x_integral(x: np.ndarray, power: float, level: int) -> np.ndarray:
    """int over the y-section of D of (P)^power dy, for each x."""
    width, gap = _y_section(x)

    def f(u, da, db):
        return _safe_power(4 * db * da * (da + gap[..., None]), power)

    return tanh_sinh(f, np.zeros_like(width), width, level)


def _x_pieces(y: float):
    """Pieces (start, width, P/4) of the x-section of D at height y, in u = x + 2.

    P = -4 (x - x1)(x - x2)(x - x3)(x - x4)(x - x5) with x1..x3 the cubic-factor
    roots and x4, x5 = -1 +- 2 sqrt(y + 2).  The cubic-factor roots come from
    boundary_s_of_y as u = s^2, and P / 4 is written in the offsets (da, db) from
    the piece ends so that near-coincident roots do not cancel.
    """
    sq = np.sqrt(max(y + 2, 0.0))
    u4, u5 = 1 + 2 * sq, 1 - 2 * sq
    pieces = []
    if 10 / 27 < y < 5:
        ua, ub, uc = (boundary_s_of_y(c, y) ** 2 for c in ("c3", "c2", "c1"))
        pieces.append((ua, ub - ua, lambda da, db: da * db * (uc - ub + db) * (u4 - ub + db) * (ua - u5 + da)))
        pieces.append((uc, u4 - uc, lambda da, db: da * db * (uc - ua + da) * (uc - ub + da) * (uc - u5 + da)))
        return pieces
    if y <= 10 / 27:
        root = boundary_s_of_y("c3", y) ** 2
        width = u4 - root
    else:
        t = c1_offset(y)
        root = (3 - t) ** 2
        # u4 - root = 2 sq - (s^2 - 1) = t^3 (4 - t) / (2 sq + s^2 - 1)
        width = t**3 * (4 - t) / (2 * sq + root - 1)
    # quadratic cofactor 4x^2 + q1 x + q0 of the cubic factor after removing (x - root)
    xr = root - 2
    q1, q0 = 4 * xr - 1, 4 * xr * xr - xr - 2 - 10 * y

    def cof(u):
        x = u - 2
        return (4 * x * x + q1 * x + q0) / 4

    # its complex roots approach the real axis at the vertex just below y = 10/27: split there
    vertex = 2 - q1 / 8
    if root < vertex < u4:
        for a, b in ((root, vertex), (vertex, u4)):
            pieces.append((a, b - a, lambda da, db, a=a, b=b: cof(a + da) * (a - root + da) * (a - u5 + da) * (u4 - b + db)))
    else:
        pieces.append((root, width, lambda da, db: da * db * cof(root + da) * (root - u5 + da)))
    return pieces


def _y_integral(y: float, power: float, level: int) -> float:
    total = 0.0
    for start, width, rest in _x_pieces(y):
        if width <= 0:
            continue

        def f(u, da, db, rest=rest):
            return _safe_power(4 * rest(da, db), power)

        total += float(tanh_sinh(f, 0.0, width, level))
    return total


def density_quadrature(target: str, t, level: int = 6) -> np.ndarray:
    t = np.atleast_1d(np.asarray(t, dtype=float))
    power = -0.5 if target.startswith("torus") else 0.5
    scale = 3 / np.pi**2 if target.startswith("torus") else 1 / (4 * np.pi**2)
    if target.endswith("v1"):
        return scale * _x_integral(t, power, level)
    return scale * np.array([_y_integral(float(s), power, level) for s in t])


def density_eval(profile: DensityProfile, t):
    """Density of `profile` at t (scalar or array) inside the open support."""
    lo, hi = profile.support
    arr = np.asarray(t, dtype=float)
    if np.any((arr <= lo) | (arr >= hi)):
        raise OutsideSupport(f"{profile.target}: t must lie in ({lo}, {hi})")
    if profile.evaluator == "closed-form":
        out = torus_v1_closed(np.atleast_1d(arr)) if profile.target == "torus-v1" else haar_v1_closed(np.atleast_1d(arr))
    else:
        out = density_quadrature(profile.target, arr)
    return float(out[0]) if arr.ndim == 0 else out.reshape(arr.shape)


def _outer_intervals(target: str):
    lo, hi = SUPPORT[target]
    cuts = (lo,) + BREAKPOINTS[target] + (hi,)
    return list(zip(cuts[:-1], cuts[1:]))


@lru_cache(maxsize=32)
def _outer_rule(profile: DensityProfile, level: int, inner_level: int):
    """Nodes, weights and density values of the split tanh-sinh rule over the support."""
    op, om, w = tanh_sinh_rule(level)
    ts, ws, ds = [], [], []
    for a, b in _outer_intervals(profile.target):
        half = 0.5 * (b - a)
        t = np.where(op <= om, a + half * op, b - half * om)
        # nodes that round onto a breakpoint are dropped; their weight is below 1e-30
        keep = (t > a) & (t < b)
        t = t[keep]
        if profile.evaluator == "closed-form":
            dens = torus_v1_closed(t) if profile.target == "torus-v1" else haar_v1_closed(t)
        else:
            dens = density_quadrature(profile.target, t, inner_level)
        ts.append(t)
        ws.append(half * w[keep])
        ds.append(dens)
    return np.concatenate(ts), np.concatenate(ws), np.concatenate(ds)


def density_moment(profile: DensityProfile, r: int, level: int = 6, inner_level: int = 6) -> float:
    """int t^r density(t) dt; tanh-sinh on each piece between breakpoints."""
    if r < 0 or r > 8:
        raise ValueError("0 <= r <= 8")
    t, w, dens = _outer_rule(profile, level, inner_level)
    return float(np.sum(w * t**r * dens))


# ---- grid export --------------------------------------------------------------

# points where the density is unbounded: log growth at x = -1 and y = 10/27, (y+2)^{-1/2} at y = -2
SINGULAR = {"torus-v1": (-1.0,), "torus-v2": (-2.0, 10 / 27), "haar-v1": (), "haar-v2": ()}
LIMIT_OFFSET = 1e-9


def _evaluate_inside(target: str, t: np.ndarray) -> np.ndarray:
    if target == "torus-v1":
        return torus_v1_closed(t)
    if target == "haar-v1":
        return haar_v1_closed(t)
    return density_quadrature(target, t)


def density_grid(target: str, grid: int):
    """Density on `grid` equally spaced points of the closed support, endpoints included.

    Returns (t, density, clipped).  At a support endpoint or breakpoint the
    value is the one-sided limit, taken at a relative distance LIMIT_OFFSET
    (the mean of both sides at an interior jump).  At a singular point the
    value is capped at the largest finite grid value and clipped is True.
    """
    if target not in TARGETS:
        raise ValueError(f"unknown target {target!r}")
    if grid < 2:
        raise ValueError("grid must be at least 2")
    lo, hi = SUPPORT[target]
    t = np.linspace(lo, hi, grid)
    dens = np.empty(grid)
    special = {lo, hi, *BREAKPOINTS[target]}
    eps = LIMIT_OFFSET * (hi - lo)
    singular = np.isin(t, SINGULAR[target])
    regular = ~singular & ~np.isin(t, list(special))
    dens[regular] = _evaluate_inside(target, t[regular])
    for i in np.flatnonzero(~singular & ~regular):
        sides = [v for v in (t[i] - eps, t[i] + eps) if lo < v < hi]
        dens[i] = float(np.mean(_evaluate_inside(target, np.array(sides))))
    finite = dens[~singular]
    dens[singular] = finite.max() if finite.size else 0.0
    return t, dens, singular

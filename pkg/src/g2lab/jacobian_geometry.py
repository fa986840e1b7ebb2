"""The character map theta -> (x, y), its Jacobian and the image region D.

x = chi_1(theta) ranges over [-2, 7] and y = chi_2(theta) over [-2, 14].  The
squared Jacobian is a polynomial in (x, y):

    J(theta)^2 / 16 pi^4 = C(x, y) * (4y - x^2 - 2x + 7),
    C(x, y) = 4x^3 - x^2 - 2x - 10xy - y^2 - 10y + 7,

and on D both factors are non-negative.
"""
from __future__ import annotations

import numpy as np
from scipy.optimize import brentq

from ._numeric import as_theta, cos2pi, pi_value, sinpi
from .characters import chi_fund_eval

PI = np.pi
CURVES = ("c1", "c2", "c3", "c4")
# y-parameter ranges of the boundary arcs written as x = f(y)
CURVE_Y_RANGE = {
    "c1": (10 / 27, 14.0),  # right arc of the upper boundary, x in [7/9, 7]
    "c2": (10 / 27, 5.0),  # left arc of the upper boundary, x in [-2, 7/9]
    "c3": (-2.0, 5.0),  # lower-left boundary, x in [-2, -1]
    "c4": (-2.0, 14.0),  # lower-right boundary 4y = x^2 + 2x - 7, x in [-1, 7]
}


class OutOfRange(ValueError):
    """Boundary curve evaluated outside its parameter interval."""


def psi_map(theta) -> tuple[np.ndarray, np.ndarray]:
    return chi_fund_eval(1, theta), chi_fund_eval(2, theta)


def jacobian_theta(theta) -> np.ndarray:
    """J(theta); float arrays or mpmath object arrays."""
    th = as_theta(theta)
    t1, t2 = th[..., 0], th[..., 1]
    c = cos2pi
    return 8 * pi_value(t1) ** 2 * (
        c(2 * t1 + t2) + c(t1 - 3 * t2) + c(3 * t1 - 2 * t2)
        - c(t1 + 2 * t2) - c(3 * t1 - t2) - c(2 * t1 - 3 * t2)
    )


def jacobian_sine_product(theta) -> np.ndarray:
    th = as_theta(theta)
    t1, t2 = th[..., 0], th[..., 1]
    s = sinpi
    return 256 * pi_value(t1) ** 2 * s(t1) * s(t2) * s(t1 + t2) * s(t1 - t2) * s(2 * t1 - t2) * s(t1 - 2 * t2)


def cubic_factor(x, y):
    return 4 * x**3 - x**2 - 2 * x - 10 * x * y - y**2 - 10 * y + 7


def quadratic_factor(x, y):
    """4y - x^2 - 2x + 7; zero on c4 and on the parabola branch x = -1 - 2 sqrt(y+2)."""
    return 4 * y - x**2 - 2 * x + 7


def jacobian_sq_xy(x, y):
    """Polynomial P(x, y) with J(theta)^2 = 16 pi^4 P(psi_map(theta))."""
    return cubic_factor(x, y) * quadratic_factor(x, y)


def upper_y(x):
    """Upper boundary y = -5(x+1) + 2(x+2)^{3/2} (arcs c2 then c1 as x increases)."""
    return -5 * (x + 1) + 2 * (x + 2) ** 1.5


def lower_y(x):
    """Lower boundary: c3 for x <= -1, the parabola c4 for x >= -1."""
    x = np.asarray(x, dtype=float)
    left = -5 * (x + 1) - 2 * np.clip(x + 2, 0, None) ** 1.5
    right = (x**2 + 2 * x - 7) / 4
    return np.where(x <= -1, left, right)


def _cubic_roots_p(y: complex) -> np.ndarray:
    """The three values 12 p = -1 - eps P - 25 conj(eps) / P, eps the cube roots of unity."""
    disc = np.sqrt(complex(27 * (27 * y * y - 145 * y + 50)))
    big = (145 - 54 * y + 2 * disc) ** (1 / 3)
    if abs(big) < 1e-300:
        big = (145 - 54 * y - 2 * disc) ** (1 / 3)
    eps = np.exp(2j * PI * np.arange(3) / 3)
    return (-1 - eps * big - 25 * np.conj(eps) / big) / 12


def boundary_roots_x(y: float) -> np.ndarray:
    """x = -1 + 4p + 4p^2 for the three cube-root values p at height y (complex, unsorted)."""
    ps = _cubic_roots_p(complex(y))
    return -1 + 4 * ps + 4 * ps**2


def boundary_x_of_y(curve: str, y: float) -> float:
    """x on boundary arc `curve` at height y.

    Roots are assigned to arcs by position rather than by cube-root branch:
    c3 is the leftmost real root, c1 the rightmost, and c2 (which exists only
    where all three roots are real) the middle one.
    """
    if curve not in CURVE_Y_RANGE:
        raise ValueError(f"unknown curve {curve!r}")
    lo, hi = CURVE_Y_RANGE[curve]
    if not (lo - 1e-12 <= y <= hi + 1e-12):
        raise OutOfRange(f"y={y} outside [{lo}, {hi}] for {curve}")
    if curve == "c4":
        return float(-1 + 2 * np.sqrt(max(y + 2, 0.0)))
    xs = boundary_roots_x(y)
    if curve == "c2":
        x = np.sort(xs.real)[1]
    else:
        # a double root near y = 10/27 or 5 leaves an O(sqrt(eps)) imaginary part
        real = xs.real[np.abs(xs.imag) <= 1e-6]
        x = real.min() if curve == "c3" else real.max()
    return float(np.clip(x, -2.0, 7.0))


def _bracketed_root(f, lo: float, hi: float) -> float:
    fa, fb = f(lo), f(hi)
    if fa == 0:
        return lo
    if fb == 0 or fa * fb > 0:
        # endpoint of the range, up to rounding of y
        return hi if abs(fb) <= abs(fa) else lo
    return brentq(f, lo, hi, xtol=1e-300, rtol=8.9e-16)


def c1_offset(y: float) -> float:
    """t = 3 - sqrt(x + 2) on c1, from 2t^3 - 13t^2 + 24t = 14 - y (accurate as y -> 14)."""
    lo, hi = CURVE_Y_RANGE["c1"]
    if not (lo - 1e-12 <= y <= hi + 1e-12):
        raise OutOfRange(f"y={y} outside [{lo}, {hi}] for c1")
    rhs = 14 - min(max(y, lo), hi)
    return _bracketed_root(lambda t: (2 * t - 13) * t * t + 24 * t - rhs, 0.0, 4 / 3)


def boundary_s_of_y(curve: str, y: float) -> float:
    """s = sqrt(x + 2) on arc c1, c2 or c3 at height y, by a bracketed root solve.

    On c1 and c2, y = -5(s^2 - 1) + 2 s^3; on c3, y = -5(s^2 - 1) - 2 s^3.  Near
    the corner (-2, 5) both c2 and c3 approach s = 0, where x itself cannot
    separate them in floating point but s can.
    """
    if curve == "c1":
        return 3 - c1_offset(y)
    if curve not in ("c2", "c3"):
        raise ValueError(f"no s-parametrization for {curve!r}")
    lo, hi = CURVE_Y_RANGE[curve]
    if not (lo - 1e-12 <= y <= hi + 1e-12):
        raise OutOfRange(f"y={y} outside [{lo}, {hi}] for {curve}")
    y = min(max(y, lo), hi)
    if curve == "c3":
        return _bracketed_root(lambda s: (2 * s + 5) * s * s - 5 + y, 0.0, 1.0)
    # the upper cubic turns at s = 5/3 (y = 10/27); c2 is the smaller branch
    return _bracketed_root(lambda s: (2 * s - 5) * s * s + 5 - y, 0.0, 5 / 3)


def domain_contains(x, y, tol: float = 1e-9):
    """Membership test for D = image of the character map."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    ok = (x >= -2 - tol) & (x <= 7 + tol) & (y >= -2 - tol) & (y <= 14 + tol)
    ok &= quadratic_factor(x, y) >= -tol
    ok &= cubic_factor(x, y) >= -tol
    return ok if ok.ndim else bool(ok)


def reflection_lines():
    """Directions of the six lines through the origin on which J vanishes."""
    return [(1, 1), (1, -1), (2, 1), (1, 2), (1, 0), (0, 1)]

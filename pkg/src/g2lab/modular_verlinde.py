"""Level-k modular data for G2: S-matrix, Verlinde nimreps, eigenvalues and Perron data.

Labels are unshifted Dynkin pairs (l1, l2) with l1 + 2 l2 <= k; shifted labels
l_hat = l + 1 enter every formula explicitly.  xi = pi / 3(k+4) throughout.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .characters import chi_fund_eval
from .jacobian_geometry import jacobian_theta
from .weyl_torus import TorusPoint

KMAX = 16


class NonIntegerEntry(ArithmeticError):
    """A Verlinde spectral sum did not round to an integer."""


def exponent_set(k: int) -> list[tuple[int, int]]:
    """Dynkin labels of the level-k alcove, sorted lexicographically."""
    return [(a, b) for a in range(k + 1) for b in range(k + 1) if a + 2 * b <= k]


def _six_cosines(xi: float, A, B, L2, M2):
    # A = l1_hat + l2_hat, B = m1_hat + m2_hat, L2 = l2_hat, M2 = m2_hat
    c = lambda z: np.cos(2 * xi * z)
    return (
        c(2 * A * B + A * M2 + L2 * B + 2 * L2 * M2)
        + c(-A * B - 2 * A * M2 + L2 * B - L2 * M2)
        + c(-A * B + A * M2 - 2 * L2 * B - L2 * M2)
        - c(-A * B - 2 * A * M2 - 2 * L2 * B - L2 * M2)
        - c(2 * A * B + A * M2 + L2 * B - L2 * M2)
        - c(-A * B + A * M2 + L2 * B + 2 * L2 * M2)
    )


@dataclass(frozen=True)
class ModularLevel:
    k: int
    exponents: tuple
    S: np.ndarray = field(repr=False, compare=False)
    sign: int = 1

    @property
    def xi(self) -> float:
        return np.pi / (3 * (self.k + 4))

    @property
    def size(self) -> int:
        return len(self.exponents)

    def index(self, lam) -> int:
        try:
            return self.exponents.index(tuple(lam))
        except ValueError:
            raise KeyError(f"{lam} is not a level-{self.k} exponent") from None


@lru_cache(maxsize=None)
def build_level(k: int) -> ModularLevel:
    """S from the six-cosine formula with prefactor -2/((k+4) sqrt 3), sign fixed by S_00 > 0."""
    if not 1 <= k <= KMAX:
        raise ValueError(f"level must lie in 1..{KMAX}")
    ex = exponent_set(k)
    hat = np.array(ex, dtype=float) + 1
    A = (hat[:, 0] + hat[:, 1])[:, None]
    L2 = hat[:, 1][:, None]
    xi = np.pi / (3 * (k + 4))
    S = -2 / ((k + 4) * np.sqrt(3)) * _six_cosines(xi, A, A.T, L2, L2.T)
    # the formula is symmetric in lambda, mu; mirroring removes rounding asymmetry
    S = np.triu(S) + np.triu(S, 1).T
    sign = 1 if S[0, 0] > 0 else -1
    S = sign * S
    S.setflags(write=False)
    return ModularLevel(k, tuple(ex), S, sign)


def theta_of_exponent(level: ModularLevel, lam) -> TorusPoint:
    """((l1_hat + 3 l2_hat) / 3(k+4), -l1_hat / 3(k+4)) mod 1, exactly."""
    level.index(lam)
    n = 3 * (level.k + 4)
    h1, h2 = lam[0] + 1, lam[1] + 1
    return TorusPoint.of(Fraction(h1 + 3 * h2, n), Fraction(-h1, n))


def _rho_label(j: int) -> tuple[int, int]:
    if j not in (1, 2):
        raise ValueError("j must be 1 or 2")
    return (1, 0) if j == 1 else (0, 1)


def beta(level: ModularLevel, j: int, mu) -> float:
    """Eigenvalue S_{rho_j, mu} / S_{0, mu} of the level-k fusion matrix of rho_j."""
    i = level.index(mu)
    if _rho_label(j) not in level.exponents:
        raise KeyError(f"rho_{j} is not a level-{level.k} exponent; use beta_character")
    r = level.index(_rho_label(j))
    return float(level.S[r, i] / level.S[0, i])


def beta_cosine(level: ModularLevel, j: int, mu) -> float:
    """Same eigenvalue from the cosine sums in the shifted labels (second route)."""
    xi = level.xi
    h1, h2 = mu[0] + 1, mu[1] + 1
    c = lambda z: 2 * np.cos(2 * xi * z)
    short = c(h1) + c(h1 + 3 * h2) + c(2 * h1 + 3 * h2)
    if j == 1:
        return 1 + short
    return 2 + short + c(3 * h2) + c(3 * (h1 + h2)) + c(3 * (h1 + 2 * h2))


def beta_character(level: ModularLevel, j: int, mu) -> float:
    return float(chi_fund_eval(j, theta_of_exponent(level, mu)))


def psi_star(level: ModularLevel, lam) -> float:
    """Perron-Frobenius entry from the six-cosine boundary formula, in the S_00 > 0 sign."""
    k, xi = level.k, level.xi
    h1, h2 = lam[0] + 1, lam[1] + 1
    c = lambda z: np.cos(2 * xi * z)
    val = -2 / ((k + 4) * np.sqrt(3)) * (
        c(5 * h1 + 9 * h2) + c(h1 + 6 * h2) + c(4 * h1 + 3 * h2)
        - c(4 * h1 + 9 * h2) - c(h1 - 3 * h2) - c(5 * h1 + 6 * h2)
    )
    return float(level.sign * val)


def psi_star_from_jacobian(level: ModularLevel, lam) -> float:
    """-J(theta(lam)) / (4 sqrt 3 (k+4) pi^2)."""
    th = theta_of_exponent(level, lam).as_float()
    return float(-level.sign * jacobian_theta(th) / (4 * np.sqrt(3) * (level.k + 4) * np.pi**2))


def _sine_constant(xi: float) -> float:
    return float(np.prod(np.sin(np.array([1, 3, 4, 5, 6, 9]) * xi)))


def kac_weyl_phi(level: ModularLevel, lam) -> float:
    """Kac-Weyl product of sines, normalized to 1 at lam = (0, 0)."""
    xi = level.xi
    h1, h2 = lam[0] + 1, lam[1] + 1
    num = np.prod(np.sin(np.array([h1, 3 * h2, h1 + 3 * h2, 2 * h1 + 3 * h2, 3 * h1 + 3 * h2, 3 * h1 + 6 * h2]) * xi))
    return float(num / _sine_constant(xi))


def kac_weyl_ratio(level: ModularLevel, lam) -> float:
    """(k+4) sqrt 3 psi_star / (64 prod sin(c xi) phi_star); equal to 1 when the factorization holds."""
    lhs = (level.k + 4) * np.sqrt(3) * psi_star(level, lam)
    return float(lhs / (64 * _sine_constant(level.xi) * kac_weyl_phi(level, lam)))


def verlinde_sum(level: ModularLevel, j) -> np.ndarray:
    """N[mu, nu] = sum_sigma (S_{lam sigma} / S_{0 sigma}) S_{mu sigma} S_{nu sigma} (real S).

    j = 1, 2 selects rho_j; any other value is taken as an exponent label.  At
    k = 1 rho_2 lies outside the alcove and its eigenvalues chi_2(theta(sigma))
    are used directly; the resulting matrix is zero.
    """
    S = level.S
    if j in (1, 2):
        ratios = np.array([beta(level, j, mu) if _rho_label(j) in level.exponents else beta_character(level, j, mu)
                           for mu in level.exponents])
    else:
        ratios = S[level.index(j)] / S[0]
    return (S * ratios) @ S.T


def verlinde_nimrep(level: ModularLevel, j, tol: float = 1e-6) -> np.ndarray:
    """Integer fusion matrix of rho_j (j = 1, 2) or of any exponent label j."""
    raw = verlinde_sum(level, j)
    out = np.rint(raw)
    resid = float(np.max(np.abs(raw - out)))
    if resid > tol:
        raise NonIntegerEntry(f"Verlinde sum off an integer by {resid:.3g} at k={level.k}")
    return out.astype(np.int64) + 0


def nimrep_residual(level: ModularLevel, j) -> float:
    raw = verlinde_sum(level, j)
    return float(np.max(np.abs(raw - np.rint(raw))))


def nimrep_moment(level: ModularLevel, m: int, n: int) -> int:
    """<N_1^m N_2^n e0, e0> with exact integer matrix products."""
    n1 = verlinde_nimrep(level, 1).astype(object)
    n2 = verlinde_nimrep(level, 2).astype(object)
    v = np.zeros(level.size, dtype=object)
    v[level.index((0, 0))] = 1
    for _ in range(n):
        v = n2.dot(v)
    for _ in range(m):
        v = n1.dot(v)
    return int(v[level.index((0, 0))])


def quantum_integer(level: ModularLevel, m: int) -> float:
    """[m] = sin(m xi) / sin(xi), i.e. (q^m - q^-m)/(q - q^-1) at q = exp(i xi)."""
    return float(np.sin(m * level.xi) / np.sin(level.xi))


QDIM_INDICES = {1: ((2, 7, 12), (4, 6)), 2: ((7, 8, 15), (3, 4, 5))}


def q_dim(level: ModularLevel, which) -> float:
    """Quantum dimension of rho_1 or rho_2 (which = 1 or 2), or of a ratio of q-integers.

    A ratio is given as (numerator indices, denominator indices).
    """
    num, den = QDIM_INDICES[which] if which in (1, 2) else which
    val = 1.0
    for m in num:
        val *= quantum_integer(level, m)
    for m in den:
        val /= quantum_integer(level, m)
    return val

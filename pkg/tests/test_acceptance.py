"""One test per acceptance criterion, at the stated tolerances."""
import math
import subprocess
import sys
import time
from fractions import Fraction

import mpmath
import numpy as np

from g2lab._numeric import to_mp
from g2lab.characters import chi_fund_eval
from g2lab.elliptic_densities import (DensityProfile, density_moment, density_quadrature, haar_v1_closed,
                                      torus_v1_closed)
from g2lab.invariant_measures import (EXCEPTIONAL, TABLES, abs_j_over_8pi2, audit_measure, measure_ak, measure_dn,
                                      measure_dnk, measure_exceptional, measure_moment)
from g2lab.jacobian_geometry import (boundary_roots_x, cubic_factor, domain_contains, jacobian_sine_product,
                                     jacobian_sq_xy, jacobian_theta, psi_map, reflection_lines, upper_y)
from g2lab.modular_verlinde import (beta_character, build_level, kac_weyl_ratio, nimrep_moment, nimrep_residual,
                                    psi_star, q_dim, theta_of_exponent, verlinde_nimrep, verlinde_sum)
from g2lab.walk_moments import moment_constant_term, moment_formula_cross, moment_walk

PI = math.pi


def test_criterion_01_moment_triple_agreement(criterion):
    t0 = time.perf_counter()
    bad = []
    for m in range(7):
        for n in range(7 - m):
            a, b, c = moment_walk("torus", m, n), moment_formula_cross(m, n), moment_constant_term(m, n)
            if not a == b == c:
                bad.append((m, n, a, b, c))
    spot = (moment_walk("torus", 2, 0), moment_walk("torus", 0, 1), moment_walk("torus", 1, 1)) == (7, 2, 8)
    elapsed = time.perf_counter() - t0
    ok = not bad and spot and elapsed < 10
    assert criterion(1, ok, f"m+n <= 6, {len(bad)} mismatches, {elapsed:.2f} s"), bad


def test_criterion_02_trapezoid_exactness(criterion):
    worst = 0.0
    for m in range(6):
        for n in range(6 - m):
            N = 3 * (m + n) + 3
            g = np.arange(N) / N
            th = np.stack(np.meshgrid(g, g, indexing="ij"), axis=-1)
            val = np.mean(chi_fund_eval(1, th) ** m * chi_fund_eval(2, th) ** n)
            worst = max(worst, abs(val - moment_constant_term(m, n)))
    assert criterion(2, worst <= 1e-9, f"max error {worst:.1e}")


def test_criterion_03_jacobian_identities(criterion):
    rng = np.random.default_rng(2024)
    th = rng.random((1000, 2))
    with mpmath.workdps(30):
        mth = to_mp(th)
        j1 = jacobian_theta(mth)
        j2 = jacobian_sine_product(mth)
        x, y = psi_map(mth)
        poly = 16 * mpmath.pi**4 * jacobian_sq_xy(x, y)
        r1 = max(abs(a - b) / abs(a) for a, b in zip(j1, j2))
        r2 = max(abs(a * a - p) / abs(a * a) for a, p in zip(j1, poly))
    # float evaluation: per-point relative error is reported, but near the reflection lines
    # the polynomial form cancels, so the float gate is relative to the scale of J^2
    f1, f2 = jacobian_theta(th), jacobian_sine_product(th)
    fx, fy = psi_map(th)
    scale = float(np.max(f1**2))
    r3 = float(np.max(np.abs(f1 - f2)) / np.sqrt(scale))
    r4 = float(np.max(np.abs(f1**2 - 16 * PI**4 * jacobian_sq_xy(fx, fy))) / scale)
    p4 = float(np.max(np.abs(f1**2 - 16 * PI**4 * jacobian_sq_xy(fx, fy)) / f1**2))
    t = np.linspace(0, 1, 201)
    r5 = max(float(np.max(np.abs(jacobian_theta(np.outer(t, d))))) for d in reflection_lines())
    ok = r1 <= 1e-9 and r3 <= 1e-9 and r2 <= 1e-8 and r4 <= 1e-8 and r5 <= 1e-10
    assert criterion(3, ok, f"30-digit trig/sine {float(r1):.1e}, J^2 {float(r2):.1e}; float scaled "
                            f"{r3:.1e}, {r4:.1e} (per point {p4:.1e}); lines {r5:.1e}")


def test_criterion_04_boundary_geometry(criterion):
    resid = max(abs(cubic_factor(x, y)) for y in np.linspace(-2, 14, 200) for x in boundary_roots_x(y))
    endpoint = abs(upper_y(7 / 9) - 10 / 27)
    rng = np.random.default_rng(4)
    x, y = psi_map(rng.random((10000, 2)))
    inside = bool(np.all(domain_contains(x, y)))
    # outside the box, above the upper arcs, below the lower curves
    probes = np.array([(7.5, 14), (-2.5, 5), (3, 15), (0, -3), (0, 13), (-1.5, 8),
                       (5, 0), (6, 3), (-1.9, 1), (2, 12)])
    rejected = not np.any(domain_contains(probes[:, 0], probes[:, 1]))
    ok = resid <= 1e-8 and endpoint <= 1e-12 and inside and rejected
    assert criterion(4, ok, f"cubic residual {float(resid):.1e}, endpoint {endpoint:.1e}, "
                            f"inside {inside}, probes rejected {rejected}")


def test_criterion_05_elliptic_densities(criterion):
    x = np.linspace(-2, 7, 52)[1:-1]
    r_torus = float(np.max(np.abs(torus_v1_closed(x) / density_quadrature("torus-v1", x) - 1)))
    r_haar = float(np.max(np.abs(haar_v1_closed(x) / density_quadrature("haar-v1", x) - 1)))
    masses = {t: density_moment(DensityProfile(t), 0) for t in ("torus-v1", "torus-v2", "haar-v1", "haar-v2")}
    mass_err = max(abs(v - 1) for v in masses.values())
    exact = {"torus-v1": (1, 1, 7), "haar-v1": (1, 0, 1, 1, 4)}
    mom_err = max(abs(density_moment(DensityProfile(t), r) - e) for t, vals in exact.items() for r, e in enumerate(vals))
    ok = r_torus <= 1e-6 and r_haar <= 1e-6 and mass_err <= 1e-6 and mom_err <= 1e-5
    assert criterion(5, ok, f"closed vs quadrature {max(r_torus, r_haar):.1e}, mass {mass_err:.1e}, "
                            f"moments {mom_err:.1e}")


def test_criterion_06_modular_data(criterion):
    s_err = nim_err = eig_err = 0.0
    structural = True
    for k in range(1, 9):
        lev = build_level(k)
        S = lev.S
        s_err = max(s_err, float(np.max(np.abs(S @ S.T - np.eye(lev.size)))), float(np.max(np.abs(S - S.T))))
        for j in (1, 2):
            nim_err = max(nim_err, nimrep_residual(lev, j))
            N = verlinde_nimrep(lev, j)
            structural &= bool(np.all(N >= 0) and np.array_equal(N, N.T))
            ev = np.sort(np.linalg.eigvalsh(verlinde_sum(lev, j)))
            beta = np.sort([beta_character(lev, j, mu) for mu in lev.exponents])
            eig_err = max(eig_err, float(np.max(np.abs(ev - beta))))
    ok = s_err <= 1e-10 and nim_err <= 1e-8 and structural and eig_err <= 1e-8
    assert criterion(6, ok, f"S {s_err:.1e}, nimrep rounding {nim_err:.1e}, eigenvalues {eig_err:.1e}")


def test_criterion_07_psi_jacobian(criterion):
    worst = kw = 0.0
    for k in range(1, 9):
        lev = build_level(k)
        for lam in lev.exponents:
            th = theta_of_exponent(lev, lam).as_float()
            # S_00 > 0 convention: psi_* = -J / (4 sqrt3 (k+4) pi^2)
            worst = max(worst, abs(psi_star(lev, lam) + jacobian_theta(th) / (4 * math.sqrt(3) * (k + 4) * PI**2)))
            kw = max(kw, abs(kac_weyl_ratio(lev, lam) - 1))
    ok = worst <= 1e-10 and kw <= 1e-9
    assert criterion(7, ok, f"psi + J residual {worst:.1e}, Kac-Weyl {kw:.1e}")


def test_criterion_08_ak_measure(criterion):
    worst = 0.0
    for k in (4, 5, 6):
        mu = measure_ak(k)
        lev = build_level(k)
        for m in range(5):
            for n in range(5 - m):
                worst = max(worst, abs(measure_moment(mu, m, n) - nimrep_moment(lev, m, n)))
    cone_bad = []
    for k in range(1, 13):
        mu = measure_ak(k)
        for m in range(5):
            for n in range(5 - m):
                if k >= 3 * (m + n) and round(measure_moment(mu, m, n)) != moment_walk("cone", m, n):
                    cone_bad.append((k, m, n))
    ok = worst <= 1e-8 and not cone_bad
    assert criterion(8, ok, f"nimrep residual {worst:.1e}, cone mismatches {len(cone_bad)}")


def test_criterion_09_exceptional_audits(criterion):
    s21, s6, s3 = math.sqrt(21), math.sqrt(6), math.sqrt(3)
    expected = {"E3": [(7 - s21) / 4, (7 + s21) / 4, 7 / 2],
                "E4": [(3 - s6) / s3, (3 + s6) / s3, s3, s3, 2 * s3]}
    j_err = max(abs(abs_j_over_8pi2(row.theta) - v)
                for name, vals in expected.items() for row, v in zip(TABLES[name][1], vals))
    e3m = abs(measure_exceptional("E3M").mass - 1)
    corr = max(abs(measure_exceptional(n, corrected=True).mass - 1) for n in ("E3", "E4", "E4star"))
    e3_printed = measure_exceptional("E3").mass
    e3_flagged = any(f.item == "printed mass" for f in audit_measure("E3").flagged)
    int_err = 0.0
    for name in EXCEPTIONAL:
        mu = measure_exceptional(name, corrected=True)
        for m in range(4):
            for n in range(4 - m):
                v = measure_moment(mu, m, n)
                int_err = max(int_err, abs(v - round(v)) if round(v) >= 0 else math.inf)
    ok = (j_err <= 1e-10 and e3m <= 1e-9 and corr <= 1e-9 and abs(e3_printed - 5 / 6) <= 1e-9
          and e3_flagged and int_err <= 1e-7)
    assert criterion(9, ok, f"|J| {j_err:.1e}, E3M mass {e3m:.1e}, corrected {corr:.1e}, "
                            f"E3 printed {e3_printed:.12f} flagged {e3_flagged}, integrality {int_err:.1e}")


def test_criterion_10_quantum_dimensions(criterion):
    d3, d4 = q_dim(build_level(3), 1), q_dim(build_level(4), 1)
    err = max(abs(d3 * d3 - 3 * d3 - 3), abs(d4 * d4 - 4 * d4 - 2),
              abs(d3 - (3 + math.sqrt(21)) / 2), abs(d4 - 2 - math.sqrt(6)))
    assert criterion(10, err <= 1e-9, f"d(3) = {d3:.12f}, d(4) = {d4:.12f}, residual {err:.1e}")


def test_criterion_11_cardinalities_and_runtime(criterion):
    sizes = (measure_dn(2).support_size, measure_dn(5).support_size, measure_dnk(6, 0).support_size,
             measure_dnk(5, Fraction(1, 5)).support_size, measure_dnk(5, Fraction(1, 10)).support_size,
             measure_dnk(Fraction(21, 4), Fraction(1, 21)).support_size)
    t0 = time.perf_counter()
    res = subprocess.run([sys.executable, "-m", "g2lab.cli", "verify", "--scope", "all"],
                         capture_output=True, text=True)
    elapsed = time.perf_counter() - t0
    ok = sizes == (9, 18, 18, 18, 36, 36) and res.returncode == 0 and elapsed < 120
    assert criterion(11, ok, f"supports {sizes}, verify exit {res.returncode} in {elapsed:.1f} s"), res.stdout

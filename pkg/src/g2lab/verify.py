"""Registry of verification checks and the runner behind ``g2lab verify``.

A check returns a CheckResult.  Status is "pass", "fail" or "flagged"; flagged
marks a value that disagrees with a published number while the computation
itself is consistent, and never fails a run.
"""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

MODULES = (
    "weyl_torus", "characters", "walk_moments", "jacobian_geometry",
    "elliptic_densities", "modular_verlinde", "invariant_measures",
)


@dataclass
class CheckResult:
    check_id: str
    status: str
    residual: float | None = None
    detail: str = ""
    runtime: float = 0.0


@dataclass
class VerifyReport:
    scope: str
    results: list = field(default_factory=list)

    @property
    def failed(self) -> list:
        return [r for r in self.results if r.status == "fail"]

    @property
    def flagged(self) -> list:
        return [r for r in self.results if r.status == "flagged"]

    @property
    def ok(self) -> bool:
        return not self.failed

    def to_json(self, timings: bool = True) -> str:
        import json

        def num(x):
            return None if x is None else float(format(x, ".17g"))

        rows = []
        for r in self.results:
            row = {"id": r.check_id, "status": r.status, "residual": num(r.residual), "detail": r.detail}
            if timings:
                row["runtime_s"] = num(r.runtime)
            rows.append(row)
        out = {
            "scope": self.scope,
            "summary": {"pass": sum(r.status == "pass" for r in self.results),
                        "flagged": len(self.flagged), "fail": len(self.failed)},
            "checks": rows,
        }
        return json.dumps(out, indent=1, sort_keys=True)


_REGISTRY: dict = {}


def check(module: str, name: str):
    def deco(fn):
        _REGISTRY[f"{module}.{name}"] = fn
        return fn
    return deco


def _tol(resid: float, tol: float, detail: str = "") -> tuple:
    return ("pass" if resid <= tol else "fail"), resid, detail


# ---- weyl_torus ---------------------------------------------------------------

@check("weyl_torus", "group_orders")
def _group_orders():
    from .weyl_torus import d12_elements, s3_elements
    d12, s3 = d12_elements(), s3_elements()
    ok = len(set(d12)) == 12 and len(set(s3)) == 6 and set(s3) <= set(d12)
    return ("pass" if ok else "fail"), None, f"|D12|={len(set(d12))} |S3|={len(set(s3))}"


@check("weyl_torus", "fundamental_domain")
def _fundamental_domain():
    from .weyl_torus import TorusPoint, fundamental_representative, in_fundamental_domain, orbit
    bad = 0
    n = 37
    for a in range(n):
        for b in range(n):
            p = TorusPoint(a, b, n)
            reps = fundamental_representative(p)
            if not reps or not all(in_fundamental_domain(q) and q in orbit(p) for q in reps):
                bad += 1
    return ("pass" if bad == 0 else "fail"), float(bad), f"{n * n} grid points"


# ---- characters ---------------------------------------------------------------

@check("characters", "weyl_vs_fusion")
def _weyl_vs_fusion():
    from .characters import DominantWeight, chi_fusion_laurent, chi_weyl_laurent
    bad = [w for w in (DominantWeight(a, b) for a in range(5) for b in range(a + 1))
           if chi_weyl_laurent(w) != chi_fusion_laurent(w)]
    return ("pass" if not bad else "fail"), float(len(bad)), "weights with mu1 <= 4"


@check("characters", "dimensions")
def _dimensions():
    from .characters import DominantWeight, chi_weyl_laurent
    bad = 0
    for a in range(5):
        for b in range(a + 1):
            w = DominantWeight(a, b)
            if chi_weyl_laurent(w).coefficient_sum() != w.dimension():
                bad += 1
    return ("pass" if bad == 0 else "fail"), float(bad), "Weyl dimension formula, mu1 <= 4"


@check("characters", "eval_vs_laurent")
def _eval_vs_laurent():
    from .characters import chi_fund_eval, chi_fund_laurent
    rng = np.random.default_rng(7)
    th = rng.random((200, 2))
    resid = 0.0
    for j in (1, 2):
        lp = chi_fund_laurent(j)
        direct = chi_fund_eval(j, th)
        resid = max(resid, float(np.max(np.abs(lp.evaluate(th).real - direct))))
    return _tol(resid, 1e-12)


# ---- walk_moments -------------------------------------------------------------

@check("walk_moments", "triple_agreement")
def _triple():
    from .walk_moments import moment_report
    bad = [(m, n) for m in range(7) for n in range(7 - m) if not moment_report(m, n).agree]
    return ("pass" if not bad else "fail"), float(len(bad)), "m+n <= 6, walk = formula = constant term"


@check("walk_moments", "pure_formulas")
def _pure():
    from .walk_moments import moment_formula_pure1, moment_formula_pure2, moment_walk
    bad = [m for m in range(7) if moment_formula_pure1(m) != moment_walk("torus", m, 0)]
    bad += [n for n in range(5) if moment_formula_pure2(n) != moment_walk("torus", 0, n)]
    return ("pass" if not bad else "fail"), float(len(bad)), ""


@check("walk_moments", "printed_cross_formula")
def _printed_cross():
    from .walk_moments import moment_formula_cross, moment_walk
    printed, true = moment_formula_cross(0, 1, printed=True), moment_walk("torus", 0, 1)
    if printed == true:
        return "pass", 0.0, ""
    return "flagged", float(true - printed), (
        f"cross sum without 2^(n - sum l) gives {printed} for (0,1), walk count {true}")


@check("walk_moments", "cone_span")
def _cone_span():
    from .walk_moments import cone_span_contains
    return ("pass" if cone_span_contains() else "fail"), None, "words of length <= 4"


# ---- jacobian_geometry --------------------------------------------------------

@check("jacobian_geometry", "identities")
def _jac_ident():
    from .jacobian_geometry import jacobian_sq_xy, jacobian_sine_product, jacobian_theta, psi_map
    rng = np.random.default_rng(11)
    th = rng.random((1000, 2))
    j1, j2 = jacobian_theta(th), jacobian_sine_product(th)
    x, y = psi_map(th)
    scale = np.max(np.abs(j1))
    r1 = float(np.max(np.abs(j1 - j2)) / scale)
    r2 = float(np.max(np.abs(j1**2 - 16 * np.pi**4 * jacobian_sq_xy(x, y))) / scale**2)
    return _tol(max(r1, r2), 1e-9, f"trig vs sine {r1:.2e}, square vs polynomial {r2:.2e}")


@check("jacobian_geometry", "reflection_lines")
def _refl():
    from .jacobian_geometry import jacobian_theta, reflection_lines
    t = np.linspace(0, 1, 101)
    resid = 0.0
    for a, b in reflection_lines():
        th = np.outer(t, (a, b))
        resid = max(resid, float(np.max(np.abs(jacobian_theta(th)))))
    return _tol(resid, 1e-10, "six lines, 101 points each")


@check("jacobian_geometry", "boundary_roots")
def _bnd():
    from .jacobian_geometry import boundary_roots_x, cubic_factor, upper_y
    resid = 0.0
    for y in np.linspace(-2, 14, 200):
        for x in boundary_roots_x(y):
            resid = max(resid, abs(cubic_factor(x, y)) / max(1.0, abs(x) ** 3))
    r2 = abs(upper_y(7 / 9) - 10 / 27)
    return _tol(max(float(resid), r2), 1e-8, f"cubic residual {resid:.2e}, y(7/9) - 10/27 = {r2:.1e}")


@check("jacobian_geometry", "domain_membership")
def _dom():
    from .jacobian_geometry import domain_contains, psi_map
    rng = np.random.default_rng(3)
    x, y = psi_map(rng.random((10000, 2)))
    inside = bool(np.all(domain_contains(x, y)))
    probes = np.array([(7.1, 14), (-2.1, 0), (0, 13), (6, -1.5), (-1.9, 4.9), (2, -1), (-1, 5), (4, 11), (7, 13.5), (0, -2)])
    outside = not np.any(domain_contains(probes[:, 0], probes[:, 1]))
    return ("pass" if inside and outside else "fail"), None, "10^4 images inside, 10 probes outside"


# ---- elliptic_densities -------------------------------------------------------

@check("elliptic_densities", "closed_vs_quadrature")
def _closed():
    from .elliptic_densities import density_quadrature, haar_v1_closed, torus_v1_closed
    x = np.linspace(-2, 7, 52)[1:-1]
    x = x[np.abs(x + 1) > 1e-3]
    r1 = np.max(np.abs(torus_v1_closed(x) / density_quadrature("torus-v1", x) - 1))
    r2 = np.max(np.abs(haar_v1_closed(x) / density_quadrature("haar-v1", x) - 1))
    return _tol(float(max(r1, r2)), 1e-6, f"torus {r1:.1e}, haar {r2:.1e}")


EXACT_DENSITY_MOMENTS = {
    "torus-v1": (1, 1, 7, 31, 175),
    "torus-v2": (1, 2, 16, 140, 1468),
    "haar-v1": (1, 0, 1, 1, 4),
    "haar-v2": (1, 0, 1, 1, 5),
}


@check("elliptic_densities", "moments")
def _dmom():
    from .elliptic_densities import DensityProfile, density_moment
    resid = 0.0
    for target, exact in EXACT_DENSITY_MOMENTS.items():
        prof = DensityProfile(target)
        for r, e in enumerate(exact):
            resid = max(resid, abs(density_moment(prof, r) - e))
    return _tol(resid, 1e-5, "r <= 4, includes mass")


@check("elliptic_densities", "v_at_minus_one")
def _vm1():
    from .elliptic_densities import v_of_x
    v = float(v_of_x(-1.0))
    if abs(v - 1) > 1e-14:
        return "fail", abs(v - 1), ""
    return "flagged", abs(v - 8 / 9), f"v(-1) = {v!r}; a printed value of 8/9 does not match the formula"


# ---- modular_verlinde ---------------------------------------------------------

def _levels():
    return range(1, 9)


@check("modular_verlinde", "smatrix")
def _smat():
    from .modular_verlinde import build_level
    resid = 0.0
    for k in _levels():
        S = build_level(k).S
        resid = max(resid, float(np.max(np.abs(S @ S.T - np.eye(len(S))))), float(np.max(np.abs(S - S.T))))
    return _tol(resid, 1e-10, "k = 1..8")


@check("modular_verlinde", "nimreps")
def _nim():
    from .modular_verlinde import build_level, nimrep_residual, verlinde_nimrep
    resid, bad = 0.0, 0
    for k in _levels():
        lev = build_level(k)
        for j in (1, 2):
            resid = max(resid, nimrep_residual(lev, j))
            N = verlinde_nimrep(lev, j)
            bad += int(np.any(N < 0) or np.any(N != N.T))
    return ("pass" if resid <= 1e-8 and bad == 0 else "fail"), resid, "symmetric, non-negative"


@check("modular_verlinde", "eigenvalues")
def _eig():
    from .modular_verlinde import beta_character, beta_cosine, build_level, verlinde_sum
    resid = 0.0
    for k in _levels():
        lev = build_level(k)
        for j in (1, 2):
            ev = np.sort(np.linalg.eigvalsh(verlinde_sum(lev, j)))
            b1 = np.sort([beta_character(lev, j, mu) for mu in lev.exponents])
            b2 = np.sort([beta_cosine(lev, j, mu) for mu in lev.exponents])
            resid = max(resid, float(np.max(np.abs(ev - b1))), float(np.max(np.abs(b1 - b2))))
    return _tol(resid, 1e-8)


@check("modular_verlinde", "psi_jacobian")
def _psij():
    from .modular_verlinde import build_level, kac_weyl_ratio, psi_star, psi_star_from_jacobian
    r1 = r2 = r3 = 0.0
    for k in _levels():
        lev = build_level(k)
        for i, lam in enumerate(lev.exponents):
            p = psi_star(lev, lam)
            r1 = max(r1, abs(p - psi_star_from_jacobian(lev, lam)))
            r2 = max(r2, abs(kac_weyl_ratio(lev, lam) - 1))
            r3 = max(r3, abs(p - lev.S[i, 0]))
    ok = r1 <= 1e-10 and r2 <= 1e-9 and r3 <= 1e-10
    return ("pass" if ok else "fail"), max(r1, r3), f"psi-J {r1:.1e}, Kac-Weyl {r2:.1e}, S column {r3:.1e}"


@check("modular_verlinde", "quantum_dimensions")
def _qd():
    from .modular_verlinde import build_level, q_dim
    d3, d4 = q_dim(build_level(3), 1), q_dim(build_level(4), 1)
    resid = max(abs(d3 * d3 - 3 * d3 - 3), abs(d4 * d4 - 4 * d4 - 2),
                abs(d3 - (3 + math.sqrt(21)) / 2), abs(d4 - 2 - math.sqrt(6)))
    return _tol(resid, 1e-9)


@check("modular_verlinde", "theta_in_domain")
def _thd():
    from .modular_verlinde import build_level, theta_of_exponent
    from .weyl_torus import in_fundamental_domain
    bad = sum(not in_fundamental_domain(theta_of_exponent(build_level(k), lam))
              for k in _levels() for lam in build_level(k).exponents)
    return ("pass" if bad == 0 else "fail"), float(bad), ""


@check("modular_verlinde", "level_one_count")
def _k1():
    from .modular_verlinde import build_level
    n = build_level(1).size
    if n == 2:
        return "flagged", 1.0, "level 1 has 2 exponents, (0,0) and (1,0); a count of 3 is printed"
    return "fail", float(n), ""


# ---- invariant_measures -------------------------------------------------------

@check("invariant_measures", "support_sizes")
def _supp():
    from .invariant_measures import measure_dn, measure_dnk
    cases = [(measure_dn(2), 9), (measure_dn(4), 18), (measure_dn(8), 18), (measure_dnk(5, Fraction(1, 5)), 18),
             (measure_dnk(6, 0), 18), (measure_dnk(Fraction(21, 4), Fraction(1, 21)), 36),
             (measure_dnk(5, Fraction(1, 10)), 36), (measure_dnk(6, Fraction(1, 24)), 36)]
    bad = sum(mu.support_size != n or not mu.is_invariant("D12") for mu, n in cases)
    return ("pass" if bad == 0 else "fail"), float(bad), "9 / 18 / 36"


@check("invariant_measures", "degenerate_supports")
def _degen():
    from .invariant_measures import measure_dn, measure_dnk
    a, b = measure_dn(3).support_size, measure_dnk(6, Fraction(1, 6)).support_size
    if (a, b) == (18, 18):
        return "pass", 0.0, ""
    # at tau = omega, or tau e^{2 pi i k} = omega, seed orbits coincide
    return "flagged", float(36 - a - b), f"|d((3))| = {a} and |d(6,1/6)| = {b}; generic count printed as 18"


@check("invariant_measures", "ak_nimrep_moments")
def _ak():
    from .invariant_measures import measure_ak, measure_moment
    from .modular_verlinde import build_level, nimrep_moment
    from .walk_moments import moment_walk
    resid, bad = 0.0, 0
    for k in (4, 5, 6):
        mu = measure_ak(k)
        for m in range(5):
            for n in range(5 - m):
                resid = max(resid, abs(measure_moment(mu, m, n) - nimrep_moment(build_level(k), m, n)))
    for k in (6, 9, 12):
        mu = measure_ak(k)
        for m in range(5):
            for n in range(5 - m):
                if k >= 3 * (m + n):
                    bad += round(measure_moment(mu, m, n)) != moment_walk("cone", m, n)
    return ("pass" if resid <= 1e-8 and bad == 0 else "fail"), resid, f"{bad} cone mismatches"


def _audit_check(name):
    def run():
        from .invariant_measures import audit_measure
        rep = audit_measure(name)
        failed = [k for k, v in rep.checks.items() if not v]
        if failed:
            return "fail", None, "failed: " + ", ".join(failed)
        if rep.flagged:
            items = "; ".join(f"{f.item}: printed {_short(f.printed_value)}, computed {_short(f.computed_value)}"
                              for f in rep.flagged)
            return "flagged", abs(rep.mass_printed - 1), items
        return "pass", 0.0, ""
    return run


def _short(v):
    if isinstance(v, float):
        return format(v, ".12g")
    if isinstance(v, dict):
        return "{" + ", ".join(f"{k}: {format(x, '.6g')}" for k, x in sorted(v.items())) + "}"
    return str(v)


for _name in ("E3", "E3M", "E4", "E4M", "E4star"):
    check("invariant_measures", f"audit_{_name}")(_audit_check(_name))


# ---- runner -------------------------------------------------------------------

def check_ids(scope: str = "all") -> list[str]:
    if scope != "all" and scope not in MODULES:
        raise ValueError(f"unknown scope {scope!r}; use 'all' or one of {', '.join(MODULES)}")
    return sorted(c for c in _REGISTRY if scope == "all" or c.split(".")[0] == scope)


def _run_one(cid: str) -> CheckResult:
    t0 = time.perf_counter()
    try:
        status, resid, detail = _REGISTRY[cid]()
    except Exception as exc:  # a crashing check is a hard failure, reported not raised
        status, resid, detail = "fail", None, f"{type(exc).__name__}: {exc}"
    return CheckResult(cid, status, None if resid is None else float(resid), detail, time.perf_counter() - t0)


def thread_count() -> int:
    raw = os.environ.get("G2LAB_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        raise ValueError(f"G2LAB_THREADS must be an integer, got {raw!r}") from None


def run_verify(scope: str = "all", threads: int | None = None) -> VerifyReport:
    ids = check_ids(scope)
    threads = thread_count() if threads is None else threads
    if threads == 1:
        results = [_run_one(c) for c in ids]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(_run_one, ids))
    return VerifyReport(scope, sorted(results, key=lambda r: r.check_id))

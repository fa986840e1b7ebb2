"""Command-line front end: ``g2lab moments|density|modular|measure|verify``.

Exit codes: 0 success, 1 hard failure (or bad input), 2 disagreement between
independent routes.  Output is deterministic for identical flags; JSON numbers
carry 17 significant digits and CSV numbers 12.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from fractions import Fraction
from pathlib import Path

import numpy as np

EXIT_OK, EXIT_FAIL, EXIT_DISAGREE = 0, 1, 2
CSV_DIGITS, JSON_DIGITS = 12, 17
PLOT_SCALE = 4 * np.pi**2  # figures show the density multiplied by this factor


def _csv(x) -> str:
    return format(float(x), f".{CSV_DIGITS}g")


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    path = Path(out)
    try:
        path.write_text(text)
    except OSError as exc:
        raise SystemExit(f"g2lab: cannot write {path}: {exc.strerror}") from exc


# ---- moments ------------------------------------------------------------------

def cmd_moments(args) -> int:
    from .walk_moments import moment_constant_term, moment_formula_cross, moment_walk

    m, n = args.m, args.n
    if m < 0 or n < 0 or m + n > 10:
        print("g2lab: need m, n >= 0 and m + n <= 10", file=sys.stderr)
        return EXIT_FAIL
    routes = {"walk": lambda: moment_walk(args.kind, m, n)}
    if args.kind == "torus":
        routes["formula"] = lambda: moment_formula_cross(m, n)
        routes["ct"] = lambda: moment_constant_term(m, n)
    wanted = list(routes) if args.route == "all" else [args.route]
    if any(r not in routes for r in wanted):
        print(f"g2lab: route {args.route!r} is only available for --kind torus", file=sys.stderr)
        return EXIT_FAIL
    values = {r: routes[r]() for r in wanted}
    for r, v in values.items():
        print(f"{r}: {v}")
    if len(set(values.values())) > 1:
        print("g2lab: routes disagree", file=sys.stderr)
        return EXIT_DISAGREE
    return EXIT_OK


# ---- density ------------------------------------------------------------------

def density_csv(target: str, grid: int) -> tuple[str, np.ndarray, np.ndarray]:
    from .elliptic_densities import density_grid

    t, dens, clipped = density_grid(target, grid)
    lines = ["t,density,scale,clipped"]
    lines += [f"{_csv(a)},{_csv(b)},{_csv(PLOT_SCALE)},{int(c)}" for a, b, c in zip(t, dens, clipped)]
    return "\n".join(lines) + "\n", t, dens


def density_svg(t: np.ndarray, dens: np.ndarray, width: int = 640, height: int = 400) -> str:
    """Minimal SVG polyline of PLOT_SCALE * density over t."""
    y = dens * PLOT_SCALE
    sx = (t - t[0]) / (t[-1] - t[0]) * (width - 20) + 10
    top = y.max() if y.max() > 0 else 1.0
    sy = height - 10 - y / top * (height - 20)
    pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(sx, sy))
    return (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">\n'
            f'<polyline fill="none" stroke="black" stroke-width="1" points="{pts}"/>\n</svg>\n')


def cmd_density(args) -> int:
    text, t, dens = density_csv(args.target, args.grid)
    _write(text, args.out)
    if args.svg:
        _write(density_svg(t, dens), args.svg)
    return EXIT_OK


# ---- modular ------------------------------------------------------------------

def modular_tables(k: int, what: str) -> dict:
    from .modular_verlinde import (build_level, psi_star, psi_star_from_jacobian,
                                   theta_of_exponent, verlinde_nimrep)

    lev = build_level(k)
    labels = [list(e) for e in lev.exponents]
    if what == "smatrix":
        return {"k": k, "labels": labels, "S": lev.S.tolist()}
    if what == "nimrep":
        return {"k": k, "labels": labels,
                "N1": verlinde_nimrep(lev, 1).tolist(), "N2": verlinde_nimrep(lev, 2).tolist()}
    if what == "psi":
        psi = [psi_star(lev, e) for e in lev.exponents]
        return {"k": k, "labels": labels, "psi": psi,
                "psi_from_jacobian": [psi_star_from_jacobian(lev, e) for e in lev.exponents],
                "sum_of_squares": float(np.sum(np.square(psi)))}
    if what == "theta":
        return {"k": k, "labels": labels, "theta": [str(theta_of_exponent(lev, e)) for e in lev.exponents]}
    raise ValueError(f"unknown table {what!r}")


def _json_numbers(obj):
    """Round-trip floats through 17 significant digits so the output is fixed."""
    if isinstance(obj, float):
        return float(format(obj, f".{JSON_DIGITS}g"))
    if isinstance(obj, dict):
        return {k: _json_numbers(v) for k, v in obj.items()}
    if isinstance(obj, list):
        return [_json_numbers(v) for v in obj]
    return obj


def modular_csv(tab: dict) -> str:
    labels = [f"({a};{b})" for a, b in tab["labels"]]
    if "S" in tab or "N1" in tab:
        blocks = [("S", tab["S"])] if "S" in tab else [("N1", tab["N1"]), ("N2", tab["N2"])]
        lines = []
        for name, mat in blocks:
            lines.append(f"# {name} k={tab['k']}")
            lines.append("label," + ",".join(labels))
            for lab, row in zip(labels, mat):
                lines.append(lab + "," + ",".join(str(v) if isinstance(v, int) else _csv(v) for v in row))
        return "\n".join(lines) + "\n"
    if "psi" in tab:
        lines = ["label,psi,psi_from_jacobian"]
        lines += [f"{lab},{_csv(a)},{_csv(b)}" for lab, a, b in zip(labels, tab["psi"], tab["psi_from_jacobian"])]
        lines.append(f"# sum of squares {_csv(tab['sum_of_squares'])}")
        return "\n".join(lines) + "\n"
    lines = ["label,theta"] + [f"{lab},{th.replace(',', ';')}" for lab, th in zip(labels, tab["theta"])]
    return "\n".join(lines) + "\n"


def cmd_modular(args) -> int:
    if not 1 <= args.k <= 16:
        print("g2lab: k must lie in 1..16", file=sys.stderr)
        return EXIT_FAIL
    tab = modular_tables(args.k, args.what)
    if args.format == "json":
        text = json.dumps(_json_numbers(tab), sort_keys=True) + "\n"
    else:
        text = modular_csv(tab)
    _write(text, args.out)
    return EXIT_OK


# ---- measure ------------------------------------------------------------------

def build_measure(args):
    from .invariant_measures import (EXCEPTIONAL, measure_ak, measure_dn, measure_dnk,
                                     measure_exceptional, measure_fkw)

    kind = args.kind
    if kind in EXCEPTIONAL:
        return measure_exceptional(kind, corrected=args.corrected)
    if kind == "ak":
        return measure_ak(int(args.k))
    if kind == "fkw":
        return measure_fkw(int(args.k))
    if kind == "dn":
        return measure_dn(Fraction(args.n))
    if kind == "dnk":
        return measure_dnk(Fraction(args.n), Fraction(args.kk))
    raise ValueError(f"unknown measure {kind!r}")


def cmd_measure(args) -> int:
    from .invariant_measures import BadParameter, measure_to_json

    try:
        mu = build_measure(args)
    except (BadParameter, TypeError, ValueError) as exc:
        print(f"g2lab: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _write(measure_to_json(mu) + "\n", args.out)
    return EXIT_OK


# ---- verify -------------------------------------------------------------------

def cmd_verify(args) -> int:
    from .verify import run_verify

    t0 = time.perf_counter()
    try:
        rep = run_verify(args.scope)
    except ValueError as exc:
        print(f"g2lab: {exc}", file=sys.stderr)
        return EXIT_FAIL
    for r in rep.results:
        resid = "-" if r.residual is None else format(r.residual, ".3e")
        print(f"{r.status:7s} {r.check_id} residual={resid}")
    print(f"{len(rep.results)} checks: {len(rep.failed)} failed, {len(rep.flagged)} flagged")
    if args.json_out:
        _write(rep.to_json(timings=not args.no_timings) + "\n", args.json_out)
    if args.timing:
        print(f"elapsed {time.perf_counter() - t0:.2f} s", file=sys.stderr)
    return EXIT_OK if rep.ok else EXIT_FAIL


# ---- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    from .elliptic_densities import TARGETS
    from .invariant_measures import EXCEPTIONAL
    from .verify import MODULES

    p = argparse.ArgumentParser(prog="g2lab", description="G2 spectral measures: moments, densities, modular data.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("moments", help="cross moments of the torus or cone walk")
    s.add_argument("--kind", choices=("torus", "cone"), default="torus", help="default: torus")
    s.add_argument("-m", type=int, required=True, help="power of the first operator")
    s.add_argument("-n", type=int, required=True, help="power of the second operator")
    s.add_argument("--route", choices=("walk", "formula", "ct", "all"), default="walk",
                   help="walk counting, multinomial formula, Laurent constant term, or all (default: walk)")
    s.set_defaults(func=cmd_moments)

    s = sub.add_parser("density", help="CSV t,density,scale,clipped on a uniform grid of the support")
    s.add_argument("--target", choices=TARGETS, required=True)
    s.add_argument("--grid", type=int, default=512, help="number of grid points (default: 512)")
    s.add_argument("--out", help="CSV path (default: stdout)")
    s.add_argument("--svg", help="also write an SVG polyline of scale * density here")
    s.set_defaults(func=cmd_density)

    s = sub.add_parser("modular", help="S-matrix, nimreps, Perron vector or theta points at level k")
    s.add_argument("-k", type=int, required=True, help="level, 1..16")
    s.add_argument("--what", choices=("smatrix", "nimrep", "psi", "theta"), required=True)
    s.add_argument("--format", choices=("csv", "json"), default="csv", help="default: csv")
    s.add_argument("--out", help="output path (default: stdout)")
    s.set_defaults(func=cmd_modular)

    s = sub.add_parser("measure", help="export a Dirac measure on the torus as JSON")
    s.add_argument("--kind", choices=EXCEPTIONAL + ("ak", "fkw", "dn", "dnk"), required=True)
    s.add_argument("--corrected", action="store_true", help="exceptional measures: corrected coefficients")
    s.add_argument("-k", help="level for ak and fkw")
    s.add_argument("-n", help="rational n for dn and dnk, e.g. 21/4")
    s.add_argument("--kk", help="rational shift for dnk, e.g. 1/21")
    s.add_argument("--out", help="output path (default: stdout)")
    s.set_defaults(func=cmd_measure)

    s = sub.add_parser("verify", help="run the verification checks")
    s.add_argument("--scope", choices=("all",) + MODULES, default="all", help="default: all")
    s.add_argument("--json-out", help="write the JSON report here")
    s.add_argument("--no-timings", action="store_true", help="omit runtimes so the report is byte-stable")
    s.add_argument("--timing", action="store_true", help="print total elapsed time to stderr")
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

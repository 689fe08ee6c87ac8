"""Command-line front end.

Exit codes: 0 success, 2 bad input (including usage errors), 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import amoeba, asymptotics, ensemble, gauss
from .algebra import LaurentPolynomial
from .errors import InputError, NumericalError, TruncationError
from .io import config_hash, write_csv, write_json, write_svg_scatter
from .polytope import as_fraction
from .series import laurent_oracle

COMMANDS = (
    "amoeba", "order", "components", "contour", "coeffs", "asymp",
    "ensemble-solve", "ensemble-exact", "ensemble-compare", "admissible",
)


@dataclass
class RunConfig:
    command: str
    inputs: dict = field(default_factory=dict)
    params: dict = field(default_factory=dict)
    out: str = "out"

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise InputError(f"unknown command {self.command!r}")
        for k, v in self.params.items():
            if k.endswith("tol") and v is not None and not v > 0:
                raise InputError(f"{k} must be positive")
            if k.endswith("steps") and v is not None and v < 2:
                raise InputError(f"{k} must be at least 2")

    def hash(self) -> str:
        # the output directory and worker count do not affect results
        return config_hash({"command": self.command, "inputs": self.inputs, "params": self.params})


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise InputError(message)


# argument parsing helpers


def _range(text: str):
    try:
        lo, hi, steps = text.split(":")
        return float(lo), float(hi), int(steps)
    except ValueError as exc:
        raise InputError(f"expected lo:hi:steps, got {text!r}") from exc


def _rational_vector(text: str) -> list[Fraction]:
    try:
        return [as_fraction(t) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise InputError(f"bad rational vector {text!r}") from exc


def _int_vector(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError as exc:
        raise InputError(f"bad integer vector {text!r}") from exc


def _int_list(text: str) -> list[int]:
    """``4,8,12`` or ``10:80`` (inclusive) or ``10:80:10``."""
    if ":" in text:
        parts = [int(p) for p in text.split(":")]
        step = parts[2] if len(parts) == 3 else 1
        return list(range(parts[0], parts[1] + 1, step))
    return _int_vector(text)


def _load_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _poly(path: str) -> LaurentPolynomial:
    return LaurentPolynomial.from_json(_load_json(path))


def _spectrum(path: str) -> ensemble.Spectrum:
    return ensemble.Spectrum.from_json(_load_json(path))


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="thermoamoeba", description=__doc__.splitlines()[0])
    p.add_argument("--out", default="out", help="output directory")
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    # the global options are also accepted after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", default=argparse.SUPPRESS)
    common.add_argument("--workers", type=int, default=argparse.SUPPRESS)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    _add = sub.add_parser
    sub.add_parser = lambda *a, **k: _add(*a, parents=[common], **k)

    s = sub.add_parser("amoeba", help="point cloud of a plane amoeba")
    s.add_argument("--poly", required=True)
    s.add_argument("--x1", default="-4:4:200", help="lo:hi:steps")
    s.add_argument("--phases", type=int, default=256)

    s = sub.add_parser("order", help="order vector at a point")
    s.add_argument("--poly", required=True)
    s.add_argument("--x", required=True, help="comma-separated point")
    s.add_argument("--phases", type=int, default=64)

    s = sub.add_parser("components", help="complement components on a grid")
    s.add_argument("--poly", required=True)
    s.add_argument("--grid", default="-4:4:60", help="lo:hi:steps for every axis")
    s.add_argument("--phases", type=int, default=64)

    s = sub.add_parser("contour", help="contour points by inverting the Gauss map")
    s.add_argument("--poly", required=True)
    s.add_argument("--directions", type=int, default=100)

    s = sub.add_parser("coeffs", help="exact Laurent coefficients of P/Q")
    s.add_argument("--P", required=True)
    s.add_argument("--Q", required=True)
    s.add_argument("--vertex", required=True, help="vertex of the Newton polytope of Q")
    s.add_argument("--alpha", required=True, action="append", help="exponent, repeatable")

    s = sub.add_parser("asymp", help="diagonal asymptotics against exact coefficients")
    s.add_argument("--P", required=True)
    s.add_argument("--Q", required=True)
    s.add_argument("--q", required=True)
    s.add_argument("--k", default="10:80")
    s.add_argument("--vertex", default=None)

    s = sub.add_parser("ensemble-solve", help="z(u), entropy, temperature, occupations")
    s.add_argument("--spectrum", required=True)
    s.add_argument("--u", required=True)
    s.add_argument("--N", type=int, default=None)
    s.add_argument("--tol", type=float, default=1e-10)

    s = sub.add_parser("ensemble-exact", help="exact state count and average occupations")
    s.add_argument("--spectrum", required=True)
    s.add_argument("--N", type=int, required=True)
    s.add_argument("--E", required=True)
    s.add_argument("--enumerate", action="store_true", help="use brute-force enumeration")

    s = sub.add_parser("ensemble-compare", help="exact averages against the asymptotic law")
    s.add_argument("--spectrum", required=True)
    s.add_argument("--u", required=True)
    s.add_argument("--N", required=True, help="4,8,12 or lo:hi[:step]")

    s = sub.add_parser("admissible", help="is u in the interior of the spectrum hull")
    s.add_argument("--spectrum", required=True)
    s.add_argument("--u", required=True)
    return p


# commands


def _cmd_amoeba(a, cfg, out, h):
    Q = _poly(a.poly)
    lo, hi, steps = _range(a.x1)
    RunConfig(cfg.command, cfg.inputs, {"x1_steps": steps, "phase_steps": a.phases})
    cloud = amoeba.render2d(Q, (lo, hi), steps, a.phases, workers=a.workers)
    write_csv(out / "amoeba.csv", ["x1", "x2"], cloud.points.tolist(), h)
    write_svg_scatter(out / "amoeba.svg", cloud.points, h)
    print(f"{len(cloud.points)} points, {cloud.skipped} fibers skipped")


def _cmd_order(a, cfg, out, h):
    Q = _poly(a.poly)
    x = [float(v) for v in _rational_vector(a.x)]
    o = amoeba.order(Q, x, a.phases)
    write_json(out / "order.json", {"x": x, "order": list(o)}, h)
    print(" ".join(str(v) for v in o))


def _cmd_components(a, cfg, out, h):
    Q = _poly(a.poly)
    lo, hi, steps = _range(a.grid)
    RunConfig(cfg.command, cfg.inputs, {"grid_steps": steps})
    axes = [np.linspace(lo, hi, steps)] * Q.n
    comps = amoeba.find_components(Q, axes, a.phases, workers=a.workers)
    verts = amoeba.vertex_components(Q)
    payload = {
        "components": [c.to_json() for c in comps],
        "duplicates": [list(d) for d in amoeba.duplicate_orders(comps)],
        "vertex_components": [
            {"vertex": list(v.vertex), "representative": v.representative, "verified": v.verified}
            for v in verts
        ],
    }
    write_json(out / "components.json", payload, h)
    for c in comps:
        print(c.order, "bounded" if c.bounded else "unbounded", len(c.grid_cells))


def _cmd_contour(a, cfg, out, h):
    Q = _poly(a.poly)
    if Q.n != 2:
        raise InputError("contour sweeps need a polynomial in two variables")
    pts = gauss.contour(Q, gauss.directions_2d(a.directions))
    header = ["q_angle"] + [f"x{j + 1}" for j in range(Q.n)] + ["branch_id"]
    rows = [[p.angle, *p.x.tolist(), p.branch] for p in pts]
    write_csv(out / "contour.csv", header, rows, h)
    write_svg_scatter(out / "contour.svg", [p.x for p in pts], h)
    print(f"{len(pts)} contour points")


def _cmd_coeffs(a, cfg, out, h):
    P, Q = _poly(a.P), _poly(a.Q)
    nu = _int_vector(a.vertex)
    rows = []
    for text in a.alpha:
        alpha = tuple(_int_vector(text))
        c = laurent_oracle(P, Q, tuple(nu), alpha)
        rows.append([*alpha, c])
        print(",".join(map(str, alpha)), c)
    header = [f"alpha{j + 1}" for j in range(Q.n)] + ["coefficient"]
    write_csv(out / "coeffs.csv", header, rows, h)


def _cmd_asymp(a, cfg, out, h):
    P, Q = _poly(a.P), _poly(a.Q)
    q = _int_vector(a.q)
    vertex = tuple(_int_vector(a.vertex)) if a.vertex else None
    est = asymptotics.estimate(P, Q, q, vertex=vertex)
    rows = asymptotics.compare(P, Q, q, _int_list(a.k), vertex=vertex, est=est)
    write_csv(out / "asymp.csv", ["k", "exact", "estimate", "ratio"], rows, h)
    summary = {"q": q, "z_q": est.z_q, "C_q": est.C_q, "hessian_det": est.hessian.det,
               "branch": est.branch, "checks": {k: str(v) for k, v in est.checks.items()}}
    if sum(r[3] is not None for r in rows) >= 2:
        summary["loglog_slope"] = asymptotics.loglog_slope(rows)
    write_json(out / "asymp.json", summary, h)
    print(f"C_q = {est.C_q}")


def _cmd_ensemble_solve(a, cfg, out, h):
    S = _spectrum(a.spectrum)
    sol = ensemble.solve_mean_energy(S, _rational_vector(a.u), tol=a.tol)
    if a.N is not None:
        ensemble.occupations(S, sol, a.N)
    payload = {"u": list(sol.u), "z": sol.z, "mu": sol.mu, "T": sol.T, "S": sol.S,
               "gradient_norm": sol.gradient_norm, "infinite_temperature": sol.infinite_temperature,
               "occupations": sol.occupations}
    write_json(out / "ensemble_solve.json", payload, h)
    print(f"z = {sol.z.tolist()}  S = {sol.S!r}")


def _cmd_ensemble_exact(a, cfg, out, h):
    S = _spectrum(a.spectrum)
    fn = ensemble.enumerate_states if a.enumerate else ensemble.exact_stats
    st = fn(S, a.N, _rational_vector(a.E))
    write_json(out / "ensemble_exact.json",
               {"N": st.N, "E": list(st.E), "total_states": str(st.total_states), "averages": st.averages}, h)
    print(f"total_states = {st.total_states}")


def _cmd_ensemble_compare(a, cfg, out, h):
    S = _spectrum(a.spectrum)
    rows = ensemble.theorem3_compare(S, _rational_vector(a.u), _int_list(a.N))
    write_csv(out / "ensemble_compare.csv", ["N", "k", "exact", "asymptotic", "relative_error"],
              [[r.N, r.k, r.exact, r.asymptotic, r.relative_error] for r in rows], h)
    for r in rows:
        print(r.N, r.k, r.exact, r.relative_error)


def _cmd_admissible(a, cfg, out, h):
    ok = ensemble.admissible(_spectrum(a.spectrum), _rational_vector(a.u))
    print("true" if ok else "false")


HANDLERS = {
    "amoeba": _cmd_amoeba, "order": _cmd_order, "components": _cmd_components,
    "contour": _cmd_contour, "coeffs": _cmd_coeffs, "asymp": _cmd_asymp,
    "ensemble-solve": _cmd_ensemble_solve, "ensemble-exact": _cmd_ensemble_exact,
    "ensemble-compare": _cmd_ensemble_compare, "admissible": _cmd_admissible,
}


def _config(a) -> RunConfig:
    d = vars(a).copy()
    cmd = d.pop("command")
    out = d.pop("out")
    d.pop("workers")
    files = {}
    for k in ("poly", "P", "Q", "spectrum"):
        if d.get(k):
            # hash file contents so moving an input does not change outputs
            files[k] = _load_json(d.pop(k))
    return RunConfig(cmd, files, d, out)


def _glue_negative_values(argv):
    """Turn ``--x1 -4:4:200`` into ``--x1=-4:4:200`` so argparse does not read a flag."""
    out = []
    for tok in argv:
        if out and out[-1].startswith("--") and "=" not in out[-1] and re.match(r"-[\d.]", tok):
            out[-1] = f"{out[-1]}={tok}"
        else:
            out.append(tok)
    return out


def run(argv=None) -> int:
    argv = _glue_negative_values(sys.argv[1:] if argv is None else list(argv))
    try:
        a = build_parser().parse_args(argv)
        if a.workers < 1:
            raise InputError("--workers must be positive")
        cfg = _config(a)
        HANDLERS[a.command](a, cfg, Path(cfg.out), cfg.hash())
        return 0
    except (InputError, TruncationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        extra = f" (residual {exc.residual:.3e})" if exc.residual is not None else ""
        print(f"numerical failure: {exc}{extra}", file=sys.stderr)
        return 3
    except SystemExit as exc:  # --help
        return int(exc.code or 0)


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

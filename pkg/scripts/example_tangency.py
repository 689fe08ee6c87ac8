"""Common tangent of the two real contour branches of the graph of Z = 1 + z^2/(1 - z).

Also reports the entropy carried by each branch over a range of mean energies.
"""

import argparse
import math
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from thermoamoeba.algebra import LaurentPolynomial
from thermoamoeba.ensemble import _solve_branch, branch_tangent, common_tangent
from thermoamoeba.io import config_hash, write_csv


@dataclass(frozen=True)
class Config:
    u_lo: float = 0.1
    u_hi: float = 0.9
    u_steps: int = 17
    out: str = "out/example_tangency"


def main(cfg: Config) -> None:
    num = LaurentPolynomial(1, {(0,): 1, (1,): -1, (2,): 1})
    den = LaurentPolynomial(1, {(0,): 1, (1,): -1})
    inner, outer = (1e-3, 1 - 1e-3), (1 + 1e-3, 50.0)
    u0, S0, z1, z2 = common_tangent(num, den, inner, outer, (0.05, 0.95))
    print(f"u0 = {u0:.12f}, common intercept {S0:.10f} (log 2 = {math.log(2):.10f})")
    print(f"tangency points z = {z1:.10f} and {z2:.10f}")
    rows = []
    for u in np.linspace(cfg.u_lo, cfg.u_hi, cfg.u_steps):
        za = _solve_branch(num, den, u, *inner)
        zb = _solve_branch(num, den, u, *outer)
        rows.append([u, za, branch_tangent(num, den, za)[1], zb, branch_tangent(num, den, zb)[1]])
    h = config_hash({k: v for k, v in asdict(cfg).items() if k != "out"})
    write_csv(Path(cfg.out) / "branches.csv", ["u", "z_inner", "S_inner", "z_outer", "S_outer"], rows, h)
    print("u      S(0<z<1)   S(z>1)")
    for u, _, sa, _, sb in rows[::4]:
        print(f"{u:.3f}  {sa:.6f}   {sb:.6f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    for name, val in asdict(Config()).items():
        p.add_argument(f"--{name.replace('_', '-')}", type=type(val), default=val)
    main(Config(**vars(p.parse_args())))

"""Exact average occupations against the most probable ones as N grows."""

import argparse
import math
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

from thermoamoeba.ensemble import Spectrum, exact_stats, solve_mean_energy, theorem3_compare
from thermoamoeba.io import config_hash, write_csv


@dataclass(frozen=True)
class Config:
    levels: int = 3
    u: str = "1"
    n_min: int = 6
    n_max: int = 60
    n_step: int = 6
    out: str = "out/darwin_fowler"


def main(cfg: Config) -> None:
    S = Spectrum(1, tuple((k,) for k in range(cfg.levels)))
    u = Fraction(cfg.u)
    Ns = [N for N in range(cfg.n_min, cfg.n_max + 1, cfg.n_step) if (N * u).denominator == 1]
    rows = theorem3_compare(S, [u], Ns)
    sol = solve_mean_energy(S, [u])
    h = config_hash({k: v for k, v in asdict(cfg).items() if k != "out"})
    write_csv(Path(cfg.out) / "occupations.csv", ["N", "k", "exact", "asymptotic", "relative_error"],
              [[r.N, r.k, r.exact, r.asymptotic, r.relative_error] for r in rows], h)
    worst = {N: max(r.relative_error for r in rows if r.N == N) for N in Ns}
    print(f"z(u) = {sol.z[0]:.10f}, entropy per system {sol.S:.10f}")
    for N in Ns:
        total = exact_stats(S, N, [N * u]).total_states
        print(f"N={N:3d}  max rel. error {worst[N]:.5f}   entropy gap {abs(sol.S - math.log(total) / N):.5f}")
    slope = np.polyfit(np.log(Ns), np.log([worst[N] for N in Ns]), 1)[0]
    print(f"fitted error exponent {slope:.3f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    for name, val in asdict(Config()).items():
        p.add_argument(f"--{name.replace('_', '-')}", type=type(val), default=val)
    main(Config(**vars(p.parse_args())))

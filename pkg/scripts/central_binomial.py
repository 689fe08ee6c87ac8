"""Leading-order law for binom(2k, k) as the diagonal of 1/(1 - z1 - z2)."""

import argparse
from dataclasses import asdict, dataclass
from pathlib import Path

from thermoamoeba.algebra import LaurentPolynomial
from thermoamoeba.asymptotics import compare, estimate, loglog_slope
from thermoamoeba.io import config_hash, write_csv


@dataclass(frozen=True)
class Config:
    k_min: int = 10
    k_max: int = 80
    q1: int = 1
    q2: int = 1
    out: str = "out/central_binomial"


def main(cfg: Config) -> None:
    P = LaurentPolynomial.constant(2, 1)
    Q = LaurentPolynomial(2, {(0, 0): 1, (1, 0): -1, (0, 1): -1})
    q = (cfg.q1, cfg.q2)
    est = estimate(P, Q, q)
    rows = compare(P, Q, q, range(cfg.k_min, cfg.k_max + 1), est=est)
    h = config_hash({k: v for k, v in asdict(cfg).items() if k != "out"})
    write_csv(Path(cfg.out) / "compare.csv", ["k", "exact", "estimate", "ratio"], rows, h)
    print(f"z_q = {est.z_q.real}, C_q = {est.C_q.real:.10f}")
    for k, _, _, r in rows[:: max(1, len(rows) // 8)]:
        print(f"k={k:3d}  ratio={r:.6f}")
    print(f"log-log slope of |ratio - 1|: {loglog_slope(rows):.4f}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    for name, val in asdict(Config()).items():
        p.add_argument(f"--{name.replace('_', '-')}", type=type(val), default=val)
    main(Config(**vars(p.parse_args())))

"""Amoeba point cloud and complement components of z1^2 z2 - 4 z1 z2 + z1 z2^2 + 1."""

import argparse
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from thermoamoeba.algebra import LaurentPolynomial
from thermoamoeba.amoeba import find_components, render2d, vertex_components
from thermoamoeba.io import config_hash, write_csv, write_json, write_svg_scatter


@dataclass(frozen=True)
class Config:
    x1_lo: float = -4.0
    x1_hi: float = 4.0
    x1_steps: int = 200
    phase_steps: int = 256
    grid_steps: int = 60
    workers: int = 4
    out: str = "out/four_component"


def main(cfg: Config) -> None:
    Q = LaurentPolynomial(2, {(2, 1): 1, (1, 1): -4, (1, 2): 1, (0, 0): 1})
    params = {k: v for k, v in asdict(cfg).items() if k not in ("out", "workers")}
    h = config_hash(params)
    out = Path(cfg.out)
    cloud = render2d(Q, (cfg.x1_lo, cfg.x1_hi), cfg.x1_steps, cfg.phase_steps, workers=cfg.workers)
    write_csv(out / "amoeba.csv", ["x1", "x2"], cloud.points.tolist(), h)
    write_svg_scatter(out / "amoeba.svg", cloud.points, h)
    axes = [np.linspace(cfg.x1_lo, cfg.x1_hi, cfg.grid_steps)] * 2
    comps = find_components(Q, axes, workers=cfg.workers)
    write_json(out / "components.json", {"components": [c.to_json() for c in comps]}, h)
    for v in vertex_components(Q):
        print(f"vertex {v.vertex}: probe {np.round(v.representative, 3)} verified={v.verified}")
    for c in comps:
        print(f"component order {c.order}: {len(c.grid_cells)} cells, bounded={c.bounded}")
    print(f"{len(cloud.points)} amoeba points written to {out}")


if __name__ == "__main__":
    p = argparse.ArgumentParser(description=__doc__)
    for name, val in asdict(Config()).items():
        p.add_argument(f"--{name.replace('_', '-')}", type=type(val), default=val)
    main(Config(**vars(p.parse_args())))

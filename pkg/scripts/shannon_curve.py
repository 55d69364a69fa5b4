"""Entanglement-based Toffoli bound for the Shannon compressor as a function of n.

Writes a CSV (n, k, e_in, e_out, bound, e_out_mode) and prints the fitted slope.

    python scripts/shannon_curve.py --p 0.8 --start 500 --stop 2000 --step 20 --out curve.csv
"""
import argparse
import time
from dataclasses import dataclass
from pathlib import Path

from toffbound.shannon import fit_bound_slope, rows_to_csv, shannon_curve


@dataclass
class CurveConfig:
    p: float = 0.8
    start: int = 500
    stop: int = 2000
    step: int = 20
    mode: str = "approx"
    workers: int = 1
    out: str = "shannon_curve.csv"


def run(cfg: CurveConfig) -> float:
    t0 = time.perf_counter()
    rows = shannon_curve(cfg.p, range(cfg.start, cfg.stop + 1, cfg.step), cfg.mode, cfg.workers)
    Path(cfg.out).write_text(rows_to_csv(rows))
    slope = fit_bound_slope(rows) if len(rows) >= 10 else float("nan")
    last = rows[-1]
    print(f"{len(rows)} rows in {time.perf_counter() - t0:.1f}s -> {cfg.out}")
    print(f"slope a = {slope:.6f}   bound({last.n}) = {last.bound:.3f}   bound/n = {last.bound / last.n:.6f}")
    return slope


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    defaults = CurveConfig()
    for name, val in vars(defaults).items():
        ap.add_argument(f"--{name}", type=type(val), default=val)
    run(CurveConfig(**vars(ap.parse_args())))


if __name__ == "__main__":
    main()

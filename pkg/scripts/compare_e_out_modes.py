"""Compare the three E_out estimates for the compressor at small n (exact needs n <= 24)."""
import argparse
from dataclasses import dataclass

from toffbound.shannon import curve_row


@dataclass
class ModesConfig:
    p: float = 0.8
    ns: str = "5,10,15,20"


def run(cfg: ModesConfig) -> None:
    print(f"{'n':>4} {'E_in':>10} {'approx':>10} {'binomial':>10} {'exact':>10}")
    for n in (int(t) for t in cfg.ns.split(",")):
        rows = {m: curve_row(cfg.p, n, m) for m in ("approx", "binomial", "exact")}
        print(f"{n:>4} {rows['exact'].e_in:>10.4f} " + " ".join(f"{rows[m].e_out:>10.4f}" for m in rows))


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    for name, val in vars(ModesConfig()).items():
        ap.add_argument(f"--{name}", type=type(val), default=val)
    run(ModesConfig(**vars(ap.parse_args())))


if __name__ == "__main__":
    main()

"""Single-Toffoli walk-through: spectra, entropies and the constituent-level protocol."""
import argparse
from dataclasses import dataclass

import numpy as np

from toffbound.bounds import toffoli_lower_bound
from toffbound.circuit import Circuit, Toffoli
from toffbound.entanglement import entropy, schmidt_spectrum
from toffbound.logical import apply_circuit, toffoli_test_state
from toffbound.protocol import EbitLedger, encode, nonlocal_toffoli_protocol, register_spectrum, verify_nonlocal_toffoli


@dataclass
class GoldenConfig:
    n_random: int = 50
    seed: int = 0


def run(cfg: GoldenConfig) -> None:
    circ = Circuit(3, (Toffoli(0, 1, 2),))
    s = toffoli_test_state()
    out = apply_circuit(s, circ)
    np.set_printoptions(precision=4, suppress=True)
    for label, st in (("input", s), ("output", out)):
        spec = schmidt_spectrum(st)
        print(f"{label:<7} spectrum {spec.probs}  E = {entropy(spec):.12f}")
    ledger = EbitLedger()
    reg = nonlocal_toffoli_protocol(encode(s), ledger)
    print(f"protocol output spectrum {register_spectrum(reg).probs}  ledger: {ledger.ebits_consumed} ebits, "
          f"{ledger.classical_bits_sent} classical bits")
    print(f"lower bound on Toffoli count: {toffoli_lower_bound(circ, s).toffoli_lower_bound}")
    r = verify_nonlocal_toffoli(n_random=cfg.n_random, seed=cfg.seed)
    print(f"protocol check over {r.cases} states: {'PASS' if r.passed else 'FAIL'} "
          f"(worst fidelity {r.worst_fidelity:.15f}; {r.detail})")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    for name, val in vars(GoldenConfig()).items():
        ap.add_argument(f"--{name.replace('_', '-')}", dest=name, type=type(val), default=val)
    run(GoldenConfig(**vars(ap.parse_args())))


if __name__ == "__main__":
    main()

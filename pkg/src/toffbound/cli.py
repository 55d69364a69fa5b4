"""Command-line front end: ``toffbound verify | bound | shannon``.

Exit codes: 0 success, 1 failed check or invariant, 2 usage error,
3 input parse error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from . import __version__
from .bounds import BoundError, search_test_state, toffoli_lower_bound
from .circuit import CircuitError, FunctionSpec, parse_circuit
from .entanglement import schmidt_spectrum, schmidt_spectrum_bruteforce
from .logical import StateError, parse_state, random_state
from .protocol import CheckResult, verify_bilateral_cnot, verify_nonlocal_toffoli
from .shannon import ShannonError, compressor, fit_bound_slope, rows_to_csv, shannon_curve, typical_weight

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_PARSE = 0, 1, 2, 3
WORKERS_ENV = "TOFFBOUND_WORKERS"


class UsageError(Exception):
    pass


class InputError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    circuit: Optional[str] = None
    function: Optional[str] = None
    state: Optional[str] = None
    search: bool = False
    budget: int = 500
    seed: int = 0
    p: Optional[float] = None
    n_range: Optional[str] = None
    e_out_mode: str = "approx"
    output: Optional[str] = None
    format: str = "human"
    max_n: int = 6
    n_random: int = 100
    reverse_orientation: bool = False

    def validate(self) -> None:
        if self.command == "bound":
            if (self.circuit is None) == (self.function is None):
                raise UsageError("bound needs exactly one of --circuit or --function")
            if self.state is None and not self.search:
                raise UsageError("bound needs --state or --search")
            if self.format == "csv":
                raise UsageError("bound reports are json or human")
        if self.command == "shannon" and (self.p is None or self.n_range is None):
            raise UsageError("shannon needs --p and --n")
        if self.command != "shannon" and self.n_range is not None:
            raise UsageError("--n is only meaningful for shannon")


def parse_range(text: str) -> list[int]:
    """``start:stop:step`` (stop included when aligned) or a single integer."""
    parts = text.split(":")
    try:
        nums = [int(t) for t in parts]
    except ValueError:
        raise UsageError(f"bad range {text!r}") from None
    if len(nums) == 1:
        return nums
    if len(nums) == 2:
        nums.append(1)
    if len(nums) != 3 or nums[2] <= 0 or nums[0] > nums[1]:
        raise UsageError(f"bad range {text!r}")
    start, stop, step = nums
    return list(range(start, stop + 1, step))


def _emit(text: str, output: Optional[str]) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


# -- verify ----------------------------------------------------------------

def check_wht_spectrum(max_n: int, n_random: int, seed: int, tol: float = 1e-10) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    cases = 0
    for n in range(1, max_n + 1):
        for _ in range(n_random):
            s = random_state(n, rng)
            worst = max(worst, schmidt_spectrum(s).max_deviation(schmidt_spectrum_bruteforce(s)))
            cases += 1
    return CheckResult("wht-spectrum", worst <= tol, 1.0 - worst, cases, f"max deviation {worst:.2e}")


def cmd_verify(cfg: RunConfig) -> int:
    results = []
    for fn in (lambda: verify_bilateral_cnot(seed=cfg.seed),
               lambda: verify_nonlocal_toffoli(seed=cfg.seed, reversed_orientation=cfg.reverse_orientation),
               lambda: check_wht_spectrum(cfg.max_n, cfg.n_random, cfg.seed)):
        t0 = time.perf_counter()
        r = fn()
        results.append((r, time.perf_counter() - t0))
    if cfg.format == "json":
        payload = {"tool_version": __version__, "checks": [
            {"name": r.name, "passed": r.passed, "worst_fidelity": r.worst_fidelity,
             "cases": r.cases, "detail": r.detail} for r, _ in results]}
        _emit(json.dumps(payload, indent=2, sort_keys=True) + "\n", cfg.output)
    else:
        lines = [f"{'PASS' if r.passed else 'FAIL'}  {r.name:<18} cases={r.cases:<4} "
                 f"worst_fidelity={r.worst_fidelity:.12f}  {r.detail}  ({dt:.2f}s)" for r, dt in results]
        _emit("\n".join(lines) + "\n", cfg.output)
    return EXIT_OK if all(r.passed for r, _ in results) else EXIT_CHECK


# -- bound -----------------------------------------------------------------

def _load_function(cfg: RunConfig) -> FunctionSpec:
    if cfg.circuit is not None:
        try:
            text = Path(cfg.circuit).read_text(encoding="utf-8")
        except OSError as e:
            raise InputError(f"{cfg.circuit}: {e.strerror}") from None
        try:
            return FunctionSpec.from_circuit(parse_circuit(text), name=Path(cfg.circuit).name)
        except CircuitError as e:
            raise InputError(f"{cfg.circuit}: {e}") from None
    kind, _, arg = cfg.function.partition(":")
    if kind != "shannon":
        raise UsageError(f"unknown function {cfg.function!r} (known: shannon:<n>,<p>)")
    try:
        n_text, p_text = arg.split(",")
        n = int(n_text)
        return compressor(n, typical_weight(n, float(p_text)))
    except (ValueError, ShannonError) as e:
        raise UsageError(f"bad function {cfg.function!r}: {e}") from None


def cmd_bound(cfg: RunConfig) -> int:
    f = _load_function(cfg)
    if cfg.search:
        rep = search_test_state(f, cfg.budget, cfg.seed)
    else:
        try:
            s = parse_state(cfg.state)
        except (StateError, OSError) as e:
            raise InputError(str(e)) from None
        rep = toffoli_lower_bound(f, s, cfg.state)
    if cfg.format == "json":
        _emit(rep.to_json() + "\n", cfg.output)
    else:
        d = rep.to_dict()
        _emit("".join(f"{k:<24} {v}\n" for k, v in d.items()), cfg.output)
    violated = rep.sound is False or rep.toffoli_lower_bound > f.n_bits / 2 + 1e-9
    return EXIT_CHECK if violated else EXIT_OK


# -- shannon ---------------------------------------------------------------

def cmd_shannon(cfg: RunConfig) -> int:
    ns = parse_range(cfg.n_range)
    for n in ns:
        try:
            typical_weight(n, cfg.p)
        except ShannonError as e:
            raise UsageError(str(e)) from None
    workers = int(os.environ.get(WORKERS_ENV, "1") or 1)
    try:
        rows = shannon_curve(cfg.p, ns, cfg.e_out_mode, workers=workers)
    except ShannonError as e:
        raise UsageError(str(e)) from None
    slope = fit_bound_slope(rows) if len(rows) >= 10 else None
    summary = {"slope": slope, "model": "bound ~ a*n + b*log2(n) + c", "rows": len(rows),
               "p": cfg.p, "e_out_mode": cfg.e_out_mode, "tool_version": __version__}
    if cfg.format == "csv":
        text = rows_to_csv(rows) + json.dumps(summary, sort_keys=True) + "\n"
    elif cfg.format == "json":
        summary["data"] = [r.__dict__ for r in rows]
        text = json.dumps(summary, indent=2, sort_keys=True) + "\n"
    else:
        text = "".join(f"n={r.n:<6} k={r.k:<6} E_in={r.e_in:<14.6f} E_out={r.e_out:<14.6f} "
                       f"bound={r.bound:.6f}  bound/n={r.bound / r.n:.6f}\n" for r in rows)
        text += f"slope={slope}\n"
    _emit(text, cfg.output)
    # e_in >= e_out is expected whenever p != 1/2
    bad = [r.n for r in rows if cfg.p != 0.5 and r.e_in < r.e_out - 1e-9]
    if bad:
        print(f"invariant violated: e_in < e_out at n = {bad}", file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


# -- entry point -----------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="toffbound", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, formats):
        p.add_argument("--format", choices=formats, default="human")
        p.add_argument("--output", "-o")
        p.add_argument("--seed", type=int, default=0)

    v = sub.add_parser("verify", help="protocol and spectrum self-checks")
    common(v, ["human", "json"])
    v.add_argument("--max-n", type=int, default=6)
    v.add_argument("--n-random", type=int, default=100)
    v.add_argument("--debug-reverse-orientation", dest="reverse_orientation", action="store_true",
                   help="mutation check: flip the local CNOT in the Toffoli protocol")

    b = sub.add_parser("bound", help="Toffoli lower bound for a circuit or function")
    common(b, ["human", "json"])
    b.add_argument("--circuit")
    b.add_argument("--function", help="shannon:<n>,<p>")
    b.add_argument("--state", help="basis:<bits> | dicke:<n>,<k> | uniform:<n> | file:<path> | paper-toffoli")
    b.add_argument("--search", action="store_true")
    b.add_argument("--budget", type=int, default=500)

    s = sub.add_parser("shannon", help="Shannon-compressor entanglement curve")
    common(s, ["csv", "json", "human"])
    s.add_argument("--p", type=float, required=True)
    s.add_argument("--n", dest="n_range", required=True, help="start:stop:step")
    s.add_argument("--mode", dest="e_out_mode", choices=["approx", "binomial", "exact"], default="approx")
    return parser


def main(argv=None) -> int:
    try:
        ns = build_parser().parse_args(argv)
        cfg = RunConfig(**vars(ns))
        cfg.validate()
        return {"verify": cmd_verify, "bound": cmd_bound, "shannon": cmd_shannon}[cfg.command](cfg)
    except UsageError as e:
        print(f"toffbound: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InputError as e:
        print(f"toffbound: input error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except BoundError as e:
        print(f"toffbound: {e}", file=sys.stderr)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())

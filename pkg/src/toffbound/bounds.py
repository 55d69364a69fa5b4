"""Toffoli-count lower bounds from the entanglement change of a test state.

Every one- and two-bit reversible gate acts locally on the A and B halves of
the encoded register, so only Toffoli gates can change the A|B entanglement.
A single Toffoli can be implemented with 2 ebits, hence it changes the
entanglement of any state by at most ``E_T_MAX = 2`` and

    toffoli_count >= |E_in - E_out| / E_T_MAX.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from typing import Optional, Union

import numpy as np

from . import __version__
from .circuit import Circuit, FunctionSpec, render_circuit
from .entanglement import Ebits, entanglement
from .logical import LogicalState, StateError, apply_circuit, dicke_state, uniform_state

E_T_MIN = 1.0
E_T_MAX = 2.0


@dataclass(frozen=True)
class ETBounds:
    lower: float = E_T_MIN
    upper: float = E_T_MAX


class BoundError(ValueError):
    pass


@dataclass(frozen=True)
class BoundReport:
    e_in: Ebits
    e_out: Ebits
    delta: Ebits
    toffoli_lower_bound: float
    e_u_lower: Ebits
    e_u_upper_from_circuit: Optional[Ebits] = None
    actual_toffoli_count: Optional[int] = None
    test_state_descriptor: str = ""
    n_bits: int = 0
    function_name: str = ""
    digests: dict = field(default_factory=dict)

    @property
    def sound(self) -> Optional[bool]:
        if self.actual_toffoli_count is None:
            return None
        return self.toffoli_lower_bound <= self.actual_toffoli_count + 1e-9

    def to_dict(self) -> dict:
        d = asdict(self)
        digests = d.pop("digests")
        d["sound"] = self.sound
        d["tool_version"] = __version__
        d.update({f"digest_{k}": v for k, v in sorted(digests.items())})
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2)


def _as_spec(f: Union[FunctionSpec, Circuit]) -> FunctionSpec:
    return FunctionSpec.from_circuit(f) if isinstance(f, Circuit) else f


def entanglement_delta(f: Union[FunctionSpec, Circuit], s: LogicalState) -> tuple[Ebits, Ebits, Ebits]:
    """``(E_in, E_out, |E_in - E_out|)`` for test state ``s`` pushed through ``f``."""
    f = _as_spec(f)
    try:
        out = apply_circuit(s, f)
    except StateError as e:
        raise BoundError(str(e)) from None
    e_in = entanglement(s)
    e_out = entanglement(out)
    return e_in, e_out, abs(e_in - e_out)


def state_digest(s: LogicalState) -> str:
    h = hashlib.sha256(f"n={s.n};".encode())
    for x, c in s.items():
        h.update(f"{x}:{c.real:.15e},{c.imag:.15e};".encode())
    return h.hexdigest()[:16]


def report_from_entropies(e_in: Ebits, e_out: Ebits, f: Optional[FunctionSpec] = None,
                          descriptor: str = "", digests: Optional[dict] = None,
                          n_bits: int = 0) -> BoundReport:
    delta = abs(e_in - e_out)
    count = f.toffoli_count if f is not None else None
    return BoundReport(
        e_in=e_in,
        e_out=e_out,
        delta=delta,
        toffoli_lower_bound=delta / E_T_MAX,
        e_u_lower=delta,
        e_u_upper_from_circuit=None if count is None else E_T_MAX * count,
        actual_toffoli_count=count,
        test_state_descriptor=descriptor,
        n_bits=f.n_bits if f is not None else n_bits,
        function_name=(f.name if f is not None else ""),
        digests=dict(digests or {}),
    )


def toffoli_lower_bound(f: Union[FunctionSpec, Circuit], s: LogicalState,
                        descriptor: str = "") -> BoundReport:
    f = _as_spec(f)
    e_in, e_out, _ = entanglement_delta(f, s)
    digests = {"state": state_digest(s)}
    if f.circuit is not None:
        digests["circuit"] = hashlib.sha256(render_circuit(f.circuit).encode()).hexdigest()[:16]
    return report_from_entropies(e_in, e_out, f, descriptor or "custom", digests)


# -- test-state search -----------------------------------------------------

@dataclass
class SearchConfig:
    """Heuristic knobs; the defaults are what the CLI uses."""

    n_random_baseline: int = 50
    restarts: int = 5
    steps_per_restart: int = 10
    swap_prob: float = 0.3
    min_support: int = 2
    max_support: int = 8
    initial_step: float = 0.5
    min_step: float = 1e-3
    shrink: float = 0.9


def _candidate_pool(f: FunctionSpec) -> np.ndarray:
    if f.domain is not None:
        return f.domain
    return np.arange(1 << f.n_bits, dtype=np.int64)


def _state_on(n: int, idx: np.ndarray, coeffs: np.ndarray) -> LogicalState:
    a = np.zeros(1 << n, dtype=complex)
    a[idx] = coeffs
    return LogicalState(n, a / np.linalg.norm(a))


def search_test_state(f: Union[FunctionSpec, Circuit], budget: int, seed: int,
                      config: Optional[SearchConfig] = None) -> BoundReport:
    """Look for a test state with a large entanglement change.

    Baselines (every Dicke state and the uniform state when the domain allows,
    plus random dense states) are scored first.  Then ``budget`` hill-climbing
    steps are spread over restarts from random sparse superpositions; each step
    perturbs one amplitude's modulus or phase and keeps it if the delta grows.
    Ties keep the first state found.
    """
    f = _as_spec(f)
    cfg = config or SearchConfig()
    if budget < 1:
        raise BoundError("search budget must be positive")
    n = f.n_bits
    if n > 20:
        raise BoundError("test-state search is limited to n <= 20")
    rng = np.random.default_rng(seed)
    pool = _candidate_pool(f)
    f = f.tabulated(pool)

    best: dict = {"delta": -1.0}

    def consider(state: LogicalState, desc: str) -> float:
        e_in, e_out, delta = entanglement_delta(f, state)
        if delta > best["delta"]:
            best.update(delta=delta, e_in=e_in, e_out=e_out, state=state, desc=desc)
        return delta

    for k in range(n + 1):
        try:
            consider(dicke_state(n, k), f"dicke:{n},{k}")
        except BoundError:
            pass
    if f.domain is None:
        consider(uniform_state(n), f"uniform:{n}")
    for i in range(cfg.n_random_baseline):
        coeffs = rng.normal(size=len(pool)) + 1j * rng.normal(size=len(pool))
        consider(_state_on(n, pool, coeffs), f"random-dense#{i}")

    restarts = max(cfg.restarts, budget // cfg.steps_per_restart)
    per_restart = [budget // restarts + (r < budget % restarts) for r in range(restarts)]
    for r, steps in enumerate(per_restart):
        if steps == 0:
            continue
        size = int(rng.integers(cfg.min_support, min(cfg.max_support, len(pool)) + 1))
        idx = rng.choice(pool, size=size, replace=False)
        mags = np.ones(size)
        phases = rng.choice([0.0, np.pi], size=size)
        cur = consider(_state_on(n, idx, mags * np.exp(1j * phases)), f"sparse-restart#{r}")
        step = cfg.initial_step
        for t in range(steps):
            j = int(rng.integers(size))
            i2, m2, p2 = idx.copy(), mags.copy(), phases.copy()
            move = rng.random()
            if move < cfg.swap_prob and len(pool) > size:
                fresh = pool[~np.isin(pool, idx)]
                i2[j] = fresh[rng.integers(len(fresh))]
            elif move < (1 + cfg.swap_prob) / 2:
                m2[j] = abs(m2[j] + step * rng.normal())
            else:
                p2[j] = p2[j] + step * np.pi * rng.normal()
            if not np.any(m2):
                continue
            d = consider(_state_on(n, i2, m2 * np.exp(1j * p2)), f"sparse-restart#{r}-step{t}")
            if d > cur:
                cur, idx, mags, phases = d, i2, m2, p2
            else:
                step = max(cfg.min_step, step * cfg.shrink)

    s = best["state"]
    rep = report_from_entropies(best["e_in"], best["e_out"], f, f"search(seed={seed},budget={budget}):{best['desc']}",
                                {"state": state_digest(s)})
    return rep

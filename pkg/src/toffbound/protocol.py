"""Dense simulation over constituent qubits.

Checks the constructive claims behind the bounds: the bit-to-pair encoding,
the bilateral CNOT identity, and the 2-ebit nonlocal Toffoli protocol.

Qubit ``j`` of a register is bit ``j`` of the amplitude index (little
endian).  Logical pair ``i`` occupies qubits ``2i`` (party A) and ``2i + 1``
(party B).  Logical pair ``i`` carries bit-string position ``i``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .circuit import Circuit, Cnot, Toffoli
from .entanglement import SchmidtSpectrum
from .logical import LogicalState, apply_circuit, basis_state, int_to_bits, random_state

MAX_QUBITS = 14
TOL = 1e-12


class ProtocolError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class ConstituentRegister:
    q: int
    amps: np.ndarray
    labels: tuple = ()  # per qubit: (party, logical pair index)

    def __post_init__(self):
        if not 1 <= self.q <= MAX_QUBITS:
            raise ProtocolError(f"register size {self.q} outside 1..{MAX_QUBITS}")
        a = np.asarray(self.amps, dtype=complex)
        if a.shape != (1 << self.q,):
            raise ProtocolError("amplitude vector has wrong length")
        if abs(np.vdot(a, a).real - 1.0) > TOL:
            raise ProtocolError("register not normalised")
        a.setflags(write=False)
        object.__setattr__(self, "amps", a)
        labels = tuple(self.labels)
        if not labels and self.q % 2 == 0:
            labels = pair_labels(self.q // 2)
        object.__setattr__(self, "labels", labels)

    @property
    def n_pairs(self) -> int:
        return self.q // 2

    def qubit(self, party: str, pair: int) -> int:
        try:
            return self.labels.index((party, pair))
        except ValueError:
            raise ProtocolError(f"no qubit labelled {party}{pair}") from None


@dataclass
class EbitLedger:
    ebits_consumed: int = 0
    classical_bits_sent: int = 0
    log: list = field(default_factory=list)

    def charge(self, ebits: int, cbits: int, what: str) -> None:
        if ebits < 0 or cbits < 0:
            raise ProtocolError("ledger charges must be nonnegative")
        self.ebits_consumed += ebits
        self.classical_bits_sent += cbits
        self.log.append((what, ebits, cbits))


def pair_labels(n_pairs: int) -> tuple:
    return tuple((party, i) for i in range(n_pairs) for party in ("A", "B"))


# -- gates -----------------------------------------------------------------

def _check(r: ConstituentRegister, *qs: int) -> None:
    for x in qs:
        if not 0 <= x < r.q:
            raise ProtocolError(f"qubit {x} out of range")
    if len(set(qs)) != len(qs):
        raise ProtocolError(f"index clash {qs}")


def _permuted(r: ConstituentRegister, src: np.ndarray) -> ConstituentRegister:
    # new[i] = old[src[i]]
    return ConstituentRegister(r.q, r.amps[src], r.labels)


def h(r: ConstituentRegister, t: int) -> ConstituentRegister:
    _check(r, t)
    a = r.amps.reshape(-1, 2, 1 << t)
    lo, hi = a[:, 0, :], a[:, 1, :]
    out = np.stack([lo + hi, lo - hi], axis=1) / np.sqrt(2)
    return ConstituentRegister(r.q, out.reshape(-1), r.labels)


def x(r: ConstituentRegister, t: int) -> ConstituentRegister:
    _check(r, t)
    return _permuted(r, np.arange(1 << r.q) ^ (1 << t))


def cnot(r: ConstituentRegister, c: int, t: int) -> ConstituentRegister:
    _check(r, c, t)
    idx = np.arange(1 << r.q)
    return _permuted(r, idx ^ (((idx >> c) & 1) << t))


def toffoli(r: ConstituentRegister, c1: int, c2: int, t: int) -> ConstituentRegister:
    _check(r, c1, c2, t)
    idx = np.arange(1 << r.q)
    return _permuted(r, idx ^ ((((idx >> c1) & (idx >> c2)) & 1) << t))


def swap(r: ConstituentRegister, a: int, b: int) -> ConstituentRegister:
    _check(r, a, b)
    idx = np.arange(1 << r.q)
    diff = ((idx >> a) ^ (idx >> b)) & 1
    return _permuted(r, idx ^ (diff << a) ^ (diff << b))


_GATES = {"H": h, "X": x, "CNOT": cnot, "TOFFOLI": toffoli, "SWAP": swap}


def apply_gate(r: ConstituentRegister, name: str, *qubits: int) -> ConstituentRegister:
    try:
        fn = _GATES[name.upper()]
    except KeyError:
        raise ProtocolError(f"unknown gate {name!r}") from None
    return fn(r, *qubits)


def basis_register(q: int, bits: int) -> ConstituentRegister:
    a = np.zeros(1 << q, dtype=complex)
    a[bits] = 1
    return ConstituentRegister(q, a)


# -- encoding --------------------------------------------------------------

def _pair_vectors(n: int) -> np.ndarray:
    """Row ``v`` is the register vector encoding logical basis string ``v``."""
    q = 2 * n
    idx = np.arange(1 << q)
    out = np.zeros((1 << n, 1 << q))
    # a pair is |00> or |11> on (A_i, B_i); sign (-1)**x_i on |11>
    a_bits = np.stack([(idx >> (2 * i)) & 1 for i in range(n)])
    b_bits = np.stack([(idx >> (2 * i + 1)) & 1 for i in range(n)])
    on_code = np.all(a_bits == b_bits, axis=0)
    for v in range(1 << n):
        xs = np.array([int(ch) for ch in int_to_bits(v, n)])[:, None]
        sign = np.prod(np.where((a_bits == 1) & (xs == 1), -1, 1), axis=0)
        out[v] = np.where(on_code, sign, 0) * 2.0 ** (-n / 2)
    return out


def encode(s: LogicalState) -> ConstituentRegister:
    if 2 * s.n > MAX_QUBITS:
        raise ProtocolError(f"encoding needs 2n <= {MAX_QUBITS} qubits")
    return ConstituentRegister(2 * s.n, s.dense() @ _pair_vectors(s.n), pair_labels(s.n))


def decode(r: ConstituentRegister) -> tuple[LogicalState, float]:
    """Project onto the encoded subspace; returns the logical state and the leaked weight."""
    if r.q % 2 or r.labels != pair_labels(r.n_pairs):
        raise ProtocolError("register is not a standard pair-encoded register")
    n = r.n_pairs
    c = _pair_vectors(n) @ r.amps
    kept = float(np.vdot(c, c).real)
    if kept < 1e-6:
        raise ProtocolError("register has no weight in the encoded subspace")
    return LogicalState(n, c / np.sqrt(kept)), 1.0 - kept


def fidelity(r: ConstituentRegister, other: ConstituentRegister) -> float:
    return float(abs(np.vdot(r.amps, other.amps)) ** 2)


def register_spectrum(r: ConstituentRegister) -> SchmidtSpectrum:
    """Schmidt spectrum across all-A | all-B by direct SVD."""
    t = r.amps.reshape((2,) * r.q)
    # reshape axes are most-significant first: axis k is qubit q-1-k
    a_axes = [r.q - 1 - j for j, lab in enumerate(r.labels) if lab[0] == "A"]
    b_axes = [r.q - 1 - j for j, lab in enumerate(r.labels) if lab[0] == "B"]
    m = t.transpose(a_axes + b_axes).reshape(1 << len(a_axes), 1 << len(b_axes))
    return SchmidtSpectrum(np.linalg.svd(m, compute_uv=False) ** 2)


# -- checks ----------------------------------------------------------------

@dataclass
class CheckResult:
    name: str
    passed: bool
    worst_fidelity: float
    cases: int
    detail: str = ""


def bilateral_cnot(r: ConstituentRegister, control_pair: int, target_pair: int) -> ConstituentRegister:
    """Logical CNOT built from two local CNOTs, each pointing target -> control."""
    for party in ("A", "B"):
        r = cnot(r, r.qubit(party, target_pair), r.qubit(party, control_pair))
    return r


def verify_bilateral_cnot(n_random: int = 20, seed: int = 0, tol: float = 1e-10) -> CheckResult:
    rng = np.random.default_rng(seed)
    states = [basis_state(2, b) for b in ("00", "01", "10", "11")]
    states += [random_state(2, rng) for _ in range(n_random)]
    circ = Circuit(2, (Cnot(0, 1),))
    worst = 1.0
    for s in states:
        got = bilateral_cnot(encode(s), 0, 1)
        want = encode(apply_circuit(s, circ))
        worst = min(worst, fidelity(got, want))
    return CheckResult("bilateral-cnot", worst >= 1 - tol, worst, len(states))


def local_toffoli(r: ConstituentRegister, party: str, reversed_orientation: bool = False) -> ConstituentRegister:
    """One side's local Toffoli: if its pair-0 qubit is 1, CNOT from its pair-2
    qubit onto its pair-1 qubit."""
    c1 = r.qubit(party, 0)
    ctl, tgt = r.qubit(party, 2), r.qubit(party, 1)
    if reversed_orientation:
        ctl, tgt = tgt, ctl
    return toffoli(r, c1, ctl, tgt)


def nonlocal_toffoli_protocol(r: ConstituentRegister, ledger: Optional[EbitLedger] = None,
                              reversed_orientation: bool = False) -> ConstituentRegister:
    """Logical Toffoli (controls pairs 0 and 1, target pair 2) using only local
    gates plus one A0 <-> B0 swap, charged as two teleportations."""
    if r.q != 6 or r.labels != pair_labels(3):
        raise ProtocolError("protocol expects three pair-encoded logical qubits")
    ledger = ledger if ledger is not None else EbitLedger()
    a0, b0 = r.qubit("A", 0), r.qubit("B", 0)
    r = h(h(r, a0), b0)
    r = local_toffoli(local_toffoli(r, "A", reversed_orientation), "B", reversed_orientation)
    r = swap(r, a0, b0)
    ledger.charge(2, 4, "swap A0<->B0 by two teleportations")
    r = local_toffoli(local_toffoli(r, "A", reversed_orientation), "B", reversed_orientation)
    r = h(h(r, a0), b0)
    return r


def verify_nonlocal_toffoli(n_random: int = 50, seed: int = 0, tol: float = 1e-9,
                            reversed_orientation: bool = False) -> CheckResult:
    rng = np.random.default_rng(seed)
    states = [basis_state(3, int_to_bits(v, 3)) for v in range(8)]
    states += [random_state(3, rng) for _ in range(n_random)]
    circ = Circuit(3, (Toffoli(0, 1, 2),))
    worst, worst_leak, ledgers_ok = 1.0, 0.0, True
    for s in states:
        ledger = EbitLedger()
        got = nonlocal_toffoli_protocol(encode(s), ledger, reversed_orientation)
        want = encode(apply_circuit(s, circ))
        worst = min(worst, fidelity(got, want))
        _, leak = decode(got)
        worst_leak = max(worst_leak, leak)
        ledgers_ok &= ledger.ebits_consumed == 2
    passed = worst >= 1 - tol and ledgers_ok
    return CheckResult("nonlocal-toffoli", passed, worst, len(states),
                       f"max leakage {worst_leak:.2e}, ledger {'2 ebits/run' if ledgers_ok else 'WRONG'}")

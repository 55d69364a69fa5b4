"""Superpositions of logical basis states and their transformation by
reversible functions.

Each classical bit is carried by one logical qubit, itself a Bell-type pair
of constituent qubits (see :mod:`toffbound.protocol` for the explicit
encoding).  Here the encoding stays implicit: a state is just the amplitude
vector over ``n``-bit strings.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import comb
from pathlib import Path
from typing import Iterable, Mapping, Union

import numpy as np

from .circuit import Circuit, FunctionSpec

DENSE_MAX_N = 26
NORM_TOL = 1e-12


class StateError(ValueError):
    pass


def bits_to_int(x: str) -> int:
    if not x or any(ch not in "01" for ch in x):
        raise StateError(f"not a bit string: {x!r}")
    return int(x, 2)


def int_to_bits(v: int, n: int) -> str:
    return format(v, f"0{n}b")


@dataclass(frozen=True, eq=False)
class LogicalState:
    """``n`` logical qubits.

    ``amps`` is a dense complex array of length ``2**n`` when ``n <= 26``,
    otherwise a ``{packed int: amplitude}`` mapping holding the support only.
    """

    n: int
    amps: Union[np.ndarray, Mapping[int, complex]]

    def __post_init__(self):
        if self.n < 1:
            raise StateError("need at least one logical qubit")
        if self.is_dense:
            a = np.asarray(self.amps, dtype=complex)
            if a.shape != (1 << self.n,):
                raise StateError(f"dense amplitude vector must have length 2**{self.n}")
            a.setflags(write=False)
            object.__setattr__(self, "amps", a)
            norm2 = float(np.vdot(a, a).real)
        else:
            d = {int(k): complex(v) for k, v in dict(self.amps).items() if v != 0}
            object.__setattr__(self, "amps", d)
            norm2 = sum(abs(v) ** 2 for v in d.values())
        if abs(norm2 - 1.0) > NORM_TOL:
            raise StateError(f"state not normalised (norm^2 = {norm2!r})")

    @property
    def is_dense(self) -> bool:
        return self.n <= DENSE_MAX_N

    def support(self) -> np.ndarray:
        if self.is_dense:
            return np.flatnonzero(self.amps)
        return np.array(sorted(self.amps), dtype=np.int64 if self.n <= 62 else object)

    def amplitude(self, x: Union[str, int]) -> complex:
        v = bits_to_int(x) if isinstance(x, str) else int(x)
        if self.is_dense:
            return complex(self.amps[v])
        return self.amps.get(v, 0j)

    def items(self) -> list[tuple[str, complex]]:
        return [(int_to_bits(int(v), self.n), self.amplitude(int(v))) for v in self.support()]

    def dense(self) -> np.ndarray:
        if self.is_dense:
            return self.amps
        raise StateError(f"no dense vector for n = {self.n} > {DENSE_MAX_N}")

    def allclose(self, other: "LogicalState", atol: float = 1e-12) -> bool:
        if self.n != other.n:
            return False
        keys = set(self.support().tolist()) | set(other.support().tolist())
        return all(abs(self.amplitude(k) - other.amplitude(k)) <= atol for k in keys)


def _from_pairs(n: int, pairs: Mapping[int, complex]) -> LogicalState:
    norm = np.sqrt(sum(abs(v) ** 2 for v in pairs.values()))
    if norm == 0:
        raise StateError("zero-norm state")
    if n <= DENSE_MAX_N:
        a = np.zeros(1 << n, dtype=complex)
        for k, v in pairs.items():
            a[k] = v
        return LogicalState(n, a / norm)
    return LogicalState(n, {k: v / norm for k, v in pairs.items()})


def basis_state(n: int, x: str) -> LogicalState:
    if len(x) != n:
        raise StateError(f"bit string {x!r} does not have length {n}")
    return _from_pairs(n, {bits_to_int(x): 1.0})


def weight_k_indices(n: int, k: int) -> np.ndarray:
    """All packed ``n``-bit integers of Hamming weight ``k``, ascending."""
    out = [sum(1 << (n - 1 - i) for i in pos) for pos in combinations(range(n), k)]
    return np.array(sorted(out), dtype=np.int64) if n < 63 else out


def dicke_state(n: int, k: int) -> LogicalState:
    """Equal superposition of all weight-``k`` strings, amplitude ``C(n,k)**-0.5``."""
    if not 0 <= k <= n:
        raise StateError(f"weight {k} out of range for n = {n}")
    if n <= DENSE_MAX_N:
        idx = weight_k_indices(n, k)
        a = np.zeros(1 << n, dtype=complex)
        a[idx] = 1.0 / np.sqrt(comb(n, k))
        return LogicalState(n, a)
    if comb(n, k) > 1 << 22:
        raise StateError("Dicke support too large for an explicit state; use dicke_entanglement")
    amp = comb(n, k) ** -0.5
    return LogicalState(n, {int(v): amp for v in weight_k_indices(n, k)})


def uniform_state(n: int) -> LogicalState:
    if not 1 <= n <= DENSE_MAX_N:
        raise StateError(f"uniform state only built densely (1 <= n <= {DENSE_MAX_N})")
    return LogicalState(n, np.full(1 << n, 2.0 ** (-n / 2), dtype=complex))


def from_amplitudes(n: int, pairs: Iterable[tuple[str, complex]]) -> LogicalState:
    """Normalised state from ``(bitstring, amplitude)`` pairs."""
    d: dict[int, complex] = {}
    for x, c in pairs:
        if len(x) != n:
            raise StateError(f"bit string {x!r} does not have length {n}")
        v = bits_to_int(x)
        if v in d:
            raise StateError(f"duplicate basis string {x!r}")
        d[v] = complex(c)
    return _from_pairs(n, d)


def random_state(n: int, rng: np.random.Generator, support=None) -> LogicalState:
    """Haar-like random state (complex Gaussian), optionally restricted to ``support``."""
    a = np.zeros(1 << n, dtype=complex)
    idx = np.arange(1 << n) if support is None else np.asarray(support)
    a[idx] = rng.normal(size=len(idx)) + 1j * rng.normal(size=len(idx))
    return LogicalState(n, a / np.linalg.norm(a))


def toffoli_test_state() -> LogicalState:
    """The 3-qubit test state whose Toffoli image gains one ebit."""
    return from_amplitudes(3, [("000", 0.5), ("100", 0.5), ("010", 0.5), ("111", -0.5)])


def apply_circuit(s: LogicalState, f: Union[FunctionSpec, Circuit]) -> LogicalState:
    """Permute amplitudes: the output amplitude on ``f(x)`` is the input one on ``x``."""
    if isinstance(f, Circuit):
        f = FunctionSpec.from_circuit(f)
    if f.n_bits != s.n:
        raise StateError(f"function acts on {f.n_bits} bits, state has {s.n}")
    supp = s.support()
    if f.domain is not None and not f.in_domain(supp).all():
        raise StateError("test state has support outside the function's declared domain")
    images = f.map_indices(supp)
    if len(np.unique(images)) != len(images):
        raise StateError("function is not injective on the state's support")
    if s.is_dense:
        out = np.zeros_like(s.amps)
        out[images] = s.amps[supp]
        return LogicalState(s.n, out)
    return LogicalState(s.n, {int(y): s.amps[int(x)] for x, y in zip(supp, images)})


# -- descriptor mini-language ----------------------------------------------

def parse_state(desc: str) -> LogicalState:
    """``basis:<bits>``, ``dicke:<n>,<k>``, ``uniform:<n>``, ``file:<path>`` or ``paper-toffoli``."""
    if desc == "paper-toffoli":
        return toffoli_test_state()
    kind, _, arg = desc.partition(":")
    try:
        if kind == "basis":
            return basis_state(len(arg), arg)
        if kind == "dicke":
            n, k = (int(t) for t in arg.split(","))
            return dicke_state(n, k)
        if kind == "uniform":
            return uniform_state(int(arg))
        if kind == "file":
            return read_state_file(arg)
    except ValueError as e:
        raise StateError(f"bad state descriptor {desc!r}: {e}") from None
    raise StateError(f"unknown state descriptor {desc!r}")


def read_state_file(path) -> LogicalState:
    """Lines ``<bitstring> <re> <im>``; ``#`` comments and blank lines ignored."""
    pairs = []
    n = None
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        if len(line) != 3:
            raise StateError(f"{path}:{lineno}: expected '<bits> <re> <im>'")
        x, re_, im = line
        n = len(x) if n is None else n
        pairs.append((x, complex(float(re_), float(im))))
    if n is None:
        raise StateError(f"{path}: empty state file")
    return from_amplitudes(n, pairs)


def write_state_file(s: LogicalState, path) -> None:
    lines = [f"{x} {c.real!r} {c.imag!r}" for x, c in s.items()]
    Path(path).write_text("\n".join(lines) + "\n")

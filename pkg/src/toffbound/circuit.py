"""Classical reversible circuits: gates, text format, bit-level execution.

Bit strings are written leftmost-first and bit index 0 is the leftmost
character.  When a string is packed into an integer we use ``int(s, 2)``,
so index ``i`` of an ``n``-bit register is integer bit ``n - 1 - i``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

import numpy as np


class CircuitError(ValueError):
    """Invalid gate, circuit or bit string."""


class CircuitSyntaxError(CircuitError):
    def __init__(self, msg: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {msg}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Not:
    target: int

    @property
    def bits(self):
        return (self.target,)


@dataclass(frozen=True)
class Cnot:
    control: int
    target: int

    @property
    def bits(self):
        return (self.control, self.target)


@dataclass(frozen=True)
class Toffoli:
    control1: int
    control2: int
    target: int

    @property
    def bits(self):
        return (self.control1, self.control2, self.target)


@dataclass(frozen=True)
class Perm1:
    """Arbitrary reversible one-bit gate given by its image table."""

    target: int
    table: tuple[int, int]

    @property
    def bits(self):
        return (self.target,)


@dataclass(frozen=True)
class Perm2:
    """Arbitrary reversible two-bit gate.

    The 2-bit value ``v = 2*x[a] + x[b]`` (bit ``a`` high) maps to ``table[v]``.
    """

    a: int
    b: int
    table: tuple[int, int, int, int]

    @property
    def bits(self):
        return (self.a, self.b)


Gate = Union[Not, Cnot, Toffoli, Perm1, Perm2]


def validate_gate(g: Gate, n_bits: int) -> None:
    bits = g.bits
    for b in bits:
        if not isinstance(b, (int, np.integer)) or b < 0 or b >= n_bits:
            raise CircuitError(f"bit index {b} out of range for {n_bits} bits in {g}")
    if len(set(bits)) != len(bits):
        raise CircuitError(f"repeated bit index in {g}")
    if isinstance(g, (Perm1, Perm2)):
        size = 2 if isinstance(g, Perm1) else 4
        if len(g.table) != size or sorted(g.table) != list(range(size)):
            raise CircuitError(f"non-bijective image table {tuple(g.table)}")


def invert_gate(g: Gate) -> Gate:
    if isinstance(g, Perm1):
        inv = [0, 0]
        for v, w in enumerate(g.table):
            inv[w] = v
        return Perm1(g.target, tuple(inv))
    if isinstance(g, Perm2):
        inv = [0, 0, 0, 0]
        for v, w in enumerate(g.table):
            inv[w] = v
        return Perm2(g.a, g.b, tuple(inv))
    return g


@dataclass(frozen=True)
class Circuit:
    n_bits: int
    gates: tuple = ()

    def __post_init__(self):
        if not isinstance(self.n_bits, (int, np.integer)) or self.n_bits < 1:
            raise CircuitError(f"bit count must be a positive integer, got {self.n_bits!r}")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            validate_gate(g, self.n_bits)

    def __len__(self):
        return len(self.gates)


def toffoli_count(c: Circuit) -> int:
    return sum(isinstance(g, Toffoli) for g in c.gates)


def inverse(c: Circuit) -> Circuit:
    return Circuit(c.n_bits, tuple(invert_gate(g) for g in reversed(c.gates)))


# -- execution -------------------------------------------------------------

def _gate_on_list(g: Gate, bits: list[int]) -> None:
    if isinstance(g, Not):
        bits[g.target] ^= 1
    elif isinstance(g, Cnot):
        bits[g.target] ^= bits[g.control]
    elif isinstance(g, Toffoli):
        bits[g.target] ^= bits[g.control1] & bits[g.control2]
    elif isinstance(g, Perm1):
        bits[g.target] = g.table[bits[g.target]]
    else:
        w = g.table[2 * bits[g.a] + bits[g.b]]
        bits[g.a], bits[g.b] = w >> 1, w & 1


def _check_bitstring(x: str, n: int) -> None:
    if len(x) != n or any(ch not in "01" for ch in x):
        raise CircuitError(f"expected a {n}-bit string, got {x!r}")


def apply_to_bits(c: Circuit, x: str) -> str:
    """Run ``c`` on bit string ``x``, gates applied left to right."""
    _check_bitstring(x, c.n_bits)
    bits = [int(ch) for ch in x]
    for g in c.gates:
        _gate_on_list(g, bits)
    return "".join(map(str, bits))


def apply_to_indices(c: Circuit, idx: np.ndarray) -> np.ndarray:
    """Vectorised :func:`apply_to_bits` on packed integers (see module doc)."""
    n = c.n_bits
    if n > 62:
        raise CircuitError("packed-integer execution supports at most 62 bits")
    out = np.array(idx, dtype=np.int64, copy=True)

    def bit(i):
        return (out >> (n - 1 - i)) & 1

    for g in c.gates:
        if isinstance(g, Not):
            out ^= 1 << (n - 1 - g.target)
        elif isinstance(g, Cnot):
            out ^= bit(g.control) << (n - 1 - g.target)
        elif isinstance(g, Toffoli):
            out ^= (bit(g.control1) & bit(g.control2)) << (n - 1 - g.target)
        elif isinstance(g, Perm1):
            sh = n - 1 - g.target
            v = (out >> sh) & 1
            out ^= (np.asarray(g.table)[v] ^ v) << sh
        else:
            sa, sb = n - 1 - g.a, n - 1 - g.b
            v = 2 * ((out >> sa) & 1) + ((out >> sb) & 1)
            w = np.asarray(g.table)[v]
            out &= ~((1 << sa) | (1 << sb))
            out |= ((w >> 1) << sa) | ((w & 1) << sb)
    return out


def permutation(c: Circuit) -> np.ndarray:
    """Image of every input, ``perm[x] = f(x)`` over all ``2**n`` integers."""
    if c.n_bits > 26:
        raise CircuitError("full permutation table only available for n <= 26")
    return apply_to_indices(c, np.arange(1 << c.n_bits, dtype=np.int64))


@dataclass(frozen=True)
class FunctionSpec:
    """A reversible function, realised either by a circuit or by a callback.

    ``func`` maps packed integers to packed integers.  ``domain`` optionally
    restricts the inputs (a partial truth table), as a sorted integer array.
    """

    n_bits: int
    circuit: Optional[Circuit] = None
    func: Optional[Callable[[int], int]] = None
    domain: Optional[np.ndarray] = field(default=None, compare=False)
    name: str = ""

    def __post_init__(self):
        if (self.circuit is None) == (self.func is None):
            raise CircuitError("FunctionSpec needs exactly one of circuit or func")
        if self.circuit is not None and self.circuit.n_bits != self.n_bits:
            raise CircuitError("circuit bit count does not match n_bits")
        if self.domain is not None:
            object.__setattr__(self, "domain", np.unique(np.asarray(self.domain, dtype=np.int64)))

    @classmethod
    def from_circuit(cls, c: Circuit, name: str = "") -> "FunctionSpec":
        return cls(c.n_bits, circuit=c, name=name)

    def map_indices(self, idx: np.ndarray) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        if self.circuit is not None:
            return apply_to_indices(self.circuit, idx)
        return np.fromiter((self.func(int(i)) for i in idx), dtype=np.int64, count=len(idx))

    def in_domain(self, idx: np.ndarray) -> np.ndarray:
        idx = np.asarray(idx, dtype=np.int64)
        if self.domain is None:
            return np.ones(idx.shape, dtype=bool)
        return np.isin(idx, self.domain)

    def tabulated(self, inputs) -> "FunctionSpec":
        """Same function with the callback replaced by a lookup table on ``inputs``."""
        if self.func is None:
            return self
        inputs = np.asarray(inputs, dtype=np.int64)
        table = dict(zip(inputs.tolist(), self.map_indices(inputs).tolist()))
        return FunctionSpec(self.n_bits, func=table.__getitem__, domain=self.domain, name=self.name)

    @property
    def toffoli_count(self) -> Optional[int]:
        return None if self.circuit is None else toffoli_count(self.circuit)


def check_injective(f: FunctionSpec, sample: Optional[Sequence[int]] = None) -> bool:
    """Spot-check that ``f`` has no collisions on ``sample`` (default: whole domain)."""
    if sample is None:
        sample = f.domain if f.domain is not None else np.arange(1 << f.n_bits)
    images = f.map_indices(np.asarray(sample))
    return len(np.unique(images)) == len(images)


# -- text format -----------------------------------------------------------

_ARITY = {"not": 1, "cnot": 2, "toffoli": 3, "perm1": 3, "perm2": 6}


def parse_circuit(text: str) -> Circuit:
    n_bits = None
    gates = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        tokens = [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]
        if not tokens:
            continue
        op, col = tokens[0][0].lower(), tokens[0][1]
        args = []
        for t, pos in tokens[1:]:
            try:
                args.append(int(t, 10))
            except ValueError:
                raise CircuitSyntaxError(f"expected a decimal integer, got {t!r}", lineno, pos) from None
        if n_bits is None:
            if op != "bits":
                raise CircuitSyntaxError("missing 'bits <n>' header", lineno, col)
            if len(args) != 1 or args[0] < 1:
                raise CircuitSyntaxError("'bits' takes one positive integer", lineno, col)
            n_bits = args[0]
            continue
        if op == "bits":
            raise CircuitSyntaxError("duplicate 'bits' statement", lineno, col)
        if op not in _ARITY:
            raise CircuitSyntaxError(f"unknown statement {op!r}", lineno, col)
        if len(args) != _ARITY[op]:
            raise CircuitSyntaxError(f"'{op}' takes {_ARITY[op]} arguments, got {len(args)}", lineno, col)
        if op == "not":
            g = Not(*args)
        elif op == "cnot":
            g = Cnot(*args)
        elif op == "toffoli":
            g = Toffoli(*args)
        elif op == "perm1":
            g = Perm1(args[0], tuple(args[1:]))
        else:
            g = Perm2(args[0], args[1], tuple(args[2:]))
        try:
            validate_gate(g, n_bits)
        except CircuitError as e:
            raise CircuitSyntaxError(str(e), lineno, col) from None
        gates.append(g)
    if n_bits is None:
        raise CircuitSyntaxError("missing 'bits <n>' header", 1)
    return Circuit(n_bits, tuple(gates))


def render_circuit(c: Circuit) -> str:
    lines = [f"bits {c.n_bits}"]
    for g in c.gates:
        if isinstance(g, Not):
            lines.append(f"not {g.target}")
        elif isinstance(g, Cnot):
            lines.append(f"cnot {g.control} {g.target}")
        elif isinstance(g, Toffoli):
            lines.append(f"toffoli {g.control1} {g.control2} {g.target}")
        elif isinstance(g, Perm1):
            lines.append(f"perm1 {g.target} " + " ".join(map(str, g.table)))
        else:
            lines.append(f"perm2 {g.a} {g.b} " + " ".join(map(str, g.table)))
    return "\n".join(lines) + "\n"


def random_circuit(n_bits: int, n_gates: int, rng: np.random.Generator,
                   allow_toffoli: bool = True) -> Circuit:
    """Random circuit over all gate kinds; used by property tests and the CLI checks."""
    kinds = ["not", "cnot", "perm1", "perm2"]
    if allow_toffoli and n_bits >= 3:
        kinds.append("toffoli")
    gates = []
    for _ in range(n_gates):
        kind = kinds[rng.integers(len(kinds))]
        if kind in ("cnot", "perm2") and n_bits < 2:
            kind = "perm1"
        if kind == "not":
            gates.append(Not(int(rng.integers(n_bits))))
        elif kind == "perm1":
            gates.append(Perm1(int(rng.integers(n_bits)), tuple(int(v) for v in rng.permutation(2))))
        elif kind == "cnot":
            a, b = rng.choice(n_bits, 2, replace=False)
            gates.append(Cnot(int(a), int(b)))
        elif kind == "perm2":
            a, b = rng.choice(n_bits, 2, replace=False)
            gates.append(Perm2(int(a), int(b), tuple(int(v) for v in rng.permutation(4))))
        else:
            a, b, t = rng.choice(n_bits, 3, replace=False)
            gates.append(Toffoli(int(a), int(b), int(t)))
    return Circuit(n_bits, tuple(gates))

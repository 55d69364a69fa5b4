"""Shannon-compressor case study.

The compressor maps a typical string (exactly ``k = n p`` ones) to the binary
lexicographic rank of that string among all weight-``k`` strings, written in
the first ``m = ceil(log2 C(n,k))`` bits, followed by ``n - m`` zeros.  The
Dicke test state goes in; the output entanglement is the number of redundant
(all-zero) pairs, to leading order ``n (1 - H(p))``.

E_out modes: ``approx`` is ``n (1 - H(p))``; ``binomial`` is
``n - log2 C(n,k)``; ``exact`` simulates the compressor on the Dicke state
(``n <= 24``) and so also counts the entanglement of the partially filled
rank register.
"""
from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb, log2
from typing import Iterable, Sequence

import numpy as np

from .circuit import FunctionSpec
from .entanglement import Ebits, dicke_entanglement, entanglement
from .logical import apply_circuit, dicke_state, int_to_bits, weight_k_indices

EXACT_MAX_N = 24
CSV_HEADER = ["n", "k", "e_in", "e_out", "bound", "e_out_mode"]


class ShannonError(ValueError):
    pass


def binary_entropy(p: float) -> float:
    if p in (0, 1):
        return 0.0
    return -p * log2(p) - (1 - p) * log2(1 - p)


def typical_weight(n: int, p) -> int:
    """``n * p`` as an exact integer, or an error.  Float ``p`` is read via its
    decimal repr (0.8 means 4/5); pass a Fraction for values like 1/3."""
    k = n * (p if isinstance(p, Fraction) else Fraction(str(p)))
    if k.denominator != 1:
        raise ShannonError(f"n*p = {n}*{p} is not an integer")
    return int(k)


@dataclass(frozen=True)
class TypicalSource:
    p: float
    n: int

    def __post_init__(self):
        if not 0 < self.p < 1:
            raise ShannonError(f"p must lie in (0, 1), got {self.p}")
        if self.n < 1:
            raise ShannonError("n must be positive")
        typical_weight(self.n, self.p)

    @property
    def k(self) -> int:
        return typical_weight(self.n, self.p)

    @property
    def h(self) -> float:
        return binary_entropy(self.p)


def _weight(x: str) -> int:
    return x.count("1")


def typical_rank(x: str, k: int) -> int:
    """Lexicographic rank of ``x`` among the length-``len(x)`` strings of weight ``k``."""
    if any(ch not in "01" for ch in x) or _weight(x) != k:
        raise ShannonError(f"{x!r} is not a weight-{k} bit string")
    n = len(x)
    rank, ones = 0, k
    for i, ch in enumerate(x):
        if ch == "1":
            # every string sharing this prefix but with a 0 here ranks lower
            rank += comb(n - i - 1, ones)
            ones -= 1
    return rank


def typical_unrank(rank: int, n: int, k: int) -> str:
    if not 0 <= rank < comb(n, k):
        raise ShannonError(f"rank {rank} out of range for C({n},{k})")
    out, ones = [], k
    for i in range(n):
        zeros_below = comb(n - i - 1, ones)
        if rank >= zeros_below:
            out.append("1")
            rank -= zeros_below
            ones -= 1
        else:
            out.append("0")
    return "".join(out)


def compressed_width(n: int, k: int) -> int:
    return (comb(n, k) - 1).bit_length()


def compressor(n: int, k: int) -> FunctionSpec:
    if not 0 < k < n:
        raise ShannonError(f"degenerate compressor weight k={k} for n={n}")
    m = compressed_width(n, k)

    def f(v: int) -> int:
        return typical_rank(int_to_bits(v, n), k) << (n - m)

    domain = weight_k_indices(n, k) if n <= 62 else None
    return FunctionSpec(n, func=f, domain=domain, name=f"shannon:{n},{k}")


def e_out_shannon(src: TypicalSource, mode: str = "approx") -> Ebits:
    if mode == "approx":
        return src.n * (1 - src.h)
    if mode == "binomial":
        return src.n - log2(comb(src.n, src.k))
    if mode == "exact":
        if src.n > EXACT_MAX_N:
            raise ShannonError(f"exact E_out needs n <= {EXACT_MAX_N}")
        if src.k in (0, src.n):
            return float(src.n)
        out = apply_circuit(dicke_state(src.n, src.k), compressor(src.n, src.k))
        return entanglement(out)
    raise ShannonError(f"unknown e_out mode {mode!r}")


@dataclass(frozen=True)
class CurveRow:
    n: int
    k: int
    e_in: Ebits
    e_out: Ebits
    bound: float
    e_out_mode: str


def curve_row(p: float, n: int, mode: str = "approx") -> CurveRow:
    src = TypicalSource(p, n)
    e_in = dicke_entanglement(n, src.k)
    e_out = e_out_shannon(src, mode)
    return CurveRow(n, src.k, e_in, e_out, (e_in - e_out) / 2, mode)


def shannon_curve(p: float, n_list: Iterable[int], e_out_mode: str = "approx",
                  workers: int = 1) -> list[CurveRow]:
    ns = sorted(n_list)
    for n in ns:  # validate everything before any heavy work
        TypicalSource(p, n)
    if workers > 1 and len(ns) > 1:
        with ProcessPoolExecutor(workers) as ex:
            rows = list(ex.map(curve_row, [p] * len(ns), ns, [e_out_mode] * len(ns)))
    else:
        rows = [curve_row(p, n, e_out_mode) for n in ns]
    return rows


def fit_bound_slope(rows: Sequence[CurveRow]) -> float:
    """Slope ``a`` of the least-squares fit ``bound ~ a n + b log2 n + c``."""
    if len(rows) < 10:
        raise ShannonError("slope fit needs at least 10 rows")
    n = np.array([r.n for r in rows], dtype=float)
    y = np.array([r.bound for r in rows], dtype=float)
    design = np.column_stack([n, np.log2(n), np.ones_like(n)])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    return float(coef[0])


def rows_to_csv(rows: Sequence[CurveRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow([r.n, r.k, f"{r.e_in:.12g}", f"{r.e_out:.12g}", f"{r.bound:.12g}", r.e_out_mode])
    return buf.getvalue()

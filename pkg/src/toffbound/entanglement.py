"""Entanglement across the A|B cut of an encoded logical state.

Writing a logical state ``sum_x c_x |x>_L`` in the constituent basis gives
``sum_z chat_z |z>_A |z>_B`` with ``chat`` the orthonormal Walsh-Hadamard
transform of ``c``.  The Schmidt spectrum is therefore ``|chat_z|**2``; the
identity is checked against a literal constituent-space SVD
(:func:`schmidt_spectrum_bruteforce`) in the test suite.

For Dicke states the transform is constant on Hamming-weight classes and
equals a binary Krawtchouk polynomial, which gives an exact O(n) big-integer
route to the entropy at string lengths far beyond any dense vector.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import comb

import mpmath
import numpy as np
import scipy.sparse as sp

from .logical import LogicalState

Ebits = float

SPECTRUM_TOL = 1e-10
BRUTEFORCE_MAX_N = 12
SPARSE_MAX_SUPPORT = 16
SPARSE_MAX_RANK = 20
# Bits of mantissa for the big-integer log-domain entropy sums.
ENTROPY_PREC = 96


class EntanglementError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SchmidtSpectrum:
    """Squared Schmidt coefficients, descending, zeros kept up to the cut dimension."""

    probs: np.ndarray

    def __post_init__(self):
        p = np.sort(np.clip(np.asarray(self.probs, dtype=float), 0.0, None))[::-1].copy()
        if abs(p.sum() - 1.0) > SPECTRUM_TOL:
            raise EntanglementError(f"spectrum sums to {p.sum()!r}, not 1")
        if p.size and p[0] > 1.0 + SPECTRUM_TOL:
            raise EntanglementError("spectrum entry exceeds 1")
        p.setflags(write=False)
        object.__setattr__(self, "probs", p)

    def __len__(self):
        return len(self.probs)

    def max_deviation(self, other: "SchmidtSpectrum") -> float:
        """Largest entrywise gap between the two sorted multisets (zero padded)."""
        m = max(len(self), len(other))
        a = np.pad(self.probs, (0, m - len(self)))
        b = np.pad(other.probs, (0, m - len(other)))
        return float(np.max(np.abs(a - b))) if m else 0.0


def walsh_hadamard(v) -> np.ndarray:
    """Orthonormal Walsh-Hadamard transform, ``out[z] = 2**(-n/2) sum_x (-1)**(x.z) v[x]``."""
    v = np.array(v, dtype=complex)
    size = v.shape[0]
    if v.ndim != 1 or size < 1 or size & (size - 1):
        raise EntanglementError(f"length {size} is not a power of two")
    h = 1
    while h < size:
        w = v.reshape(-1, 2, h)
        a = w[:, 0, :].copy()
        w[:, 0, :] += w[:, 1, :]
        w[:, 1, :] = a - w[:, 1, :]
        h *= 2
    return v / np.sqrt(size)


def schmidt_spectrum(s: LogicalState) -> SchmidtSpectrum:
    chat = walsh_hadamard(s.dense())
    return SchmidtSpectrum(np.abs(chat) ** 2)


# Coefficient matrix (rows: A constituent, cols: B constituent) of one pair
# carrying logical 0 / 1.
_PAIR = (np.diag([1.0, 1.0]) / np.sqrt(2), np.diag([1.0, -1.0]) / np.sqrt(2))


def _constituent_matrix_dense(s: LogicalState) -> np.ndarray:
    # Expand every logical axis into its (A, B) pair: 2 -> 2x2.
    n = s.n
    enc = np.stack([p.reshape(4) for p in _PAIR], axis=1)  # (4, 2): AB index <- logical bit
    t = s.dense().reshape((2,) * n)
    for axis in range(n):
        t = np.moveaxis(np.tensordot(enc, t, axes=([1], [axis])), 0, axis)
    # t has axes (A1B1, A2B2, ...) each of size 4, i.e. A1,B1,A2,B2,... when split.
    t = t.reshape((2,) * (2 * n))
    order = list(range(0, 2 * n, 2)) + list(range(1, 2 * n, 2))
    return t.transpose(order).reshape(1 << n, 1 << n)


def _constituent_matrix_sparse(c: np.ndarray) -> sp.csr_matrix:
    if c.shape[0] == 1:
        return sp.csr_matrix(c.reshape(1, 1))
    half = c.shape[0] // 2
    blocks = []
    for bit in (0, 1):
        sub = c[bit * half:(bit + 1) * half]
        if np.any(sub):
            blocks.append(sp.kron(sp.csr_matrix(_PAIR[bit]), _constituent_matrix_sparse(sub), format="csr"))
    if not blocks:
        return sp.csr_matrix((2 * half, 2 * half), dtype=complex)
    return sum(blocks[1:], blocks[0]).tocsr()


def schmidt_spectrum_bruteforce(s: LogicalState) -> SchmidtSpectrum:
    """Spectrum by literally encoding every logical qubit as a constituent pair
    and taking singular values of the A-by-B coefficient matrix."""
    if s.n > BRUTEFORCE_MAX_N:
        raise EntanglementError(f"brute-force spectrum limited to n <= {BRUTEFORCE_MAX_N}")
    if s.n <= 7:
        m = _constituent_matrix_dense(s)
        sv = np.linalg.svd(m, compute_uv=False)
        return SchmidtSpectrum(sv ** 2)
    m = _constituent_matrix_sparse(s.dense())
    m.eliminate_zeros()
    coo = m.tocoo()
    rows_ok = np.bincount(coo.row, minlength=m.shape[0]).max(initial=0) <= 1
    cols_ok = np.bincount(coo.col, minlength=m.shape[1]).max(initial=0) <= 1
    if rows_ok and cols_ok:
        # At most one entry per row and column: singular values are the moduli.
        sv2 = np.zeros(m.shape[0])
        sv2[: coo.nnz] = np.abs(coo.data) ** 2
        return SchmidtSpectrum(sv2)
    sv = np.linalg.svd(m.toarray(), compute_uv=False)
    return SchmidtSpectrum(sv ** 2)


def entropy(spec: SchmidtSpectrum) -> Ebits:
    """Entropy in ebits, ``-sum p log2 p`` with ``0 log 0 = 0``."""
    p = spec.probs[spec.probs > 0]
    return max(0.0, float(-np.sum(p * np.log2(p))))


def _gf2_coordinates(support) -> tuple[int, list[int]]:
    """Rank of the support over GF(2) and, per element, its coordinate mask in
    an echelon basis of the span."""
    basis: dict[int, tuple[int, int]] = {}  # leading bit -> (vector, mask)
    coords = []
    for x in support:
        v, mask = int(x), 0
        for lead in sorted(basis, reverse=True):
            if (v >> lead) & 1:
                bv, bm = basis[lead]
                v ^= bv
                mask ^= bm
        if v:
            bit = 1 << len(basis)
            basis[v.bit_length() - 1] = (v, bit)
            mask ^= bit
        coords.append(mask)
    return len(basis), coords


def sparse_entanglement(support, coeffs, n: int) -> Ebits:
    """Entanglement of ``sum_i coeffs[i] |support[i]>`` without a dense transform.

    The transform at ``z`` only depends on the parities ``x.z`` for ``x`` in the
    support, i.e. on ``z`` through a rank-``r`` linear map onto GF(2)^r, each
    image point having ``2**(n-r)`` preimages.  Hence the entropy is the entropy
    of an ``r``-dimensional transform plus ``n - r``.
    """
    coeffs = np.asarray(coeffs, dtype=complex)
    coeffs = coeffs / np.linalg.norm(coeffs)
    r, coords = _gf2_coordinates(support)
    if r > SPARSE_MAX_RANK:
        raise EntanglementError(f"support rank {r} too large for the sparse route")
    u = np.arange(1 << r)
    masks = np.asarray(coords, dtype=np.int64)[:, None] & u[None, :]
    parity = np.zeros(masks.shape, dtype=np.int64)
    for b in range(r):
        parity ^= (masks >> b) & 1
    amp = coeffs @ (1 - 2 * parity)
    q = np.abs(amp) ** 2 / (1 << r)
    q = q[q > 0]
    return max(0.0, float(-np.sum(q * np.log2(q))) + (n - r))


def entanglement(s: LogicalState) -> Ebits:
    """Entanglement entropy of ``s``; sparse route for small supports, else the WHT."""
    supp = s.support()
    if len(supp) <= SPARSE_MAX_SUPPORT or not s.is_dense:
        return sparse_entanglement(supp, [s.amplitude(int(v)) for v in supp], s.n)
    return entropy(schmidt_spectrum(s))


# -- Krawtchouk route ------------------------------------------------------

def _check_nkj(n: int, k: int, j: int = 0) -> None:
    if n < 0 or not 0 <= k <= n or not 0 <= j <= n:
        raise EntanglementError(f"need 0 <= j,k <= n, got n={n}, k={k}, j={j}")


def krawtchouk(n: int, k: int, j: int) -> int:
    """Binary Krawtchouk polynomial ``K_k(j; n) = sum_i (-1)**i C(j,i) C(n-j,k-i)``."""
    _check_nkj(n, k, j)
    return sum((-1) ** i * comb(j, i) * comb(n - j, k - i) for i in range(min(j, k) + 1))


def krawtchouk_row(n: int, k: int) -> list[int]:
    """``[K_k(j; n) for j in 0..n]`` via the exact three-term recurrence in ``j``:
    ``(n-j) K(j+1) = (n-2k) K(j) - j K(j-1)``."""
    _check_nkj(n, k)
    row = [comb(n, k)]
    if n == 0:
        return row
    row.append((n - 2 * k) * row[0] // n)
    for j in range(1, n):
        num = (n - 2 * k) * row[j] - j * row[j - 1]
        q, r = divmod(num, n - j)
        if r:
            raise ArithmeticError("Krawtchouk recurrence lost exactness")  # pragma: no cover
        row.append(q)
    return row


def dicke_entanglement(n: int, k: int) -> Ebits:
    """Entanglement of the weight-``k`` Dicke state on ``n`` logical qubits.

    Weight class ``j`` contributes ``C(n,j)`` Schmidt values equal to
    ``K_k(j;n)**2 / (2**n C(n,k))``; all logs are taken of exact integers.
    """
    _check_nkj(n, k)
    row = krawtchouk_row(n, k)
    with mpmath.workprec(ENTROPY_PREC):
        log_den = n + mpmath.log(mpmath.mpf(comb(n, k)), 2)
        total = mpmath.mpf(0)
        for j, kv in enumerate(row):
            if kv == 0:
                continue
            log_p = 2 * mpmath.log(mpmath.mpf(abs(kv)), 2) - log_den
            if log_p == 0:
                continue
            log_mult = mpmath.log(mpmath.mpf(comb(n, j)), 2)
            total -= mpmath.power(2, log_mult + log_p) * log_p
        return max(0.0, float(total))

"""Small dense Hermitian kernel: partial trace, partial transpose, eigensolver.

Matrices are plain complex ``numpy`` arrays over the computational basis of
``k`` qubits.  Qubit 0 is the most significant bit of the basis index, so the
basis string ``|b0 b1 ... b(k-1)>`` sits at index ``sum(b_i * 2**(k-1-i))``.
This is the ordering ``ndarray.reshape((2,) * k)`` produces.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from qsep.spectra import Spectrum

__all__ = [
    "PartitionSpec",
    "check_hermitian",
    "n_qubits_of",
    "partial_trace",
    "partial_transpose",
    "eigh",
    "eigvalsh",
]

HERMITIAN_TOL = 1e-9
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100
MAX_QUBITS = 12


@dataclass(frozen=True)
class PartitionSpec:
    """A subset of qubit indices of an ``n_qubits`` register."""

    n_qubits: int
    subset: tuple[int, ...]

    def __post_init__(self):
        if self.n_qubits < 1:
            raise ValueError(f"n_qubits must be positive, got {self.n_qubits}")
        subset = tuple(sorted(set(int(i) for i in self.subset)))
        if len(subset) != len(self.subset):
            raise ValueError(f"duplicate qubit indices in {self.subset}")
        for i in subset:
            if not 0 <= i < self.n_qubits:
                raise ValueError(f"qubit index {i} outside [0, {self.n_qubits})")
        object.__setattr__(self, "subset", subset)

    @property
    def complement(self) -> tuple[int, ...]:
        return tuple(i for i in range(self.n_qubits) if i not in self.subset)

    @property
    def is_proper(self) -> bool:
        return 0 < len(self.subset) < self.n_qubits


def n_qubits_of(m: np.ndarray) -> int:
    dim = m.shape[0]
    if m.ndim != 2 or m.shape[1] != dim:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    k = dim.bit_length() - 1
    if dim < 1 or 1 << k != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    if k > MAX_QUBITS:
        raise ValueError(f"{k} qubits exceeds the supported maximum of {MAX_QUBITS}")
    return k


def check_hermitian(m: np.ndarray, tol: float = HERMITIAN_TOL) -> None:
    """Raise ``ValueError`` if ``m`` differs from its conjugate transpose by more than ``tol``."""
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    asym = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
    if asym > tol:
        raise ValueError(f"matrix is not Hermitian (max asymmetry {asym:.3g})")


def _check_partition(m: np.ndarray, part: PartitionSpec) -> int:
    k = n_qubits_of(m)
    if k != part.n_qubits:
        raise ValueError(
            f"matrix acts on {k} qubits but the partition is over {part.n_qubits}"
        )
    return k


def partial_trace(rho: np.ndarray, part: PartitionSpec) -> np.ndarray:
    """Trace out the qubits in ``part.subset``; the remaining qubits keep their order."""
    rho = np.asarray(rho)
    k = _check_partition(rho, part)
    if not part.is_proper:
        raise ValueError("partial trace needs a non-empty, proper subset of qubits")
    keep = part.complement
    t = rho.reshape((2,) * (2 * k))
    # Trace pairs from the highest index down so earlier axis numbers stay valid.
    n_left = k
    for i in sorted(part.subset, reverse=True):
        t = np.trace(t, axis1=i, axis2=i + n_left)
        n_left -= 1
    d = 1 << len(keep)
    return t.reshape(d, d)


def partial_transpose(rho: np.ndarray, part: PartitionSpec) -> np.ndarray:
    """Transpose the ket/bra indices of every qubit in ``part.subset``.

    This is a pure index permutation, so applying it twice gives back the input
    bit for bit.
    """
    rho = np.asarray(rho)
    k = _check_partition(rho, part)
    t = rho.reshape((2,) * (2 * k))
    axes = list(range(2 * k))
    for i in part.subset:
        axes[i], axes[i + k] = axes[i + k], axes[i]
    return t.transpose(axes).reshape(rho.shape).copy()


def _round_robin(d: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Pairings for one cyclic sweep; every index pair meets exactly once."""
    players = list(range(d)) + ([-1] if d % 2 else [])
    m = len(players)
    rounds = []
    for _ in range(m - 1):
        pairs = [(players[i], players[m - 1 - i]) for i in range(m // 2)]
        pairs = [(p, q) for p, q in pairs if p >= 0 and q >= 0]
        p = np.array([min(a, b) for a, b in pairs], dtype=np.intp)
        q = np.array([max(a, b) for a, b in pairs], dtype=np.intp)
        rounds.append((p, q))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _jacobi_block(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Cyclic complex Jacobi on one dense Hermitian block.

    Each round of a sweep applies a set of disjoint two-index rotations at
    once, which keeps the inner loop inside numpy.
    """
    d = a.shape[0]
    a = a.astype(complex, copy=True)
    v = np.eye(d, dtype=complex)
    if d == 1:
        return a.real.diagonal().copy(), v
    scale = np.linalg.norm(a)
    if scale == 0.0:
        return np.zeros(d), v
    rounds = _round_robin(d)
    offdiag = ~np.eye(d, dtype=bool)
    for _ in range(JACOBI_MAX_SWEEPS):
        off = np.linalg.norm(a[offdiag])
        if off <= JACOBI_TOL * scale:
            break
        for p, q in rounds:
            apq = a[p, q]
            r = np.abs(apq)
            active = r > 1e-300
            r_safe = np.where(active, r, 1.0)
            phase = np.where(active, apq / r_safe, 1.0)
            theta = (a[q, q].real - a[p, p].real) / (2.0 * r_safe)
            with np.errstate(over="ignore"):
                t = np.copysign(1.0, theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            c = np.where(active, 1.0 / np.sqrt(1.0 + t * t), 1.0)
            s = np.where(active, t * c, 0.0)
            se = s * phase
            sec = s * phase.conjugate()

            col_p, col_q = a[:, p].copy(), a[:, q].copy()
            a[:, p] = c * col_p - sec * col_q
            a[:, q] = se * col_p + c * col_q
            row_p, row_q = a[p, :].copy(), a[q, :].copy()
            a[p, :] = c[:, None] * row_p - se[:, None] * row_q
            a[q, :] = sec[:, None] * row_p + c[:, None] * row_q
            vp, vq = v[:, p].copy(), v[:, q].copy()
            v[:, p] = c * vp - sec * vq
            v[:, q] = se * vp + c * vq
    else:
        raise RuntimeError(f"Jacobi did not converge in {JACOBI_MAX_SWEEPS} sweeps")
    return a.real.diagonal().copy(), v


def eigh(m: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Full eigen-decomposition of a Hermitian matrix.

    The sparsity pattern is split into connected components first; the family
    states decompose into blocks of fixed excitation number, so each Jacobi
    run stays small even on 8-qubit registers.

    Returns eigenvalues in non-increasing order and the matching unitary whose
    columns are eigenvectors.
    """
    m = np.asarray(m)
    check_hermitian(m)
    d = m.shape[0]
    if d == 0:
        return np.zeros(0), np.zeros((0, 0), dtype=complex)
    pattern = csr_matrix(m != 0)
    n_comp, labels = connected_components(pattern, directed=False)
    values = np.empty(d)
    vectors = np.zeros((d, d), dtype=complex)
    start = 0
    for comp in range(n_comp):
        idx = np.flatnonzero(labels == comp)
        w, u = _jacobi_block(m[np.ix_(idx, idx)])
        cols = slice(start, start + len(idx))
        values[cols] = w
        vectors[idx, cols] = u
        start += len(idx)
    order = np.argsort(-values, kind="stable")
    return values[order], vectors[:, order]


def eigvalsh(m: np.ndarray, merge_tol: float = 1e-9) -> Spectrum:
    """Eigenvalues of a Hermitian matrix as a :class:`Spectrum` with merged multiplicities."""
    values, _ = eigh(m)
    return Spectrum.from_values(values, merge_tol=merge_tol)

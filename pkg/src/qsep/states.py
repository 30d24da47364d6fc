"""Computational-basis constructions of the symmetric state families.

Spin up is basis value 0 and spin down is 1, so a basis string with ``k``
down spins is an index with ``k`` set bits.  These dense matrices are the
brute-force side that the closed-form spectra are checked against.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import comb

import numpy as np

from qsep.hermit import PartitionSpec, partial_trace

__all__ = [
    "FamilySpec",
    "KINDS",
    "dicke_vector",
    "ghz_vector",
    "bell_vector",
    "sym_projector",
    "family_density",
]

KINDS = ("W", "GHZ", "Werner2")


@dataclass(frozen=True)
class FamilySpec:
    """One member of a one-parameter family.

    ``traced`` counts the qubits removed by partial trace, ``x`` is the weight
    of the entangled component.
    """

    kind: str
    n_qubits: int
    traced: int = 0
    x: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        N, n = self.n_qubits, self.traced
        if N < 2:
            raise ValueError(f"need at least 2 qubits, got {N}")
        if self.kind == "W" and not 0 <= n <= N - 2:
            raise ValueError(f"W family: traced must lie in [0, {N - 2}], got {n}")
        if self.kind == "GHZ" and n not in (0, 1):
            raise ValueError(f"GHZ family: traced must be 0 or 1, got {n}")
        if self.kind == "Werner2" and (N != 2 or n != 0):
            raise ValueError("Werner2 is a two-qubit family with nothing traced")
        if not 0.0 <= self.x <= 1.0:
            raise ValueError(f"x must lie in [0, 1], got {self.x}")

    @property
    def kept(self) -> int:
        return self.n_qubits - self.traced

    def at(self, x: float) -> "FamilySpec":
        return replace(self, x=x)

    def label(self) -> str:
        if self.kind == "Werner2":
            return "Werner2"
        return f"{self.kind}(N={self.n_qubits},n={self.traced})"


def _popcounts(N: int) -> np.ndarray:
    idx = np.arange(1 << N)
    return np.array([bin(i).count("1") for i in idx])


def dicke_vector(N: int, k_down: int) -> np.ndarray:
    """Symmetric state with ``k_down`` down spins, i.e. ``|N/2, N/2 - k_down>``."""
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    if not 0 <= k_down <= N:
        raise ValueError(f"k_down must lie in [0, {N}], got {k_down}")
    v = np.zeros(1 << N, dtype=complex)
    v[_popcounts(N) == k_down] = 1.0 / np.sqrt(comb(N, k_down))
    return v


def ghz_vector(N: int) -> np.ndarray:
    if N < 2:
        raise ValueError(f"GHZ needs N >= 2, got {N}")
    v = np.zeros(1 << N, dtype=complex)
    v[0] = v[-1] = 1.0 / np.sqrt(2.0)
    return v


def bell_vector() -> np.ndarray:
    """``(|up up> + |down down>)/sqrt(2)``, the Werner-state Bell component."""
    return ghz_vector(2)


def sym_projector(N: int) -> np.ndarray:
    """Projector onto the ``N + 1`` dimensional permutation-symmetric subspace."""
    if N < 1:
        raise ValueError(f"N must be positive, got {N}")
    weights = _popcounts(N)
    p = np.zeros((1 << N, 1 << N), dtype=complex)
    for k in range(N + 1):
        idx = np.flatnonzero(weights == k)
        p[np.ix_(idx, idx)] = 1.0 / comb(N, k)
    return p


def family_density(spec: FamilySpec) -> np.ndarray:
    """Dense density matrix of ``spec``; traced qubits are removed from the end."""
    N, x = spec.n_qubits, spec.x
    if spec.kind == "Werner2":
        b = bell_vector()
        return x * np.outer(b, b.conj()) + (1 - x) * np.eye(4) / 4
    pure = dicke_vector(N, 1) if spec.kind == "W" else ghz_vector(N)
    rho = (1 - x) / (N + 1) * sym_projector(N) + x * np.outer(pure, pure.conj())
    for k in range(N, N - spec.traced, -1):
        rho = partial_trace(rho, PartitionSpec(k, (k - 1,)))
    return rho

"""Closed-form spectra of the W, GHZ and Werner families and their reductions.

Levels are evaluated in exact rational arithmetic (``fractions.Fraction`` of
the binary value of ``x``), so coincident levels merge exactly before being
rounded to floats once.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "Spectrum",
    "w_spectrum",
    "ghz_joint_spectrum",
    "ghz_marginal_spectrum",
    "werner_spectrum",
    "family_spectra",
    "spectrum_to_json",
    "spectrum_from_json",
    "spectrum_to_csv",
    "spectrum_from_csv",
]

MERGE_TOL = 1e-9
SUM_TOL = 1e-9


@dataclass(frozen=True)
class Spectrum:
    """Eigenvalues as ``(value, multiplicity)`` pairs, values non-increasing."""

    levels: tuple[tuple[float, int], ...]

    def __post_init__(self):
        levels = tuple((float(v), int(m)) for v, m in self.levels)
        for _, m in levels:
            if m < 1:
                raise ValueError(f"multiplicities must be positive, got {m}")
        values = [v for v, _ in levels]
        if any(a < b for a, b in zip(values, values[1:])):
            raise ValueError("spectrum levels must be in non-increasing order")
        object.__setattr__(self, "levels", levels)

    @classmethod
    def from_values(cls, values: Iterable[float], merge_tol: float = MERGE_TOL) -> "Spectrum":
        """Sort descending and merge runs of values closer than ``merge_tol``."""
        vals = sorted((float(v) for v in values), reverse=True)
        clusters: list[list[float]] = []
        for v in vals:
            if clusters and clusters[-1][0] - v <= merge_tol:
                clusters[-1].append(v)
            else:
                clusters.append([v])
        return cls(tuple((float(np.mean(c)), len(c)) for c in clusters))

    @classmethod
    def from_pairs(cls, pairs: Iterable[tuple[float, int]]) -> "Spectrum":
        merged: dict[float, int] = {}
        for v, m in pairs:
            if m:
                merged[float(v)] = merged.get(float(v), 0) + int(m)
        return cls(tuple(sorted(merged.items(), key=lambda vm: -vm[0])))

    @property
    def dim(self) -> int:
        return sum(m for _, m in self.levels)

    @property
    def max(self) -> float:
        return self.levels[0][0]

    @property
    def total(self) -> float:
        return float(sum(v * m for v, m in self.levels))

    def values(self, pad_to: int | None = None) -> np.ndarray:
        """Expanded eigenvalue array, optionally zero-padded to ``pad_to`` entries."""
        out = np.repeat([v for v, _ in self.levels], [m for _, m in self.levels])
        if pad_to is not None:
            if pad_to < len(out):
                raise ValueError(f"cannot pad {len(out)} values down to {pad_to}")
            out = np.concatenate([out, np.zeros(pad_to - len(out))])
            out = np.sort(out)[::-1]
        return out

    def clamped(self, tol: float = MERGE_TOL) -> "Spectrum":
        """Set values within ``tol`` of zero (or negative) to exactly zero."""
        return Spectrum.from_pairs((0.0 if v <= tol else v, m) for v, m in self.levels)

    def tensor(self, other: "Spectrum") -> "Spectrum":
        """Spectrum of the product state: all pairwise products."""
        return Spectrum.from_pairs(
            (a * b, ma * mb) for a, ma in self.levels for b, mb in other.levels
        )

    def check_normalized(self, tol: float = SUM_TOL) -> None:
        if abs(self.total - 1.0) > tol:
            raise ValueError(f"spectrum sums to {self.total!r}, not 1")
        if self.levels and self.levels[-1][0] < -1e-10:
            raise ValueError(f"negative eigenvalue {self.levels[-1][0]!r}")

    def __str__(self) -> str:
        parts = [f"{v:.12g}" + (f" x{m}" if m > 1 else "") for v, m in self.levels]
        return "{" + ", ".join(parts) + "}"


def _exact(x: float) -> Fraction:
    fx = Fraction(x)
    if not 0 <= fx <= 1:
        raise ValueError(f"mixing parameter x must lie in [0, 1], got {x}")
    return fx


def _from_exact(pairs: Sequence[tuple[Fraction, int]]) -> Spectrum:
    merged: dict[Fraction, int] = {}
    for v, m in pairs:
        if m > 0:
            merged[v] = merged.get(v, 0) + m
    return Spectrum(tuple((float(v), m) for v, m in sorted(merged.items(), reverse=True)))


def w_spectrum(N: int, n: int, x: float) -> Spectrum:
    """Spectrum of the W family on ``N`` qubits with ``n`` qubits traced out."""
    if N < 2:
        raise ValueError(f"W family needs N >= 2, got {N}")
    if not 0 <= n <= N - 1:
        raise ValueError(f"traced qubits n must lie in [0, {N - 1}], got {n}")
    fx = _exact(x)
    m = N - n
    base = (1 - fx) / (m + 1)
    return _from_exact([
        (base, m - 1),
        (base + n * fx / N, 1),
        (base + m * fx / N, 1),
    ])


def ghz_joint_spectrum(N: int, x: float) -> Spectrum:
    if N < 2:
        raise ValueError(f"GHZ family needs N >= 2, got {N}")
    fx = _exact(x)
    return _from_exact([((1 - fx) / (N + 1), N), ((1 + N * fx) / (N + 1), 1)])


def ghz_marginal_spectrum(N: int, x: float) -> Spectrum:
    """Spectrum of the GHZ family state with one qubit traced out."""
    if N < 2:
        raise ValueError(f"GHZ family needs N >= 2, got {N}")
    fx = _exact(x)
    return _from_exact([((1 - fx) / N, N - 2), ((2 + fx * (N - 2)) / (2 * N), 2)])


def werner_spectrum(x: float) -> Spectrum:
    fx = _exact(x)
    return _from_exact([((1 + 3 * fx) / 4, 1), ((1 - fx) / 4, 3)])


_HALF_HALF = Spectrum(((0.5, 2),))


def family_spectra(spec, marginal_qubits: int | None = None,
                   as_published: bool = False) -> tuple[Spectrum, Spectrum]:
    """Joint and conditioning-marginal spectra feeding the conditional entropy.

    ``marginal_qubits`` is the size of the conditioning subsystem, by default
    one qubit fewer than the joint state.  Only the W family supports smaller
    marginals.  With ``as_published`` the single-qubit marginal of a W state is
    taken as the maximally mixed ``{1/2, 1/2}``, which is what the three-qubit
    ``S(AB|C)`` curve was drawn with; the true marginal is ``{1/2 +- x/6}``.
    """
    kept = spec.n_qubits - spec.traced
    if marginal_qubits is None:
        marginal_qubits = kept - 1
    if not 1 <= marginal_qubits < kept:
        raise ValueError(
            f"marginal must keep between 1 and {kept - 1} qubits, got {marginal_qubits}"
        )
    kind = spec.kind
    if kind == "W":
        joint = w_spectrum(spec.n_qubits, spec.traced, spec.x)
        if as_published and marginal_qubits == 1:
            return joint, _HALF_HALF
        return joint, w_spectrum(spec.n_qubits, spec.n_qubits - marginal_qubits, spec.x)
    if kind == "GHZ":
        if spec.traced == 0:
            if marginal_qubits != kept - 1:
                raise ValueError("GHZ marginals are available for one traced qubit only")
            return (ghz_joint_spectrum(spec.n_qubits, spec.x),
                    ghz_marginal_spectrum(spec.n_qubits, spec.x))
        raise ValueError("no closed form for GHZ reductions by more than one qubit")
    if kind == "Werner2":
        return werner_spectrum(spec.x), _HALF_HALF
    raise ValueError(f"unknown family kind {kind!r}")


def spectrum_to_json(s: Spectrum) -> str:
    return json.dumps([{"value": v, "multiplicity": m} for v, m in s.levels])


def spectrum_from_json(text: str) -> Spectrum:
    return Spectrum(tuple((d["value"], d["multiplicity"]) for d in json.loads(text)))


def spectrum_to_csv(s: Spectrum) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["value", "multiplicity"])
    for v, m in s.levels:
        w.writerow([f"{v:.12g}", m])
    return buf.getvalue()


def spectrum_from_csv(text: str) -> Spectrum:
    rows = list(csv.DictReader(io.StringIO(text)))
    return Spectrum(tuple((float(r["value"]), int(r["multiplicity"])) for r in rows))

"""Separability thresholds in the mixing parameter ``x``.

Three routes are provided:

* the root ``x*(q)`` of the Abe-Rajagopal conditional entropy at fixed ``q``,
* the large-``q`` limit, where only the largest joint and marginal
  eigenvalues matter (closed forms :func:`bound_w`, :func:`bound_ghz` and the
  numeric :func:`asymptotic_threshold`),
* the Peres (PPT) threshold from the brute-force partial transpose.

Every root is found by plain bisection on ``[0, 1]``.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Sequence

import numpy as np

from qsep.entropy import ar_conditional_entropy
from qsep.hermit import PartitionSpec, eigh, partial_transpose
from qsep.spectra import family_spectra
from qsep.states import FamilySpec, family_density

__all__ = [
    "DEFAULT_TOL",
    "NO_ROOT",
    "ThresholdCurve",
    "MonotonicityError",
    "default_q_grid",
    "bisect",
    "conditional_entropy_at",
    "count_sign_changes",
    "solve_x_threshold",
    "threshold_curve",
    "bound_w",
    "bound_ghz",
    "asymptotic_threshold",
    "max_eigenvalue_maps",
    "ppt_min_eigenvalue",
    "ppt_threshold",
    "ppt_threshold_all_cuts",
]

DEFAULT_TOL = 1e-10
NO_ROOT = "no-root"
PRESCAN_POINTS = 101
MONOTONE_SLACK = 1e-9
# A partial-transpose eigenvalue counts as negative only below this value;
# the PT of the symmetric projector has exact zero modes for N >= 3.
PPT_NEG_TOL = 1e-12


class MonotonicityError(RuntimeError):
    """Raised when a threshold curve increases with q."""


def default_q_grid() -> list[float]:
    """60 log-spaced points on [0.2, 1000] plus q = 1 exactly."""
    grid = set(np.logspace(np.log10(0.2), 3.0, 60).tolist())
    grid.add(1.0)
    return sorted(grid)


def bisect(f: Callable[[float], float], lo: float, hi: float, tol: float) -> float:
    """Root of ``f`` on ``[lo, hi]`` with ``f(lo) > 0 >= f(hi)``, to bracket width ``tol``."""
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        val = f(mid)
        if math.isnan(val):
            raise FloatingPointError(f"non-finite function value at x = {mid}")
        if val > 0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def conditional_entropy_at(family: FamilySpec, x: float, q: float,
                           marginal_qubits: int | None = None,
                           as_published: bool = False) -> float:
    joint, marginal = family_spectra(family.at(x), marginal_qubits, as_published)
    return ar_conditional_entropy(joint, marginal, q)


def count_sign_changes(values: Sequence[float]) -> int:
    signs = [math.copysign(1.0, v) for v in values if v != 0.0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def solve_x_threshold(family: FamilySpec, q: float, tol: float = DEFAULT_TOL,
                      marginal_qubits: int | None = None,
                      as_published: bool = False,
                      prescan: bool = True) -> float | str:
    """Mixing parameter where the conditional entropy changes sign.

    Returns :data:`NO_ROOT` when the entropy is still positive at ``x = 1``.
    With ``prescan`` the entropy is sampled at 101 points first and more than
    one sign change is an error, since bisection would silently pick one.
    """
    def f(x: float) -> float:
        val = conditional_entropy_at(family, x, q, marginal_qubits, as_published)
        if math.isnan(val):
            raise FloatingPointError(f"entropy is NaN at x = {x}, q = {q}")
        return val

    f0, f1 = f(0.0), f(1.0)
    if not f0 > 0:
        raise ValueError(f"conditional entropy at x = 0 is {f0}, expected > 0")
    if prescan:
        samples = [f(x) for x in np.linspace(0.0, 1.0, PRESCAN_POINTS)]
        changes = count_sign_changes(samples)
        if changes > 1:
            raise RuntimeError(
                f"{changes} sign changes for {family.label()} at q = {q}; root is not isolated"
            )
    if f1 > 0:
        return NO_ROOT
    if f1 == 0.0:
        # joint and marginal spectra coincide at x = 1 (W with N - n = n + 1);
        # the entropy only touches zero at the endpoint.
        return 1.0
    return bisect(f, 0.0, 1.0, tol)


@dataclass
class ThresholdCurve:
    family: FamilySpec
    samples: list[tuple[float, float | str]]
    tolerance: float
    bracket: tuple[float, float] = (0.0, 1.0)
    mode: str = "default"
    marginal_qubits: int | None = None
    converged: list[bool] = field(default_factory=list)

    def x_values(self) -> np.ndarray:
        """Thresholds as floats, ``nan`` where there is no root."""
        return np.array([np.nan if x == NO_ROOT else x for _, x in self.samples])

    @property
    def tail(self) -> float | str:
        return self.samples[-1][1]

    def to_csv(self) -> str:
        lines = ["q,x_star"]
        for q, x in self.samples:
            lines.append(f"{q:.12g},{x if x == NO_ROOT else format(x, '.12g')}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "family": {
                "kind": self.family.kind,
                "n_qubits": self.family.n_qubits,
                "traced": self.family.traced,
                "marginal_qubits": self.marginal_qubits,
            },
            "tolerance": self.tolerance,
            "bracket": list(self.bracket),
            "mode": self.mode,
            "samples": [{"q": q, "x_star": x} for q, x in self.samples],
        }


def _workers() -> int:
    env = os.environ.get("QSEP_THREADS")
    if env:
        return max(1, int(env))
    return 1


def check_monotone(samples: Sequence[tuple[float, float | str]], slack: float = MONOTONE_SLACK,
                   label: str = "") -> None:
    """Thresholds must not increase with q; a no-root sample counts as x* > 1."""
    prev_q, prev = None, math.inf
    for q, x in samples:
        val = math.inf if x == NO_ROOT else x
        if val > prev + slack and not (math.isinf(val) and math.isinf(prev)):
            raise MonotonicityError(
                f"threshold curve {label} rises from {prev} at q = {prev_q} to {val} at q = {q}"
            )
        prev_q, prev = q, val


def threshold_curve(family: FamilySpec, q_grid: Sequence[float] | None = None,
                    tol: float = DEFAULT_TOL, marginal_qubits: int | None = None,
                    as_published: bool = False) -> ThresholdCurve:
    q_grid = list(default_q_grid() if q_grid is None else q_grid)
    if any(a >= b for a, b in zip(q_grid, q_grid[1:])):
        raise ValueError("q_grid must be strictly increasing")

    def solve(q: float):
        return solve_x_threshold(family, q, tol, marginal_qubits, as_published)

    workers = _workers()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            xs = list(pool.map(solve, q_grid))
    else:
        xs = [solve(q) for q in q_grid]
    samples = list(zip(q_grid, xs))
    check_monotone(samples, label=family.label())
    return ThresholdCurve(
        family=family.at(0.0),
        samples=samples,
        tolerance=tol,
        mode="as-published" if as_published else "default",
        marginal_qubits=marginal_qubits,
        converged=[True] * len(samples),
    )


def bound_w(N: int, n: int) -> Fraction:
    """Large-q threshold ``N / ((N - n)**2 + 2N - n)`` for the W family.

    The formula compares the W level of the joint state with the W level of
    its marginal.  Those are the largest eigenvalues only while
    ``2 * (n + 1) <= N``; past that the all-up level dominates (see
    :func:`max_eigenvalue_maps`).
    """
    if N < 2 or not 0 <= n <= N - 2:
        raise ValueError(f"need N >= 2 and 0 <= n <= N - 2, got N={N}, n={n}")
    return Fraction(N, (N - n) ** 2 + 2 * N - n)


def bound_ghz(N: int) -> Fraction:
    if N < 2:
        raise ValueError(f"need N >= 2, got {N}")
    return Fraction(2, N * N + N + 2)


def asymptotic_threshold(joint_max: Callable[[float], float],
                         marginal_max: Callable[[float], float],
                         tol: float = 1e-13) -> float:
    """Root of ``joint_max(x) - marginal_max(x)`` on ``[0, 1]``."""
    def gap(x: float) -> float:
        return marginal_max(x) - joint_max(x)

    g0, g1 = gap(0.0), gap(1.0)
    if not (g0 > 0 and g1 <= 0):
        raise ValueError(
            f"no sign change on [0, 1]: marginal - joint = {g0} at 0, {g1} at 1"
        )
    return bisect(gap, 0.0, 1.0, tol)


def max_eigenvalue_maps(family: FamilySpec, marginal_qubits: int | None = None,
                        as_published: bool = False) -> tuple[Callable, Callable]:
    """``x -> largest eigenvalue`` for the joint and marginal spectra of ``family``."""
    def joint_max(x: float) -> float:
        return family_spectra(family.at(x), marginal_qubits, as_published)[0].max

    def marginal_max(x: float) -> float:
        return family_spectra(family.at(x), marginal_qubits, as_published)[1].max

    return joint_max, marginal_max


def _default_partition(family: FamilySpec) -> PartitionSpec:
    return PartitionSpec(family.n_qubits, (family.n_qubits - 1,))


def ppt_min_eigenvalue(spec: FamilySpec, part: PartitionSpec | None = None) -> float:
    """Smallest eigenvalue of the partial transpose of the full family state."""
    if spec.traced != 0:
        raise ValueError("PPT comparison is defined on the full state (traced = 0)")
    part = _default_partition(spec) if part is None else part
    if not part.is_proper:
        raise ValueError("partial transpose subset must be a proper, non-empty subset")
    rho_pt = partial_transpose(family_density(spec), part)
    values, _ = eigh(rho_pt)
    return float(values[-1])


def ppt_threshold(family: FamilySpec, part: PartitionSpec | None = None,
                  tol: float = DEFAULT_TOL) -> float:
    """Largest ``x`` with a positive partial transpose across ``part``."""
    part = _default_partition(family) if part is None else part

    def margin(x: float) -> float:
        # > 0 while PPT (zero modes allowed), <= 0 once a negative eigenvalue appears
        return ppt_min_eigenvalue(family.at(x), part) + PPT_NEG_TOL

    if not margin(0.0) > 0:
        raise ValueError(f"{family.label()} is not PPT at x = 0 across {part.subset}")
    if margin(1.0) > 0:
        raise ValueError(f"{family.label()} stays PPT up to x = 1 across {part.subset}")
    return bisect(margin, 0.0, 1.0, tol)


def ppt_threshold_all_cuts(family: FamilySpec, tol: float = DEFAULT_TOL,
                           max_qubits: int = 6) -> tuple[float, PartitionSpec]:
    """Smallest PPT threshold over every bipartition, with the cut attaining it.

    Each cut is visited once through the side that excludes the last qubit;
    transposing the complement gives the same spectrum.
    """
    N = family.n_qubits
    if N > max_qubits:
        raise ValueError(f"all-cuts search is limited to {max_qubits} qubits, got {N}")
    best = None
    for size in range(1, N):
        for subset in combinations(range(N - 1), size):
            part = PartitionSpec(N, subset)
            x = ppt_threshold(family, part, tol)
            if best is None or x < best[0] - tol:
                best = (x, part)
    return best

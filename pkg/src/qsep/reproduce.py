"""Figure data and the headline-number table with expected-vs-computed columns."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from qsep.entropy import ar_conditional_entropy, renyi_conditional_entropy, tsallis_entropy
from qsep.hermit import PartitionSpec, partial_trace, partial_transpose
from qsep.spectra import Spectrum, family_spectra
from qsep.states import FamilySpec, family_density
from qsep.thresholds import (
    NO_ROOT,
    MonotonicityError,
    ThresholdCurve,
    asymptotic_threshold,
    bound_ghz,
    bound_w,
    max_eigenvalue_maps,
    ppt_threshold,
    ppt_threshold_all_cuts,
    solve_x_threshold,
    threshold_curve,
)
from qsep.verify import run_oracle_sweep

FIGURE1_Q = (0.2, 0.5, 0.8, 1.0, 2.0, 5.0, 10.0, 50.0)

W2 = FamilySpec("W", 2)
W3 = FamilySpec("W", 3)
GHZ3 = FamilySpec("GHZ", 3)
GHZ4 = FamilySpec("GHZ", 4)
WERNER = FamilySpec("Werner2", 2)


def figure1_rows(points: int = 101) -> list[tuple[float, float, float]]:
    """``(q, x, S_q)`` for the two-qubit W family over a grid of ``x``."""
    rows = []
    for q in FIGURE1_Q:
        for x in np.linspace(0.0, 1.0, points):
            joint, marginal = family_spectra(W2.at(float(x)))
            rows.append((q, float(x), ar_conditional_entropy(joint, marginal, q)))
    return rows


def figure1_csv(points: int = 101) -> str:
    lines = ["q,x,S"]
    lines += [f"{q:.12g},{x:.12g},{s:.12g}" for q, x, s in figure1_rows(points)]
    return "\n".join(lines) + "\n"


def figure_curve(figure: str) -> ThresholdCurve:
    if figure == "2":
        return threshold_curve(W2)
    if figure == "3a":
        return threshold_curve(W3)
    if figure == "3b":
        return threshold_curve(W3, marginal_qubits=1, as_published=True)
    raise ValueError(f"unknown figure {figure!r}; expected 1, 2, 3a or 3b")


@dataclass
class Row:
    criterion: int
    quantity: str
    expected: float
    computed: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return abs(self.computed - self.expected) <= self.tolerance


def _tail(curve: ThresholdCurve) -> float:
    x = curve.tail
    return math.nan if x == NO_ROOT else x


def headline_rows() -> list[Row]:
    """One row per reproduced number, grouped by acceptance criterion."""
    rows: list[Row] = []
    rows.append(Row(1, "W N=2 threshold at q=1", 0.6593, solve_x_threshold(W2, 1.0), 1e-3))

    rows.append(Row(2, "W N=2 threshold at q=1000", 0.25, solve_x_threshold(W2, 1000.0), 5e-3))
    rows.append(Row(2, "bound_w(2, 0)", 0.25, float(bound_w(2, 0)), 0.0))

    rows.append(Row(3, "W N=3 S(A|BC) curve tail", 0.2, _tail(threshold_curve(W3)), 2e-3))
    rows.append(Row(3, "W N=3 S(AB|C) as-published tail", 1 / 3,
                    _tail(threshold_curve(W3, marginal_qubits=1, as_published=True)), 2e-3))
    rows.append(Row(3, "bound_w(3, 0)", 0.2, float(bound_w(3, 0)), 0.0))
    rows.append(Row(3, "bound_w(3, 1)", 1 / 3, float(bound_w(3, 1)), 0.0))

    rows.append(Row(4, "bound_ghz(3)", 1 / 7, float(bound_ghz(3)), 0.0))
    rows.append(Row(4, "bound_ghz(4)", 1 / 11, float(bound_ghz(4)), 0.0))
    worst = 0.0
    for N in range(2, 11):
        numeric = asymptotic_threshold(*max_eigenvalue_maps(FamilySpec("GHZ", N)))
        worst = max(worst, abs(numeric - float(bound_ghz(N))))
    rows.append(Row(4, "max |asymptotic - bound_ghz|, N<=10", 0.0, worst, 1e-10))

    ppt = {
        "W N=2": ppt_threshold(W2),
        "W N=3": ppt_threshold(W3),
        "GHZ N=3": ppt_threshold(GHZ3),
        "GHZ N=4": ppt_threshold_all_cuts(GHZ4)[0],
    }
    rows.append(Row(5, "PPT threshold W N=2", 0.25, ppt["W N=2"], 1e-6))
    rows.append(Row(5, "PPT threshold W N=3", 0.1547, ppt["W N=3"], 5e-4))
    rows.append(Row(5, "PPT threshold GHZ N=3", 1 / 7, ppt["GHZ N=3"], 1e-4))
    rows.append(Row(5, "PPT threshold GHZ N=4 (min over cuts)", 0.0625, ppt["GHZ N=4"], 5e-4))
    rows.append(Row(5, "bound_w(2, 0) - PPT", 0.0, float(bound_w(2, 0)) - ppt["W N=2"], 1e-6))
    rows.append(Row(5, "bound_ghz(3) - PPT", 0.0, float(bound_ghz(3)) - ppt["GHZ N=3"], 1e-6))
    rows.append(Row(5, "bound_w(3, 0) - PPT", 0.2 - 0.1547, float(bound_w(3, 0)) - ppt["W N=3"],
                    5e-4))
    rows.append(Row(5, "bound_ghz(4) - PPT", 1 / 11 - 0.0625,
                    float(bound_ghz(4)) - ppt["GHZ N=4"], 5e-4))

    rows.append(Row(6, "Werner threshold at q=1", 0.747, solve_x_threshold(WERNER, 1.0), 1e-3))
    rows.append(Row(6, "Werner threshold at q=1000", 1 / 3,
                    solve_x_threshold(WERNER, 1000.0), 5e-3))

    results = run_oracle_sweep(8)
    rows.append(Row(7, f"oracle max spectrum error ({len(results)} cases)", 0.0,
                    max(r.max_error for r in results), 1e-10))

    props = property_checks()
    rows.append(Row(8, "pseudo-additivity max error (100 pairs)", 0.0,
                    props["pseudo_additivity"], 1e-10))
    rows.append(Row(8, "Tsallis/Renyi sign mismatches", 0.0, props["sign_mismatches"], 0.0))
    rows.append(Row(8, "threshold-curve monotonicity violations", 0.0,
                    props["monotonicity_violations"], 0.0))
    rows.append(Row(8, "partial transpose involution max error", 0.0,
                    props["pt_involution"], 0.0))
    rows.append(Row(8, "single-qubit marginal permutation max error", 0.0,
                    props["marginal_permutation"], 1e-12))
    return rows


def random_spectrum(rng: np.random.Generator, max_dim: int = 6) -> Spectrum:
    p = rng.dirichlet(np.ones(int(rng.integers(1, max_dim + 1))))
    return Spectrum.from_values(p, merge_tol=0.0)


def property_families(max_qubits: int = 5) -> list[FamilySpec]:
    fams = [WERNER]
    for N in range(2, max_qubits + 1):
        fams += [FamilySpec("W", N, n) for n in range(N - 1)]
        fams.append(FamilySpec("GHZ", N))
    return fams


def property_checks(seed: int = 20240611) -> dict[str, float]:
    """Numerical summaries of the invariant suites, each ideally zero."""
    rng = np.random.default_rng(seed)
    worst_pa = 0.0
    for _ in range(100):
        s, t = random_spectrum(rng), random_spectrum(rng)
        q = float(rng.uniform(0.2, 5.0))
        a, b = tsallis_entropy(s, q), tsallis_entropy(t, q)
        worst_pa = max(worst_pa, abs(tsallis_entropy(s.tensor(t), q)
                                     - (a + b + (1 - q) * a * b)))

    q_grid = [0.2, 0.5, 0.9, 1.0, 1.5, 2.0, 5.0, 20.0, 100.0, 1000.0]
    x_grid = np.linspace(0.0, 1.0, 21)
    mismatches = 0
    violations = 0
    for fam in property_families():
        for q in q_grid:
            for x in x_grid:
                joint, marginal = family_spectra(fam.at(float(x)))
                ar = ar_conditional_entropy(joint, marginal, q)
                re = renyi_conditional_entropy(joint, marginal, q)
                if (ar >= 0) != (re >= 0):
                    mismatches += 1
        try:
            threshold_curve(fam, q_grid, tol=1e-10)
        except MonotonicityError:
            violations += 1

    worst_pt = 0.0
    worst_perm = 0.0
    for fam in property_families(6):
        if fam.traced or fam.kind == "Werner2":
            continue
        rho = family_density(fam.at(0.37))
        N = fam.n_qubits
        for i in range(N):
            part = PartitionSpec(N, (i,))
            twice = partial_transpose(partial_transpose(rho, part), part)
            worst_pt = max(worst_pt, float(np.max(np.abs(twice - rho))))
        ref = partial_trace(rho, PartitionSpec(N, (0,)))
        for i in range(1, N):
            other = partial_trace(rho, PartitionSpec(N, (i,)))
            worst_perm = max(worst_perm, float(np.max(np.abs(other - ref))))
    return {
        "pseudo_additivity": worst_pa,
        "sign_mismatches": float(mismatches),
        "monotonicity_violations": float(violations),
        "pt_involution": worst_pt,
        "marginal_permutation": worst_perm,
    }


def headline_csv(rows: list[Row]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["criterion", "quantity", "expected", "computed", "tolerance", "status"])
    for r in rows:
        w.writerow([r.criterion, r.quantity, f"{r.expected:.12g}", f"{r.computed:.12g}",
                    f"{r.tolerance:.3g}", "pass" if r.passed else "FAIL"])
    return buf.getvalue()

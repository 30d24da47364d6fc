import json
import math
from fractions import Fraction

import numpy as np
import pytest

from qsep.hermit import PartitionSpec
from qsep.states import FamilySpec
from qsep.thresholds import (
    NO_ROOT,
    MonotonicityError,
    ThresholdCurve,
    asymptotic_threshold,
    bisect,
    bound_ghz,
    bound_w,
    check_monotone,
    conditional_entropy_at,
    count_sign_changes,
    default_q_grid,
    max_eigenvalue_maps,
    ppt_min_eigenvalue,
    ppt_threshold,
    ppt_threshold_all_cuts,
    solve_x_threshold,
    threshold_curve,
)

W2 = FamilySpec("W", 2)
W3 = FamilySpec("W", 3)
GHZ3 = FamilySpec("GHZ", 3)
GHZ4 = FamilySpec("GHZ", 4)
COARSE_Q = [0.2, 0.5, 1.0, 2.0, 5.0, 20.0, 100.0, 1000.0]


def w_level_maps(N, n):
    """The W-level eigenvalues the closed-form bound compares, whether or not they are maximal."""
    m = N - n

    def joint(x):
        return (1 - x) / (m + 1) + m * x / N

    def marginal(x):
        return (1 - x) / m + (m - 1) * x / N

    return joint, marginal


def test_default_q_grid():
    grid = default_q_grid()
    assert len(grid) == 61
    assert 1.0 in grid
    assert grid[0] == pytest.approx(0.2) and grid[-1] == pytest.approx(1000.0)
    assert all(a < b for a, b in zip(grid, grid[1:]))


def test_bisect_basic():
    assert bisect(lambda x: 0.3 - x, 0.0, 1.0, 1e-12) == pytest.approx(0.3, abs=1e-12)
    with pytest.raises(ValueError):
        bisect(lambda x: x, 0.0, 1.0, 0.0)


def test_count_sign_changes():
    assert count_sign_changes([1, 0.5, 0.0, -1]) == 1
    assert count_sign_changes([1, -1, 1]) == 2
    assert count_sign_changes([1, 2]) == 0


def test_w2_q1_threshold():
    assert solve_x_threshold(W2, 1.0) == pytest.approx(0.6593, abs=1e-3)


def test_w2_q2_threshold_analytic():
    assert solve_x_threshold(W2, 2.0) == pytest.approx(0.5, abs=1e-9)


def test_w2_large_q_threshold():
    assert solve_x_threshold(W2, 200.0) == pytest.approx(0.25, abs=5e-3)


def test_threshold_residual():
    for fam, q in [(W2, 3.0), (W3, 0.5), (GHZ4, 7.0), (FamilySpec("W", 6, 1), 2.0)]:
        x = solve_x_threshold(fam, q, tol=1e-10)
        assert abs(conditional_entropy_at(fam, x, q)) < 1e-8


def test_no_root_when_positive_at_x1():
    # with 2(n + 1) > N the all-up level dominates and the entropy stays positive
    assert solve_x_threshold(FamilySpec("W", 4, 2), 50.0) == NO_ROOT


def test_root_at_endpoint_when_spectra_coincide():
    # N - n = n + 1: joint and marginal spectra are equal at x = 1
    fam = FamilySpec("W", 5, 2)
    assert conditional_entropy_at(fam, 1.0, 3.0) == 0.0
    assert solve_x_threshold(fam, 3.0) == 1.0


def test_curve_tails():
    assert threshold_curve(W3).tail == pytest.approx(0.2, abs=2e-3)
    assert threshold_curve(GHZ3).tail == pytest.approx(1 / 7, abs=2e-3)
    published = threshold_curve(W3, marginal_qubits=1, as_published=True)
    assert published.tail == pytest.approx(1 / 3, abs=2e-3)
    assert published.mode == "as-published"


def test_corrected_single_qubit_curve_tends_to_3_7():
    curve = threshold_curve(W3, COARSE_Q, marginal_qubits=1)
    assert curve.tail == pytest.approx(3 / 7, abs=2e-3)


@pytest.mark.parametrize("fam", [
    W2, W3, GHZ3, GHZ4, FamilySpec("Werner2", 2),
    *[FamilySpec("W", N, n) for N in range(4, 9) for n in range(N - 1)],
    *[FamilySpec("GHZ", N) for N in range(5, 9)],
], ids=lambda f: f.label())
def test_curves_monotone_in_q(fam):
    curve = threshold_curve(fam, COARSE_Q)
    xs = [math.inf if x == NO_ROOT else x for _, x in curve.samples]
    assert all(b <= a + 1e-9 for a, b in zip(xs, xs[1:]))


def test_check_monotone_raises():
    with pytest.raises(MonotonicityError):
        check_monotone([(1.0, 0.3), (2.0, 0.31)])
    check_monotone([(1.0, NO_ROOT), (2.0, NO_ROOT), (3.0, 0.5), (4.0, 0.5 + 1e-10)])
    with pytest.raises(MonotonicityError):
        check_monotone([(1.0, 0.5), (2.0, NO_ROOT)])


def test_curve_rejects_unsorted_grid():
    with pytest.raises(ValueError):
        threshold_curve(W2, [2.0, 1.0])


def test_curve_serialization():
    curve = threshold_curve(W2, [1.0, 2.0])
    text = curve.to_csv()
    lines = text.splitlines()
    assert lines[0] == "q,x_star"
    q, x = lines[2].split(",")
    assert q == "2" and float(x) == pytest.approx(0.5, abs=1e-9)
    d = curve.to_dict()
    json.dumps(d)
    assert d["mode"] == "default" and d["tolerance"] == 1e-10
    assert d["family"]["kind"] == "W"
    no_root = ThresholdCurve(W2, [(1.0, NO_ROOT)], 1e-10)
    assert no_root.to_csv().splitlines()[1] == "1,no-root"
    assert math.isnan(no_root.x_values()[0])


def test_curve_parallel_matches_serial(monkeypatch):
    serial = threshold_curve(GHZ4, COARSE_Q)
    monkeypatch.setenv("QSEP_THREADS", "4")
    parallel = threshold_curve(GHZ4, COARSE_Q)
    assert parallel.samples == serial.samples


def test_bound_w_values():
    assert bound_w(2, 0) == Fraction(1, 4)
    assert bound_w(3, 0) == Fraction(1, 5)
    assert bound_w(3, 1) == Fraction(1, 3)
    with pytest.raises(ValueError):
        bound_w(3, 2)


def test_bound_ghz_values():
    assert bound_ghz(3) == Fraction(1, 7)
    assert bound_ghz(4) == Fraction(1, 11)
    assert float(bound_ghz(4)) == pytest.approx(0.0909, abs=1e-4)
    assert bound_ghz(2) == Fraction(1, 4)
    with pytest.raises(ValueError):
        bound_ghz(1)


@pytest.mark.parametrize("N", range(2, 11))
def test_asymptotic_matches_bound_w(N):
    for n in range(N - 1):
        # the closed form is the crossing of the W levels for every n
        x = asymptotic_threshold(*w_level_maps(N, n))
        assert x == pytest.approx(float(bound_w(N, n)), abs=1e-10)
        if 2 * (n + 1) <= N:
            # there the W levels are the largest eigenvalues
            x = asymptotic_threshold(*max_eigenvalue_maps(FamilySpec("W", N, n)))
            assert x == pytest.approx(float(bound_w(N, n)), abs=1e-10)
        elif N - n == n + 1:
            # the maxima only meet at the endpoint
            x = asymptotic_threshold(*max_eigenvalue_maps(FamilySpec("W", N, n)))
            assert x == pytest.approx(1.0, abs=1e-10)
        else:
            with pytest.raises(ValueError):
                asymptotic_threshold(*max_eigenvalue_maps(FamilySpec("W", N, n)))


@pytest.mark.parametrize("N", range(2, 11))
def test_asymptotic_matches_bound_ghz(N):
    x = asymptotic_threshold(*max_eigenvalue_maps(FamilySpec("GHZ", N)))
    assert x == pytest.approx(float(bound_ghz(N)), abs=1e-10)


def test_asymptotic_corrected_single_qubit_marginal():
    x = asymptotic_threshold(*max_eigenvalue_maps(W3, marginal_qubits=1))
    assert x == pytest.approx(3 / 7, abs=1e-10)
    x = asymptotic_threshold(*max_eigenvalue_maps(W3, marginal_qubits=1, as_published=True))
    assert x == pytest.approx(1 / 3, abs=1e-10)


def test_asymptotic_requires_sign_change():
    with pytest.raises(ValueError):
        asymptotic_threshold(lambda x: 1.0, lambda x: 0.5)


@pytest.mark.parametrize("N,n", [(4, 0), (5, 1), (6, 2), (8, 0), (8, 3)])
def test_large_q_solve_near_closed_form(N, n):
    x = solve_x_threshold(FamilySpec("W", N, n), 1000.0)
    assert x == pytest.approx(float(bound_w(N, n)), abs=5e-3)


@pytest.mark.parametrize("N", range(2, 9))
def test_large_q_solve_near_ghz_bound(N):
    x = solve_x_threshold(FamilySpec("GHZ", N), 1000.0)
    assert x == pytest.approx(float(bound_ghz(N)), abs=5e-3)


@pytest.mark.parametrize("x", [0.0, 0.1, 0.25, 0.5, 0.9])
def test_ppt_min_eigenvalue_w2(x):
    # PT mixes |00> and |11> into the block [[a, b/2], [b/2, a]] with
    # a = (1 - x)/3 and b = (1 + 2x)/3, so the minimum is a - b/2
    assert ppt_min_eigenvalue(W2.at(x)) == pytest.approx((1 - 4 * x) / 6, abs=1e-14)


def test_ppt_diagonal_point():
    assert ppt_min_eigenvalue(FamilySpec("GHZ", 3, 0, 0.0)) >= -1e-14


def test_ppt_requires_full_state():
    with pytest.raises(ValueError):
        ppt_min_eigenvalue(FamilySpec("W", 3, 1, 0.2))


def test_ppt_thresholds():
    assert ppt_threshold(W2) == pytest.approx(0.25, abs=1e-6)
    assert ppt_threshold(W3) == pytest.approx(0.1547, abs=5e-4)
    assert ppt_threshold(GHZ3) == pytest.approx(1 / 7, abs=1e-4)


def test_ppt_w3_closed_form_guess():
    assert ppt_threshold(W3) == pytest.approx(1 / (3 + 2 * math.sqrt(3)), abs=1e-8)


def test_ppt_ghz4_cuts():
    # a single-qubit cut stops at 1/11; the 2|2 cut detects entanglement from 1/16
    assert ppt_threshold(GHZ4) == pytest.approx(1 / 11, abs=1e-8)
    assert ppt_threshold(GHZ4, PartitionSpec(4, (0, 1))) == pytest.approx(0.0625, abs=1e-8)
    x, part = ppt_threshold_all_cuts(GHZ4)
    assert x == pytest.approx(0.0625, abs=5e-4)
    assert len(part.subset) == 2


@pytest.mark.parametrize("fam", [W3, GHZ4, FamilySpec("W", 4)], ids=lambda f: f.label())
def test_ppt_single_qubit_cuts_agree(fam):
    N = fam.n_qubits
    xs = [ppt_threshold(fam, PartitionSpec(N, (i,))) for i in range(N)]
    assert max(xs) - min(xs) < 1e-9


@pytest.mark.parametrize("fam", [W2, W3, GHZ3, GHZ4, FamilySpec("W", 4), FamilySpec("GHZ", 5)],
                         ids=lambda f: f.label())
def test_ppt_below_entropic_thresholds(fam):
    ppt = ppt_threshold(fam)
    for q in COARSE_Q:
        assert ppt <= solve_x_threshold(fam, q) + 1e-6


def test_ppt_rejects_no_sign_change():
    with pytest.raises(ValueError):
        ppt_threshold(W2, PartitionSpec(2, (0, 1)))


def test_x0_precondition_enforced(monkeypatch):
    import qsep.thresholds as th
    monkeypatch.setattr(th, "conditional_entropy_at", lambda *a, **k: -1.0)
    with pytest.raises(ValueError):
        th.solve_x_threshold(W2, 2.0)


def test_prescan_rejects_multiple_roots(monkeypatch):
    import qsep.thresholds as th
    monkeypatch.setattr(th, "conditional_entropy_at",
                        lambda fam, x, q, *a: np.cos(3 * np.pi * x) + 0.5)
    with pytest.raises(RuntimeError):
        th.solve_x_threshold(W2, 2.0)

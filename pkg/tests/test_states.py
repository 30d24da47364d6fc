from itertools import combinations

import numpy as np
import pytest

from qsep.hermit import PartitionSpec, check_hermitian, eigvalsh, partial_trace
from qsep.states import (
    FamilySpec,
    dicke_vector,
    family_density,
    ghz_vector,
    sym_projector,
)


def swap_matrix(N, i, j):
    d = 1 << N
    perm = np.empty(d, dtype=int)
    for b in range(d):
        bi = (b >> (N - 1 - i)) & 1
        bj = (b >> (N - 1 - j)) & 1
        c = b
        if bi != bj:
            c ^= (1 << (N - 1 - i)) | (1 << (N - 1 - j))
        perm[b] = c
    return np.eye(d)[perm]


def test_dicke_two_qubits():
    np.testing.assert_allclose(dicke_vector(2, 1), [0, 1 / np.sqrt(2), 1 / np.sqrt(2), 0])


@pytest.mark.parametrize("N", [1, 3, 6])
def test_dicke_top_is_all_up(N):
    v = dicke_vector(N, 0)
    assert v[0] == 1 and np.count_nonzero(v) == 1


def test_dicke_three_qubit_w():
    v = dicke_vector(3, 1)
    np.testing.assert_allclose(v[[0b100, 0b010, 0b001]], 1 / np.sqrt(3))
    assert np.count_nonzero(v) == 3


@pytest.mark.parametrize("N", range(1, 7))
def test_dicke_orthonormal(N):
    basis = np.array([dicke_vector(N, k) for k in range(N + 1)])
    np.testing.assert_allclose(basis @ basis.conj().T, np.eye(N + 1), atol=1e-14)


def test_dicke_out_of_range():
    with pytest.raises(ValueError):
        dicke_vector(3, 4)
    with pytest.raises(ValueError):
        dicke_vector(3, -1)


def test_ghz_vectors():
    np.testing.assert_allclose(ghz_vector(2), [1 / np.sqrt(2), 0, 0, 1 / np.sqrt(2)])
    for N in range(2, 11):
        assert abs(np.linalg.norm(ghz_vector(N)) - 1) < 1e-12
        assert abs(np.vdot(ghz_vector(N), dicke_vector(N, 0)) - 1 / np.sqrt(2)) < 1e-12
    with pytest.raises(ValueError):
        ghz_vector(1)


@pytest.mark.parametrize("N", range(1, 9))
def test_sym_projector(N):
    p = sym_projector(N)
    assert abs(np.trace(p) - (N + 1)) < 1e-12
    assert np.max(np.abs(p @ p - p)) < 1e-12


@pytest.mark.parametrize("N", range(2, 9))
def test_sym_projector_reduction(N):
    reduced = partial_trace(sym_projector(N), PartitionSpec(N, (N - 1,)))
    np.testing.assert_allclose(reduced, (N + 1) / N * sym_projector(N - 1), rtol=0, atol=1e-12)


@pytest.mark.parametrize("spec", [
    FamilySpec("W", 2, 0, 0.0),
    FamilySpec("W", 3, 0, 0.35),
    FamilySpec("W", 5, 2, 0.7),
    FamilySpec("GHZ", 4, 0, 0.2),
    FamilySpec("GHZ", 4, 1, 1.0),
    FamilySpec("Werner2", 2, 0, 0.5),
])
def test_family_density_is_a_state(spec):
    rho = family_density(spec)
    assert rho.shape == (2**spec.kept,) * 2
    check_hermitian(rho, 1e-12)
    assert abs(np.trace(rho) - 1) < 1e-12
    assert np.linalg.eigvalsh(rho).min() > -1e-10


@pytest.mark.parametrize("x", [0.0, 0.3, 1.0])
def test_w2_family_spectrum(x):
    values = eigvalsh(family_density(FamilySpec("W", 2, 0, x))).values()
    expected = sorted([(1 - x) / 3, (1 - x) / 3, (1 + 2 * x) / 3, 0.0], reverse=True)
    np.testing.assert_allclose(values, expected, atol=1e-12)


@pytest.mark.parametrize("N", [2, 3, 5])
def test_ghz_family_x0_is_normalized_projector(N):
    rho = family_density(FamilySpec("GHZ", N, 0, 0.0))
    np.testing.assert_allclose(rho, sym_projector(N) / (N + 1), atol=1e-15)


def test_werner_pure_endpoint():
    s = eigvalsh(family_density(FamilySpec("Werner2", 2, 0, 1.0))).clamped()
    assert [m for _, m in s.levels] == [1, 3]
    assert s.max == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("spec", [
    FamilySpec("W", 3, 0, 0.4),
    FamilySpec("W", 5, 1, 0.6),
    FamilySpec("GHZ", 4, 0, 0.7),
    FamilySpec("GHZ", 5, 1, 0.3),
])
def test_family_commutes_with_swaps(spec):
    rho = family_density(spec)
    k = spec.kept
    for i, j in combinations(range(k), 2):
        s = swap_matrix(k, i, j)
        assert np.max(np.abs(s @ rho - rho @ s)) < 1e-12


@pytest.mark.parametrize("kwargs", [
    dict(kind="X", n_qubits=2),
    dict(kind="W", n_qubits=1),
    dict(kind="W", n_qubits=3, traced=2),
    dict(kind="GHZ", n_qubits=4, traced=2),
    dict(kind="Werner2", n_qubits=3),
    dict(kind="W", n_qubits=3, x=1.5),
])
def test_family_spec_validation(kwargs):
    with pytest.raises(ValueError):
        FamilySpec(**kwargs)

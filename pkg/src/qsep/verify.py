"""Brute-force cross-check of every closed-form spectrum.

Each case builds the dense state, reduces it by partial trace, diagonalises it
with the Jacobi kernel and compares the sorted eigenvalues with the zero-padded
closed form.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from qsep.hermit import PartitionSpec, eigvalsh, n_qubits_of, partial_trace
from qsep.spectra import (
    Spectrum,
    ghz_joint_spectrum,
    ghz_marginal_spectrum,
    w_spectrum,
    werner_spectrum,
)
from qsep.states import FamilySpec, family_density

VERIFY_TOL = 1e-10


@dataclass(frozen=True)
class OracleCase:
    spec: FamilySpec
    closed_form: Callable[[], Spectrum]
    name: str
    extra_trace: int = 0


@dataclass(frozen=True)
class OracleResult:
    name: str
    spec: FamilySpec
    max_error: float

    @property
    def passed(self) -> bool:
        return self.max_error <= VERIFY_TOL


def x_grid(step: float = 0.05) -> list[float]:
    n = round(1 / step)
    return [round(i * step, 12) for i in range(n + 1)]


def oracle_cases(max_qubits: int = 8, xs: list[float] | None = None) -> Iterator[OracleCase]:
    xs = x_grid() if xs is None else xs
    for x in xs:
        yield OracleCase(FamilySpec("Werner2", 2, 0, x), lambda x=x: werner_spectrum(x),
                         "werner")
    for N in range(2, max_qubits + 1):
        for x in xs:
            for n in range(0, N - 1):
                yield OracleCase(FamilySpec("W", N, n, x),
                                 lambda N=N, n=n, x=x: w_spectrum(N, n, x), "w")
            # single-qubit marginal, one trace beyond the family's own range
            yield OracleCase(FamilySpec("W", N, N - 2, x),
                             lambda N=N, x=x: w_spectrum(N, N - 1, x), "w-single", 1)
            yield OracleCase(FamilySpec("GHZ", N, 0, x),
                             lambda N=N, x=x: ghz_joint_spectrum(N, x), "ghz-joint")
            yield OracleCase(FamilySpec("GHZ", N, 1, x),
                             lambda N=N, x=x: ghz_marginal_spectrum(N, x), "ghz-marginal")


def check_case(case: OracleCase) -> OracleResult:
    rho = family_density(case.spec)
    for _ in range(case.extra_trace):
        k = n_qubits_of(rho)
        rho = partial_trace(rho, PartitionSpec(k, (k - 1,)))
    oracle = eigvalsh(rho).values()
    closed = case.closed_form().values(pad_to=len(oracle))
    return OracleResult(case.name, case.spec, float(np.max(np.abs(oracle - closed))))


def run_oracle_sweep(max_qubits: int = 8, xs: list[float] | None = None,
                     workers: int | None = None) -> list[OracleResult]:
    """All cases in deterministic order; ``workers`` defaults to ``QSEP_THREADS`` or 1."""
    cases = list(oracle_cases(max_qubits, xs))
    if workers is None:
        workers = int(os.environ.get("QSEP_THREADS", "1") or 1)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(check_case, cases))
    return [check_case(c) for c in cases]

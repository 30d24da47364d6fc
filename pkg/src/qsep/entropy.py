"""Tsallis, Renyi and von Neumann entropies of spectra, and the
Abe-Rajagopal q-conditional entropy.

All logarithms are natural.  ``q == 1`` is handled by an explicit von Neumann
branch.  Zero eigenvalues contribute nothing for every ``q > 0``.
"""

from __future__ import annotations

import math

import numpy as np

from qsep.spectra import MERGE_TOL, Spectrum

__all__ = [
    "tsallis_entropy",
    "renyi_entropy",
    "von_neumann_entropy",
    "log_power_sum",
    "log_power_sum_ratio",
    "power_sum_ratio",
    "ar_conditional_entropy",
    "renyi_conditional_entropy",
]


def _check_q(q: float) -> float:
    q = float(q)
    if not q > 0 or not math.isfinite(q):
        raise ValueError(f"q must be a positive finite number, got {q}")
    return q


def _support(s: Spectrum, q: float) -> tuple[np.ndarray, np.ndarray]:
    """Strictly positive levels and multiplicities; near-zero levels dropped for q < 1."""
    s.check_normalized()
    cut = MERGE_TOL if q < 1 else 0.0
    vals = np.array([v for v, _ in s.levels])
    mult = np.array([m for _, m in s.levels], dtype=float)
    keep = vals > cut
    return vals[keep], mult[keep]


def log_power_sum(s: Spectrum, q: float) -> float:
    """``log(sum_i m_i p_i**q)`` with the largest level factored out."""
    q = _check_q(q)
    vals, mult = _support(s, q)
    top = vals.max()
    return q * math.log(top) + math.log(float(np.sum(mult * (vals / top) ** q)))


def tsallis_entropy(s: Spectrum, q: float) -> float:
    q = _check_q(q)
    if q == 1.0:
        return von_neumann_entropy(s)
    vals, mult = _support(s, q)
    return float((np.sum(mult * vals**q) - 1.0) / (1.0 - q))


def renyi_entropy(s: Spectrum, q: float) -> float:
    q = _check_q(q)
    if q == 1.0:
        return von_neumann_entropy(s)
    return log_power_sum(s, q) / (1.0 - q)


def von_neumann_entropy(s: Spectrum) -> float:
    vals, mult = _support(s, 1.0)
    return float(-np.sum(mult * vals * np.log(vals)))


def log_power_sum_ratio(joint: Spectrum, marginal: Spectrum, q: float) -> float:
    """``log(Tr joint**q / Tr marginal**q)``, finite for any finite ``q``."""
    return log_power_sum(joint, q) - log_power_sum(marginal, q)


def power_sum_ratio(joint: Spectrum, marginal: Spectrum, q: float) -> float:
    """``Tr joint**q / Tr marginal**q``; overflows to ``inf`` only past float range."""
    lr = log_power_sum_ratio(joint, marginal, q)
    return math.inf if lr > 709.0 else math.exp(lr)


def ar_conditional_entropy(joint: Spectrum, marginal: Spectrum, q: float) -> float:
    """Abe-Rajagopal conditional entropy ``(1 - Tr joint**q / Tr marginal**q)/(q - 1)``.

    A negative value certifies entanglement across the split.  ``q == 1``
    gives the von Neumann difference ``S(joint) - S(marginal)``.
    """
    q = _check_q(q)
    if q == 1.0:
        return von_neumann_entropy(joint) - von_neumann_entropy(marginal)
    lr = log_power_sum_ratio(joint, marginal, q)
    # expm1 keeps full relative precision near the root, where lr ~ 0.
    one_minus_ratio = -math.inf if lr > 709.0 else -math.expm1(lr)
    return one_minus_ratio / (q - 1.0)


def renyi_conditional_entropy(joint: Spectrum, marginal: Spectrum, q: float) -> float:
    return renyi_entropy(joint, q) - renyi_entropy(marginal, q)

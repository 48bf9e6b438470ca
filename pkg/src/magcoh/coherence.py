"""Relative-entropy coherence of Gaussian states.

All formulas here assume the 'unit' normalization (vacuum covariance I,
coherent displacement (2 Re alpha, 2 Im alpha)); to_unit_convention converts
the dynamics output.  In that convention a thermal state gives exactly zero
coherence and a coherent state gives nbar = |alpha|^2, which the test suite
pins.  Coherences are reported in bits (log base 2).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .covariance import CovarianceState

NU_TOL = 1e-9           # physicality slack on symplectic eigenvalues
CLAMP = 1e-12           # negative-coherence round-off window
_MODE_INDEX = {"a": 0, "m": 1, "b": 2}


@dataclass(frozen=True)
class CoherenceReport:
    """Single-mode and total coherences plus the spectra behind them."""

    C_a: float
    C_m: float
    C_b: float
    C_tot: float
    nu: np.ndarray       # full-matrix symplectic spectrum, ascending
    nbar: np.ndarray     # per-mode effective occupations (a, m, b)


def symplectic_form() -> np.ndarray:
    """Block-diagonal 6x6 form with 2x2 blocks ((0, 1), (-1, 0))."""
    Omega = np.zeros((6, 6))
    for k in range(3):
        Omega[2 * k, 2 * k + 1] = 1.0
        Omega[2 * k + 1, 2 * k] = -1.0
    return Omega


def to_unit_convention(state: CovarianceState) -> CovarianceState:
    """Rescale a 'half'-convention state to vacuum-variance-1: V' = 2V, d' = sqrt(2) d."""
    if state.convention != "half":
        raise ValueError(f"expected 'half' convention input, got {state.convention!r}")
    return CovarianceState(
        V=2.0 * np.asarray(state.V, float),
        d=np.sqrt(2.0) * np.asarray(state.d, float),
        convention="unit",
    )


def entropy_F(X: float) -> float:
    """F(X) = ((X+1)/2)log2((X+1)/2) - ((X-1)/2)log2((X-1)/2), continuous at 1."""
    if X < 1.0 - NU_TOL:
        raise ValueError(f"entropy_F domain is X >= 1 (within {NU_TOL:g}), got {X!r}")
    return float(kernels.entropy_f(X))


def mode_block(state: CovarianceState, mode: str) -> tuple[np.ndarray, np.ndarray]:
    """(2x2 covariance block, 2-vector displacement) of one mode, unit convention."""
    if state.convention != "unit":
        raise ValueError("mode_block expects the 'unit' convention")
    try:
        k = _MODE_INDEX[mode]
    except KeyError:
        raise ValueError(f"mode must be one of 'a', 'm', 'b', got {mode!r}") from None
    V = np.asarray(state.V, float)
    d = np.asarray(state.d, float)
    return V[2 * k : 2 * k + 2, 2 * k : 2 * k + 2].copy(), d[2 * k : 2 * k + 2].copy()


def single_mode_coherence(V_mode: np.ndarray, d_mode: np.ndarray) -> float:
    """Coherence of one mode: F(2*nbar + 1) - F(nu), unit convention.

    nu = sqrt(det V_mode), nbar = (tr V_mode + |d_mode|^2 - 2)/4.  Negatives
    within the round-off window are clamped to zero.
    """
    V_mode = np.asarray(V_mode, dtype=float)
    d_mode = np.asarray(d_mode, dtype=float)
    # explicit 2x2 determinant: np.linalg.det's LU pivoting rounds exact cases
    det = V_mode[0, 0] * V_mode[1, 1] - V_mode[0, 1] * V_mode[1, 0]
    nu = np.sqrt(max(det, 0.0))
    if nu < 1.0 - NU_TOL:
        raise ValueError(f"unphysical single-mode block: nu = {nu!r} < 1")
    nbar = (float(np.trace(V_mode)) + float(d_mode @ d_mode) - 2.0) / 4.0
    c = entropy_F(2.0 * nbar + 1.0) - entropy_F(nu)
    if c < 0.0:
        if c < -CLAMP:
            raise ArithmeticError(f"coherence {c!r} below the -{CLAMP:g} clamp window")
        c = 0.0
    return c


def symplectic_spectrum(V_unit: np.ndarray) -> np.ndarray:
    """Three symplectic eigenvalues of a 6x6 unit-convention covariance matrix.

    Computed as the moduli of eig(i Omega V), collapsed from the degenerate
    pairs; a pair mismatch above 1e-9 relative is a numerical error.
    """
    V_unit = np.ascontiguousarray(V_unit, dtype=float)
    moduli = kernels.symplectic_moduli(V_unit)
    nus = np.empty(3)
    for k in range(3):
        lo, hi = moduli[2 * k], moduli[2 * k + 1]
        if hi - lo > 1e-9 * max(hi, 1.0):
            raise ArithmeticError(
                f"symplectic pairing failure: moduli {lo!r} and {hi!r} do not match"
            )
        nus[k] = 0.5 * (lo + hi)
    return nus


def total_coherence(V_unit: np.ndarray, d_unit: np.ndarray) -> float:
    """Total three-mode coherence sum_i [F(2*n_i + 1) - F(nu_i)].

    nu_i is the full-matrix symplectic spectrum; n_i is the per-mode
    occupation computed from mode i's diagonal block and displacement with
    the same formula as the single-mode case, so uncorrelated states add up.
    """
    V_unit = np.asarray(V_unit, dtype=float)
    d_unit = np.asarray(d_unit, dtype=float)
    nus = symplectic_spectrum(V_unit)
    total = 0.0
    for k in range(3):
        blk = V_unit[2 * k : 2 * k + 2, 2 * k : 2 * k + 2]
        d2 = d_unit[2 * k] ** 2 + d_unit[2 * k + 1] ** 2
        nbar = (float(np.trace(blk)) + d2 - 2.0) / 4.0
        total += entropy_F(2.0 * nbar + 1.0) - entropy_F(float(nus[k]))
    if total < 0.0:
        if total < -CLAMP:
            raise ArithmeticError(
                f"total coherence {total!r} below the -{CLAMP:g} clamp window"
            )
        total = 0.0
    return total


def coherence_report(state: CovarianceState) -> CoherenceReport:
    """Assemble the full report from a unit-convention covariance state."""
    if state.convention != "unit":
        raise ValueError("coherence_report expects the 'unit' convention")
    V = np.asarray(state.V, float)
    d = np.asarray(state.d, float)
    per_mode = {}
    nbars = np.empty(3)
    for mode, k in _MODE_INDEX.items():
        blk, dm = mode_block(state, mode)
        per_mode[mode] = single_mode_coherence(blk, dm)
        nbars[k] = (float(np.trace(blk)) + float(dm @ dm) - 2.0) / 4.0
    return CoherenceReport(
        C_a=per_mode["a"],
        C_m=per_mode["m"],
        C_b=per_mode["b"],
        C_tot=total_coherence(V, d),
        nu=symplectic_spectrum(V),
        nbar=nbars,
    )

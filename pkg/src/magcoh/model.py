"""Linearized fluctuation dynamics: drift matrix, diffusion matrix, stability.

Quadratures are ordered (X_a, Y_a, X_m, Y_m, X_b, Y_b) with
X = (o + o^dag)/sqrt(2), Y = (o - o^dag)/(sqrt(2) i).  The drift matrix is
derived from the mean-field flow; a finite-difference Jacobian of that flow
is the ground truth the test suite checks against.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .params import BathOccupations, PhysicalParams
from .steady import SteadyState


@dataclass(frozen=True)
class QuadratureOrdering:
    labels: tuple = ("X_a", "Y_a", "X_m", "Y_m", "X_b", "Y_b")

    def __post_init__(self):
        if tuple(self.labels) != ("X_a", "Y_a", "X_m", "Y_m", "X_b", "Y_b"):
            raise ValueError("quadrature ordering is fixed to (X_a..Y_b)")


DEFAULT_ORDERING = QuadratureOrdering()


@dataclass(frozen=True)
class LinearizedModel:
    """Drift A, diffusion D (stored as its diagonal and full matrix),
    the effective couplings and the stability verdict."""

    A: np.ndarray
    D: np.ndarray
    g1: float
    g2: float
    stable: bool
    spectral_abscissa: float
    ordering: QuadratureOrdering = field(default_factory=QuadratureOrdering)


def effective_couplings(g: float, m_s: complex) -> tuple[float, float]:
    """Linearized magnomechanical couplings (g1, g2) = -2g(Re m_s, Im m_s)."""
    return -2.0 * g * m_s.real, -2.0 * g * m_s.imag


def build_drift(params: PhysicalParams, steady: SteadyState) -> np.ndarray:
    """6x6 drift matrix at the given steady state.

    Row structure (d_prime = delta_m_eff + delta_B):

        dX_a: (-kappa_a,  delta_a,   0,        J,        0,       0)
        dY_a: (-delta_a, -kappa_a,  -J,        0,        0,       0)
        dX_m: (0,         J,        -kappa_m,  d_prime, -g2,      0)
        dY_m: (-J,        0,        -d_prime, -kappa_m,  g1,      0)
        dX_b: (0,         0,         0,        0,       -kappa_b, omega_b)
        dY_b: (0,         0,         g1,       g2,      -omega_b, -kappa_b)
    """
    return kernels.drift_matrix(params.to_array(), steady.m_s.real, steady.m_s.imag)


def build_diffusion(
    params: PhysicalParams, occupations: BathOccupations
) -> np.ndarray:
    """Diagonal diffusion matrix diag(kappa_o*(2N_o+1)) per quadrature pair."""
    d = np.array(
        [
            params.kappa_a * (2.0 * occupations.N_a + 1.0),
            params.kappa_a * (2.0 * occupations.N_a + 1.0),
            params.kappa_m * (2.0 * occupations.N_m + 1.0),
            params.kappa_m * (2.0 * occupations.N_m + 1.0),
            params.kappa_b * (2.0 * occupations.N_b + 1.0),
            params.kappa_b * (2.0 * occupations.N_b + 1.0),
        ]
    )
    return np.diag(d)


def stability(A: np.ndarray) -> tuple[bool, float]:
    """(stable, spectral abscissa) via the eigenvalues of A.

    For a 6x6 real matrix this is equivalent to the Routh-Hurwitz test and
    additionally yields a margin.  The threshold is exactly 0; callers apply
    their own epsilon if they need one.
    """
    A = np.asarray(A, dtype=float)
    if A.shape != (6, 6):
        raise ValueError(f"expected a 6x6 matrix, got shape {A.shape}")
    abscissa = float(kernels.spectral_abscissa(A))
    if not np.isfinite(abscissa):
        raise ArithmeticError("eigenvalue computation failed")
    return abscissa < 0.0, abscissa


def linearize(params: PhysicalParams, steady: SteadyState) -> LinearizedModel:
    """Assemble the complete linearized model for one parameter point."""
    from .params import bath_occupations

    A = build_drift(params, steady)
    D = build_diffusion(params, bath_occupations(params))
    g1, g2 = effective_couplings(params.g, steady.m_s)
    stable, abscissa = stability(A)
    return LinearizedModel(
        A=A, D=D, g1=g1, g2=g2, stable=stable, spectral_abscissa=abscissa
    )

"""Steady covariance matrix: Lyapunov solve, ODE verification oracle, displacement.

The production solver vectorizes A V + V A^T = -D to a dense 36x36 system.
The ODE integrator exists purely as an independent check: it evaluates the
classical fixed-step fourth-order Runge-Kutta recurrence for
dV/dt = A V + V A^T + D.  Since each RK4 step is an affine map of vec(V),
the N-step iterate is computed exactly by binary composition of that map,
which keeps the oracle fast even for millions of steps.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .steady import SteadyState

RESIDUAL_TOL = 1e-10


class UnstableSystemError(ValueError):
    """Lyapunov solve requested for a drift matrix that is not stable."""


class ResidualError(ArithmeticError):
    """The solved covariance failed the Lyapunov residual check."""

    def __init__(self, residual: float):
        super().__init__(
            f"Lyapunov residual {residual:.3e} exceeds {RESIDUAL_TOL:.0e}"
        )
        self.residual = residual


@dataclass(frozen=True)
class CovarianceState:
    """Covariance V, displacement d, and the normalization they are stated in.

    'half' is the dynamics convention (vacuum variance 1/2 per quadrature);
    'unit' (vacuum variance 1) is what the coherence formulas consume.
    """

    V: np.ndarray
    d: np.ndarray
    convention: str = "half"

    def __post_init__(self):
        if self.convention not in ("half", "unit"):
            raise ValueError(f"unknown convention {self.convention!r}")
        V = np.asarray(self.V, dtype=float)
        if V.shape != (6, 6):
            raise ValueError(f"V must be 6x6, got {V.shape}")
        scale = np.abs(V).max()
        if scale > 0 and np.abs(V - V.T).max() > 1e-12 * scale:
            raise ValueError("V must be symmetric (within 1e-12 relative)")


def solve_lyapunov(A: np.ndarray, D: np.ndarray) -> np.ndarray:
    """Unique symmetric solution of A V + V A^T = -D for stable A.

    D may be the full diagonal matrix or its 6-vector diagonal.  Raises
    UnstableSystemError when A has a non-negative spectral abscissa and
    ResidualError if the solution fails the residual invariant.
    """
    A = np.asarray(A, dtype=float)
    d_diag = np.diag(D) if np.ndim(D) == 2 else np.asarray(D, dtype=float)
    abscissa = float(kernels.spectral_abscissa(A))
    if abscissa >= 0.0:
        raise UnstableSystemError(
            f"drift matrix is unstable (spectral abscissa {abscissa:.6g} >= 0)"
        )
    V = kernels.lyapunov_solve(A, np.ascontiguousarray(d_diag))
    residual = float(kernels.lyapunov_residual(A, V, d_diag))
    if not residual <= RESIDUAL_TOL:
        raise ResidualError(residual)
    return V


def _rk4_affine_map(A: np.ndarray, D: np.ndarray, dt: float):
    """One RK4 step of vec(V) -> M vec(V) + b for dV/dt = A V + V A^T + D."""
    L = np.kron(np.eye(6), A) + np.kron(A, np.eye(6))
    hL = dt * L
    hL2 = hL @ hL
    hL3 = hL2 @ hL
    M = np.eye(36) + hL + hL2 / 2.0 + hL3 / 6.0 + hL3 @ hL / 24.0
    S = dt * (np.eye(36) + hL / 2.0 + hL2 / 6.0 + hL3 / 24.0)
    b = S @ D.flatten(order="F")
    return M, b


def integrate_lyapunov_ode(
    A: np.ndarray, D: np.ndarray, t_end: float, dt: float
) -> np.ndarray:
    """V(t_end) of dV/dt = A V + V A^T + D from the vacuum state V(0) = I/2.

    Classical fixed-step RK4 with ceil(t_end/dt) steps.  The affine step map
    is composed by binary exponentiation, which reproduces the plain loop's
    iterate exactly (in exact arithmetic) in O(log n) matrix products.
    Explicit RK4 is conditionally stable: a dt too large for the spectrum of
    A raises once the map norm blows up.
    """
    if t_end < 0.0 or dt <= 0.0:
        raise ValueError("require t_end >= 0 and dt > 0")
    A = np.asarray(A, dtype=float)
    D = np.diag(np.diag(D)) if np.ndim(D) == 2 else np.diag(np.asarray(D, float))
    v = (0.5 * np.eye(6)).flatten(order="F")
    n = int(math.ceil(t_end / dt - 1e-12))
    if n <= 0:
        return 0.5 * np.eye(6)
    M, b = _rk4_affine_map(A, D, dt)
    blow_up = 1e12 * max(np.linalg.norm(M), 1.0)
    while n:
        if n & 1:
            v = M @ v + b
        n >>= 1
        if n:
            b = M @ b + b
            M = M @ M
            if not np.all(np.isfinite(M)) or np.linalg.norm(M) > blow_up:
                raise ArithmeticError(
                    "RK4 map norm blow-up: dt too large for the spectrum of A"
                )
    if not np.all(np.isfinite(v)):
        raise ArithmeticError(
            "RK4 iterate diverged: dt too large for the spectrum of A"
        )
    V = v.reshape(6, 6, order="F")
    return 0.5 * (V + V.T)


def displacement(steady: SteadyState) -> np.ndarray:
    """Quadrature means (sqrt(2) Re o_s, sqrt(2) Im o_s) per mode, 'half' convention."""
    r2 = math.sqrt(2.0)
    return np.array(
        [
            r2 * steady.a_s.real,
            r2 * steady.a_s.imag,
            r2 * steady.m_s.real,
            r2 * steady.m_s.imag,
            r2 * steady.b_s.real,
            r2 * steady.b_s.imag,
        ]
    )

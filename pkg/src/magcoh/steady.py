"""Classical steady-state amplitudes of the three driven modes.

The default entry point takes the *effective* magnon detuning and evaluates
the closed form directly.  The bare-detuning path iterates the mechanical
frequency pull to a fixed point and exists for completeness; it refuses to
guess a branch when the iteration does not settle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .params import PhysicalParams


class NonConvergenceError(RuntimeError):
    """Fixed-point iteration for the bare detuning failed to settle.

    Carries the iterate history so callers can inspect possible
    multistability.
    """

    def __init__(self, message: str, history):
        super().__init__(message)
        self.history = list(history)


@dataclass(frozen=True)
class SteadyState:
    """Complex mode amplitudes (sqrt-quanta) plus the back-computed bare detuning."""

    a_s: complex
    m_s: complex
    b_s: complex
    delta_m_bare: float


def solve_steady(params: PhysicalParams) -> SteadyState:
    """Closed-form steady state with the effective detuning as input.

    m_s = eps*(i*delta_a + kappa_a) / [J^2 + (i*delta_a + kappa_a)
    (i*(delta_m_eff + delta_B) + kappa_m)], a_s and b_s follow from it.
    No iteration: the effective detuning already contains the static pull.
    """
    q = params.to_array()
    d_prime = params.delta_m_eff + params.delta_B
    chi_a = 1j * params.delta_a + params.kappa_a
    den = params.J**2 + chi_a * (1j * d_prime + params.kappa_m)
    if den == 0.0:
        raise ZeroDivisionError(
            "degenerate steady-state denominator; requires kappa_a = kappa_m = 0"
        )
    amps = kernels.steady_amplitudes(q)
    a_s, m_s, b_s = complex(amps[0]), complex(amps[1]), complex(amps[2])
    delta_m_bare = params.delta_m_eff - params.g * (2.0 * b_s.real)
    return SteadyState(a_s=a_s, m_s=m_s, b_s=b_s, delta_m_bare=delta_m_bare)


def solve_steady_bare(
    params: PhysicalParams,
    delta_m_bare: float,
    damping: float = 0.5,
    max_iter: int = 1000,
) -> SteadyState:
    """Steady state from the bare magnon detuning.

    Damped fixed-point iteration on the effective detuning
    delta_m_eff = delta_m_bare + g*(b_s + b_s*), converged when successive
    iterates differ by < 1e-12*omega_b.  Non-convergence raises with the
    iterate history attached (possible multistability).
    """
    tol = 1e-12 * params.omega_b
    eff = delta_m_bare
    history = [eff]
    for _ in range(max_iter):
        st = solve_steady(params.replace(delta_m_eff=eff))
        target = delta_m_bare + params.g * (2.0 * st.b_s.real)
        new = (1.0 - damping) * eff + damping * target
        history.append(new)
        if abs(new - eff) < tol:
            st = solve_steady(params.replace(delta_m_eff=new))
            return SteadyState(
                a_s=st.a_s, m_s=st.m_s, b_s=st.b_s, delta_m_bare=delta_m_bare
            )
        eff = new
    raise NonConvergenceError(
        f"bare-detuning fixed point did not converge in {max_iter} iterations",
        history,
    )


def simplified_ms(params: PhysicalParams) -> complex:
    """Approximate m_s = i*eps*delta_a / (J^2 - delta_a*(delta_m_eff + delta_B)).

    Valid when both detunings dominate the decay rates (not enforced).
    Diagnostic for the reciprocity point J^2 = delta_a*(delta_m_eff + delta_B),
    where this expression has a pole.
    """
    eps = kernels.drive_amplitude(params.P, params.kappa_m, params.omega_l)
    den = params.J**2 - params.delta_a * (params.delta_m_eff + params.delta_B)
    if den == 0.0:
        raise ZeroDivisionError(
            "simplified m_s pole: J^2 = delta_a*(delta_m_eff + delta_B)"
        )
    return 1j * eps * params.delta_a / den

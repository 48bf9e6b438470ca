"""Numeric kernels shared by the physics modules and the sweep engine.

Every function here operates on plain floats and ndarrays so the whole call
chain can be compiled with numba in nopython mode.  The backend is chosen
once at import time from the ``MAGCOH_NUMBA`` environment variable:

    MAGCOH_NUMBA=0   pure-numpy fallback (same source, no JIT)
    MAGCOH_NUMBA=1   require numba (ImportError if missing)
    unset / auto     numba when importable, numpy otherwise

``BACKEND`` reports which path is active.  Both paths execute identical
statements; results agree to floating round-off (LAPACK call order differs).
"""

import math
import os

import numpy as np

HBAR = 1.054571817e-34
K_B = 1.380649e-23

# column layout of point_eval / sweep_eval output rows
OUT_ABSCISSA = 0
OUT_A_RE, OUT_A_IM = 1, 2
OUT_M_RE, OUT_M_IM = 3, 4
OUT_B_RE, OUT_B_IM = 5, 6
OUT_C_A, OUT_C_M, OUT_C_B, OUT_C_TOT = 7, 8, 9, 10
OUT_NU_1, OUT_NU_2, OUT_NU_3 = 11, 12, 13          # full-matrix spectrum, ascending
OUT_NU_MODE_A, OUT_NU_MODE_M, OUT_NU_MODE_B = 14, 15, 16
OUT_NBAR_A, OUT_NBAR_M, OUT_NBAR_B = 17, 18, 19
OUT_RESIDUAL = 20
N_OUT = 21

# packed parameter vector layout (see params.PhysicalParams.to_array)
P_OMEGA_B, P_OMEGA_A, P_OMEGA_L = 0, 1, 2
P_DELTA_A, P_DELTA_M_EFF, P_DELTA_B = 3, 4, 5
P_KAPPA_A, P_KAPPA_M, P_KAPPA_B = 6, 7, 8
P_J, P_G, P_POWER, P_TEMP = 9, 10, 11, 12
N_PARAMS = 13

_COHERENCE_CLAMP = 1e-12   # negatives within this window are round-off, set to 0


def _resolve_backend():
    flag = os.environ.get("MAGCOH_NUMBA", "auto").strip().lower()
    if flag in ("0", "false", "no", "numpy"):
        return "numpy"
    # must be set before numba first imports: workqueue is always built and
    # skips the noisy TBB-version probe
    os.environ.setdefault("NUMBA_THREADING_LAYER", "workqueue")
    try:
        import numba  # noqa: F401
        return "numba"
    except ImportError:
        if flag in ("1", "true", "yes", "numba"):
            raise
        return "numpy"


BACKEND = _resolve_backend()

if BACKEND == "numba":
    from numba import njit, prange

    def _jit(func):
        return njit(cache=True)(func)

    def _jit_parallel(func):
        return njit(cache=True, parallel=True)(func)
else:
    prange = range

    def _jit(func):
        return func

    def _jit_parallel(func):
        return func


@_jit
def bose_occupation(omega, temperature):
    """Mean thermal quanta 1/(exp(hbar*omega/kB*T) - 1); 0 at T = 0.

    expm1 keeps the evaluation accurate deep in the Rayleigh-Jeans regime
    where hbar*omega/(kB*T) underflows an explicit exp()-1.
    """
    if temperature == 0.0:
        return 0.0
    return 1.0 / math.expm1(HBAR * omega / (K_B * temperature))


@_jit
def drive_amplitude(power, kappa_m, omega_l):
    return math.sqrt(2.0 * kappa_m * power / (HBAR * omega_l))


@_jit
def steady_amplitudes(q):
    """Closed-form steady state (a_s, m_s, b_s) of the driven three-mode system.

    q follows the packed parameter layout; the magnon detuning entry is the
    effective one, so no self-consistency iteration is needed.
    """
    eps = drive_amplitude(q[P_POWER], q[P_KAPPA_M], q[P_OMEGA_L])
    d_prime = q[P_DELTA_M_EFF] + q[P_DELTA_B]
    chi_a = 1j * q[P_DELTA_A] + q[P_KAPPA_A]
    den = q[P_J] * q[P_J] + chi_a * (1j * d_prime + q[P_KAPPA_M])
    out = np.empty(3, dtype=np.complex128)
    m_s = eps * chi_a / den
    a_s = -1j * q[P_J] * m_s / chi_a
    b_s = -1j * q[P_G] * (m_s.real * m_s.real + m_s.imag * m_s.imag) / (
        1j * q[P_OMEGA_B] + q[P_KAPPA_B]
    )
    out[0] = a_s
    out[1] = m_s
    out[2] = b_s
    return out


@_jit
def drift_matrix(q, m_re, m_im):
    """6x6 drift matrix in the (X_a, Y_a, X_m, Y_m, X_b, Y_b) ordering."""
    g1 = -2.0 * q[P_G] * m_re
    g2 = -2.0 * q[P_G] * m_im
    d_prime = q[P_DELTA_M_EFF] + q[P_DELTA_B]
    ka = q[P_KAPPA_A]
    km = q[P_KAPPA_M]
    kb = q[P_KAPPA_B]
    da = q[P_DELTA_A]
    wb = q[P_OMEGA_B]
    J = q[P_J]
    A = np.zeros((6, 6))
    A[0, 0] = -ka
    A[0, 1] = da
    A[0, 3] = J
    A[1, 0] = -da
    A[1, 1] = -ka
    A[1, 2] = -J
    A[2, 1] = J
    A[2, 2] = -km
    A[2, 3] = d_prime
    A[2, 4] = -g2
    A[3, 0] = -J
    A[3, 2] = -d_prime
    A[3, 3] = -km
    A[3, 4] = g1
    A[4, 4] = -kb
    A[4, 5] = wb
    A[5, 2] = g1
    A[5, 3] = g2
    A[5, 4] = -wb
    A[5, 5] = -kb
    return A


@_jit
def diffusion_diagonal(q):
    """Diagonal of the noise matrix, kappa_o*(2*N_o + 1) per quadrature.

    The magnon bath is evaluated at its lab-frame frequency including the
    rotation-induced shift.
    """
    n_a = bose_occupation(q[P_OMEGA_A], q[P_TEMP])
    n_m = bose_occupation(q[P_OMEGA_L] + q[P_DELTA_M_EFF] + q[P_DELTA_B], q[P_TEMP])
    n_b = bose_occupation(q[P_OMEGA_B], q[P_TEMP])
    d = np.empty(6)
    d[0] = d[1] = q[P_KAPPA_A] * (2.0 * n_a + 1.0)
    d[2] = d[3] = q[P_KAPPA_M] * (2.0 * n_m + 1.0)
    d[4] = d[5] = q[P_KAPPA_B] * (2.0 * n_b + 1.0)
    return d


@_jit
def spectral_abscissa(A):
    """Largest eigenvalue real part; negative iff the linear system is stable."""
    ev = np.linalg.eigvals(A.astype(np.complex128))
    worst = -1.0e300
    for k in range(ev.shape[0]):
        if ev[k].real > worst:
            worst = ev[k].real
    return worst


@_jit
def lyapunov_solve(A, d_diag):
    """Symmetric V with A V + V A^T = -diag(d_diag).

    Vectorized to the dense 36x36 Kronecker-sum system (column-major vec)
    and symmetrized after the solve.
    """
    L = np.zeros((36, 36))
    for i in range(6):
        for j in range(6):
            r = 6 * j + i
            for k in range(6):
                L[r, 6 * j + k] += A[i, k]
                L[r, 6 * k + i] += A[j, k]
    rhs = np.zeros(36)
    for i in range(6):
        rhs[6 * i + i] = -d_diag[i]
    v = np.linalg.solve(L, rhs)
    V = np.empty((6, 6))
    for i in range(6):
        for j in range(6):
            V[i, j] = v[6 * j + i]
    for i in range(6):
        for j in range(i + 1, 6):
            s = 0.5 * (V[i, j] + V[j, i])
            V[i, j] = s
            V[j, i] = s
    return V


@_jit
def lyapunov_residual(A, V, d_diag):
    """|A V + V A^T + D|_F / |D|_F."""
    num = 0.0
    den = 0.0
    for i in range(6):
        den += d_diag[i] * d_diag[i]
        for j in range(6):
            r = 0.0
            for k in range(6):
                r += A[i, k] * V[k, j] + V[i, k] * A[j, k]
            if i == j:
                r += d_diag[i]
            num += r * r
    return math.sqrt(num) / math.sqrt(den)


@_jit
def entropy_f(x):
    """F(X) = ((X+1)/2)log2((X+1)/2) - ((X-1)/2)log2((X-1)/2), F(1) = 0.

    Evaluated as hm*log2(1 + 1/hm) + log2(hp) with hm = (X-1)/2, hp = (X+1)/2:
    the naive two-term difference cancels catastrophically for X >~ 1e6.
    """
    if x <= 1.0:
        return 0.0
    hp = 0.5 * (x + 1.0)
    hm = 0.5 * (x - 1.0)
    return hm * math.log1p(1.0 / hm) / math.log(2.0) + np.log2(hp)


@_jit
def symplectic_moduli(V_unit):
    """Sorted |eig(i Omega V)| for the block-diagonal symplectic form."""
    OV = np.zeros((6, 6), dtype=np.complex128)
    for j in range(6):
        for k in range(3):
            OV[2 * k, j] = 1j * V_unit[2 * k + 1, j]
            OV[2 * k + 1, j] = -1j * V_unit[2 * k, j]
    moduli = np.abs(np.linalg.eigvals(OV))
    moduli.sort()
    return moduli


@_jit
def point_eval(q):
    """Full single-point pipeline; the hot kernel behind sweeps.

    Steady state -> drift/diffusion -> stability -> Lyapunov -> coherences.
    Unstable points leave the coherence columns NaN.  Single-mode coherences
    within -1e-12 of zero are clamped to 0; larger negatives pass through for
    the caller to reject.
    """
    out = np.full(N_OUT, np.nan)
    amps = steady_amplitudes(q)
    a_s = amps[0]
    m_s = amps[1]
    b_s = amps[2]
    out[OUT_A_RE] = a_s.real
    out[OUT_A_IM] = a_s.imag
    out[OUT_M_RE] = m_s.real
    out[OUT_M_IM] = m_s.imag
    out[OUT_B_RE] = b_s.real
    out[OUT_B_IM] = b_s.imag
    A = drift_matrix(q, m_s.real, m_s.imag)
    abscissa = spectral_abscissa(A)
    out[OUT_ABSCISSA] = abscissa
    if abscissa >= 0.0:
        return out
    d_diag = diffusion_diagonal(q)
    V = lyapunov_solve(A, d_diag)
    out[OUT_RESIDUAL] = lyapunov_residual(A, V, d_diag)

    # unit convention: V' = 2V, displacement (2 Re o_s, 2 Im o_s) per mode
    Vp = 2.0 * V
    disp = np.empty(6)
    disp[0] = 2.0 * a_s.real
    disp[1] = 2.0 * a_s.imag
    disp[2] = 2.0 * m_s.real
    disp[3] = 2.0 * m_s.imag
    disp[4] = 2.0 * b_s.real
    disp[5] = 2.0 * b_s.imag

    c_tot = 0.0
    moduli = symplectic_moduli(Vp)
    for k in range(3):
        v00 = Vp[2 * k, 2 * k]
        v01 = Vp[2 * k, 2 * k + 1]
        v11 = Vp[2 * k + 1, 2 * k + 1]
        nu_mode = math.sqrt(max(v00 * v11 - v01 * v01, 0.0))
        nbar = 0.25 * (v00 + v11 + disp[2 * k] ** 2 + disp[2 * k + 1] ** 2 - 2.0)
        c = entropy_f(2.0 * nbar + 1.0) - entropy_f(nu_mode)
        if -_COHERENCE_CLAMP <= c < 0.0:
            c = 0.0
        out[OUT_C_A + k] = c
        out[OUT_NU_MODE_A + k] = nu_mode
        out[OUT_NBAR_A + k] = nbar
        nu_full = 0.5 * (moduli[2 * k] + moduli[2 * k + 1])
        out[OUT_NU_1 + k] = nu_full
        c_tot += entropy_f(2.0 * nbar + 1.0) - entropy_f(nu_full)
    if -_COHERENCE_CLAMP <= c_tot < 0.0:
        c_tot = 0.0
    out[OUT_C_TOT] = c_tot
    return out


@_jit_parallel
def sweep_eval(Q):
    """Evaluate point_eval over rows of Q; output row i belongs to input row i."""
    n = Q.shape[0]
    out = np.empty((n, N_OUT))
    for i in prange(n):
        out[i] = point_eval(Q[i])
    return out

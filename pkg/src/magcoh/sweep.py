"""Sweep engine: point/pair evaluation, grids, and the bundled figure presets.

Grid points are independent, so the packed parameter matrix is handed to the
(possibly parallel) kernel in one call; records are then assembled row-major
over (axis1, axis2) regardless of execution schedule.  Unstable points are
data, not errors: sweeps have to chart stability boundaries.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .covariance import RESIDUAL_TOL
from .coherence import NU_TOL
from .params import PARAM_FIELDS, PhysicalParams, baseline_params

#: coherences at or below this are treated as exactly zero when pairing
COHERENCE_FLOOR = 1e-12

AXIS_NAMES = PARAM_FIELDS + ("abs_delta_B",)

FIGURE_IDS = ("fig2", "fig3", "fig4", "fig5", "fig6")


@dataclass(frozen=True)
class PointRecord:
    """One pipeline evaluation: parameter snapshot, stability, amplitudes,
    coherences (absent with a reason when not stable)."""

    params: PhysicalParams
    stable: bool
    a_s: complex
    m_s: complex
    b_s: complex
    spectral_abscissa: float
    C_a: float | None
    C_m: float | None
    C_b: float | None
    C_tot: float | None
    nu: np.ndarray | None = None
    nbar: np.ndarray | None = None
    reason: str | None = None
    grid_i: int = 0
    grid_j: int = 0


@dataclass(frozen=True)
class PairRecord:
    """A +|delta_B| / -|delta_B| evaluation pair with contrast ratios.

    Contrasts are absent unless both sides are stable; two sides that are
    both numerically zero count as trivially reciprocal (I = 0).
    """

    plus: PointRecord
    minus: PointRecord
    I_a: float | None
    I_m: float | None
    I_b: float | None
    I_tot: float | None
    grid_i: int = 0
    grid_j: int = 0


@dataclass(frozen=True)
class SweepAxis:
    name: str
    lo: float
    hi: float
    points: int
    scale: str = "linear"

    def __post_init__(self):
        if self.name not in AXIS_NAMES:
            raise ValueError(f"unknown axis parameter {self.name!r}")
        if self.points < 2:
            raise ValueError("axis needs at least 2 points")
        if not self.lo < self.hi:
            raise ValueError(f"axis requires lo < hi, got [{self.lo}, {self.hi}]")
        if self.scale not in ("linear", "log"):
            raise ValueError(f"scale must be 'linear' or 'log', got {self.scale!r}")
        if self.scale == "log" and self.lo <= 0.0:
            raise ValueError("log axis requires lo > 0")

    def grid(self) -> np.ndarray:
        if self.scale == "log":
            return np.geomspace(self.lo, self.hi, self.points)
        return np.linspace(self.lo, self.hi, self.points)


@dataclass(frozen=True)
class SweepSpec:
    base: PhysicalParams
    axis1: SweepAxis
    axis2: SweepAxis | None = None
    pair_barnett: bool = False
    fmt: str = "csv"
    notes: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.fmt not in ("csv", "jsonl"):
            raise ValueError(f"format must be 'csv' or 'jsonl', got {self.fmt!r}")


def contrast_ratio(C_plus: float, C_minus: float) -> float:
    """Bidirectional contrast |C+ - C-| / (C+ + C-), in [0, 1]."""
    if C_plus < 0.0 or C_minus < 0.0:
        raise ValueError("contrast_ratio requires nonnegative coherences")
    total = C_plus + C_minus
    if total == 0.0:
        raise ValueError("contrast undefined: C_plus + C_minus = 0")
    return abs(C_plus - C_minus) / total


def _record_from_row(params: PhysicalParams, row: np.ndarray, i: int, j: int) -> PointRecord:
    stable = row[kernels.OUT_ABSCISSA] < 0.0
    if stable:
        resid = row[kernels.OUT_RESIDUAL]
        if not resid <= RESIDUAL_TOL:
            raise ArithmeticError(
                f"Lyapunov residual {resid:.3e} at grid ({i}, {j}) exceeds {RESIDUAL_TOL:.0e}"
            )
        nus = row[kernels.OUT_NU_1 : kernels.OUT_NU_3 + 1].copy()
        nu_modes = row[kernels.OUT_NU_MODE_A : kernels.OUT_NU_MODE_B + 1]
        if nus.min() < 1.0 - NU_TOL or nu_modes.min() < 1.0 - NU_TOL:
            raise ArithmeticError(
                f"unphysical symplectic eigenvalue at grid ({i}, {j})"
            )
        cs = row[kernels.OUT_C_A : kernels.OUT_C_TOT + 1]
        if cs.min() < 0.0:
            raise ArithmeticError(
                f"coherence below clamp window at grid ({i}, {j}): {cs.min()!r}"
            )
        return PointRecord(
            params=params,
            stable=True,
            a_s=complex(row[kernels.OUT_A_RE], row[kernels.OUT_A_IM]),
            m_s=complex(row[kernels.OUT_M_RE], row[kernels.OUT_M_IM]),
            b_s=complex(row[kernels.OUT_B_RE], row[kernels.OUT_B_IM]),
            spectral_abscissa=float(row[kernels.OUT_ABSCISSA]),
            C_a=float(row[kernels.OUT_C_A]),
            C_m=float(row[kernels.OUT_C_M]),
            C_b=float(row[kernels.OUT_C_B]),
            C_tot=float(row[kernels.OUT_C_TOT]),
            nu=nus,
            nbar=row[kernels.OUT_NBAR_A : kernels.OUT_NBAR_B + 1].copy(),
            grid_i=i,
            grid_j=j,
        )
    return PointRecord(
        params=params,
        stable=False,
        a_s=complex(row[kernels.OUT_A_RE], row[kernels.OUT_A_IM]),
        m_s=complex(row[kernels.OUT_M_RE], row[kernels.OUT_M_IM]),
        b_s=complex(row[kernels.OUT_B_RE], row[kernels.OUT_B_IM]),
        spectral_abscissa=float(row[kernels.OUT_ABSCISSA]),
        C_a=None,
        C_m=None,
        C_b=None,
        C_tot=None,
        reason="unstable",
        grid_i=i,
        grid_j=j,
    )


def evaluate_point(params: PhysicalParams, grid_i: int = 0, grid_j: int = 0) -> PointRecord:
    """Run the full pipeline (steady state through coherences) at one point."""
    row = kernels.point_eval(params.to_array())
    return _record_from_row(params, np.asarray(row), grid_i, grid_j)


def _pair_contrast(cp: float | None, cm: float | None) -> float | None:
    if cp is None or cm is None:
        return None
    cp = 0.0 if cp <= COHERENCE_FLOOR else cp
    cm = 0.0 if cm <= COHERENCE_FLOOR else cm
    if cp + cm == 0.0:
        # both sides numerically zero: trivially reciprocal
        return 0.0
    return contrast_ratio(cp, cm)


def evaluate_pair(
    params: PhysicalParams,
    deltaB_magnitude: float,
    grid_i: int = 0,
    grid_j: int = 0,
) -> PairRecord:
    """Evaluate with delta_B = +|mag| and -|mag|, all else identical."""
    if deltaB_magnitude < 0.0:
        raise ValueError("deltaB_magnitude must be >= 0")
    plus = evaluate_point(params.replace(delta_B=+deltaB_magnitude), grid_i, grid_j)
    minus = evaluate_point(params.replace(delta_B=-deltaB_magnitude), grid_i, grid_j)
    return PairRecord(
        plus=plus,
        minus=minus,
        I_a=_pair_contrast(plus.C_a, minus.C_a),
        I_m=_pair_contrast(plus.C_m, minus.C_m),
        I_b=_pair_contrast(plus.C_b, minus.C_b),
        I_tot=_pair_contrast(plus.C_tot, minus.C_tot),
        grid_i=grid_i,
        grid_j=grid_j,
    )


def _grid_params(spec: SweepSpec):
    """Yield (i, j, params) row-major over (axis1, axis2)."""
    ax1 = spec.axis1.grid()
    ax2 = spec.axis2.grid() if spec.axis2 is not None else None
    for i, v1 in enumerate(ax1):
        p1 = _apply_axis(spec.base, spec.axis1.name, float(v1))
        if ax2 is None:
            yield i, 0, p1
        else:
            for j, v2 in enumerate(ax2):
                yield i, j, _apply_axis(p1, spec.axis2.name, float(v2))


def _apply_axis(params: PhysicalParams, name: str, value: float) -> PhysicalParams:
    if name == "abs_delta_B":
        return params.replace(delta_B=value)
    return params.replace(**{name: value})


def run_sweep(spec: SweepSpec) -> list:
    """Evaluate the grid; list of PointRecord (or PairRecord when pairing).

    Output order is row-major over (axis1, axis2) with grid indices on every
    record; per-point instability is recorded, never raised.
    """
    cells = list(_grid_params(spec))
    if spec.pair_barnett:
        Q = np.empty((2 * len(cells), kernels.N_PARAMS))
        for k, (_, _, p) in enumerate(cells):
            mag = abs(p.delta_B)
            Q[2 * k] = p.replace(delta_B=+mag).to_array()
            Q[2 * k + 1] = p.replace(delta_B=-mag).to_array()
        rows = np.asarray(kernels.sweep_eval(Q))
        records = []
        for k, (i, j, p) in enumerate(cells):
            mag = abs(p.delta_B)
            plus = _record_from_row(p.replace(delta_B=+mag), rows[2 * k], i, j)
            minus = _record_from_row(p.replace(delta_B=-mag), rows[2 * k + 1], i, j)
            records.append(
                PairRecord(
                    plus=plus,
                    minus=minus,
                    I_a=_pair_contrast(plus.C_a, minus.C_a),
                    I_m=_pair_contrast(plus.C_m, minus.C_m),
                    I_b=_pair_contrast(plus.C_b, minus.C_b),
                    I_tot=_pair_contrast(plus.C_tot, minus.C_tot),
                    grid_i=i,
                    grid_j=j,
                )
            )
        return records
    Q = np.empty((len(cells), kernels.N_PARAMS))
    for k, (_, _, p) in enumerate(cells):
        Q[k] = p.to_array()
    rows = np.asarray(kernels.sweep_eval(Q))
    return [
        _record_from_row(p, rows[k], i, j) for k, (i, j, p) in enumerate(cells)
    ]


def figure_preset(preset_id: str) -> SweepSpec:
    """Bundled sweep presets fig2..fig6 (benchmark parameter sets).

    fig2: coherence vs drive power at delta_B in {-0.1, 0, +0.1}*omega_b.
    fig3: 2D (delta_B, J) map at P = 6e-4 mW, effective detuning 0.3*omega_b.
    fig4: contrast vs J at P = 1e-5 mW, |delta_B| = 0.2*omega_b (paired).
    fig5: coherence vs g at P = 7e-4 mW, J = 0.26*omega_b, delta_B = -0.24*omega_b.
    fig6: 2D (kappa_a, kappa_m) log map at P = 1e-2 mW, J = 0.4*omega_b,
          delta_B = 0.25*omega_b; 1D cuts run through the baseline decay rates.
    """
    base = baseline_params()
    wb = base.omega_b
    if preset_id == "fig2":
        return SweepSpec(
            base=base.replace(delta_m_eff=0.9 * wb),
            axis1=SweepAxis("P", 1e-8, 1e-5, 61, "log"),
            axis2=SweepAxis("delta_B", -0.1 * wb, 0.1 * wb, 3, "linear"),
            notes={
                "delta_B_magnitude": "0.1*omega_b (not pinned by the benchmark set; artifact choice)",
            },
        )
    if preset_id == "fig3":
        return SweepSpec(
            base=base.replace(delta_m_eff=0.3 * wb, P=6e-7),
            axis1=SweepAxis("delta_B", -0.5 * wb, 0.5 * wb, 41, "linear"),
            axis2=SweepAxis("J", 0.0, 0.6 * wb, 31, "linear"),
            notes={"axis_ranges": "color-map ranges are artifact choices"},
        )
    if preset_id == "fig4":
        return SweepSpec(
            base=base.replace(delta_m_eff=0.3 * wb, P=1e-8, delta_B=0.2 * wb),
            axis1=SweepAxis("J", 0.005 * wb, 0.6 * wb, 120, "linear"),
            pair_barnett=True,
        )
    if preset_id == "fig5":
        return SweepSpec(
            base=base.replace(
                delta_m_eff=0.3 * wb, P=7e-7, delta_B=-0.24 * wb, J=0.26 * wb
            ),
            axis1=SweepAxis("g", 0.0, 2.0 * math.pi * 200.0, 201, "linear"),
            notes={
                "g_range": "extended to 200 Hz so the phonon crossover and the "
                "stability boundary are both inside the scan",
            },
        )
    if preset_id == "fig6":
        return SweepSpec(
            base=base.replace(
                delta_m_eff=0.3 * wb, P=1e-5, delta_B=0.25 * wb, J=0.4 * wb
            ),
            axis1=SweepAxis(
                "kappa_a", 2.0 * math.pi * 1e4, 2.0 * math.pi * 10**7.5, 29, "log"
            ),
            axis2=SweepAxis(
                "kappa_m", 2.0 * math.pi * 1e4, 2.0 * math.pi * 10**7.5, 29, "log"
            ),
            notes={
                "cuts": "1D decay-rate scans are the grid row/column through "
                "the baseline kappa/2pi = 1 MHz (grid index 16 on each axis)",
            },
        )
    raise ValueError(f"unknown figure preset {preset_id!r}; known: {FIGURE_IDS}")

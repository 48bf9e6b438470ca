"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the lines.

Three structural criteria are known not to hold at the preset drive powers
(the phonon-coherence crossover window of criterion 7, the kappa_a half of
criterion 8, and the stability asymmetry of criterion 9).  They are asserted
at full strength anyway; on failure each writes a quantitative analysis to
reports/ rather than being loosened.
"""

import math
import time
from pathlib import Path

import numpy as np
import pytest

from oracles import entrywise_close, finite_difference_jacobian, ode_settings

from magcoh import (
    baseline_params,
    bath_occupations,
    build_diffusion,
    build_drift,
    entropy_F,
    evaluate_point,
    figure_preset,
    integrate_lyapunov_ode,
    run_sweep,
    single_mode_coherence,
    solve_lyapunov,
    solve_steady,
    stability,
)
from magcoh.cli import main as cli_main
from magcoh.sweep import _apply_axis

TWO_PI = 2.0 * math.pi
REPORTS_DIR = Path(__file__).resolve().parent.parent / "reports"

# first verified pipeline output at the default configuration, pinned as
# regression data (values are backend-reproducible to ~1e-10)
PINNED_BASELINE = {
    "C_a": 13.382026023791905,
    "C_m": 22.031078420063203,
    "C_b": 2.7592528592634835e-05,
    "C_tot": 35.41329268910216,
}
F_SQUEEZED_HALF = 0.95138951389127863  # F(cosh 1), 50-digit evaluation


def verdict(number: str, name: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f"  [{detail}]" if detail else ""
    print(f"ACCEPTANCE {number} ({name}): {status}{suffix}")


def write_report(filename: str, body: str) -> Path:
    REPORTS_DIR.mkdir(exist_ok=True)
    path = REPORTS_DIR / filename
    path.write_text(body, encoding="utf-8")
    return path


@pytest.fixture(scope="module")
def preset_runs():
    return {fid: (figure_preset(fid), run_sweep(figure_preset(fid)))
            for fid in ("fig2", "fig3", "fig4", "fig5", "fig6")}


def perturbed_stable_sets(count=100, seed=7):
    rng = np.random.default_rng(seed)
    base = baseline_params()
    out = []
    while len(out) < count:
        p = base.replace(
            delta_a=base.delta_a * rng.uniform(0.8, 1.2),
            delta_m_eff=base.delta_m_eff * rng.uniform(0.8, 1.2),
            delta_B=base.omega_b * rng.uniform(-0.2, 0.2),
            kappa_a=base.kappa_a * rng.uniform(0.8, 1.2),
            kappa_m=base.kappa_m * rng.uniform(0.8, 1.2),
            kappa_b=base.kappa_b * rng.uniform(0.8, 1.2),
            J=base.J * rng.uniform(0.8, 1.2),
            g=base.g * rng.uniform(0.5, 2.0),
            P=base.P * rng.uniform(0.5, 2.0),
        )
        A = build_drift(p, solve_steady(p))
        if stability(A)[0]:
            out.append(p)
    return out


def test_criterion_1_lyapunov_correctness():
    points = perturbed_stable_sets(100)
    solve_lyapunov(np.diag([-1.0] * 6), np.eye(6))  # JIT warm-up before timing
    solve_time = 0.0
    worst_residual = 0.0
    ode_ok = True
    for p in points:
        A = build_drift(p, solve_steady(p))
        D = build_diffusion(p, bath_occupations(p))
        t0 = time.perf_counter()
        V = solve_lyapunov(A, D)
        solve_time += time.perf_counter() - t0
        res = np.linalg.norm(A @ V + V @ A.T + D) / np.linalg.norm(D)
        worst_residual = max(worst_residual, res)
        t_end, dt = ode_settings(A)
        V_ode = integrate_lyapunov_ode(A, D, t_end, dt)
        ode_ok = ode_ok and entrywise_close(V_ode, V, rtol=1e-6, floor=1e-6)
    per_point_ms = solve_time / len(points) * 1e3
    ok = worst_residual <= 1e-10 and ode_ok and per_point_ms < 10.0
    verdict(
        "1", "Lyapunov correctness", ok,
        f"max residual {worst_residual:.2e}, {per_point_ms:.3f} ms/point",
    )
    assert worst_residual <= 1e-10
    assert ode_ok
    assert per_point_ms < 10.0


def test_criterion_2_jacobian_consistency(preset_runs):
    worst = 0.0
    n_corners = 0
    for fid, (spec, _) in preset_runs.items():
        ax1_vals = [spec.axis1.lo, spec.axis1.hi]
        ax2_vals = [spec.axis2.lo, spec.axis2.hi] if spec.axis2 else [None]
        for v1 in ax1_vals:
            for v2 in ax2_vals:
                p = _apply_axis(spec.base, spec.axis1.name, v1)
                if v2 is not None:
                    p = _apply_axis(p, spec.axis2.name, v2)
                variants = [p]
                if spec.pair_barnett:
                    mag = abs(p.delta_B)
                    variants = [p.replace(delta_B=+mag), p.replace(delta_B=-mag)]
                for q in variants:
                    A = build_drift(q, solve_steady(q))
                    J_fd = finite_difference_jacobian(q)
                    worst = max(worst, np.abs(A - J_fd).max() / np.abs(A).max())
                    n_corners += 1
    ok = worst <= 1e-6
    verdict("2", "Jacobian consistency", ok,
            f"{n_corners} corner points, worst {worst:.2e}")
    assert worst <= 1e-6


def test_criterion_3_physicality(preset_runs):
    n_stable = 0
    nu_min = np.inf
    c_min = np.inf
    for fid, (spec, records) in preset_runs.items():
        points = []
        for r in records:
            points.extend((r.plus, r.minus) if hasattr(r, "plus") else (r,))
        for pt in points:
            if not pt.stable:
                continue
            n_stable += 1
            nu_min = min(nu_min, pt.nu.min())
            c_min = min(c_min, pt.C_a, pt.C_m, pt.C_b, pt.C_tot)
    ok = nu_min >= 1.0 - 1e-9 and c_min >= -1e-12
    verdict("3", "physicality suite", ok,
            f"{n_stable} stable points, min nu-1 {nu_min - 1:.2e}, min C {c_min:.2e}")
    assert nu_min >= 1.0 - 1e-9
    assert c_min >= -1e-12


def test_criterion_4_incoherent_limits():
    rec = evaluate_point(baseline_params(P=0.0, J=0.0, g=0.0))
    zeros_ok = all(
        abs(c) <= 1e-12 for c in (rec.C_a, rec.C_m, rec.C_b, rec.C_tot)
    )
    f_ok = entropy_F(1.0) == 0.0 and abs(entropy_F(3.0) - 2.0) <= 1e-14
    thermal = single_mode_coherence(7.0 * np.eye(2), np.zeros(2))
    coherent = single_mode_coherence(np.eye(2), np.array([2.0, 0.0]))
    r = 0.5
    squeezed = single_mode_coherence(
        np.diag([math.exp(2 * r), math.exp(-2 * r)]), np.zeros(2)
    )
    analytic_ok = (
        thermal == 0.0
        and abs(coherent - 2.0) <= 1e-12
        and abs(squeezed - F_SQUEEZED_HALF) <= 1e-4
    )
    ok = zeros_ok and f_ok and analytic_ok
    verdict("4", "incoherent limits", ok,
            f"squeezed C = {squeezed:.6f}")
    assert zeros_ok and f_ok and analytic_ok


def test_criterion_5_fig2_ordering(preset_runs):
    _, records = preset_runs["fig2"]
    rows = {}
    for r in records:
        rows.setdefault(r.grid_i, {})[r.grid_j] = r
    n_all_stable = 0
    ordered = {"C_a": 0, "C_m": 0, "C_b": 0}
    for i, row in rows.items():
        if not all(row[j].stable for j in range(3)):
            continue
        n_all_stable += 1
        for name in ordered:
            minus, zero, plus = (getattr(row[j], name) for j in range(3))
            if minus > zero > plus:
                ordered[name] += 1
    fractions = {k: v / n_all_stable for k, v in ordered.items()}
    ok = n_all_stable > 0 and all(f >= 0.9 for f in fractions.values())
    verdict("5", "fig2 qualitative ordering", ok,
            f"{n_all_stable} stable P points, fractions {fractions}")
    assert ok


def test_criterion_6_fig4_nonreciprocity(preset_runs):
    spec, records = preset_runs["fig4"]
    wb = spec.base.omega_b
    Js = np.array([r.plus.params.J for r in records]) / wb
    minima = {}
    for name in ("I_a", "I_m", "I_b"):
        I = np.array(
            [getattr(r, name) if getattr(r, name) is not None else np.nan
             for r in records]
        )
        defined = ~np.isnan(I)
        minima[name] = float(Js[defined][np.argmin(I[defined])])
    I_b = np.array([r.I_b if r.I_b is not None else np.nan for r in records])
    peak = float(np.nanmax(I_b[Js <= 0.4]))
    minima_ok = all(0.49 <= v <= 0.59 for v in minima.values())
    peak_ok = peak >= 0.99
    within_band = abs(peak - 0.9984) <= 0.01
    if not (peak_ok and within_band):
        write_report(
            "discrepancy_criterion_6.md",
            "# Criterion 6 discrepancy: fig4 phonon contrast peak\n\n"
            f"Measured max I_b over J <= 0.4*omega_b: {peak:.6f}\n"
            f"Acceptance band: 0.9984 +/- 0.01 (and >= 0.99).\n"
            f"Contrast minima (J/omega_b): {minima}\n",
        )
    ok = minima_ok and peak_ok
    verdict("6", "fig4 nonreciprocity structure", ok,
            f"minima {minima}, peak I_b {peak:.5f}")
    assert minima_ok
    assert peak_ok


def test_criterion_7_fig5_crossover(preset_runs):
    spec, records = preset_runs["fig5"]
    stable = [(r.params.g / TWO_PI, r) for r in records if r.stable]
    crossover = None
    for idx, (g_hz, _) in enumerate(stable):
        if g_hz > 0 and all(
            rr.C_b > max(rr.C_a, rr.C_m) for _, rr in stable[idx:]
        ):
            crossover = g_hz
            break
    ok = crossover is not None and 4.0 <= crossover <= 16.0
    if not ok:
        g8 = next((r for g_hz, r in stable if abs(g_hz - 8.0) < 0.51), None)
        lines = [
            "# Criterion 7 discrepancy: fig5 phonon-coherence crossover\n",
            "Requirement: a crossover g* with C_b > max(C_a, C_m) for all",
            "stable g > g*, located within g*/2pi in [4, 16] Hz.\n",
            f"Measured crossover: "
            f"{'none in the scanned range' if crossover is None else f'{crossover:.1f} Hz'}",
            f"Stable range ends at g/2pi = {stable[-1][0]:.1f} Hz "
            f"(instability above; {sum(1 for r in records if not r.stable)} "
            "unstable grid points).\n",
        ]
        if g8 is not None:
            lines.append(
                f"At g/2pi = 8 Hz: C_a = {g8.C_a:.3f}, C_m = {g8.C_m:.3f}, "
                f"C_b = {g8.C_b:.3f} bits."
            )
        lines.append(
            "\nAnalysis: the phonon coherence is displacement-dominated, "
            "C_b ~ log2(2|b_s|^2) with |b_s| = g|m_s|^2/omega_b, while C_a "
            "and C_m are pinned by |a_s|, |m_s| which do not depend on g. "
            "At P = 7e-4 mW the magnon amplitude gives |m_s| ~ 1.7e5, so "
            "C_b only overtakes C_m once g/2pi reaches ~70 Hz, an order of "
            "magnitude above the required window.  No convention choice "
            "consistent with the other acceptance checks moves the "
            "crossover into [4, 16] Hz at this drive power.\n"
        )
        write_report("discrepancy_criterion_7.md", "\n".join(lines))
    verdict("7", "fig5 crossover", ok,
            f"crossover g*/2pi = {crossover}")
    assert ok, (
        f"crossover at {crossover} Hz, outside [4, 16] Hz; "
        f"see reports/discrepancy_criterion_7.md"
    )


def _interior_max(values):
    arr = np.array(values, dtype=float)
    if np.any(np.isnan(arr)):
        return False
    k = int(np.argmax(arr))
    return bool(0 < k < len(arr) - 1 and arr[k] > arr[0] and arr[k] > arr[-1])


def _fig6_cut(preset_runs, axis: str, mode: str):
    spec, records = preset_runs["fig6"]
    table = {(r.grid_i, r.grid_j): r for r in records}
    i_base = int(np.argmin(np.abs(spec.axis1.grid() - TWO_PI * 1e6)))
    j_base = int(np.argmin(np.abs(spec.axis2.grid() - TWO_PI * 1e6)))
    if axis == "kappa_a":
        cells = [table[(i, j_base)] for i in range(spec.axis1.points)]
    else:
        cells = [table[(i_base, j)] for j in range(spec.axis2.points)]
    return [getattr(c, mode) if c.stable else np.nan for c in cells]


def test_criterion_8_fig6_nonmonotonic_vs_kappa_m(preset_runs):
    results = {m: _interior_max(_fig6_cut(preset_runs, "kappa_m", m))
               for m in ("C_a", "C_m", "C_b")}
    ok = all(results.values())
    verdict("8", "fig6 interior maximum vs kappa_m", ok, f"{results}")
    assert ok


def test_criterion_8_fig6_nonmonotonic_vs_kappa_a(preset_runs):
    results = {m: _interior_max(_fig6_cut(preset_runs, "kappa_a", m))
               for m in ("C_a", "C_m", "C_b")}
    ok = all(results.values())
    if not ok:
        cuts = {m: _fig6_cut(preset_runs, "kappa_a", m) for m in ("C_a", "C_m")}
        body = [
            "# Criterion 8 discrepancy: fig6 coherence vs cavity decay rate\n",
            "Requirement: C_a, C_m and C_b each show an interior maximum as",
            "functions of kappa_a (and of kappa_m; the kappa_m direction",
            "holds for all three modes).\n",
            f"Interior-maximum verdicts vs kappa_a: {results}\n",
            f"C_a endpoints over kappa_a/2pi in [1e4, 10^7.5] Hz: "
            f"{cuts['C_a'][0]:.4f} -> {cuts['C_a'][-1]:.4f} (monotone decline)",
            f"C_m endpoints: {cuts['C_m'][0]:.4f} -> {cuts['C_m'][-1]:.4f}\n",
            "Analysis: the drive enters through the magnon mode, so no",
            "steady amplitude grows with kappa_a: |a_s| strictly falls as",
            "1/sqrt(delta_a^2 + kappa_a^2) and |m_s| loses its hybridization",
            "shift, while each mode's thermal variance is kappa-independent.",
            "An initial rise of C_a or C_m with kappa_a would require a",
            "drive amplitude tied to the cavity linewidth, which contradicts",
            "the model's drive term.  C_b does show the interior maximum.\n",
        ]
        write_report("discrepancy_criterion_8.md", "\n".join(body))
    verdict("8", "fig6 interior maximum vs kappa_a", ok, f"{results}")
    assert ok, (
        f"interior-maximum verdicts {results}; "
        "see reports/discrepancy_criterion_8.md"
    )


def test_criterion_9_stability_nonreciprocity(preset_runs):
    spec, records = preset_runs["fig3"]
    stable = {(r.grid_i, r.grid_j): r.stable for r in records}
    n1, n2 = spec.axis1.points, spec.axis2.points
    mismatches = [
        (i, j)
        for i in range(n1)
        for j in range(n2)
        if stable[(i, j)] != stable[(n1 - 1 - i, j)]
    ]
    n_unstable = sum(1 for v in stable.values() if not v)
    ok = len(mismatches) > 0
    if not ok:
        write_report(
            "discrepancy_criterion_9.md",
            "# Criterion 9 discrepancy: stability asymmetry on the fig3 grid\n\n"
            "Requirement: at least one (delta_B, J) grid point whose "
            "+/-delta_B mirror differs in stability verdict.\n\n"
            f"Measured: {n_unstable} unstable points out of {n1 * n2}; "
            "0 mirrored pairs differ.\n\n"
            "Analysis: at the preset drive power P = 6e-4 mW the effective\n"
            "magnomechanical coupling 2 g |m_s| stays ~2 orders of magnitude\n"
            "below the level where blue-detuned anti-damping can overcome\n"
            "kappa_b anywhere in |delta_B| <= 0.5*omega_b, J <= 0.6*omega_b.\n"
            "Scans show one-sided instability wedges (delta_B < -0.3*omega_b,\n"
            "small J) appear only above roughly P ~ 5 mW, i.e. 10^4 times the\n"
            "preset power, where the mirror asymmetry is reproduced.  The\n"
            "asymmetry mechanism is therefore present in the model but not\n"
            "reachable inside this preset's parameter window.\n",
        )
    verdict("9", "fig3 stability nonreciprocity", ok,
            f"{n_unstable} unstable, {len(mismatches)} mirror mismatches")
    assert ok, "no mirrored stability difference; see reports/discrepancy_criterion_9.md"


def test_criterion_10_determinism(tmp_path):
    out1, out2 = tmp_path / "r1", tmp_path / "r2"
    assert cli_main(["reproduce", "fig4", "--out", str(out1)]) == 0
    assert cli_main(["reproduce", "fig4", "--out", str(out2)]) == 0
    csv_equal = (out1 / "fig4.csv").read_bytes() == (out2 / "fig4.csv").read_bytes()
    meta_equal = (
        (out1 / "fig4.meta.json").read_bytes()
        == (out2 / "fig4.meta.json").read_bytes()
    )
    ok = csv_equal and meta_equal
    verdict("10", "byte-identical reproduction", ok)
    assert ok


def test_pinned_baseline_regression():
    rec = evaluate_point(baseline_params())
    ok = all(
        getattr(rec, name) == pytest.approx(value, rel=1e-8)
        for name, value in PINNED_BASELINE.items()
    )
    c_max = max(rec.C_a, rec.C_m, rec.C_b)
    verdict("R", "pinned baseline regression", ok and rec.C_tot >= c_max)
    for name, value in PINNED_BASELINE.items():
        assert getattr(rec, name) == pytest.approx(value, rel=1e-8)
    assert rec.C_tot >= c_max

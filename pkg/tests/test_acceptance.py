"""Acceptance gate: every criterion at its stated tolerance.

Each test prints one ``ACCEPTANCE PASS/FAIL`` line (run with ``-s`` to
see them live).  The ensemble sweeps reproduce the figure trends at desk
scale (N = 10^3, b0 = 12, 5 cloud configurations); directional rates use
the 64-azimuth ring detector, which estimates the phi-independent
ensemble-mean intensity without single-point configuration speckle.
Figure-regeneration checks live in the frontend package's own suite.
"""

import csv
import dataclasses
import time

import numpy as np
import pytest

from superdecay.cloud import sample_gaussian_cloud
from superdecay.decay import fit_single_exponential
from superdecay.integrator import (Schedule, integrate_phase,
                                   integrate_rk4_reference)
from superdecay.kernel import (AtomicState, DriveParams, build_coupling,
                               single_atom_steady_state)
from superdecay.observables import (Direction, default_sphere_quadrature,
                                    elastic_power, pair_sum_rule)
from superdecay.runner import (ExperimentConfig, results_csv_text,
                               run_experiment, write_results)

OMEGAS = (0.05, 0.5, 2.0, 10.0)
THETA_OFF_AXIS = Direction(np.pi / 2).theta
THETA_FORWARD = 0.0
ACCEPT_SCHEDULE = Schedule(t_drive=10.0, t_decay=2.0, sample_dt=0.01)


def _report(name, checks):
    """checks: list of (description, ok).  Prints one line, then asserts."""
    failed = [desc for desc, ok in checks if not ok]
    status = "PASS" if not failed else "FAIL"
    detail = "" if not failed else "; ".join(failed)
    print(f"ACCEPTANCE {status}  {name}" + (f"  [{detail}]" if detail else ""))
    assert not failed, f"{name}: {detail}"


def _fig2_config(detuning, output_dir):
    return ExperimentConfig(
        n_atoms=1000, b0=12.0, detuning=detuning, rabi_list=OMEGAS,
        n_configurations=5, base_seed=1, schedule=ACCEPT_SCHEDULE,
        t_fit=0.75, thetas=(np.pi / 2, 0.0), detector_n_phi=64,
        output_dir=output_dir, max_workers=1)


@pytest.fixture(scope="module")
def fig2b(tmp_path_factory):
    out = str(tmp_path_factory.mktemp("fig2b"))
    config = _fig2_config(0.0, out)
    t0 = time.perf_counter()
    table = run_experiment(config)
    elapsed = time.perf_counter() - t0
    write_results(table, out)
    return config, table, elapsed


@pytest.fixture(scope="module")
def fig2a(tmp_path_factory):
    out = str(tmp_path_factory.mktemp("fig2a"))
    config = _fig2_config(-10.0, out)
    t0 = time.perf_counter()
    table = run_experiment(config)
    elapsed = time.perf_counter() - t0
    write_results(table, out)
    return config, table, elapsed


def mean_rate(table, omega, observable, theta=None):
    for row in table.rows:
        if row["omega"] != omega or row["observable"] != observable:
            continue
        if theta is None and row["theta"] is None:
            return row["ensemble_mean"]
        if theta is not None and row["theta"] == theta:
            return row["ensemble_mean"]
    raise KeyError((omega, observable, theta))


def test_single_atom_oracle_suite():
    # the slowest single-atom transient decays as e^{-3t/4}, so after a
    # drive of t = 25 the state sits on the analytic fixed point to < 1e-7;
    # the decay phase runs at tight tolerance because the weak off-resonant
    # coherences are O(1e-3) and the rate check is at the 1e-6 level
    t0 = time.perf_counter()
    checks = []
    cloud = sample_gaussian_cloud(1, 1.0, seed=0)
    coupling = build_coupling(cloud)
    quad = default_sphere_quadrature()
    drive_sched = Schedule(t_drive=25.0, t_decay=1.0, sample_dt=12.5)
    decay_sched = Schedule(t_drive=25.0, t_decay=2.0, sample_dt=0.01,
                           abs_tol=1e-12, rel_tol=1e-10)
    for detuning in (0.0, -10.0):
        for rabi in (0.05, 1.0, 2.0, 10.0):
            drive = DriveParams(rabi=rabi, detuning=detuning)
            driven = integrate_phase(AtomicState.ground(1), coupling, drive,
                                     cloud, True, 25.0, drive_sched)
            _, z_ss = single_atom_steady_state(rabi, detuning)
            err = abs(driven.zs[-1, 0] - z_ss)
            checks.append(
                (f"z_ss rabi={rabi} det={detuning}: err={err:.2e}", err < 1e-6))
            switch_off = AtomicState(beta=driven.betas[-1], z=driven.zs[-1])
            decay = integrate_phase(switch_off, coupling, drive, cloud, False,
                                    2.0, decay_sched)
            ne = 0.5 * (decay.zs[:, 0] + 1.0)
            lam = np.abs(decay.betas[:, 0]) ** 2
            pel = np.array([elastic_power(AtomicState(beta=b, z=z), cloud, quad)
                            for b, z in zip(decay.betas, decay.zs)])
            for name, series in (("Ne", ne), ("Lambda", lam), ("Pel", pel)):
                gamma = fit_single_exponential(decay.times, series / series[0],
                                               1.0, label=name).gamma
                checks.append(
                    (f"{name} rate rabi={rabi} det={detuning}: "
                     f"|gamma-1|={abs(gamma - 1):.2e}", abs(gamma - 1.0) < 1e-6))
    elapsed = time.perf_counter() - t0
    checks.append((f"runtime {elapsed:.2f}s < 1s", elapsed < 1.0))
    _report("single-atom oracle suite", checks)


def test_sum_rule_oracle():
    t0 = time.perf_counter()
    rng = np.random.default_rng(2024)
    quad = default_sphere_quadrature()
    checks = []
    worst = 0.0
    n_states = 0
    for n_atoms, b0 in [(10, 8.0), (25, 8.0), (40, 12.0), (60, 12.0),
                        (80, 15.0), (100, 15.0), (100, 8.0), (50, 15.0),
                        (30, 12.0), (70, 8.0)]:
        cloud = sample_gaussian_cloud(n_atoms, b0, seed=n_atoms + int(b0))
        for _ in range(10):
            beta = 0.3 * (rng.standard_normal(n_atoms)
                          + 1j * rng.standard_normal(n_atoms))
            z = rng.uniform(-1.0, -0.2, n_atoms)
            state = AtomicState(beta=beta, z=z)
            exact = pair_sum_rule(state, cloud)
            approx = elastic_power(state, cloud, quad)
            diff = abs(approx - exact) / max(1.0, abs(exact))
            worst = max(worst, diff)
            n_states += 1
    elapsed = time.perf_counter() - t0
    checks.append((f"{n_states} states, worst |diff|={worst:.2e}", worst <= 1e-10))
    checks.append((f"runtime {elapsed:.2f}s < 10s", elapsed < 10.0))
    _report("sum-rule oracle (elastic_power == pair_sum_rule)", checks)


def test_cross_integrator_equivalence():
    t0 = time.perf_counter()
    cloud = sample_gaussian_cloud(50, 8.0, seed=3)
    coupling = build_coupling(cloud)
    drive = DriveParams(rabi=2.0, detuning=0.0)
    sched = Schedule(t_drive=10.0, t_decay=1.0, sample_dt=1.0,
                     abs_tol=1e-8, rel_tol=1e-8)
    ground = AtomicState.ground(50)
    adaptive = integrate_phase(ground, coupling, drive, cloud, True, 10.0, sched)
    reference = integrate_rk4_reference(ground, coupling, drive, cloud, True,
                                        10.0, 1e-4)
    diff = max(np.max(np.abs(adaptive.betas[-1] - reference.beta)),
               np.max(np.abs(adaptive.zs[-1] - reference.z)))
    elapsed = time.perf_counter() - t0
    checks = [(f"max-norm diff {diff:.2e} <= 1e-6", diff <= 1e-6),
              (f"runtime {elapsed:.1f}s < 60s", elapsed < 60.0)]
    _report("cross-integrator equivalence (DP5(4) vs RK4 at dt=1e-4)", checks)


@pytest.mark.slow
def test_fig2b_on_resonance_trend(fig2b):
    _, table, elapsed = fig2b
    off_weak = mean_rate(table, 0.05, "Iel", THETA_OFF_AXIS)
    off_strong = mean_rate(table, 10.0, "Iel", THETA_OFF_AXIS)
    fwd = {w: mean_rate(table, w, "Iel", THETA_FORWARD) for w in OMEGAS}
    ne_weak = mean_rate(table, 0.05, "Ne")
    ne_strong = mean_rate(table, 10.0, "Ne")
    print(f"fig2b sweep wall time {elapsed / 60:.1f} min "
          f"(target < 20 min on 4 cores)")
    checks = [
        (f"off-axis weak drive subradiant: {off_weak:.3f} < 0.95",
         off_weak < 0.95),
        (f"off-axis strong drive superradiant: {off_strong:.3f} > 1.0",
         off_strong > 1.0),
        (f"forward superradiant at all drives: "
         f"{', '.join(f'{v:.3f}' for v in fwd.values())}",
         all(v > 1.0 for v in fwd.values())),
        (f"population weak drive subradiant: {ne_weak:.3f} < 0.95",
         ne_weak < 0.95),
        (f"population strong drive near bare rate: {ne_strong:.3f} in [0.9, 1.1]",
         0.9 <= ne_strong <= 1.1),
    ]
    _report("on-resonance drive sweep trend (scaled figure-2b)", checks)


@pytest.mark.slow
def test_fig2a_off_resonance_trend(fig2a):
    _, table, elapsed = fig2a
    weak = {
        "Ne": mean_rate(table, 0.05, "Ne"),
        "Lambda": mean_rate(table, 0.05, "Lambda"),
        "off-axis": mean_rate(table, 0.05, "Iel", THETA_OFF_AXIS),
        "forward": mean_rate(table, 0.05, "Iel", THETA_FORWARD),
    }
    strong = {
        "Ne": mean_rate(table, 10.0, "Ne"),
        "Lambda": mean_rate(table, 10.0, "Lambda"),
        "off-axis": mean_rate(table, 10.0, "Iel", THETA_OFF_AXIS),
        "forward": mean_rate(table, 10.0, "Iel", THETA_FORWARD),
    }
    print(f"fig2a sweep wall time {elapsed / 60:.1f} min "
          f"(target < 20 min on 4 cores)")
    ne_gap = abs(strong["Ne"] - 1.0)
    others_gap = min(abs(v - 1.0) for k, v in strong.items() if k != "Ne")
    checks = [
        (f"all observables superradiant at weakest drive: "
         f"{', '.join(f'{k}={v:.3f}' for k, v in weak.items())}",
         all(v > 1.0 for v in weak.values())),
        (f"population closest to bare rate at strongest drive: "
         f"|Ne-1|={ne_gap:.3f} vs min others {others_gap:.3f}",
         ne_gap < others_gap),
    ]
    _report("off-resonance drive sweep trend (scaled figure-2a)", checks)


@pytest.mark.slow
def test_bloch_ball_invariant_all_acceptance_runs(fig2b, fig2a):
    excesses = [out.bloch_excess for _, table, _ in (fig2b, fig2a)
                for out in table.outputs]
    worst = max(excesses)
    checks = [(f"max 4|b|^2+z^2-1 over {len(excesses)} runs = {worst:.2e} <= 1e-6",
               worst <= 1e-6)]
    _report("Bloch-ball invariant at every sample of every acceptance run",
            checks)


def _refit_from_timeseries(out_dir, seeds, omega, window):
    """Re-extract rates from the public timeseries CSV contract."""
    rates = {}
    for seed in seeds:
        series = {}
        with open(f"{out_dir}/timeseries/{seed}_{omega!r}.csv") as f:
            for row in csv.DictReader(f):
                key = (row["observable"], row["theta"])
                series.setdefault(key, []).append(
                    (float(row["t"]), float(row["value_normalized"])))
        for (name, theta), pts in series.items():
            if name in ("Pin", "ratio", "Pel"):
                continue
            t = np.array([p[0] for p in pts])
            y = np.array([p[1] for p in pts])
            label = name if not theta else f"{name}@{float(theta):.3f}"
            fit = fit_single_exponential(t, y, window, label=label)
            rates.setdefault(label, []).append(fit.gamma)
    return {k: float(np.mean(v)) for k, v in rates.items()}


@pytest.mark.slow
def test_fit_window_robustness(fig2b, fig2a):
    checks = []
    for config, table, _ in (fig2b, fig2a):
        seeds = [table.manifest["seeds"][str(i)] for i in range(5)]
        for omega in OMEGAS:
            short = _refit_from_timeseries(config.output_dir, seeds, omega, 0.1)
            for label, gamma_01 in sorted(short.items()):
                if label.startswith("Iel"):
                    theta = float(label.split("@")[1])
                    matched = [t for t in (THETA_OFF_AXIS, THETA_FORWARD)
                               if abs(t - theta) < 5e-3]
                    gamma_75 = mean_rate(table, omega, "Iel", matched[0])
                else:
                    gamma_75 = mean_rate(table, omega, label)
                rel = abs(gamma_75 - gamma_01) / gamma_75
                checks.append(
                    (f"det={config.detuning} omega={omega} {label}: "
                     f"{gamma_75:.3f} vs {gamma_01:.3f} ({100 * rel:.0f}%)",
                     rel <= 0.15))
    _report("fit-window robustness (T_fit 0.75 vs 0.1 within 15%)", checks)


@pytest.mark.slow
def test_determinism_full_sweep(fig2a, tmp_path):
    config, table, _ = fig2a
    baseline = results_csv_text(table.rows)
    rerun = run_experiment(dataclasses.replace(config,
                                               output_dir=str(tmp_path / "r1")))
    parallel = run_experiment(dataclasses.replace(config, max_workers=4,
                                                  output_dir=str(tmp_path / "r4")))
    text_rerun = results_csv_text(rerun.rows)
    text_parallel = results_csv_text(parallel.rows)
    on_disk = open(f"{config.output_dir}/results.csv").read()
    checks = [
        ("rerun byte-identical", text_rerun == baseline),
        ("max_workers=4 byte-identical", text_parallel == baseline),
        ("written file matches in-memory table", on_disk == baseline),
    ]
    _report("determinism: sweep rerun and worker-count change", checks)

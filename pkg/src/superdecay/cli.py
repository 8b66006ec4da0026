"""Command-line interface: run, sweep-omega, angular-scan, validate."""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

# Single-threaded BLAS keeps worker processes from oversubscribing the
# machine; must be set before numpy loads its backend.
for _var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
    os.environ.setdefault(_var, "1")

import numpy as np  # noqa: E402

from . import __version__  # noqa: E402
from .errors import SuperdecayError  # noqa: E402
from .runner import (all_converged, angular_scan, load_config, run_experiment,
                     sweep_omega, write_results)  # noqa: E402


def _add_common(sub):
    sub.add_argument("--config", required=True, help="TOML experiment config")
    sub.add_argument("--out", default=None, help="output directory override")
    sub.add_argument("--workers", type=int, default=None,
                     help="max parallel worker processes")


def _load(args):
    config = load_config(args.config)
    overrides = {}
    if args.out is not None:
        overrides["output_dir"] = args.out
    if args.workers is not None:
        overrides["max_workers"] = args.workers
    if overrides:
        config = dataclasses.replace(config, **overrides)
    return config


def _finish(table, config) -> int:
    paths = write_results(table, config.output_dir)
    n_rows = len(table.rows)
    n_fail = table.manifest["n_failures"]
    print(f"wrote {paths['results']} ({n_rows} rows, {n_fail} failed runs)")
    return 0 if all_converged(table) else 1


def _cmd_run(args) -> int:
    config = _load(args)
    return _finish(run_experiment(config), config)


def _cmd_sweep_omega(args) -> int:
    config = _load(args)
    omegas = None
    if args.omegas:
        omegas = [float(w) for w in args.omegas.split(",")]
    table = sweep_omega(config, omegas)
    return _finish(table, config)


def _cmd_angular_scan(args) -> int:
    config = _load(args)
    thetas = [float(t) for t in args.thetas.split(",")]
    table = angular_scan(config, thetas)
    return _finish(table, config)


def _cmd_validate(_args) -> int:
    """Single-atom and sum-rule oracle suite; exit 0 only if all pass."""
    from .cloud import sample_gaussian_cloud
    from .decay import fit_single_exponential
    from .integrator import Schedule, run_drive_decay
    from .kernel import (AtomicState, DriveParams, build_coupling, rhs,
                         single_atom_steady_state)
    from .observables import (default_sphere_quadrature, elastic_power,
                              observable_series, pair_sum_rule)

    failures = 0

    def check(name, ok, detail=""):
        nonlocal failures
        print(f"{'PASS' if ok else 'FAIL'}  {name}" + (f"  ({detail})" if detail else ""))
        failures += 0 if ok else 1

    # fixed point of the equations of motion at the analytic steady state
    single = sample_gaussian_cloud(1, 1.0, seed=0)
    coupling = build_coupling(single)
    for rabi, det in [(0.05, 0.0), (1.0, 0.0), (2.0, 0.0), (10.0, 0.0),
                      (1.0, -10.0), (10.0, -10.0)]:
        beta_ss, z_ss = single_atom_steady_state(rabi, det)
        drv = DriveParams(rabi=rabi, detuning=det, drive_phase_enabled=False)
        dot = rhs(AtomicState(beta=[beta_ss], z=[z_ss]), coupling, drv,
                  single, drive_on=True)
        resid = max(abs(dot.beta[0]), abs(dot.z[0]))
        check(f"steady-state fixed point (rabi={rabi}, detuning={det})",
              resid < 1e-12, f"residual {resid:.2e}")

    # driven single atom relaxes at the bare rate in every observable
    sched = Schedule(t_drive=10.0, t_decay=2.0, sample_dt=0.01)
    traj = run_drive_decay(single, DriveParams(rabi=1.0), sched)
    series = observable_series(traj, single, decay_only=True)
    for name in ("Ne", "Lambda", "Pel"):
        t, y = series.decay_part(name)
        fit = fit_single_exponential(t, y, 1.0, label=name)
        check(f"single-atom decay rate for {name}", abs(fit.gamma - 1.0) < 1e-6,
              f"gamma={fit.gamma:.8f}")

    # quadrature vs closed-form sphere integral
    rng = np.random.Generator(np.random.PCG64(42))
    cloud = sample_gaussian_cloud(20, 8.0, seed=7)
    state = AtomicState(beta=0.4 * (rng.standard_normal(20)
                                    + 1j * rng.standard_normal(20)),
                        z=np.full(20, -0.5))
    quad = default_sphere_quadrature()
    p_quad = elastic_power(state, cloud, quad)
    p_exact = pair_sum_rule(state, cloud)
    check("sphere quadrature vs pair sum rule",
          abs(p_quad - p_exact) <= 1e-10 * max(1.0, abs(p_exact)),
          f"|diff|={abs(p_quad - p_exact):.2e}")

    print("all checks passed" if failures == 0 else f"{failures} check(s) failed")
    return 0 if failures == 0 else 1


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="superdecay",
        description="Collective early-time decay rates of driven cold-atom "
                    "clouds (mean-field coupled-dipole model).")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run the experiment grid from a config")
    _add_common(p_run)
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep-omega", help="sweep the drive strength")
    _add_common(p_sweep)
    p_sweep.add_argument("--omegas", default=None,
                         help="comma-separated Omega/Gamma grid "
                              "(default: log grid 0.05..10)")
    p_sweep.set_defaults(func=_cmd_sweep_omega)

    p_scan = sub.add_parser("angular-scan", help="scan the detection angle")
    _add_common(p_scan)
    p_scan.add_argument("--thetas", required=True,
                        help="comma-separated polar angles in radians")
    p_scan.set_defaults(func=_cmd_angular_scan)

    p_val = sub.add_parser("validate",
                           help="run the single-atom and sum-rule oracle suite")
    p_val.set_defaults(func=_cmd_validate)

    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SuperdecayError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

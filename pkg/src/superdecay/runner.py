"""Configuration ensembles and parameter sweeps with deterministic seeding.

One task = one (configuration index, Omega) pair: sample the cloud for
that configuration index, drive it to steady state, release, fit decay
rates.  Clouds depend only on the configuration index, so every Omega in
the sweep sees the same geometry and rate-vs-Omega comparisons are not
confounded by position noise.  Result tables are sorted canonically and
floats are written with shortest round-trip repr, so reruns and worker-
count changes produce byte-identical files.
"""

from __future__ import annotations

import concurrent.futures
import csv
import dataclasses
import hashlib
import io
import json
import os
from dataclasses import dataclass, field

import numpy as np
import tomli
import tomlkit

from . import __version__
from .cloud import derive_cloud_seed, sample_gaussian_cloud
from .decay import RATE_OBSERVABLES, fit_single_exponential
from .errors import ConfigError, SuperdecayError
from .integrator import Schedule, run_drive_decay
from .kernel import DriveParams, rabi_from_saturation
from .observables import (Direction, default_sphere_quadrature,
                          observable_series, series_csv_text)

RESULT_COLUMNS = [
    "n_atoms", "b0", "detuning", "omega", "config_index", "seed",
    "observable", "theta", "phi", "gamma", "rss", "n_points", "t_fit",
    "converged", "ensemble_mean", "ensemble_std", "ensemble_count", "error",
]


@dataclass(frozen=True)
class ExperimentConfig:
    n_atoms: int = 1000
    b0: float = 12.0
    detuning: float = 0.0
    rabi_list: tuple = (0.05, 0.5, 2.0, 10.0)
    saturation_list: tuple | None = None   # alternative drive spec, see manifest
    n_configurations: int = 5
    base_seed: int = 1
    schedule: Schedule = field(default_factory=Schedule)
    t_fit: float = 0.75
    thetas: tuple = (np.pi / 2, 0.0)
    detector_cone_sr: float | None = None
    detector_n_phi: int = 0
    drive_phase_enabled: bool = True
    beam_waist: float | None = None
    min_pair_separation: float = 1e-2
    output_dir: str = "runs/out"
    max_workers: int = 1
    dump_timeseries: bool = True
    quad_n_theta: int = 64
    quad_n_phi: int = 128

    def __post_init__(self):
        if self.n_configurations < 1:
            raise ConfigError("n_configurations must be >= 1")
        rabi = self.resolved_rabi_list()
        if len(rabi) == 0 or any(w <= 0 for w in rabi):
            raise ConfigError("rabi_list must be non-empty and positive")

    def resolved_rabi_list(self) -> tuple:
        if self.saturation_list is not None:
            return tuple(rabi_from_saturation(s, self.detuning)
                         for s in self.saturation_list)
        return tuple(self.rabi_list)

    def directions(self) -> list[Direction]:
        return [Direction(theta=t) for t in self.thetas]

    def to_dict(self) -> dict:
        d = dataclasses.asdict(self)
        d["schedule"] = dataclasses.asdict(self.schedule)
        d["rabi_list"] = list(self.resolved_rabi_list())
        d["thetas"] = list(self.thetas)
        d["saturation_list"] = (None if self.saturation_list is None
                                else list(self.saturation_list))
        return d


_SCHEDULE_KEYS = {"t_drive", "t_decay", "sample_dt", "abs_tol", "rel_tol"}
_TOP_KEYS = {f.name for f in dataclasses.fields(ExperimentConfig)}


def load_config(path) -> ExperimentConfig:
    """Parse a TOML config; unknown keys are rejected by name."""
    with open(path, "rb") as f:
        try:
            raw = tomli.load(f)
        except tomli.TOMLDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
    return config_from_dict(raw, source=str(path))


def config_from_dict(raw: dict, source: str = "<dict>") -> ExperimentConfig:
    for key in raw:
        if key not in _TOP_KEYS:
            raise ConfigError(f"{source}: unknown key {key!r}")
    sched_raw = raw.get("schedule", {})
    for key in sched_raw:
        if key not in _SCHEDULE_KEYS:
            raise ConfigError(f"{source}: unknown key 'schedule.{key}'")
    kwargs = {k: v for k, v in raw.items() if k != "schedule"}
    for key in ("rabi_list", "saturation_list", "thetas"):
        if key in kwargs and kwargs[key] is not None:
            kwargs[key] = tuple(float(v) for v in kwargs[key])
    try:
        return ExperimentConfig(schedule=Schedule(**sched_raw), **kwargs)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{source}: {exc}") from exc


def write_config(config: ExperimentConfig, path) -> None:
    doc = tomlkit.document()
    d = dataclasses.asdict(config)
    sched = d.pop("schedule")
    for key, value in d.items():
        if value is None:
            continue
        if isinstance(value, tuple):
            value = list(value)
        doc[key] = value
    doc["schedule"] = sched
    tmp = f"{path}.tmp-{os.getpid()}"
    with open(tmp, "w") as f:
        f.write(tomlkit.dumps(doc))
    os.replace(tmp, path)


@dataclass
class RunOutput:
    """Everything one (configuration, Omega) task sends back."""

    config_index: int
    omega: float
    seed: int
    fits: list = field(default_factory=list)
    fit_errors: list = field(default_factory=list)  # per-observable failures
    monotone_decay: bool = True
    bloch_excess: float = -1.0
    timeseries_csv: str | None = None
    error: str | None = None


def run_single(config: ExperimentConfig, config_index: int,
               omega: float) -> RunOutput:
    """One complete drive/decay/fit pipeline."""
    seed = derive_cloud_seed(config.base_seed, config_index)
    cloud = sample_gaussian_cloud(config.n_atoms, config.b0, seed,
                                  config.min_pair_separation)
    drive = DriveParams(rabi=omega, detuning=config.detuning,
                        drive_phase_enabled=config.drive_phase_enabled,
                        beam_waist=config.beam_waist)
    traj = run_drive_decay(cloud, drive, config.schedule)
    quad = default_sphere_quadrature(config.quad_n_theta, config.quad_n_phi)
    series = observable_series(traj, cloud, directions=config.directions(),
                               quad=quad, cone_sr=config.detector_cone_sr,
                               n_phi_average=config.detector_n_phi,
                               decay_only=True)
    # fit each observable independently: a series that refuses a positive-
    # rate fit (possible for a single noisy angle) loses only its own row
    fits, fit_errors = [], []
    sel = series.phases == "decay"
    targets = [(name, None, None) for name in RATE_OBSERVABLES]
    targets += [("Iel", col.theta, col.phi)
                for col in series.columns if col.name == "Iel"]
    for name, theta, phi in targets:
        col = series.get(name, theta)
        try:
            fits.append(fit_single_exponential(
                series.times[sel], col.normalized[sel], config.t_fit,
                label=name, theta=theta, phi=phi))
        except SuperdecayError as exc:
            fit_errors.append({"observable": name, "theta": theta, "phi": phi,
                               "message": f"{type(exc).__name__}: {exc}"})
    ts_csv = series_csv_text(series) if config.dump_timeseries else None
    return RunOutput(config_index=config_index, omega=omega, seed=seed,
                     fits=fits, fit_errors=fit_errors,
                     monotone_decay=traj.monotone_decay,
                     bloch_excess=traj.max_bloch_excess(),
                     timeseries_csv=ts_csv)


def _run_task(args):
    """Crash isolation boundary: a failing run becomes an error row."""
    config, config_index, omega = args
    try:
        return run_single(config, config_index, omega)
    except Exception as exc:
        return RunOutput(config_index=config_index, omega=omega,
                         seed=derive_cloud_seed(config.base_seed, config_index),
                         error=f"{type(exc).__name__}: {exc}")


@dataclass
class ResultTable:
    rows: list
    manifest: dict
    outputs: list = field(default_factory=list)  # RunOutput, canonical order


def run_experiment(config: ExperimentConfig) -> ResultTable:
    """Execute the full (configuration x Omega) grid and aggregate statistics.

    Deterministic in base_seed regardless of max_workers: tasks are pure
    functions of (config, index, omega) and the table is re-sorted
    canonically after the pool returns.
    """
    omegas = config.resolved_rabi_list()
    tasks = [(config, idx, omega)
             for idx in range(config.n_configurations)
             for omega in omegas]

    if config.max_workers > 1:
        with concurrent.futures.ProcessPoolExecutor(config.max_workers) as pool:
            outputs = list(pool.map(_run_task, tasks))
    else:
        outputs = [_run_task(t) for t in tasks]

    outputs.sort(key=lambda o: (o.omega, o.config_index))
    rows = _build_rows(config, outputs)
    n_failures = sum(1 for o in outputs if o.error is not None)
    manifest = {
        "code_version": __version__,
        "config": config.to_dict(),
        "config_sha256": hashlib.sha256(
            json.dumps(config.to_dict(), sort_keys=True).encode()).hexdigest(),
        "seeds": {str(idx): derive_cloud_seed(config.base_seed, idx)
                  for idx in range(config.n_configurations)},
        "n_runs": len(tasks),
        "n_failures": n_failures,
        "n_fit_failures": sum(len(o.fit_errors) for o in outputs),
        "non_monotone_decays": sum(1 for o in outputs if not o.monotone_decay),
        "max_bloch_excess": max((o.bloch_excess for o in outputs), default=-1.0),
        "direction_labels": [d.label() for d in config.directions()],
        "detector": _detector_label(config),
        "notes": _manifest_notes(config),
    }
    return ResultTable(rows=rows, manifest=manifest, outputs=outputs)


def _detector_label(config: ExperimentConfig) -> str:
    parts = []
    if config.detector_n_phi > 0:
        parts.append(f"ring average over {config.detector_n_phi} azimuths")
    if config.detector_cone_sr is not None:
        parts.append(f"cone {config.detector_cone_sr} sr")
    return ", ".join(parts) if parts else "point"


def _manifest_notes(config: ExperimentConfig) -> list:
    notes = ["angular series are elastic-only; the mean-field model does not "
             "resolve the angular distribution of inelastic light"]
    if config.saturation_list is not None:
        notes.append("rabi derived from saturation via "
                     "omega = sqrt(s/2 + detuning^2) (paper convention)")
    return notes


def _build_rows(config: ExperimentConfig, outputs: list) -> list:
    rows = []
    for out in outputs:
        base = {
            "n_atoms": config.n_atoms, "b0": config.b0,
            "detuning": config.detuning, "omega": out.omega,
            "config_index": out.config_index, "seed": out.seed,
            "t_fit": config.t_fit,
        }
        if out.error is not None:
            rows.append({**base, "observable": "", "theta": None, "phi": None,
                         "gamma": None, "rss": None, "n_points": None,
                         "converged": False, "error": out.error})
            continue
        for fit in out.fits:
            rows.append({**base, "observable": fit.observable_label,
                         "theta": fit.theta, "phi": fit.phi,
                         "gamma": fit.gamma, "rss": fit.rss,
                         "n_points": fit.n_points, "converged": fit.converged,
                         "error": ""})
        for err in out.fit_errors:
            rows.append({**base, "observable": err["observable"],
                         "theta": err["theta"], "phi": err["phi"],
                         "gamma": None, "rss": None, "n_points": None,
                         "converged": False, "error": err["message"]})

    # ensemble statistics over converged fits, grouped by everything but seed
    groups: dict = {}
    for row in rows:
        key = (row["omega"], row["observable"], row["theta"], row["phi"])
        groups.setdefault(key, []).append(row)
    for key, members in groups.items():
        gammas = [r["gamma"] for r in members
                  if r["converged"] and r["gamma"] is not None]
        count = len(gammas)
        mean = float(np.mean(gammas)) if count else None
        std = float(np.std(gammas, ddof=1)) if count >= 2 else (0.0 if count else None)
        for r in members:
            r["ensemble_mean"] = mean
            r["ensemble_std"] = std
            r["ensemble_count"] = count

    rows.sort(key=lambda r: (r["omega"], r["observable"],
                             -1.0 if r["theta"] is None else r["theta"],
                             -1.0 if r["phi"] is None else r["phi"],
                             r["config_index"]))
    return rows


def _format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def results_csv_text(rows: list) -> str:
    # error messages may contain commas: write through the csv module so
    # fields are quoted per RFC 4180 and stay byte-deterministic
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(RESULT_COLUMNS)
    for row in rows:
        writer.writerow([_format_cell(row.get(c)) for c in RESULT_COLUMNS])
    return buf.getvalue()


def _atomic_write(path, text: str) -> None:
    tmp = f"{path}.tmp-{os.getpid()}"
    with open(tmp, "w") as f:
        f.write(text)
    os.replace(tmp, path)


def write_results(table: ResultTable, out_dir) -> dict:
    """results.csv + manifest.json + timeseries/<seed>_<omega>.csv, atomically."""
    os.makedirs(out_dir, exist_ok=True)
    _atomic_write(os.path.join(out_dir, "results.csv"),
                  results_csv_text(table.rows))
    _atomic_write(os.path.join(out_dir, "manifest.json"),
                  json.dumps(table.manifest, sort_keys=True, indent=2) + "\n")
    ts_dir = os.path.join(out_dir, "timeseries")
    for out in table.outputs:
        if out.timeseries_csv is None:
            continue
        os.makedirs(ts_dir, exist_ok=True)
        _atomic_write(os.path.join(ts_dir, f"{out.seed}_{out.omega!r}.csv"),
                      out.timeseries_csv)
    return {"results": os.path.join(out_dir, "results.csv"),
            "manifest": os.path.join(out_dir, "manifest.json")}


def sweep_omega(config: ExperimentConfig, omegas=None) -> ResultTable:
    """run_experiment over a monotone Omega grid (log-spaced by default)."""
    if omegas is None:
        omegas = np.geomspace(0.05, 10.0, 7)
    omegas = tuple(sorted(float(w) for w in omegas))
    config = dataclasses.replace(config, rabi_list=omegas, saturation_list=None)
    return run_experiment(config)


def angular_scan(config: ExperimentConfig, theta_grid) -> ResultTable:
    """run_experiment with the direction list replaced by a theta grid.

    Angles anywhere in [0, 2 pi) are accepted; they are canonicalized to
    [0, pi] (2 pi - theta folds back with phi -> phi + pi).
    """
    thetas = tuple(float(t) for t in theta_grid)
    config = dataclasses.replace(config, thetas=thetas)
    return run_experiment(config)


def all_converged(table: ResultTable) -> bool:
    return all(r["error"] == "" and r["converged"] for r in table.rows)

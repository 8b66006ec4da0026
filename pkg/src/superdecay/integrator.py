"""Drive/decay time evolution of the 2N-dimensional mean-field system.

The drive phase and the decay phase are integrated as two separate
initial-value problems so the adaptive stepper never straddles the
instantaneous switch-off.  Both phases use an embedded Dormand-Prince
5(4) pair with the standard quartic dense-output interpolant, so states
land exactly on the requested output grid without clipping steps.

References: Dormand & Prince, J. Comp. Appl. Math. 6, 19 (1980);
Shampine, Math. Comp. 46, 135 (1986) for the continuous extension.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .cloud import Cloud
from .errors import (IntegrationDivergedError, InvalidParameterError,
                     StiffnessError)
from .kernel import (AtomicState, CouplingMatrix, DriveParams, build_coupling,
                     make_packed_rhs, pack_state)

# Bloch-ball slack: 4|beta|^2 + z^2 <= 1 + BLOCH_EPS at every sample.
BLOCH_EPS = 1e-6

# Step-size floor; going below means a stiff close pair, not accuracy.
MIN_STEP = 1e-12

# Dormand-Prince 5(4) tableau.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = [
    np.array([]),
    np.array([1 / 5]),
    np.array([3 / 40, 9 / 40]),
    np.array([44 / 45, -56 / 15, 32 / 9]),
    np.array([19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729]),
    np.array([9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656]),
    np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84]),
]
_B = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
# Difference between the 5th- and embedded 4th-order weights.
_E = np.array([71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200,
               22 / 525, -1 / 40])
# Quartic interpolant coefficients (continuous extension of the pair).
_P = np.array([
    [1.0, -8048581381 / 2820520608, 8663915743 / 2820520608, -12715105075 / 11282082432],
    [0.0, 0.0, 0.0, 0.0],
    [0.0, 131558114200 / 32700410799, -68118460800 / 10900136933, 87487479700 / 32700410799],
    [0.0, -1754552775 / 470086768, 14199869525 / 1410260304, -10690763975 / 1880347072],
    [0.0, 127303824393 / 49829197408, -318862633887 / 49829197408, 701980252875 / 199316789632],
    [0.0, -282668133 / 205662961, 2019193451 / 616988883, -1453857185 / 822651844],
    [0.0, 40617522 / 29380423, -110615467 / 29380423, 69997945 / 29380423],
])


@dataclass(frozen=True)
class Schedule:
    """Drive/decay durations, output grid, and integrator tolerances (1/Gamma)."""

    t_drive: float = 10.0
    t_decay: float = 10.0
    sample_dt: float = 0.01
    abs_tol: float = 1e-8
    rel_tol: float = 1e-8

    def __post_init__(self):
        if self.t_drive < 0:
            raise InvalidParameterError("t_drive must be >= 0")
        if self.t_decay <= 0:
            raise InvalidParameterError("t_decay must be > 0")
        if self.sample_dt <= 0:
            raise InvalidParameterError("sample_dt must be > 0")
        for name, tol in (("abs_tol", self.abs_tol), ("rel_tol", self.rel_tol)):
            if not 0.0 < tol <= 1e-2:
                raise InvalidParameterError(f"{name} must be in (0, 1e-2], got {tol}")


@dataclass
class StepStats:
    """Adaptive-stepper cost counters (sweep cost is observable from these)."""

    n_accepted: int = 0
    n_rejected: int = 0
    n_rhs: int = 0
    min_dt: float = np.inf
    max_dt: float = 0.0
    max_bloch_excess: float = -1.0  # max over samples of 4|b|^2 + z^2 - 1


@dataclass
class PhaseResult:
    times: np.ndarray   # (T,), origin 0 at phase start
    betas: np.ndarray   # (T, N) complex
    zs: np.ndarray      # (T, N) real
    stats: StepStats


@dataclass
class Trajectory:
    """Sampled drive + decay history.

    ``times`` restarts at 0 at the switch-off instant: entries up to
    ``switch_off_index`` belong to the drive phase, the rest to the decay
    phase, whose first sample is bit-identical to the switch-off sample.
    """

    times: np.ndarray
    phases: np.ndarray        # "drive" / "decay" per sample
    betas: np.ndarray
    zs: np.ndarray
    switch_off_index: int
    drive_stats: StepStats | None = None
    decay_stats: StepStats | None = None
    monotone_decay: bool = True
    cloud: Cloud | None = field(default=None, repr=False)

    @property
    def n_atoms(self) -> int:
        return self.betas.shape[1]

    def max_bloch_excess(self) -> float:
        vals = [s.max_bloch_excess for s in (self.drive_stats, self.decay_stats)
                if s is not None]
        return max(vals) if vals else -1.0

    def state_at(self, index: int) -> AtomicState:
        return AtomicState(beta=self.betas[index].copy(), z=self.zs[index].copy())

    def decay_slice(self) -> slice:
        return slice(self.switch_off_index + 1, len(self.times))

    def decay_times(self) -> np.ndarray:
        return self.times[self.decay_slice()]


def _output_grid(t_span: float, sample_dt: float) -> np.ndarray:
    n = max(1, int(round(t_span / sample_dt)))
    return np.linspace(0.0, t_span, n + 1)


def _check_sample(y: np.ndarray, t: float, phase: str) -> float:
    n = y.size // 2
    z = y[n:].real
    excess = np.max(4.0 * np.abs(y[:n]) ** 2 + z * z) - 1.0
    if excess > BLOCH_EPS or np.max(np.abs(z)) > 1.0 + BLOCH_EPS:
        raise IntegrationDivergedError(
            f"Bloch-ball violation {excess:.3e} beyond eps={BLOCH_EPS} "
            f"at {phase} t={t:.6g}")
    return float(excess)


def _initial_step(f, y0, f0, t_span, abs_tol, rel_tol):
    scale = abs_tol + rel_tol * np.abs(y0)
    d0 = np.max(np.abs(y0) / scale)
    d1 = np.max(np.abs(f0) / scale)
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h0 = min(h0, t_span)
    f1 = f(y0 + h0 * f0)
    d2 = np.max(np.abs(f1 - f0) / scale) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, t_span)


def _integrate_packed(f, y0, t_span, schedule, grid, cloud, phase):
    """Adaptive DP5(4) over [0, t_span], sampling exactly on ``grid``.

    Error control: per-component local error bounded by
    abs_tol + rel_tol * |y| in the max norm.  FSAL: the 7th stage of an
    accepted step is the 1st stage of the next.
    """
    atol, rtol = schedule.abs_tol, schedule.rel_tol
    stats = StepStats()
    out = np.empty((grid.size, y0.size), dtype=complex)
    out[0] = y0
    stats.max_bloch_excess = _check_sample(y0, 0.0, phase)
    next_sample = 1

    t = 0.0
    y = y0.copy()
    k = np.empty((7, y0.size), dtype=complex)
    k[0] = f(y)
    stats.n_rhs += 2  # includes the initial-step probe
    h = _initial_step(f, y, k[0], t_span, atol, rtol)

    while t < t_span:
        h = min(h, t_span - t)
        if h < MIN_STEP:
            pair, sep = cloud.closest_pair() if cloud is not None else (None, np.inf)
            raise StiffnessError(t, pair or (-1, -1), sep)

        for i in range(1, 7):
            k[i] = f(y + h * (_A[i] @ k[:i]))
        stats.n_rhs += 6
        y_new = y + h * (_B @ k)
        err_vec = h * (_E @ k)
        scale = atol + rtol * np.maximum(np.abs(y), np.abs(y_new))
        err = np.max(np.abs(err_vec) / scale)

        if not np.isfinite(err):
            stats.n_rejected += 1
            h *= 0.2
            continue
        if err > 1.0:
            stats.n_rejected += 1
            h *= max(0.2, 0.9 * err**-0.2)
            continue

        # accepted: emit every grid point inside (t, t+h]
        t_new = t + h
        is_last = t_new >= t_span
        while next_sample < grid.size and (grid[next_sample] <= t_new or
                                           (is_last and next_sample == grid.size - 1)):
            tau = grid[next_sample]
            if next_sample == grid.size - 1 and is_last:
                y_tau = y_new
            else:
                theta = min(1.0, (tau - t) / h)
                p = np.array([theta, theta**2, theta**3, theta**4])
                y_tau = y + h * ((_P @ p) @ k)
            excess = _check_sample(y_tau, tau, phase)
            stats.max_bloch_excess = max(stats.max_bloch_excess, excess)
            out[next_sample] = y_tau
            next_sample += 1

        stats.n_accepted += 1
        stats.min_dt = min(stats.min_dt, h)
        stats.max_dt = max(stats.max_dt, h)
        t = t_new
        y = y_new
        k[0] = k[6]  # FSAL
        h *= min(5.0, max(0.2, 0.9 * err**-0.2)) if err > 0 else 5.0

    return out, stats


def integrate_phase(initial: AtomicState, coupling: CouplingMatrix,
                    drive: DriveParams, cloud: Cloud, drive_on: bool,
                    t_span: float, schedule: Schedule) -> PhaseResult:
    """Advance one phase (drive on or off) and sample on the uniform grid."""
    y0 = pack_state(initial)
    grid = _output_grid(t_span, schedule.sample_dt)
    phase = "drive" if drive_on else "decay"
    if t_span == 0.0:
        grid = np.array([0.0])
        out, stats = y0[None, :].copy(), StepStats()
    else:
        f = make_packed_rhs(coupling, drive, cloud, drive_on)
        out, stats = _integrate_packed(f, y0, t_span, schedule, grid, cloud, phase)
    n = initial.n_atoms
    return PhaseResult(times=grid, betas=out[:, :n], zs=out[:, n:].real,
                       stats=stats)


def run_drive_decay(cloud: Cloud, drive: DriveParams, schedule: Schedule,
                    coupling: CouplingMatrix | None = None) -> Trajectory:
    """Ground state -> driven steady state -> instantaneous switch-off -> decay.

    The decay phase restarts from the final drive-phase state bit-exactly;
    its time axis is re-origined to the switch-off instant.  The total
    excited population must relax monotonically once the drive is off
    (the model radiates P_el + P_in >= 0); violations are flagged on the
    trajectory and warned about, never silently accepted.
    """
    if coupling is None:
        coupling = build_coupling(cloud)
    drive_res = integrate_phase(AtomicState.ground(cloud.n_atoms), coupling,
                                drive, cloud, True, schedule.t_drive, schedule)
    switch_off = AtomicState(beta=drive_res.betas[-1].copy(),
                             z=drive_res.zs[-1].copy())
    decay_res = integrate_phase(switch_off, coupling, drive, cloud, False,
                                schedule.t_decay, schedule)

    times = np.concatenate([drive_res.times, decay_res.times])
    phases = np.array(["drive"] * drive_res.times.size +
                      ["decay"] * decay_res.times.size)
    betas = np.vstack([drive_res.betas, decay_res.betas])
    zs = np.vstack([drive_res.zs, decay_res.zs])

    ne = 0.5 * np.sum(decay_res.zs + 1.0, axis=1)
    slack = 1e-9 * max(1.0, ne[0])
    monotone = bool(np.all(np.diff(ne) <= slack))
    if not monotone:
        warnings.warn(
            f"excited population increased during decay (N={cloud.n_atoms}, "
            f"rabi={drive.rabi}); flagged on trajectory", RuntimeWarning)

    return Trajectory(times=times, phases=phases, betas=betas, zs=zs,
                      switch_off_index=drive_res.times.size - 1,
                      drive_stats=drive_res.stats, decay_stats=decay_res.stats,
                      monotone_decay=monotone, cloud=cloud)


def integrate_rk4_reference(initial: AtomicState, coupling: CouplingMatrix,
                            drive: DriveParams, cloud: Cloud, drive_on: bool,
                            t_span: float, dt: float) -> AtomicState:
    """Classical fixed-step RK4, the cross-integrator equivalence oracle.

    Deliberately independent of the adaptive path: no error control, no
    interpolation, plain textbook stages.
    """
    f = make_packed_rhs(coupling, drive, cloud, drive_on)
    n_steps = int(round(t_span / dt))
    y = pack_state(initial)
    h = t_span / n_steps
    for _ in range(n_steps):
        k1 = f(y)
        k2 = f(y + 0.5 * h * k1)
        k3 = f(y + 0.5 * h * k2)
        k4 = f(y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    n = initial.n_atoms
    return AtomicState(beta=y[:n], z=y[n:].real)

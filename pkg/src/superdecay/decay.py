"""Early-time collective decay rates from single-parameter exponential fits.

Each post-switch-off series, normalized to its steady-state value, is
fitted to f(t) = exp(-gamma t) over a fixed window by unweighted least
squares on the linear residual.  The log-linear zero-intercept solution
seeds a scalar Newton iteration on the normal equation; at the short
windows used here (T_fit Gamma <= 1) the values stay O(1), so weighting
subtleties between linear and log residuals are second order.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cloud import Cloud
from .errors import FitDomainError, InvalidParameterError
from .integrator import Trajectory
from .observables import (Direction, ObservableSeries, SphereQuadrature,
                          observable_series)

NEWTON_TOL = 1e-10
NEWTON_MAX_ITER = 100


@dataclass(frozen=True)
class DecayFit:
    """One fitted rate, in units of the single-atom rate."""

    gamma: float
    fit_window: float
    rss: float
    n_points: int
    observable_label: str
    converged: bool
    theta: float | None = None
    phi: float | None = None

    def __post_init__(self):
        if self.gamma <= 0:
            raise InvalidParameterError(f"fitted gamma must be > 0, got {self.gamma}")
        if self.n_points < 5:
            raise InvalidParameterError(f"need >= 5 samples, got {self.n_points}")
        if self.rss < 0:
            raise InvalidParameterError("rss must be >= 0")


def normalize_to_switch_off(times: np.ndarray, values: np.ndarray,
                            switch_off_index: int):
    """y(t) = S(t_off + t) / S(t_off) with the time origin moved to t_off."""
    ref = values[switch_off_index]
    if not np.isfinite(ref) or ref <= 0.0:
        raise FitDomainError(f"switch-off value must be positive, got {ref}")
    t = times[switch_off_index:] - times[switch_off_index]
    return t, values[switch_off_index:] / ref


def _rss(t, y, gamma):
    r = y - np.exp(-gamma * t)
    return float(r @ r)


def fit_single_exponential(times: np.ndarray, values: np.ndarray,
                           t_fit: float, label: str = "",
                           theta: float | None = None,
                           phi: float | None = None) -> DecayFit:
    """argmin_gamma sum_i (y_i - exp(-gamma t_i))^2 over t_i <= t_fit."""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    mask = times <= t_fit * (1.0 + 1e-12)
    t, y = times[mask], values[mask]
    if t.size < 5:
        raise InvalidParameterError(
            f"fit window [0, {t_fit}] contains only {t.size} samples (need >= 5)")
    if np.any(y <= 0.0):
        raise FitDomainError(
            f"series {label!r} has non-positive samples inside the fit window")

    # zero-intercept regression of log y on t seeds the Newton iteration
    tt = float(t @ t)
    gamma = -float(t @ np.log(y)) / tt if tt > 0 else 1.0

    converged = False
    for _ in range(NEWTON_MAX_ITER):
        u = np.exp(-gamma * t)
        grad = float((y - u) @ (t * u))           # -dRSS/dgamma / 2
        curv = float((t * t * u) @ (2.0 * u - y))  # d(grad)/dgamma
        if curv == 0.0:
            break
        step = grad / curv
        gamma -= step
        if abs(step) < NEWTON_TOL:
            converged = True
            break

    return DecayFit(gamma=gamma, fit_window=t_fit, rss=_rss(t, y, gamma),
                    n_points=int(t.size), observable_label=label,
                    converged=converged, theta=theta, phi=phi)


# Observables fitted by default: population, coherences, total elastic power.
RATE_OBSERVABLES = ("Ne", "Lambda", "Pel")


def fit_series(series: ObservableSeries, t_fit: float) -> list[DecayFit]:
    """One fit per rate observable plus one per intensity direction."""
    fits = []
    for name in RATE_OBSERVABLES:
        t, y = series.decay_part(name)
        fits.append(fit_single_exponential(t, y, t_fit, label=name))
    for col in series.columns:
        if col.name != "Iel":
            continue
        sel = series.phases == "decay"
        fits.append(fit_single_exponential(
            series.times[sel], col.normalized[sel], t_fit,
            label="Iel", theta=col.theta, phi=col.phi))
    return fits


def decay_rate_table(traj: Trajectory, cloud: Cloud,
                     directions: list[Direction],
                     quad: SphereQuadrature | None = None,
                     t_fit: float = 0.75,
                     cone_sr: float | None = None,
                     n_phi_average: int = 0) -> list[DecayFit]:
    """Rates for {N_e, Lambda, P_el, I_el(theta_i)} from one trajectory,
    all over the same window."""
    series = observable_series(traj, cloud, directions=directions, quad=quad,
                               cone_sr=cone_sr, n_phi_average=n_phi_average,
                               decay_only=True)
    return fit_series(series, t_fit)


def write_fits_csv(fits: list[DecayFit], path) -> None:
    """``observable,theta,phi,gamma,rss,n_points,t_fit,converged`` rows."""
    with open(path, "w") as f:
        f.write("observable,theta,phi,gamma,rss,n_points,t_fit,converged\n")
        for fit in fits:
            th = "" if fit.theta is None else repr(float(fit.theta))
            ph = "" if fit.phi is None else repr(float(fit.phi))
            f.write(f"{fit.observable_label},{th},{ph},{float(fit.gamma)!r},"
                    f"{float(fit.rss)!r},{fit.n_points},"
                    f"{float(fit.fit_window)!r},{fit.converged}\n")

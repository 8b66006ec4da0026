"""Physical observables: populations, coherences, angular and total emission.

All quantities are dimensionless in the engine's Gamma = k_l = 1 units.
The elastic intensity at a detection direction n-hat is

    I_el(theta, phi) = |sum_j beta_j exp(-i n . r_j)|^2

(the proportionality constant is fixed to 1), and the sphere-integrated
elastic power is normalized by 1/(4 pi) so that its diagonal term equals
Lambda = sum |beta|^2 exactly.  That choice makes the inelastic/elastic
power ratio well-defined: P_in = sum (1+z)/2 - |beta|^2 and P_el then
carry the same normalization, and for a single atom P_el = |beta|^2.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .cloud import Cloud
from .errors import InvalidParameterError, NormalizationError
from .kernel import AtomicState
from .integrator import Trajectory

_TWO_PI = 2.0 * np.pi

# Time-chunk length for the (samples x quadrature-nodes) matrix products.
_CHUNK = 256


def canonical_direction(theta: float, phi: float = 0.0) -> tuple[float, float]:
    """Reduce (theta, phi) to theta in [0, pi], phi in [0, 2 pi).

    Polar angles beyond pi denote the same physical direction reflected
    through the axis: theta = 2 pi is the forward direction theta = 0.
    """
    theta = theta % _TWO_PI
    if theta > np.pi:
        theta = _TWO_PI - theta
        phi = phi + np.pi
    return theta, phi % _TWO_PI


@dataclass(frozen=True)
class Direction:
    """Detection direction; canonicalized at construction."""

    theta: float
    phi: float = 0.0

    def __post_init__(self):
        theta, phi = canonical_direction(self.theta, self.phi)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "phi", phi)

    def unit_vector(self) -> np.ndarray:
        st = np.sin(self.theta)
        return np.array([st * np.cos(self.phi), st * np.sin(self.phi),
                         np.cos(self.theta)])

    def label(self) -> str:
        if self.theta == 0.0:
            return "forward"
        if self.theta == np.pi:
            return "backward"
        return f"theta={self.theta:.6g},phi={self.phi:.6g}"


@dataclass(frozen=True)
class SphereQuadrature:
    """Unit-sphere rule: weights sum to 4 pi, exact up to ``order``."""

    nodes: np.ndarray    # (Q, 3) unit vectors
    weights: np.ndarray  # (Q,)
    order: int

    def __post_init__(self):
        nodes = np.ascontiguousarray(self.nodes, dtype=float)
        weights = np.ascontiguousarray(self.weights, dtype=float)
        nodes.flags.writeable = False
        weights.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", weights)
        if np.any(weights <= 0):
            raise InvalidParameterError("quadrature weights must be positive")


def default_sphere_quadrature(n_theta: int = 64, n_phi: int = 128) -> SphereQuadrature:
    """Gauss-Legendre in cos(theta) x uniform trapezoid in phi.

    Exact for spherical harmonics of degree l <= min(2 n_theta - 1,
    n_phi - 1); the periodic trapezoid annihilates every azimuthal order
    0 < |m| < n_phi exactly.  Validated in the tests against the
    closed-form pair sum rule rather than trusted a priori.
    """
    u, w_u = np.polynomial.legendre.leggauss(n_theta)
    phi = _TWO_PI * np.arange(n_phi) / n_phi
    st = np.sqrt(1.0 - u**2)
    nodes = np.empty((n_theta * n_phi, 3))
    nodes[:, 0] = np.outer(st, np.cos(phi)).ravel()
    nodes[:, 1] = np.outer(st, np.sin(phi)).ravel()
    nodes[:, 2] = np.repeat(u, n_phi)
    weights = np.repeat(w_u * (_TWO_PI / n_phi), n_phi)
    return SphereQuadrature(nodes=nodes, weights=weights,
                            order=min(2 * n_theta - 1, n_phi - 1))


def cone_directions(center: Direction, solid_angle_sr: float,
                    n_polar: int = 4, n_azimuth: int = 8):
    """Directions and averaging weights over a spherical cap detector.

    The cap subtends ``solid_angle_sr`` around ``center``; weights sum
    to 1 so the result is a cone *average* of the intensity.
    """
    if solid_angle_sr <= 0 or solid_angle_sr > 4 * np.pi:
        raise InvalidParameterError(
            f"solid angle must be in (0, 4 pi], got {solid_angle_sr}")
    cos_alpha = 1.0 - solid_angle_sr / _TWO_PI
    u, w_u = np.polynomial.legendre.leggauss(n_polar)
    # map GL nodes from [-1, 1] to [cos alpha, 1]
    u = 0.5 * (u + 1.0) * (1.0 - cos_alpha) + cos_alpha
    n_hat = center.unit_vector()
    helper = np.array([0.0, 0.0, 1.0])
    if abs(n_hat[2]) > 0.9:
        helper = np.array([1.0, 0.0, 0.0])
    e1 = np.cross(helper, n_hat)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(n_hat, e1)
    psi = _TWO_PI * np.arange(n_azimuth) / n_azimuth
    st = np.sqrt(1.0 - u**2)
    dirs = (u[:, None, None] * n_hat
            + st[:, None, None] * (np.cos(psi)[None, :, None] * e1
                                   + np.sin(psi)[None, :, None] * e2))
    dirs = dirs.reshape(-1, 3)
    weights = np.repeat(w_u / np.sum(w_u) / n_azimuth, n_azimuth)
    return dirs, weights


def detector_directions(direction: Direction, n_phi_average: int = 0,
                        cone_sr: float | None = None):
    """Direction set and averaging weights for one detector.

    ``n_phi_average > 0`` averages over that many azimuths on the cone
    of polar angle theta (optionally each opened into a solid-angle cone
    via ``cone_sr``).  For isotropic clouds the ensemble-mean intensity
    is phi-independent, so the ring average estimates the same quantity
    as the point detector with far less configuration speckle: a single
    azimuth sees O(k R) speckle cells around the ring.
    """
    if n_phi_average <= 0:
        centers = [direction]
        center_w = np.ones(1)
    else:
        centers = [Direction(direction.theta,
                             direction.phi + _TWO_PI * j / n_phi_average)
                   for j in range(n_phi_average)]
        center_w = np.full(n_phi_average, 1.0 / n_phi_average)
    if cone_sr is None:
        dirs = np.stack([c.unit_vector() for c in centers])
        return dirs, center_w
    all_dirs, all_w = [], []
    for c, cw in zip(centers, center_w):
        d, w = cone_directions(c, cone_sr)
        all_dirs.append(d)
        all_w.append(cw * w)
    return np.vstack(all_dirs), np.concatenate(all_w)


def excited_population(state: AtomicState) -> float:
    """N_e = sum_n (z_n + 1)/2."""
    return float(np.sum(state.z + 1.0) * 0.5)


def coherence_sum(state: AtomicState) -> float:
    """Lambda = sum_n |beta_n|^2."""
    return float(np.sum(np.abs(state.beta) ** 2))


def inelastic_power(state: AtomicState) -> float:
    """P_in = sum_n [(1+z_n)/2 - |beta_n|^2].

    Non-negative inside the Bloch ball: (1+z)/2 - |beta|^2 >= (1+z)^2/4.
    """
    return float(np.sum(0.5 * (state.z + 1.0) - np.abs(state.beta) ** 2))


def _phase_matrix(cloud: Cloud, directions: np.ndarray) -> np.ndarray:
    """exp(-i n_q . r_j), shape (N, Q)."""
    return np.exp(-1j * (cloud.positions @ np.atleast_2d(directions).T))


def elastic_intensity(state: AtomicState, cloud: Cloud, direction: Direction,
                      cone_sr: float | None = None) -> float:
    """|sum_j beta_j exp(-i n . r_j)|^2, optionally cone-averaged."""
    if cone_sr is None:
        amp = state.beta @ _phase_matrix(cloud, direction.unit_vector()[None, :])
        return float(np.abs(amp[0]) ** 2)
    dirs, weights = cone_directions(direction, cone_sr)
    amps = state.beta @ _phase_matrix(cloud, dirs)
    return float(weights @ np.abs(amps) ** 2)


def elastic_power(state: AtomicState, cloud: Cloud,
                  quad: SphereQuadrature) -> float:
    """P_el = (1/4 pi) sum_q w_q I_el(n_q)."""
    amps = state.beta @ _phase_matrix(cloud, quad.nodes)
    return float((quad.weights @ np.abs(amps) ** 2) / (4.0 * np.pi))


def pair_sum_rule(state: AtomicState, cloud: Cloud) -> float:
    """Closed-form sphere integral of the elastic intensity.

    (1/4 pi) * integral of exp(i n . r_ij) over the sphere is
    sin(r_ij)/r_ij, so P_el = Lambda + sum_{i != j} Re(beta_i* beta_j)
    sinc(r_ij) exactly.  O(N^2); used as the quadrature oracle.
    """
    m = np.sinc(cloud.pairwise_distances() / np.pi)
    return float(np.real(np.conj(state.beta) @ (m @ state.beta)))


@dataclass
class SeriesColumn:
    name: str                     # Ne, Lambda, Pin, Pel, ratio, Iel
    values: np.ndarray
    normalized: np.ndarray | None = None
    theta: float | None = None
    phi: float | None = None


@dataclass
class ObservableSeries:
    """Per-sample observable table for one trajectory."""

    times: np.ndarray
    phases: np.ndarray
    switch_off_index: int
    columns: list[SeriesColumn] = field(default_factory=list)

    def get(self, name: str, theta: float | None = None) -> SeriesColumn:
        for col in self.columns:
            if col.name == name and (theta is None or col.theta == theta):
                return col
        raise KeyError(f"no series column {name!r} (theta={theta})")

    def decay_part(self, name: str, theta: float | None = None):
        """(decay times, normalized decay values) including the t=0 sample."""
        col = self.get(name, theta)
        sel = self.phases == "decay"
        return self.times[sel], col.normalized[sel]


def _batched_intensity(betas: np.ndarray, cloud: Cloud,
                       directions: np.ndarray, weights=None) -> np.ndarray:
    """Per-sample weighted intensity sum over a direction set."""
    e = _phase_matrix(cloud, directions)
    out = np.empty(betas.shape[0])
    for lo in range(0, betas.shape[0], _CHUNK):
        amps = betas[lo:lo + _CHUNK] @ e
        i_el = np.abs(amps) ** 2
        out[lo:lo + _CHUNK] = i_el[:, 0] if weights is None else i_el @ weights
    return out


def observable_series(traj: Trajectory, cloud: Cloud,
                      directions: list[Direction] | None = None,
                      quad: SphereQuadrature | None = None,
                      cone_sr: float | None = None,
                      n_phi_average: int = 0,
                      decay_only: bool = False) -> ObservableSeries:
    """Evaluate N_e, Lambda, P_in, P_el, P_in/P_el, and I_el(direction)
    on the trajectory grid, each also normalized to its switch-off value.

    ``decay_only`` restricts the table to the decay phase (whose first
    sample *is* the switch-off state), which is all the rate extraction
    needs and skips the drive-phase angular work.  ``cone_sr`` and
    ``n_phi_average`` select the detector model per direction (see
    :func:`detector_directions`); the default is point evaluation.
    """
    if traj.times.size == 0:
        raise InvalidParameterError("empty trajectory")
    directions = directions or []
    quad = quad or default_sphere_quadrature()

    if decay_only:
        sel = slice(traj.switch_off_index + 1, len(traj.times))
        times, phases = traj.times[sel], traj.phases[sel]
        betas, zs = traj.betas[sel], traj.zs[sel]
        switch_off = 0
    else:
        times, phases = traj.times, traj.phases
        betas, zs = traj.betas, traj.zs
        switch_off = traj.switch_off_index

    ne = 0.5 * np.sum(zs + 1.0, axis=1)
    lam = np.sum(np.abs(betas) ** 2, axis=1)
    pin = ne - lam
    pel = _batched_intensity(betas, cloud, quad.nodes,
                             quad.weights / (4.0 * np.pi))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(pel > 0.0, pin / np.where(pel > 0.0, pel, 1.0), np.nan)

    columns = [
        SeriesColumn("Ne", ne), SeriesColumn("Lambda", lam),
        SeriesColumn("Pin", pin), SeriesColumn("Pel", pel),
        SeriesColumn("ratio", ratio),
    ]
    for d in directions:
        dirs, w = detector_directions(d, n_phi_average, cone_sr)
        vals = _batched_intensity(betas, cloud, dirs,
                                  None if (w.size == 1 and cone_sr is None
                                           and n_phi_average <= 0) else w)
        columns.append(SeriesColumn("Iel", vals, theta=d.theta, phi=d.phi))

    for col in columns:
        ref = col.values[switch_off]
        if not np.isfinite(ref) or ref <= 0.0:
            raise NormalizationError(
                f"series {col.name!r} has non-positive switch-off value {ref}")
        col.normalized = col.values / ref

    return ObservableSeries(times=times, phases=phases,
                            switch_off_index=switch_off, columns=columns)


def series_csv_text(series: ObservableSeries) -> str:
    """``t,phase,observable,theta,phi,value,value_normalized`` rows."""
    lines = ["t,phase,observable,theta,phi,value,value_normalized"]
    for col in series.columns:
        th = "" if col.theta is None else repr(float(col.theta))
        ph = "" if col.phi is None else repr(float(col.phi))
        for i in range(series.times.size):
            lines.append(f"{float(series.times[i])!r},{series.phases[i]},"
                         f"{col.name},{th},{ph},{float(col.values[i])!r},"
                         f"{float(col.normalized[i])!r}")
    return "\n".join(lines) + "\n"


def write_series_csv(series: ObservableSeries, path) -> None:
    with open(path, "w") as f:
        f.write(series_csv_text(series))

"""Scalar-kernel coupling and the nonlinear mean-field equations of motion.

The model evolves, per atom, a coherence beta_n = <sigma_n^-> and an
inversion z_n = 2 <sigma_n^z>:

    d beta_n / dt = (i Delta - 1/2) beta_n + i W_n z_n
    d z_n    / dt = -(1 + z_n) + 4 Im(conj(beta_n) W_n)

with the local field

    W_n = d_n - i sum_{m != n} g[n, m] beta_m,
    g[m, n] = exp(i k r_mn) / (2 i k r_mn)      (Gamma = 1, k_l = 1)

and d_n the drive amplitude at atom n (zero once the drive is off).

Sign convention: the inversion pump term enters with +4 Im(beta* W).
With the opposite sign the driven single atom relaxes to z = -1/(1 - s),
which escapes the Bloch ball for s < 1; the plus sign reproduces the
textbook saturation z = -1/(1 + s).  ``single_atom_steady_state`` is the
oracle that pins this down and is enforced in the tests.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .cloud import Cloud
from .errors import ContractViolationError, InvalidParameterError


@dataclass(frozen=True)
class DriveParams:
    """Monochromatic drive, in units of Gamma.

    The plane-wave phase e^{i k_l z_n} along +z is applied to the drive
    term by default: it imprints the timed phase responsible for the
    forward/backward structure of the emitted light.  ``beam_waist``
    (units of 1/k_l) optionally applies a Gaussian amplitude envelope
    exp(-(x^2+y^2)/w^2) to the drive only, never to the coupling.
    """

    rabi: float
    detuning: float = 0.0
    drive_phase_enabled: bool = True
    beam_waist: float | None = None

    def __post_init__(self):
        if self.rabi < 0:
            raise InvalidParameterError(f"rabi must be >= 0, got {self.rabi}")
        if self.beam_waist is not None and self.beam_waist <= 0:
            raise InvalidParameterError(
                f"beam_waist must be > 0, got {self.beam_waist}")


@dataclass(frozen=True)
class CouplingMatrix:
    """Dense N x N scalar coupling in Gamma units, zero diagonal."""

    g: np.ndarray

    def __post_init__(self):
        g = np.ascontiguousarray(self.g, dtype=complex)
        g.flags.writeable = False
        object.__setattr__(self, "g", g)

    @property
    def n_atoms(self) -> int:
        return self.g.shape[0]


@dataclass
class AtomicState:
    """Per-atom coherences (complex) and inversions (real)."""

    beta: np.ndarray
    z: np.ndarray

    def __post_init__(self):
        self.beta = np.asarray(self.beta, dtype=complex).reshape(-1)
        self.z = np.asarray(self.z, dtype=float).reshape(-1)
        if self.beta.shape != self.z.shape:
            raise ContractViolationError(
                f"beta and z lengths differ: {self.beta.shape} vs {self.z.shape}")

    @classmethod
    def ground(cls, n_atoms: int) -> "AtomicState":
        return cls(beta=np.zeros(n_atoms, dtype=complex),
                   z=np.full(n_atoms, -1.0))

    @property
    def n_atoms(self) -> int:
        return self.beta.size

    def bloch_ball_excess(self) -> float:
        """max over atoms of 4|beta|^2 + z^2 - 1 (<= 0 inside the ball)."""
        return float(np.max(4.0 * np.abs(self.beta) ** 2 + self.z**2) - 1.0)


def build_coupling(cloud: Cloud) -> CouplingMatrix:
    """g[m, n] = exp(i k r_mn) / (2 i k r_mn), zero diagonal.

    Symmetric (depends on the scalar distance only) with
    |g| = 1/(2 k r); Re(g) -> 1/2 as k r -> 0, the single-atom decay
    coefficient.  Positive distances are guaranteed by the Cloud
    pair-separation invariant.
    """
    r = cloud.pairwise_distances().copy()
    np.fill_diagonal(r, 1.0)  # placeholder, diagonal zeroed below
    g = np.exp(1j * r) / (2j * r)
    np.fill_diagonal(g, 0.0)
    return CouplingMatrix(g=g)


def drive_amplitudes(drive: DriveParams, cloud: Cloud) -> np.ndarray:
    """Per-atom complex drive d_n = (Omega/2) * chi_n.

    chi_n carries the plane-wave phase e^{i z_n} when enabled and the
    Gaussian envelope exp(-(x^2+y^2)/w^2) when a waist is set.
    """
    chi = np.ones(cloud.n_atoms, dtype=complex)
    if drive.drive_phase_enabled:
        chi *= np.exp(1j * cloud.positions[:, 2])
    if drive.beam_waist is not None:
        rho2 = cloud.positions[:, 0] ** 2 + cloud.positions[:, 1] ** 2
        chi *= np.exp(-rho2 / drive.beam_waist**2)
    return 0.5 * drive.rabi * chi


def local_field(state: AtomicState, coupling: CouplingMatrix,
                drive: DriveParams, cloud: Cloud, drive_on: bool) -> np.ndarray:
    """W_n = d_n - i sum_{m != n} g[n, m] beta_m (d_n = 0 when drive_on=False)."""
    if state.n_atoms != coupling.n_atoms:
        raise ContractViolationError(
            f"state has {state.n_atoms} atoms, coupling {coupling.n_atoms}")
    w = -1j * (coupling.g @ state.beta)
    if drive_on:
        w += drive_amplitudes(drive, cloud)
    return w


def rhs(state: AtomicState, coupling: CouplingMatrix, drive: DriveParams,
        cloud: Cloud, drive_on: bool) -> AtomicState:
    """Time derivative of the state (contract form; see module docstring)."""
    w = local_field(state, coupling, drive, cloud, drive_on)
    dbeta = (1j * drive.detuning - 0.5) * state.beta + 1j * w * state.z
    dz = -(1.0 + state.z) + 4.0 * np.imag(np.conj(state.beta) * w)
    return AtomicState(beta=dbeta, z=dz)


def make_packed_rhs(coupling: CouplingMatrix, drive: DriveParams,
                    cloud: Cloud, drive_on: bool):
    """Hot-loop rhs on a packed complex vector y = [beta, z].

    The z block is stored complex with identically zero imaginary part
    (its derivative is real), which keeps the integrator generic.  The
    coupling sum is one dense matrix-vector product, the performance-
    critical kernel of the whole engine.
    """
    g = coupling.g
    n = coupling.n_atoms
    d = drive_amplitudes(drive, cloud) if drive_on else None
    ia = 1j * drive.detuning - 0.5

    def f(y: np.ndarray) -> np.ndarray:
        beta = y[:n]
        z = y[n:].real
        w = -1j * (g @ beta)
        if d is not None:
            w = w + d
        out = np.empty_like(y)
        out[:n] = ia * beta + 1j * w * z
        out[n:] = -(1.0 + z) + 4.0 * np.imag(np.conj(beta) * w)
        return out

    return f


def pack_state(state: AtomicState) -> np.ndarray:
    return np.concatenate([state.beta, state.z.astype(complex)])


def unpack_state(y: np.ndarray) -> AtomicState:
    n = y.size // 2
    return AtomicState(beta=y[:n].copy(), z=y[n:].real.copy())


def single_atom_steady_state(rabi: float, detuning: float) -> tuple[complex, float]:
    """Analytic driven-atom fixed point (the sign-convention oracle).

    z_ss = -1/(1+s) with s = (Omega^2/2)/(Delta^2 + 1/4), and
    beta_ss = (Omega/2) z_ss (i/2 - Delta)/(Delta^2 + 1/4).  The excited
    population (1+z_ss)/2 saturates to 1/2 as Omega -> infinity.
    """
    if rabi < 0:
        raise InvalidParameterError(f"rabi must be >= 0, got {rabi}")
    denom = detuning**2 + 0.25
    s = 0.5 * rabi**2 / denom
    z_ss = -1.0 / (1.0 + s)
    beta_ss = 0.5 * rabi * z_ss * (0.5j - detuning) / denom
    return beta_ss, z_ss


def rabi_from_saturation(s: float, detuning: float) -> float:
    """Omega/Gamma = sqrt(s/2 + (Delta/Gamma)^2), verbatim convention.

    Tagged "paper convention" in run metadata wherever it is used; the
    engine's primary input is always Omega itself.
    """
    if s < 0:
        raise InvalidParameterError(f"saturation parameter must be >= 0, got {s}")
    return float(np.sqrt(0.5 * s + detuning**2))

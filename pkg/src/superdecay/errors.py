"""Exception types raised by the simulation engine."""


class SuperdecayError(Exception):
    """Base class for all engine errors."""


class InvalidParameterError(SuperdecayError, ValueError):
    """A physical or numerical parameter is out of its allowed range."""


class GeometryInfeasibleError(SuperdecayError, RuntimeError):
    """Cloud too dense: the pair-separation bound cannot be satisfied."""


class ContractViolationError(SuperdecayError, ValueError):
    """Mismatched array dimensions between state, coupling, and cloud."""


class StiffnessError(SuperdecayError, RuntimeError):
    """Adaptive step size underflowed (dt < 1e-12).

    Carries the time of failure and the closest atom pair, which is the
    usual culprit: the 1/(k r) kernel makes near pairs arbitrarily stiff.
    """

    def __init__(self, t, pair, separation):
        self.t = t
        self.pair = pair
        self.separation = separation
        super().__init__(
            f"step size underflow at t={t:.6g}: closest atoms "
            f"{pair[0]} and {pair[1]} at k_l r = {separation:.6g}"
        )


class IntegrationDivergedError(SuperdecayError, RuntimeError):
    """A sampled state violated the Bloch-ball bound beyond tolerance."""


class NormalizationError(SuperdecayError, ValueError):
    """A series cannot be normalized: its switch-off value is not positive."""


class FitDomainError(SuperdecayError, ValueError):
    """Decay-fit input contains non-positive samples inside the fit window."""


class ConfigError(SuperdecayError, ValueError):
    """Malformed experiment configuration (unknown key, bad type, bad value)."""

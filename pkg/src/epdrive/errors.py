"""Exception types shared across the package."""


class EPDriveError(Exception):
    """Base class for all package-specific errors."""


class AtExceptionalPoint(EPDriveError):
    """The discriminant |J|^2 + E^2 vanishes; no eigenbasis exists to report."""


class AmbiguousBranch(EPDriveError):
    """Both branch-continuation candidates are equidistant from the previous angle."""


class DegenerateRatio(EPDriveError):
    """Apollonius distance ratio r = 1: the circle degenerates to a line."""


class HyperbolicSingularity(EPDriveError):
    """alpha_I = 0: the (Delta, |J|) reconstruction formulas diverge."""


class PathTooCloseToEP(EPDriveError):
    """A control path approaches an exceptional point closer than the safety margin."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class SamplingTooCoarse(EPDriveError):
    """Consecutive tracked angles differ by >= pi/2; refine the sampling grid."""


class StepTooLarge(EPDriveError):
    """dt * max||H|| exceeds the integrator accuracy guard."""


class NonFiniteState(EPDriveError):
    """The propagated state overflowed or became non-finite."""


class DegenerateGap(EPDriveError):
    """|lambda_n - lambda_m| fell below tolerance inside an adiabaticity evaluation."""


class NotADensityMatrix(EPDriveError):
    """Input fails the Hermitian / unit-trace / positivity checks."""


class ConfigError(EPDriveError):
    """Invalid experiment configuration; message carries the offending field path."""

"""Exception types raised across the package."""


class ChmetricError(Exception):
    """Base class for all package errors."""


class ZeroSolution(ChmetricError):
    """The data carry no energy, so the relabelled coordinates are undefined."""


class ZeroEnergy(ChmetricError):
    """Rescaling needs a strictly positive energy."""


class TargetOutOfRange(ChmetricError):
    """A pseudo-inverse target lies outside the sampled range."""


class StepRejected(ChmetricError):
    """A time step produced a non-monotone Lagrangian labelling."""


class DegeneratePressure(ChmetricError):
    """The square-root pressure vanished where a division by it is needed."""


class CflViolation(ChmetricError):
    """The transport velocity moves a node further than half a cell."""


class GridMismatch(ChmetricError):
    """Two discrete fields do not live on the same grid."""


class UnknownFigure(ChmetricError):
    """The requested figure id is not in the catalog."""


class BetaUndefinedAtBreaking(ChmetricError):
    """The inner peakon coefficient blows up at the collision time."""


class EtaOutOfRange(ChmetricError):
    """The relabelled coordinate lies outside the open interval (0, 2C)."""

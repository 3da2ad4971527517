"""Exceptions raised by powersurf."""


class PowerSurfError(ValueError):
    """Base class for contract violations in powersurf."""


class OffSurfaceError(PowerSurfError):
    """A point expected on the surface violates a constraint."""


class SingularPointError(PowerSurfError):
    """The point is a singular point of the surface (fewer than three coordinate values)."""


class RankDeficientError(PowerSurfError):
    """The constraint Jacobian is numerically rank deficient."""


class DegenerateRootError(PowerSurfError):
    """Two roots of the reduced cubic coincide within tolerance."""


class WrongRegimeError(PowerSurfError):
    """The operation is not defined in the regime of the given C."""


class DegenerateRegimeError(PowerSurfError):
    """The surface is empty or zero-dimensional, so it cannot be sampled."""


class InconsistentTopologyError(PowerSurfError):
    """Euler characteristic and component count do not describe a closed orientable surface."""

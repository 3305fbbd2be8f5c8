"""Exception types shared across the package."""


class PolydescentError(Exception):
    """Base class for all package-specific failures."""


class EvaluationDomainError(PolydescentError):
    """Evaluation requested at a point excluded from the map's domain."""


class StalledCorrection(PolydescentError):
    """Newton correction kept failing down to the minimum step size."""


class LeftDomain(PolydescentError):
    """A traced path left the target's allowed region."""


class UnresolvedEdge(PolydescentError):
    """A branch path terminated away from every root and critical point."""


class NearCriticalValue(PolydescentError):
    """Requested sublevel threshold is too close to a critical value."""

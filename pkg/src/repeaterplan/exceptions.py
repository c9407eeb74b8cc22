"""Exception hierarchy shared by every planning stage."""


class PlanError(Exception):
    """Base class for all planning failures."""


class InvalidParameterError(PlanError, ValueError):
    pass


class BandViolationError(PlanError):
    """A carrier (or carrier + duplex offset) leaves the licensed band."""


class InfeasibleError(PlanError):
    """No plan satisfies the constraints.

    ``constraint`` names the binding constraint (``"tones"``, ``"channels"``,
    ``"coverage"``, ``"partition"``, ``"capacity"``, ``"groups"``).
    """

    def __init__(self, message, constraint="unknown"):
        super().__init__(message)
        self.constraint = constraint


class ToneExhaustionError(InfeasibleError):
    def __init__(self, message):
        super().__init__(message, constraint="tones")


class CapacityError(InfeasibleError):
    def __init__(self, message, shortfall=0):
        super().__init__(message, constraint="capacity")
        self.shortfall = shortfall


class ReuseViolationError(PlanError):
    def __init__(self, message, pairs=()):
        super().__init__(message)
        self.pairs = list(pairs)


class NoRouteError(PlanError):
    def __init__(self, message, excluded=()):
        super().__init__(message)
        self.excluded = sorted(excluded)


class UnknownUserError(PlanError, KeyError):
    def __str__(self):
        return str(self.args[0]) if self.args else "unknown user"

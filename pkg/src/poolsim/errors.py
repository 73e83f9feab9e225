"""Exception types shared across the simulator."""


class PoolSimError(Exception):
    """Base class for all simulator errors."""


class Invalid:
    """A single config-invariant violation: which field and why."""

    __slots__ = ("field", "reason")

    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason

    def __repr__(self):
        return f"Invalid({self.field!r}, {self.reason!r})"

    def __str__(self):
        return f"{self.field}: {self.reason}"


class ConfigError(PoolSimError):
    """Raised by config validation; carries every violation, not just the first."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(str(v) for v in self.violations))


class UnsupportedBandPlan(PoolSimError):
    pass


class ZeroNodes(PoolSimError):
    pass


class CoincidentPoints(PoolSimError):
    pass


class StateOutage(PoolSimError):
    pass


class EmptyClusters(PoolSimError):
    pass


class NotScheduled(PoolSimError):
    pass


class EmptySamples(PoolSimError):
    pass


class DegenerateBaseline(PoolSimError):
    pass


class TooFewDrops(PoolSimError):
    pass


class MissingBaseline(PoolSimError):
    pass

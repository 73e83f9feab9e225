"""Error types for the figure renderer."""


class PoolFigError(Exception):
    """Base class for renderer errors."""


class SchemaMismatch(PoolFigError):
    """The input CSV is empty or its header does not match the contract."""


class MissingCell(PoolFigError):
    """A figure matrix cell has no row in the input CSV."""

    def __init__(self, scenario: str, percentile: int):
        self.scenario = scenario
        self.percentile = percentile
        super().__init__(
            f"missing cell: scenario {scenario!r}, percentile {percentile}")

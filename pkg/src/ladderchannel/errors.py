"""Exception hierarchy."""


class LadderChannelError(ValueError):
    """Base class for all errors raised by this package."""


class DimensionError(LadderChannelError):
    """Raised for invalid or mismatched dimensions."""


class LabelError(LadderChannelError):
    """Raised for a (j, m) label that does not exist for the given ranks."""


class StateError(LadderChannelError):
    """Raised when probabilities or a density matrix fail validation."""


class DomainError(LadderChannelError):
    """Raised when a closed-form expression is evaluated outside its domain."""


class UndefinedConditionalError(LadderChannelError):
    """Raised when conditioning on an outcome of zero probability."""


class UnderdeterminedError(LadderChannelError):
    """Raised when measurement records do not cover the plan.

    Attributes:
        map_rank: numerical rank of the measurement map built from the
            records that were supplied.
    """

    def __init__(self, message, map_rank=0):
        super().__init__(message)
        self.map_rank = map_rank

"""Exceptions raised when a mathematical precondition fails."""


class PreconditionError(ValueError):
    """Input is well formed but violates a hypothesis of the operation."""


class NotClosedError(PreconditionError):
    """The input form is not closed on the domain; ``witness`` names a cell."""

    def __init__(self, message: str, witness: str):
        super().__init__(message)
        self.witness = witness

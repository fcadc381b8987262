"""Exceptions shared across the package."""


class InputError(ValueError):
    """Malformed or out-of-contract input (CLI exit code 2)."""


class HypothesisError(InputError):
    """A check was refused because the statement's hypothesis fails on the input.

    Carries an optional payload describing the offending data (for example a
    commutativity counterexample).
    """

    def __init__(self, message, payload=None):
        super().__init__(message)
        self.payload = payload

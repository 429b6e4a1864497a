"""
Exception hierarchy for the simulator.
"""


class BanditError(Exception):
    """Base class for every error raised by this package."""


class InputError(BanditError, ValueError):
    """An argument is outside its documented range."""


class ValidationError(BanditError, ValueError):
    """A value violates the invariant of the type being constructed."""


class ContractError(BanditError):
    """A documented precondition of the algorithm was broken by the caller."""


class ConfigurationError(BanditError):
    """Experiment or check configuration is invalid."""


class SchemaMismatchError(ConfigurationError):
    """Trace files were written under a different schema version."""

    def __init__(self, found, expected):
        super().__init__(f"trace schema version {found} does not match expected version {expected}")
        self.found = found
        self.expected = expected

    def __reduce__(self):
        return type(self), (self.found, self.expected)


class OracleBudgetError(AssertionError, BanditError):
    """A round issued a number of oracle calls other than its budget."""

    def __init__(self, round_index: int, calls: int, budget: int):
        super().__init__(f"round {round_index} issued {calls} oracle calls, expected {budget}")
        self.round_index = round_index
        self.calls = calls
        self.budget = budget

    def __reduce__(self):
        return type(self), (self.round_index, self.calls, self.budget)

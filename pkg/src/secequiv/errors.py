"""Exception hierarchy shared by every module."""


class SecEquivError(Exception):
    """Base class for all library errors."""


class ValidationError(SecEquivError):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations) or "invalid instance")


class CycleError(SecEquivError):
    pass


class ArityError(SecEquivError):
    pass


class SymbolRangeError(SecEquivError):
    pass


class CodeMismatchError(SecEquivError):
    pass


class SizeBudgetError(SecEquivError):
    pass


class UnknownVariableError(SecEquivError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class PreconditionError(SecEquivError):
    def __init__(self, reason, entity=None):
        self.reason = reason
        self.entity = entity
        msg = reason if entity is None else f"{reason}: {entity}"
        super().__init__(msg)


class DecodabilityPreconditionError(PreconditionError):
    pass

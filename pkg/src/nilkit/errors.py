"""Exception hierarchy shared by every nilkit module."""


class NilkitError(Exception):
    """Base class for all library errors."""


class MalformedCommutatorError(NilkitError, ValueError):
    pass


class InvalidParameterError(NilkitError, ValueError):
    pass


class PreconditionError(NilkitError, ValueError):
    """An input violates a hypothesis the operation relies on."""


class MissingAssignmentError(NilkitError, KeyError):
    pass


class UnsupportedBackendError(NilkitError, TypeError):
    pass


class ResourceLimitError(NilkitError, RuntimeError):
    """A configured step, size or budget cap was exceeded."""


class InconsistencyError(NilkitError, RuntimeError):
    pass


class WordSyntaxError(NilkitError, ValueError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column

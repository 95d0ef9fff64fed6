"""Error types.  Each carries a machine-readable ``kind``."""


class FimodError(Exception):
    kind = "error"
    exit_code = 1

    def __init__(self, message, **detail):
        super().__init__(message)
        self.detail = detail

    def to_json(self):
        return {"error": self.kind, "message": str(self), "detail": self.detail}


class ParseError(FimodError):
    kind = "parse"
    exit_code = 2


class ValidationError(FimodError):
    kind = "validation"
    exit_code = 3


class TruncationExceeded(FimodError):
    kind = "truncation-exceeded"
    exit_code = 4


class CapabilityError(FimodError):
    kind = "capability"
    exit_code = 5


class PluginContractError(FimodError):
    kind = "plugin-contract"
    exit_code = 6


class NotFactorable(FimodError):
    """A requested lift or descent does not exist."""

    kind = "not-factorable"
    exit_code = 7

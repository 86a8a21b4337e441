"""Exception hierarchy shared by every module in the package."""


class ThorpError(Exception):
    """Base class for all package errors."""


class DomainError(ThorpError, ValueError):
    """An argument lies outside the domain of the operation."""


class CapacityError(ThorpError):
    """An exact computation would exceed its hard size limit."""

    def __init__(self, message: str, bound: str):
        super().__init__(f"{message} (limit: {bound})")
        self.bound = bound


class OracleDomainError(DomainError, KeyError):
    """A tabular oracle was queried outside its enumerated table."""

    def __str__(self) -> str:  # KeyError would repr() the message
        return self.args[0] if self.args else ""


class UndefinedRatioError(DomainError, ZeroDivisionError):
    """A ratio has a zero denominator (e.g. entropy of the uniform law)."""

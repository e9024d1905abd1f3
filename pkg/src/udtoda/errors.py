"""Exception hierarchy shared by every module."""


class UDTodaError(Exception):
    pass


class PrecisionExhausted(UDTodaError):
    """A jet lost every retained term; zero cannot be certified."""


class JetDivisionByZero(UDTodaError, ZeroDivisionError):
    pass


class DegenerateInput(UDTodaError):
    pass


class NotSmooth(UDTodaError):
    def __init__(self, message, certificate=None):
        super().__init__(message)
        self.certificate = certificate


class SingularBasis(UDTodaError):
    pass


class InvalidPath(UDTodaError):
    pass


class PhaseSpaceViolation(UDTodaError):
    pass


class GenericityFailure(UDTodaError):
    pass


class InvalidBeta(UDTodaError):
    pass


class AmbiguousArgmin(UDTodaError):
    def __init__(self, message, argument=None, argmins=None):
        super().__init__(message)
        self.argument = argument
        self.argmins = argmins


class SignPatternInvalid(UDTodaError):
    pass


class IdentityViolation(UDTodaError):
    def __init__(self, message, witness=None):
        super().__init__(message)
        self.witness = witness

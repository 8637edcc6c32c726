"""Exception hierarchy."""


class ReticulaError(Exception):
    """Base class for every error raised by the package."""


class ValidationError(ReticulaError):
    """An algebra failed axiom verification.

    ``law`` names the violated law and ``witness`` holds the offending
    element indices (labels when available).
    """

    def __init__(self, message, law=None, witness=None):
        super().__init__(message)
        self.law = law
        self.witness = witness


class LatticeAxiomViolation(ValidationError):
    pass


class MonoidAxiomViolation(ValidationError):
    pass


class ResiduationViolation(ValidationError):
    pass


class OrderInconsistency(ValidationError):
    pass


class CapExceeded(ReticulaError):
    pass


class ProductTooLarge(CapExceeded):
    pass


class SearchCapExceeded(CapExceeded):
    pass


class InvalidSize(ReticulaError):
    pass


class NotDirected(ReticulaError):
    pass


class CongruenceFailure(ReticulaError):
    pass


class HostMismatch(ReticulaError):
    pass


class EmptySet(ReticulaError):
    pass


class NotAReticulation(ReticulaError):
    pass


class NotAMorphism(ReticulaError):
    pass


class NotRefinement(ReticulaError):
    pass


class HullNotBuilt(ReticulaError):
    pass


class UnknownKey(ReticulaError):
    pass


class ParseError(ReticulaError):
    def __init__(self, message, line=None, column=None):
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column

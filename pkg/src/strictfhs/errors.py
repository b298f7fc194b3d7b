"""Exception hierarchy shared by every module of the package."""


class FHSError(Exception):
    """Base class for all errors raised by strictfhs."""


class InvalidInput(FHSError, ValueError):
    """Parameters or data violate a documented precondition."""


class InternalError(FHSError, RuntimeError):
    """A construction produced something its own verifier rejects."""


# galois
class NonPrimeCharacteristic(InvalidInput):
    pass


class RangeExceeded(InvalidInput):
    pass


class NotASubfield(InvalidInput):
    pass


class LogOfZero(InvalidInput):
    pass


# cyclic
class ModulusMismatch(InvalidInput):
    pass


class NotCoprime(InvalidInput):
    pass


class BadDivisor(InvalidInput):
    pass


# packing
class SizeMismatch(InvalidInput):
    pass


class NotPartitionType(InvalidInput):
    pass


class FormatError(InvalidInput):
    """A packing or FHS text file could not be parsed or is inconsistent."""


# cdm
class PreconditionViolated(InvalidInput):
    pass


# direct
class ParamViolation(InvalidInput):
    pass


class RepresentativeGapMismatch(InvalidInput):
    pass


class ConstructionFailed(InternalError):
    pass


class InternalVerificationFailed(InternalError):
    pass


# recursive
class StructureMismatch(InvalidInput):
    pass


class RepresentativeViolation(InvalidInput):
    pass


class CDMTooSmall(InvalidInput):
    pass


class GcdViolation(InvalidInput):
    pass


class FieldTooSmall(InvalidInput):
    pass


class UncertifiedInput(InvalidInput):
    pass


class DiFloorViolated(InternalError):
    pass


# fhs
class WindowOutOfRange(InvalidInput):
    pass


class DegenerateParameters(InvalidInput):
    pass


class InternalInconsistency(InternalError):
    """The window scan and the d_i characterization disagree."""


# pipeline
class UnknownFamily(InvalidInput):
    pass


class ValidationFailed(InvalidInput):
    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))

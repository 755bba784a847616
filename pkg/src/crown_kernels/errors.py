"""Exception types. Each carries a stable ``code`` used by the CLI."""


class CrownKernelsError(Exception):
    code = "Error"

    def __init__(self, message: str = ""):
        super().__init__(message or self.code)


class RankMismatch(CrownKernelsError):
    code = "RankMismatch"


class IndexOutOfRange(CrownKernelsError):
    code = "IndexOutOfRange"


class NonTubeSystem(CrownKernelsError):
    code = "NonTubeSystem"


class SingularDecomposition(CrownKernelsError):
    code = "SingularDecomposition"


class PoleAtPoint(CrownKernelsError):
    code = "PoleAtPoint"


class KernelSingularity(CrownKernelsError):
    code = "KernelSingularity"


class OutOfDomain(CrownKernelsError):
    code = "OutOfDomain"


class NonTraceless(CrownKernelsError):
    code = "NonTraceless"


class DeterminantDrift(CrownKernelsError):
    code = "DeterminantDrift"


class UnknownTriple(CrownKernelsError):
    code = "UnknownTriple"


class OracleMismatch(CrownKernelsError):
    code = "OracleMismatch"


class CompressionViolation(CrownKernelsError):
    code = "CompressionViolation"


class OnSingularSet(CrownKernelsError):
    code = "OnSingularSet"


class InvalidSpec(CrownKernelsError):
    code = "InvalidSpec"


class InvalidInput(CrownKernelsError, ValueError):
    code = "InvalidInput"

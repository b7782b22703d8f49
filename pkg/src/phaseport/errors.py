"""Exception and warning types shared across the package."""


class PhaseportError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(PhaseportError):
    """Operands have incompatible shapes or dimensions."""


class NotHermitian(PhaseportError):
    """A matrix required to be Hermitian is too far from its adjoint."""


class NotUnitary(PhaseportError):
    """A matrix required to be unitary fails the isometry check."""


class NotParseval(PhaseportError):
    """An operator family required to have frame operator I does not."""


class NotRankOne(PhaseportError):
    """A Kraus operator required to be rank one has higher numerical rank."""


class NotPOVM(PhaseportError):
    """Effect operators are not positive semidefinite or do not sum to I."""


class DomainError(PhaseportError):
    """A scalar argument lies outside its documented domain."""


class ScaleLimit(PhaseportError):
    """Requested computation exceeds the supported desk-scale dimensions."""


class UnknownChannel(PhaseportError):
    """Channel name not present in the builtin registry."""


class ParamOutOfRange(PhaseportError):
    """Builtin channel parameter outside its documented range."""


class GridTooLarge(PhaseportError):
    """Sweep grid exceeds the supported number of cells."""


class ChannelFormatError(PhaseportError):
    """Channel JSON file is malformed."""


class NotTracePreservingWarning(UserWarning):
    """Operation expected a trace-preserving family but got a general CP map."""


class NotGroupWarning(UserWarning):
    """Unitary list is not closed under products, even up to global phase."""

"""Exception types raised across the toolkit."""


class NonlocalGameError(Exception):
    """Base class for every error raised by nlgames."""


# -- game model -------------------------------------------------------------

class GameValidationError(NonlocalGameError, ValueError):
    pass


class NonNormalizedDistribution(GameValidationError):
    pass


class NegativeProbability(GameValidationError):
    pass


class IndexOutOfRange(GameValidationError, IndexError):
    pass


class NotXorGame(NonlocalGameError, ValueError):
    pass


class NotBinaryGame(NonlocalGameError, ValueError):
    pass


class ParseError(NonlocalGameError, ValueError):
    """A file could not be parsed; carries line/column or field diagnostics."""

    def __init__(self, message, line=None, column=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)
        self.line = line
        self.column = column
        self.field = field


class SchemaViolation(NonlocalGameError, ValueError):
    def __init__(self, message, field=None):
        super().__init__(f"{message} (at {field})" if field else message)
        self.field = field


# -- generators -------------------------------------------------------------

class EvenOrSmallN(NonlocalGameError, ValueError):
    pass


class EmptyGraph(NonlocalGameError, ValueError):
    pass


class InvalidTriples(NonlocalGameError, ValueError):
    pass


class TooLarge(NonlocalGameError, ValueError):
    pass


# -- solvers ----------------------------------------------------------------

class SearchSpaceTooLarge(NonlocalGameError):
    def __init__(self, alice_size, bob_size, cap):
        super().__init__(
            f"both strategy spaces exceed the work cap {cap}: "
            f"Alice has {alice_size} functions, Bob has {bob_size}"
        )
        self.alice_size = alice_size
        self.bob_size = bob_size
        self.cap = cap


class TooManyVectors(NonlocalGameError, ValueError):
    pass


# -- quantum simulation -----------------------------------------------------

class DimensionMismatch(NonlocalGameError, ValueError):
    pass


class InvalidMeasurement(NonlocalGameError, ValueError):
    def __init__(self, message, residual=None):
        if residual is not None:
            message = f"{message} (residual {residual:.3e})"
        super().__init__(message)
        self.residual = residual


class NonHermitian(NonlocalGameError, ValueError):
    pass


class NotPerfect(NonlocalGameError, ValueError):
    pass


class NumericallyAmbiguous(NonlocalGameError, ArithmeticError):
    pass


# -- bounds / reductions ----------------------------------------------------

class DomainError(NonlocalGameError, ValueError):
    pass


class EpsilonOutOfRange(NonlocalGameError, ValueError):
    pass


class ResampleLimitExceeded(NonlocalGameError):
    def __init__(self, draws, worst_distortion):
        super().__init__(
            f"no admissible projection after {draws} draws; "
            f"best draw had worst relative distortion {worst_distortion:.4g}"
        )
        self.draws = draws
        self.worst_distortion = worst_distortion

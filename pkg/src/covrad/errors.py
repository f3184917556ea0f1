"""Exception hierarchy shared by all covrad modules."""


class CovradError(Exception):
    """Base class for every error raised by covrad."""


class InvalidInputError(CovradError, ValueError):
    """An argument is outside its documented domain."""


class EmptyLanguageError(CovradError):
    """Trimming removed every vertex: the presentation generates nothing."""


class NotEssentialError(InvalidInputError):
    """The operation needs every vertex to have in- and out-edges."""


class NotDeterministicError(InvalidInputError):
    """Capacity needs a right-resolving presentation; call ``determinize`` first."""


class StateExplosionError(CovradError):
    """Subset construction exceeded its state cap."""


class CapExceededError(CovradError):
    """A language enumeration would exceed the configured size cap."""


class ConvergenceError(CovradError):
    """An iterative routine did not reach its tolerance within its iteration cap."""


class ParallelEdgeError(InvalidInputError):
    """Two parallel edges carry the same label."""


class InvalidMarkovChainError(InvalidInputError):
    """Edge probabilities are not a normalized stationary flow."""


class NumericalInstabilityError(CovradError):
    """Simplex would have to pivot on a vanishingly small element."""


class InfeasibleBoundError(CovradError):
    """The Markov-extension LP has no feasible point for these presentations."""


class SandwichViolationError(CovradError):
    """An LP value fell outside the analytic interval it must lie in."""

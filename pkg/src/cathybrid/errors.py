"""Exception hierarchy.

Errors split into two families: bad input (dimension, outcome, config) and
numerical-domain failures (truncation, conditioning, degenerate states). The
CLI maps the second family to its own exit code.
"""


class CatHybridError(Exception):
    pass


class DimensionError(CatHybridError, ValueError):
    pass


class OutcomeError(CatHybridError, ValueError):
    pass


class NormalizationError(CatHybridError, ValueError):
    pass


class ConfigError(CatHybridError, ValueError):
    pass


class NumericalDomainError(CatHybridError, ArithmeticError):
    pass


class TruncationError(NumericalDomainError):
    """Fock tail mass above tolerance: raise the cutoff."""


class RangeError(NumericalDomainError):
    """Displacement or photon index outside the double-precision safe range."""


class DegenerateStateError(NumericalDomainError):
    """Normalization factor diverges (e.g. odd cat at zero amplitude)."""


class ConditioningError(NumericalDomainError):
    """A closed-form denominator is too close to zero; use the evolution path."""


class UndefinedMomentError(NumericalDomainError):
    pass

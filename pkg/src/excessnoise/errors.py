"""Exception types raised across the package."""


class ExcessNoiseError(Exception):
    """Base class for every error raised by ``excessnoise``."""


class DomainError(ExcessNoiseError, ValueError):
    """An argument lies outside the domain where a quantity is finite or defined."""


class DimensionMismatch(ExcessNoiseError, ValueError):
    pass


class IndexOutOfRange(ExcessNoiseError, IndexError):
    pass


class NonPositiveDefinite(ExcessNoiseError, ValueError):
    pass


class InvalidState(ExcessNoiseError, ValueError):
    """Covariance matrix violates symmetry or the uncertainty principle."""


class InvalidSpec(ExcessNoiseError, ValueError):
    pass


class NegativeNoise(InvalidSpec):
    pass


class NegativeSqueezing(InvalidSpec):
    pass


class SecondArgumentPure(DomainError):
    """The second state has a pure normal mode, so the divergence is infinite."""


class StepTooLarge(ExcessNoiseError, ArithmeticError):
    """Finite-difference estimators of the Fisher information disagree."""


class Divergent(DomainError):
    pass


class CutoffTooSmall(ExcessNoiseError, ValueError):
    pass


class MomentMismatch(ExcessNoiseError, ArithmeticError):
    pass


class SupportViolation(DomainError):
    pass


class DegenerateMeans(DomainError):
    pass


class ConfigError(ExcessNoiseError, ValueError):
    pass


class IllConditionedWarning(RuntimeWarning):
    pass

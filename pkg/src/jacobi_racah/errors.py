"""Exception hierarchy shared by all modules."""


class JacobiRacahError(Exception):
    """Base class for every error raised by this package."""


class ZeroDenominator(JacobiRacahError, ZeroDivisionError):
    pass


class ModeArityMismatch(JacobiRacahError, ValueError):
    pass


class InadmissibleParameters(JacobiRacahError, ValueError):
    """Raised when parameters hit a forbidden value; ``violations`` lists them."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("inadmissible parameters: " + "; ".join(self.violations))

    def __reduce__(self):
        return type(self), (self.violations,)


class VarSetMismatch(JacobiRacahError, ValueError):
    pass


class MissingVariable(JacobiRacahError, KeyError):
    pass


class NotInSpan(JacobiRacahError, ValueError):
    pass


class DependentBasis(JacobiRacahError, ValueError):
    pass


class KindMismatch(JacobiRacahError, TypeError):
    pass


class EmptySubset(JacobiRacahError, ValueError):
    pass


class ArityOutOfRange(JacobiRacahError, ValueError):
    pass


class IndexOutOfRange(JacobiRacahError, IndexError):
    pass

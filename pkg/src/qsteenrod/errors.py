"""Exception types shared across the package."""


class QSteenrodError(Exception):
    """Base class for every error raised by this package."""


class DomainError(QSteenrodError, ValueError):
    """An argument lies outside the domain where the operation is defined."""


class DivisionByZero(QSteenrodError, ZeroDivisionError):
    pass


class RingMismatch(QSteenrodError, TypeError):
    """Operands live over different scalar rings (e.g. two different primes)."""


class NotAUnit(QSteenrodError, ArithmeticError):
    pass


class TruncationError(QSteenrodError, ArithmeticError):
    """A result would need information beyond the available truncation window."""


class BasisMismatch(QSteenrodError, TypeError):
    pass


class NonInvertibleOrder(QSteenrodError, ArithmeticError):
    """The order-by-order flatness recursion hits a q-degree divisible by p."""

    def __init__(self, k: int, p: int):
        super().__init__(f"t*{k} is not invertible mod {p}; recursion halts at q^{k}")
        self.k = k
        self.p = p


class InconsistentSystem(QSteenrodError, ArithmeticError):
    pass


class NotFlat(QSteenrodError, ValueError):
    pass


class DivisionNotExact(QSteenrodError, ArithmeticError):
    pass

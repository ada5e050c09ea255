"""Exact scalars: odd prime fields, rationals and binomial coefficients mod p."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb

from .errors import DivisionByZero, DomainError, RingMismatch

# Characteristic-0 scalars. Fraction is arbitrary precision and always reduced
# with a positive denominator, which is all we need.
BigRational = Fraction


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class PrimeModulus:
    """An odd prime p >= 3."""

    p: int

    def __post_init__(self):
        if not isinstance(self.p, int) or isinstance(self.p, bool):
            raise DomainError(f"modulus must be an int, got {self.p!r}")
        if self.p == 2:
            raise DomainError("p = 2 is not supported; p must be an odd prime")
        if not is_prime(self.p):
            raise DomainError(f"{self.p} is not prime")

    def __call__(self, value) -> "FieldElement":
        return FieldElement.of(value, self)

    def __int__(self):
        return self.p

    def elements(self):
        return [FieldElement(v, self) for v in range(self.p)]


def _modulus(p) -> PrimeModulus:
    return p if isinstance(p, PrimeModulus) else PrimeModulus(p)


@dataclass(frozen=True)
class FieldElement:
    value: int
    modulus: PrimeModulus

    def __post_init__(self):
        if not 0 <= self.value < self.modulus.p:
            raise DomainError(f"value {self.value} not reduced mod {self.modulus.p}")

    @classmethod
    def of(cls, value, modulus) -> "FieldElement":
        modulus = _modulus(modulus)
        if isinstance(value, FieldElement):
            if value.modulus != modulus:
                raise RingMismatch(f"F_{value.modulus.p} element used in F_{modulus.p}")
            return value
        if isinstance(value, Fraction):
            num = value.numerator % modulus.p
            den = value.denominator % modulus.p
            if den == 0:
                raise DivisionByZero(f"{value} has denominator divisible by {modulus.p}")
            return cls(num * pow(den, -1, modulus.p) % modulus.p, modulus)
        return cls(int(value) % modulus.p, modulus)

    @property
    def p(self) -> int:
        return self.modulus.p

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.modulus != self.modulus:
                raise RingMismatch(f"cannot combine F_{self.p} and F_{other.p}")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def _wrap(self, v: int) -> "FieldElement":
        return FieldElement(v % self.p, self.modulus)

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value - o)

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(o - self.value)

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.value * o)

    __rmul__ = __mul__

    def __neg__(self):
        return self._wrap(-self.value)

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self * inv(self._wrap(o))

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return inv(self) * o

    def __pow__(self, n: int):
        if n < 0:
            return inv(self) ** (-n)
        return self._wrap(pow(self.value, n, self.p))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, int):
            return (self.value - other) % self.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus.p))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.p})"

    def signed(self) -> int:
        """Representative in (-p/2, p/2], handy for printing."""
        return self.value - self.p if self.value > self.p // 2 else self.value


def inv(a: FieldElement) -> FieldElement:
    if a.value == 0:
        raise DivisionByZero(f"0 has no inverse mod {a.p}")
    return FieldElement(pow(a.value, -1, a.p), a.modulus)


@lru_cache(maxsize=None)
def _inv_factorials(p: int) -> tuple:
    out = [1] * p
    f = 1
    for k in range(1, p):
        f = f * k % p
        out[k] = pow(f, -1, p)
    return tuple(out)


def binom_mod(a: int, k: int, p: int) -> int:
    """binom(a, k) mod p for a residue a and 0 <= k < p, as a plain int.

    Negative k gives 0. The top entry is a field element, so this is the
    falling-factorial definition, not the integer binomial of a lift.
    """
    if k < 0:
        return 0
    if k >= p:
        raise DomainError(f"binom(a, {k}) needs {k}! invertible mod {p}")
    num = 1
    for i in range(k):
        num = num * (a - i) % p
    return num * _inv_factorials(p)[k] % p


def binom_field(a: FieldElement, k: int) -> FieldElement:
    """a(a-1)...(a-k+1)/k! in F_p, for 0 <= k < p."""
    if k < 0:
        raise DomainError("k must be a natural number")
    return FieldElement(binom_mod(a.value, k, a.p), a.modulus)


def binom_lucas(n: int, k: int, p) -> FieldElement:
    """binom(n, k) mod p via the base-p digits of n and k."""
    modulus = _modulus(p)
    if n < 0 or k < 0:
        raise DomainError("binom_lucas takes natural arguments")
    q = modulus.p
    acc = 1
    while n or k:
        nd, kd = n % q, k % q
        if kd > nd:
            return FieldElement(0, modulus)
        acc = acc * comb(nd, kd) % q
        n //= q
        k //= q
    return FieldElement(acc, modulus)

"""Sparse truncated series in q, t, h, x over F_p or Q.

A series is a map from exponent tuples ``(q, t, h, x)`` to nonzero scalars
plus a :class:`Window` that records how far the stored data can be trusted.
``q`` and ``x`` are adic variables (natural exponents), ``t`` and ``h`` are
Laurent. A ``None`` bound in the window means "exact in that direction".

Precision rule for products: if ``a`` is known through ``x^A`` and ``b``
through ``x^B``, the product is known through
``min(A + min(0, ord_x b), B + min(0, ord_x a))``. With natural exponents this
is just the intersection window; negative exponents (h^-1 in the pairing)
shrink it accordingly, which keeps every stored coefficient correct.

The odd equivariant parameter is not modelled: every quantity computed in
this package is free of it.
"""

from __future__ import annotations

import json
from math import comb
from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Callable, Dict, Iterable, Mapping, Optional, Sequence, Tuple

from .errors import BasisMismatch, DivisionByZero, NotAUnit, RingMismatch, TruncationError
from .exact_arith import FieldElement, PrimeModulus

ODD_PARAMETER_MODELLED = False

Key = Tuple[int, int, int, int]  # (q, t, h, x)
VARS = ("q", "t", "h", "x")
_IDX = {v: i for i, v in enumerate(VARS)}
_INF = float("inf")


def sort_key(k: Key):
    """Canonical monomial order: lexicographic on (q, h, t, x)."""
    return (k[0], k[2], k[1], k[3])


# --------------------------------------------------------------------------
# scalar rings


@dataclass(frozen=True)
class ScalarRing:
    """F_p for ``p > 0`` (coefficients stored as ints in [0, p)), Q for ``p == 0``."""

    p: int = 0

    @property
    def is_field_mod_p(self) -> bool:
        return self.p > 0

    def reduce(self, c):
        if self.p:
            if isinstance(c, FieldElement):
                if c.p != self.p:
                    raise RingMismatch(f"F_{c.p} scalar in a series over F_{self.p}")
                return c.value
            if isinstance(c, Fraction):
                return FieldElement.of(c, self.p).value
            return int(c) % self.p
        if isinstance(c, FieldElement):
            raise RingMismatch("finite-field scalar in a characteristic-0 series")
        if isinstance(c, Fraction):
            return c.numerator if c.denominator == 1 else c
        return int(c)

    def inv(self, c):
        if self.p:
            if c % self.p == 0:
                raise DivisionByZero(f"0 has no inverse mod {self.p}")
            return pow(c, -1, self.p)
        if c == 0:
            raise DivisionByZero("division by zero in Q")
        r = Fraction(1) / c
        return r.numerator if r.denominator == 1 else r

    def element(self, c):
        """Public-facing scalar: FieldElement for F_p, Fraction for Q."""
        if self.p:
            return FieldElement(self.reduce(c), PrimeModulus(self.p))
        return Fraction(c)

    def encode(self, c):
        if isinstance(c, Fraction) and c.denominator != 1:
            return f"{c.numerator}/{c.denominator}"
        return int(c)

    def decode(self, c):
        if isinstance(c, str):
            return self.reduce(Fraction(c))
        return self.reduce(c)

    def __str__(self):
        return f"F_{self.p}" if self.p else "Q"


QQ = ScalarRing(0)


def GF(p) -> ScalarRing:
    p = int(p.p if isinstance(p, PrimeModulus) else p)
    PrimeModulus(p)
    return ScalarRing(p)


# --------------------------------------------------------------------------
# truncation windows


def _min_opt(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _max_opt(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return max(a, b)


@dataclass(frozen=True)
class Window:
    """Truncation window. ``None`` means no bound.

    ``q_max``, ``h_max``, ``x_max`` are precision bounds: terms above them are
    unknown and dropped. ``t_min`` and ``h_min`` are declared pole floors:
    storing a term below a floor raises :class:`TruncationError`.
    """

    q_max: Optional[int] = None
    h_max: Optional[int] = None
    x_max: Optional[int] = None
    t_min: Optional[int] = None
    h_min: Optional[int] = None

    def admits(self, k: Key) -> bool:
        q, _, h, x = k
        return not (
            (self.q_max is not None and q > self.q_max)
            or (self.h_max is not None and h > self.h_max)
            or (self.x_max is not None and x > self.x_max)
        )

    def check_floor(self, k: Key):
        if (self.t_min is not None and k[1] < self.t_min) or (
            self.h_min is not None and k[2] < self.h_min
        ):
            raise TruncationError(f"monomial {k} lies below the pole floor of {self}")

    def meet(self, other: "Window") -> "Window":
        return Window(
            _min_opt(self.q_max, other.q_max),
            _min_opt(self.h_max, other.h_max),
            _min_opt(self.x_max, other.x_max),
            _max_opt(self.t_min, other.t_min),
            _max_opt(self.h_min, other.h_min),
        )

    def bound(self, var: str) -> Optional[int]:
        return {"q": self.q_max, "h": self.h_max, "x": self.x_max}.get(var)

    def with_bound(self, var: str, value: Optional[int]) -> "Window":
        return replace(self, **{f"{var}_max": value})

    @property
    def is_exact(self) -> bool:
        return self.q_max is None and self.h_max is None and self.x_max is None


EXACT = Window()


# --------------------------------------------------------------------------
# the series type


class GradedSeries:
    __slots__ = ("ring", "window", "terms")

    def __init__(self, ring: ScalarRing, terms: Mapping[Key, object] = (), window: Window = EXACT):
        self.ring = ring
        self.window = window
        clean: Dict[Key, object] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for k, c in items:
            k = tuple(int(e) for e in k)
            if len(k) != 4 or k[0] < 0 or k[3] < 0:
                raise ValueError(f"bad monomial {k}")
            if not window.admits(k):
                continue
            c = ring.reduce(c)
            if c:
                window.check_floor(k)
                clean[k] = (clean.get(k, 0) + c) if k in clean else c
        if ring.p:
            clean = {k: c % ring.p for k, c in clean.items() if c % ring.p}
        else:
            clean = {k: c for k, c in clean.items() if c}
        self.terms = clean

    @classmethod
    def _raw(cls, ring, terms, window):
        s = object.__new__(cls)
        s.ring, s.terms, s.window = ring, terms, window
        return s

    # -- constructors -------------------------------------------------------

    @classmethod
    def zero(cls, ring: ScalarRing, window: Window = EXACT):
        return cls._raw(ring, {}, window)

    @classmethod
    def monomial(cls, ring, c=1, q=0, t=0, h=0, x=0, window: Window = EXACT):
        return cls(ring, {(q, t, h, x): c}, window)

    @classmethod
    def one(cls, ring, window: Window = EXACT):
        return cls.monomial(ring, 1, window=window)

    @classmethod
    def linear_x(cls, ring, c_t=0, c_h=0, window: Window = EXACT):
        """x + c_t*t + c_h*h."""
        return cls(ring, {(0, 0, 0, 1): 1, (0, 1, 0, 0): c_t, (0, 0, 1, 0): c_h}, window)

    def like(self, terms, window=None):
        return GradedSeries(self.ring, terms, self.window if window is None else window)

    # -- basic queries ------------------------------------------------------

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.sorted_items())

    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda kv: sort_key(kv[0]))

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, q=0, t=0, h=0, x=0):
        """Raw coefficient (int mod p or Fraction)."""
        return self.terms.get((q, t, h, x), 0)

    def coefficient(self, q=0, t=0, h=0, x=0):
        return self.ring.element(self.coeff(q, t, h, x))

    def min_exp(self, var: str):
        i = _IDX[var]
        return min((k[i] for k in self.terms), default=None)

    def max_exp(self, var: str):
        i = _IDX[var]
        return max((k[i] for k in self.terms), default=None)

    def select(self, var: str, e: int, keep: bool = False) -> "GradedSeries":
        """Coefficient of var^e (as a series with that exponent set to 0 unless keep)."""
        i = _IDX[var]
        out = {}
        for k, c in self.terms.items():
            if k[i] == e:
                if not keep:
                    k = k[:i] + (0,) + k[i + 1:]
                out[k] = c
        w = self.window if keep else self.window.with_bound(var, None) if var in "qhx" else self.window
        return GradedSeries._raw(self.ring, out, w)

    def q_coefficient(self, d: int) -> "GradedSeries":
        self._require_known("q", d)
        return self.select("q", d)

    def h_coefficient(self, j: int) -> "GradedSeries":
        self._require_known("h", j)
        return self.select("h", j)

    def x_coefficient(self, k: int) -> "GradedSeries":
        self._require_known("x", k)
        return self.select("x", k)

    def _require_known(self, var, e):
        b = self.window.bound(var)
        if b is not None and e > b:
            raise TruncationError(f"{var}^{e} lies outside the window ({var}_max={b})")

    def restrict(self, window: Window) -> "GradedSeries":
        """Drop everything the new window does not admit; window becomes the meet."""
        w = self.window.meet(window)
        return GradedSeries(self.ring, self.terms, w)

    def with_window(self, window: Window) -> "GradedSeries":
        return GradedSeries(self.ring, self.terms, window)

    def map_terms(self, fn: Callable[[Key, object], Iterable[Tuple[Key, object]]], window=None):
        out: Dict[Key, object] = {}
        for k, c in self.terms.items():
            for k2, c2 in fn(k, c):
                out[k2] = out.get(k2, 0) + c2
        return GradedSeries(self.ring, out, self.window if window is None else window)

    def shift(self, q=0, t=0, h=0, x=0) -> "GradedSeries":
        """Multiply by the monomial q^q t^t h^h x^x (window shifts with it)."""
        d = (q, t, h, x)
        w = self.window
        w = Window(
            None if w.q_max is None else w.q_max + q,
            None if w.h_max is None else w.h_max + h,
            None if w.x_max is None else w.x_max + x,
            None if w.t_min is None else w.t_min + t,
            None if w.h_min is None else w.h_min + h,
        )
        terms = {tuple(a + b for a, b in zip(k, d)): c for k, c in self.terms.items()}
        return GradedSeries._raw(self.ring, terms, w)

    def q_derivative(self) -> "GradedSeries":
        """q d/dq."""
        return self.like({k: c * k[0] for k, c in self.terms.items()})

    def reduce_mod(self, p) -> "GradedSeries":
        ring = GF(p)
        return GradedSeries(ring, self.terms, self.window)

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, GradedSeries):
            if other.ring != self.ring:
                raise RingMismatch(f"series over {self.ring} combined with series over {other.ring}")
            return other
        if isinstance(other, (int, Fraction, FieldElement)):
            return GradedSeries(self.ring, {(0, 0, 0, 0): other}, EXACT)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        w = self.window.meet(o.window)
        out = dict(self.terms)
        for k, c in o.terms.items():
            out[k] = out.get(k, 0) + c
        return GradedSeries(self.ring, out, w)

    __radd__ = __add__

    def __neg__(self):
        return GradedSeries._raw(self.ring, {k: (-c) % self.ring.p if self.ring.p else -c
                                             for k, c in self.terms.items()}, self.window)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, c) -> "GradedSeries":
        c = self.ring.reduce(c)
        if not c:
            return GradedSeries.zero(self.ring, self.window)
        if self.ring.p:
            return GradedSeries._raw(self.ring, {k: v * c % self.ring.p for k, v in self.terms.items()},
                                     self.window)
        return GradedSeries(self.ring, {k: v * c for k, v in self.terms.items()}, self.window)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, FieldElement)):
            return self.scale(other)
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return series_mul(self, o)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("use series_inv_unit for negative powers")
        result = GradedSeries.one(self.ring)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        """Equal on the intersection of the two windows."""
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (self - o).is_zero()

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    __hash__ = None

    def __repr__(self):
        return f"GradedSeries({format_series(self)}; {self.ring}, {self.window})"

    # -- serialization ------------------------------------------------------

    def to_records(self):
        return [
            {"q": k[0], "t": k[1], "h": k[2], "x": k[3], "c": self.ring.encode(c)}
            for k, c in self.sorted_items()
        ]

    @classmethod
    def from_records(cls, ring: ScalarRing, records, window: Window = EXACT):
        return cls(ring, {(r["q"], r["t"], r["h"], r["x"]): ring.decode(r["c"]) for r in records}, window)

    def to_json(self) -> str:
        return json.dumps(self.to_records(), separators=(",", ":"))


def _product_bound(A, B, amin, bmin):
    # known-through bound for a product; None = exact
    ca = _INF if A is None else A + min(0, bmin)
    cb = _INF if B is None else B + min(0, amin)
    m = min(ca, cb)
    return None if m == _INF else int(m)


def series_mul(a: GradedSeries, b: GradedSeries) -> GradedSeries:
    if a.ring != b.ring:
        raise RingMismatch(f"series over {a.ring} multiplied by series over {b.ring}")
    bounds = {}
    for v in ("q", "h", "x"):
        amin = a.min_exp(v)
        bmin = b.min_exp(v)
        bounds[v] = _product_bound(
            a.window.bound(v), b.window.bound(v), 0 if amin is None else amin, 0 if bmin is None else bmin
        )
    w = Window(bounds["q"], bounds["h"], bounds["x"],
               _max_opt(a.window.t_min, b.window.t_min), _max_opt(a.window.h_min, b.window.h_min))
    qm = _INF if w.q_max is None else w.q_max
    hm = _INF if w.h_max is None else w.h_max
    xm = _INF if w.x_max is None else w.x_max
    out: Dict[Key, object] = {}
    get = out.get
    bitems = list(b.terms.items())
    for (aq, at, ah, ax), ac in a.terms.items():
        for (bq, bt, bh, bx), bc in bitems:
            q = aq + bq
            if q > qm:
                continue
            h = ah + bh
            if h > hm:
                continue
            x = ax + bx
            if x > xm:
                continue
            k = (q, at + bt, h, x)
            out[k] = get(k, 0) + ac * bc
    p = a.ring.p
    if p:
        out = {k: c % p for k, c in out.items() if c % p}
    else:
        out = {k: c for k, c in out.items() if c}
    for k in out:
        w.check_floor(k)
    return GradedSeries._raw(a.ring, out, w)


def series_inv_unit(a: GradedSeries, var: str = "q", prec: Optional[int] = None) -> GradedSeries:
    """Inverse of ``a`` as a ``var``-adic series.

    The ``var^0`` part of ``a`` must be a single monomial in t, h (a unit of
    the Laurent ring). The result is known through ``var^prec``; ``prec``
    defaults to the window bound of ``a`` in ``var``.
    """
    if var not in ("q", "x"):
        raise ValueError("adic inversion is supported in q or x")
    i = _IDX[var]
    if prec is None:
        prec = a.window.bound(var)
    if prec is None:
        raise TruncationError(f"an exact series has no finite {var}-adic inverse; pass prec")
    if a.window.bound(var) is not None and a.window.bound(var) < prec:
        raise TruncationError(f"operand only known through {var}^{a.window.bound(var)}")
    lead = {k: c for k, c in a.terms.items() if k[i] == 0}
    if any(k[i] < 0 for k in a.terms):
        raise NotAUnit(f"negative {var} exponent")
    if len(lead) != 1:
        raise NotAUnit(f"{var}^0 part of the operand is not a single monomial: {lead}")
    (k0, c0), = lead.items()
    if any(k0[j] for j in range(4) if j != 1 and j != 2):
        raise NotAUnit("leading term involves an adic variable")
    ring = a.ring
    c0inv = ring.inv(c0)
    u_inv = GradedSeries(ring, {(0, -k0[1], -k0[2], 0): c0inv})
    w = a.window.with_bound(var, prec)
    # a = u (1 + r) with ord_var(r) >= 1; 1/(1+r) = sum (-r)^n
    r = (a.with_window(w) * u_inv) - 1
    minus_r = -r
    total = GradedSeries.one(ring, w)
    power = GradedSeries.one(ring, w)
    for _ in range(prec):
        power = (power * minus_r).restrict(w)
        if power.is_zero():
            break
        total = total + power
    return (total * u_inv).restrict(w)


def substitute_h(s: GradedSeries, mu) -> GradedSeries:
    """Replace each t^a h^b by mu^b t^(a+b) (mod p only)."""
    if not s.ring.p:
        raise RingMismatch("h -> mu*t specialization is defined mod p")
    p = s.ring.p
    m = s.ring.reduce(mu)
    out: Dict[Key, int] = {}
    for (q, t, h, x), c in s.terms.items():
        if h < 0 and m == 0:
            raise DivisionByZero("h^-1 term specialized at mu = 0")
        k = (q, t + h, 0, x)
        out[k] = (out.get(k, 0) + c * pow(m, h, p)) % p
    w = replace(s.window, h_max=None, h_min=None)
    return GradedSeries(s.ring, out, w)


def homogeneity_check(s: GradedSeries, weight: int) -> bool:
    return all(k[1] + k[2] == weight for k in s.terms)


def weights(s: GradedSeries) -> set:
    return {k[1] + k[2] for k in s.terms}


# --------------------------------------------------------------------------
# x-adic extraction from factored rational functions


@dataclass(frozen=True)
class FactoredRationalFn:
    """numerator * prod (x + c t)^(-m) over the factors (c, m)."""

    numerator: GradedSeries
    denominator_factors: Tuple[Tuple[int, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "denominator_factors",
                           tuple((int(c), int(m)) for c, m in self.denominator_factors))


def inverse_linear_power(ring: ScalarRing, c: int, m: int, order: int) -> GradedSeries:
    """(x + c t)^(-m) expanded x-adically through x^order."""
    c = ring.reduce(c)
    if not c:
        raise NotAUnit("denominator factor x + 0*t is not a unit in the x-adic ring")
    cinv = ring.inv(c)
    terms = {}
    # (x + ct)^(-m) = (ct)^(-m) sum_j binom(-m, j) (x / ct)^j
    cpow = ring.reduce(1)
    for _ in range(m):
        cpow = cpow * cinv
    for j in range(order + 1):
        terms[(0, -m - j, 0, j)] = ring.reduce((-1) ** j * comb(m + j - 1, j)) * cpow
        cpow = cpow * cinv
    return GradedSeries(ring, terms, Window(x_max=order))


def coeff_x(f: FactoredRationalFn, k: int) -> GradedSeries:
    """Coefficient of x^k in the x-adic expansion of f."""
    ring = f.numerator.ring
    w = Window(x_max=k)
    acc = f.numerator.restrict(w)
    if acc.window.x_max is not None and acc.window.x_max < k:
        raise TruncationError(f"numerator known only through x^{acc.window.x_max}")
    for c, m in f.denominator_factors:
        if m:
            acc = acc * inverse_linear_power(ring, c, m, k)
    return acc.x_coefficient(k)


# --------------------------------------------------------------------------
# polynomial division in x (used with x standing for a hyperplane class)


def poly_rem_x(f: GradedSeries, g: GradedSeries) -> GradedSeries:
    """Remainder of f modulo a monic polynomial g in x with x-free coefficients in t."""
    n = g.max_exp("x")
    lead = g.select("x", n)
    if lead.terms != {(0, 0, 0, 0): 1}:
        raise ValueError("divisor must be monic in x")
    tail = g - GradedSeries.monomial(g.ring, 1, x=n)  # x^n == -tail
    by_deg: Dict[int, Dict[Key, object]] = {}
    for k, c in f.terms.items():
        by_deg.setdefault(k[3], {})[(k[0], k[1], k[2], 0)] = c
    top = max(by_deg, default=-1)
    ring = f.ring
    for e in range(top, n - 1, -1):
        coeffs = by_deg.pop(e, None)
        if not coeffs:
            continue
        # c x^e = c x^(e-n) x^n == -c x^(e-n) tail
        lead_c = GradedSeries(ring, coeffs, f.window.with_bound("x", None))
        contrib = -(lead_c * tail).shift(x=e - n)
        for k, c in contrib.terms.items():
            d = by_deg.setdefault(k[3], {})
            kk = (k[0], k[1], k[2], 0)
            d[kk] = d.get(kk, 0) + c
    out = {}
    for e, coeffs in by_deg.items():
        for k, c in coeffs.items():
            out[(k[0], k[1], k[2], e)] = c
    return GradedSeries(ring, out, f.window)


# --------------------------------------------------------------------------
# 2x2 matrices of series

GEOMETRIC = "geometric"
STABLE = "stable"
BASES = (GEOMETRIC, STABLE)


class Endo2:
    """2x2 matrix of series acting on column vectors in a tagged basis."""

    __slots__ = ("entries", "basis")

    def __init__(self, entries: Sequence[Sequence[GradedSeries]], basis: str = GEOMETRIC):
        if basis not in BASES:
            raise ValueError(f"unknown basis {basis!r}")
        flat = [entries[0][0], entries[0][1], entries[1][0], entries[1][1]]
        ring = flat[0].ring
        if any(e.ring != ring for e in flat):
            raise RingMismatch("matrix entries over different rings")
        w = flat[0].window
        for e in flat[1:]:
            w = w.meet(e.window)
        flat = [e if e.window == w else e.restrict(w) for e in flat]
        self.entries = ((flat[0], flat[1]), (flat[2], flat[3]))
        self.basis = basis

    @property
    def ring(self):
        return self.entries[0][0].ring

    @property
    def window(self):
        return self.entries[0][0].window

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @classmethod
    def scalar(cls, ring, c=1, basis=GEOMETRIC, window: Window = EXACT):
        d = GradedSeries.monomial(ring, c, window=window) if not isinstance(c, GradedSeries) else c
        z = GradedSeries.zero(ring, d.window)
        return cls(((d, z), (z, d)), basis)

    @classmethod
    def identity(cls, ring, basis=GEOMETRIC, window: Window = EXACT):
        return cls.scalar(ring, 1, basis, window)

    @classmethod
    def zero(cls, ring, basis=GEOMETRIC, window: Window = EXACT):
        return cls.scalar(ring, 0, basis, window)

    def _check(self, other: "Endo2"):
        if other.basis != self.basis:
            raise BasisMismatch(f"{self.basis} matrix combined with {other.basis} matrix")

    def map(self, fn) -> "Endo2":
        return Endo2(tuple(tuple(fn(e) for e in row) for row in self.entries), self.basis)

    def __add__(self, other: "Endo2"):
        self._check(other)
        return Endo2([[self[i, j] + other[i, j] for j in range(2)] for i in range(2)], self.basis)

    def __sub__(self, other: "Endo2"):
        self._check(other)
        return Endo2([[self[i, j] - other[i, j] for j in range(2)] for i in range(2)], self.basis)

    def __neg__(self):
        return self.map(lambda e: -e)

    def __matmul__(self, other: "Endo2"):
        self._check(other)
        return Endo2(
            [[self[i, 0] * other[0, j] + self[i, 1] * other[1, j] for j in range(2)] for i in range(2)],
            self.basis,
        )

    def __mul__(self, c):
        """Scalar or series multiple."""
        return self.map(lambda e: e * c)

    __rmul__ = __mul__

    def apply(self, v: Sequence[GradedSeries]) -> Tuple[GradedSeries, GradedSeries]:
        return (self[0, 0] * v[0] + self[0, 1] * v[1], self[1, 0] * v[0] + self[1, 1] * v[1])

    def commutator(self, other: "Endo2") -> "Endo2":
        return self @ other - other @ self

    def trace(self) -> GradedSeries:
        return self[0, 0] + self[1, 1]

    def restrict(self, window: Window) -> "Endo2":
        return self.map(lambda e: e.restrict(window))

    def is_zero(self) -> bool:
        return all(e.is_zero() for row in self.entries for e in row)

    def __eq__(self, other):
        if not isinstance(other, Endo2):
            return NotImplemented
        return self.basis == other.basis and (self - other).is_zero()

    __hash__ = None

    def __repr__(self):
        rows = "; ".join(", ".join(format_series(e) for e in row) for row in self.entries)
        return f"Endo2[{self.basis}]([{rows}])"

    def to_dict(self):
        return {"basis": self.basis, "entries": [[e.to_records() for e in row] for row in self.entries]}

    @classmethod
    def from_dict(cls, ring, data, window: Window = EXACT):
        return cls([[GradedSeries.from_records(ring, e, window) for e in row] for row in data["entries"]],
                   data["basis"])


# --------------------------------------------------------------------------
# text rendering


def _mono(k: Key) -> str:
    parts = []
    for name, e in (("t", k[1]), ("h", k[2]), ("x", k[3])):
        if e == 1:
            parts.append(name)
        elif e:
            parts.append(f"{name}^{e}")
    s = "·".join(parts)
    if k[0]:
        s = (s + " " if s else "") + (f"q^{k[0]}" if k[0] != 1 else "q")
    return s


def format_series(s: GradedSeries) -> str:
    if s.is_zero():
        return "0"
    out = []
    for k, c in s.sorted_items():
        if s.ring.p:
            c = c - s.ring.p if c > s.ring.p // 2 else c
        m = _mono(k)
        if not m:
            term = str(c)
        elif c == 1:
            term = m
        elif c == -1:
            term = "-" + m
        else:
            term = f"{c}·{m}"
        out.append(term)
    return " + ".join(out).replace("+ -", "- ")

"""Structure constants of the quantum Steenrod operation by localization.

Two targets share the machinery here:

* local P^1 (non-equivariant in the rotation parameter): the pairing
  ``(QSigma_b(b0), b_inf)`` at q^d is an integral over P^{2d+1} of
  ``c_top(Obs) c_top(IC)`` in the Z/p-equivariant cohomology of P^{2d+1};
* T*P^1 with the extra S^1 action: the obstruction weights shift by h and
  the q^d coefficient becomes ``h * bracket_d`` where ``bracket_d`` is a sum
  over the p fixed components of P^{2d+1}.

The fixed-point sum and the quotient-ring integral are independent routes to
the same number; the test suite checks one against the other.

Polynomials in the hyperplane class H are stored as series in the ``x`` slot.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import List, Optional, Tuple

from .errors import DomainError
from .poly_series import (
    GF,
    FactoredRationalFn,
    GradedSeries,
    ScalarRing,
    Window,
    coeff_x,
    poly_rem_x,
    series_inv_unit,
)


class InsertionClass(enum.Enum):
    ONE = "1"
    B = "b"

    @property
    def degree(self) -> int:
        return 0 if self is InsertionClass.ONE else 2

    @classmethod
    def parse(cls, s) -> "InsertionClass":
        if isinstance(s, cls):
            return s
        return {"1": cls.ONE, "one": cls.ONE, "b": cls.B}[str(s).lower()]

    def __str__(self):
        return self.value


ONE = InsertionClass.ONE
B = InsertionClass.B
INSERTION_PAIRS = [(ONE, ONE), (B, ONE), (ONE, B), (B, B)]


@dataclass(frozen=True)
class DegreeSplit:
    d: int
    alpha: int
    beta: int

    @classmethod
    def of(cls, d: int, p: int) -> "DegreeSplit":
        if d < 1:
            raise DomainError("curve degree must be positive")
        return cls(d, d // p, d % p)


@dataclass(frozen=True)
class FixedComponent:
    """Fixed locus of Z/p on P^{2d+1}: the projectivized weight-ell isotypic piece."""

    ell: int
    dim_complex: int

    @classmethod
    def of(cls, p: int, d: int, ell: int) -> "FixedComponent":
        # weights 0..d each occur twice, so ell occurs 2*#{k <= d : k = ell mod p} times
        if not 0 <= ell < p:
            raise DomainError(f"component index {ell} outside [0, {p})")
        return cls(ell, 2 * ((d - ell) // p) + 1)


def components(p: int, d: int) -> List[FixedComponent]:
    """Nonempty fixed components for degree d (those with ell <= d)."""
    return [FixedComponent.of(p, d, ell) for ell in range(min(p, d + 1))]


def _ring(p) -> ScalarRing:
    return GF(p)


# --------------------------------------------------------------------------
# Euler classes as polynomials in H (stored in the x slot)


def incidence_factor(b0, binf, d: int, p: int) -> GradedSeries:
    """c_{0,inf}(H, t): 1, H - dt, H, H(H - dt) for (1,1), (b,1), (1,b), (b,b)."""
    b0, binf = InsertionClass.parse(b0), InsertionClass.parse(binf)
    R = _ring(p)
    H = GradedSeries.monomial(R, 1, x=1)
    out = GradedSeries.one(R)
    if b0 is B:
        out = out * GradedSeries.linear_x(R, -d)
    if binf is B:
        out = out * H
    return out


def _shifted_incidence(b0, binf, d: int, ell: int, p: int) -> GradedSeries:
    """c_{0,inf}(x + ell*t, t)."""
    R = _ring(p)
    out = GradedSeries.one(R)
    if b0 is B:
        out = out * GradedSeries.linear_x(R, ell - d)
    if binf is B:
        out = out * GradedSeries.linear_x(R, ell)
    return out


def obs_euler(d: int, with_h: bool, p: int, h_max: Optional[int] = None) -> GradedSeries:
    """prod_{k=1}^{d-1} (H - kt - [h])^2."""
    if d < 1:
        raise DomainError("obs_euler needs d >= 1")
    R = _ring(p)
    w = Window(h_max=h_max)
    out = GradedSeries.one(R, w)
    for k in range(1, d):
        lin = GradedSeries.linear_x(R, -k, -1 if with_h else 0, w)
        out = out * lin * lin
    return out


def steenrod_incidence(p: int) -> GradedSeries:
    """prod_{k=0}^{p-1} (H - kt) = H^p - t^{p-1} H."""
    R = _ring(p)
    out = GradedSeries.one(R)
    for k in range(p):
        out = out * GradedSeries.linear_x(R, -k)
    return out


def relation(p: int, d: int) -> GradedSeries:
    """prod_{k=0}^{d} (H - kt)^2, the relation of the equivariant cohomology of P^{2d+1}."""
    R = _ring(p)
    out = GradedSeries.one(R)
    for k in range(d + 1):
        lin = GradedSeries.linear_x(R, -k)
        out = out * lin * lin
    return out


def integrate_projective(p: int, d: int, integrand: GradedSeries) -> GradedSeries:
    """Integral over P^{2d+1}: coefficient of H^{2d+1} in the remainder mod the relation."""
    rem = poly_rem_x(integrand, relation(p, d))
    return rem.select("x", 2 * d + 1)


# --------------------------------------------------------------------------
# localization


def c_dl(split: DegreeSplit, ell: int, b0, binf, p: int,
         x_max: int, h_max: Optional[int] = None) -> GradedSeries:
    """(x^{p-1} - t^{p-1})^{1-2 alpha} c_{0,inf}(x + ell t, t) prod_{k=1}^{d-1} (x + (ell-k)t - h)^2."""
    if not 0 <= ell < p:
        raise DomainError(f"component index {ell} outside [0, {p})")
    b0, binf = InsertionClass.parse(b0), InsertionClass.parse(binf)
    R = _ring(p)
    w = Window(h_max=h_max, x_max=x_max)
    base = GradedSeries(R, {(0, 0, 0, p - 1): 1, (0, p - 1, 0, 0): -1}, w)
    if split.alpha == 0:
        out = base
    else:
        out = series_inv_unit(base, "x", x_max) ** (2 * split.alpha - 1)
    out = out * _shifted_incidence(b0, binf, split.d, ell, p).restrict(w)
    for k in range(1, split.d):
        lin = GradedSeries.linear_x(R, ell - k, -1, w)
        out = out * lin * lin
    return out.restrict(w)


@dataclass(frozen=True)
class LocalizationTerm:
    """One fixed-component summand: (x^extract : numerator * prod (x + c t)^(-m))."""

    ell: int
    numerator: GradedSeries
    denominator_factors: Tuple[Tuple[int, int], ...]
    extract: int

    def value(self) -> GradedSeries:
        return coeff_x(FactoredRationalFn(self.numerator, self.denominator_factors), self.extract)


def localization_terms(p: int, d: int, b0, binf, h_max: Optional[int] = None) -> List[LocalizationTerm]:
    split = DegreeSplit.of(d, p)
    a, beta = split.alpha, split.beta
    terms = []
    for ell in range(beta + 1):
        factors = tuple((j, 2) for j in range(1, ell + 1)) + tuple((-j, 2) for j in range(1, beta - ell + 1))
        k = 2 * a
        terms.append(LocalizationTerm(ell, c_dl(split, ell, b0, binf, p, k, h_max), factors, k))
    if a >= 1:  # components with ell > beta have dimension 2 alpha - 1
        for ell in range(beta + 1, p):
            factors = tuple((ell - j, 2) for j in range(beta + 1))
            k = 2 * a - 2
            terms.append(LocalizationTerm(ell, c_dl(split, ell, b0, binf, p, k, h_max), factors, k))
    return terms


def localization_bracket(p: int, d: int, b0, binf, h_max: Optional[int] = None) -> GradedSeries:
    """The bracket multiplying h q^d: sum over fixed components, truncated at h^h_max."""
    R = _ring(p)
    total = GradedSeries.zero(R, Window(h_max=h_max))
    for term in localization_terms(p, d, b0, binf, h_max):
        total = total + term.value()
    return total


def structure_constant_s1(p: int, d: int, b0, binf, h_max: int) -> GradedSeries:
    """q^d coefficient of the S^1-equivariant pairing (QSigma(b0), b_inf), through h^h_max.

    Equals h times the fixed-point bracket. Returned as a series in t, h.
    """
    if h_max < 1:
        return GradedSeries.zero(_ring(p), Window(h_max=h_max))
    return localization_bracket(p, d, b0, binf, h_max - 1).shift(h=1)


def quotient_ring_bracket(p: int, d: int, b0, binf, h_max: Optional[int] = None,
                          with_h: bool = True) -> GradedSeries:
    """Same bracket, integrated directly in the cohomology ring of P^{2d+1}."""
    b0, binf = InsertionClass.parse(b0), InsertionClass.parse(binf)
    integrand = (obs_euler(d, with_h, p, h_max) * steenrod_incidence(p)
                 * incidence_factor(b0, binf, d, p))
    return integrate_projective(p, d, integrand).with_window(Window(h_max=h_max))


def integral_quotient_ring(p: int, d: int, b0, binf, h_max: int) -> GradedSeries:
    """Oracle for :func:`structure_constant_s1`: h times the quotient-ring integral."""
    if h_max < 1:
        return GradedSeries.zero(_ring(p), Window(h_max=h_max))
    return quotient_ring_bracket(p, d, b0, binf, h_max - 1).shift(h=1)


def structure_constant_noneq(p: int, d: int, b0, binf) -> GradedSeries:
    """q^d coefficient of (QSigma_b(b0), b_inf) for local P^1 (no rotation parameter)."""
    return quotient_ring_bracket(p, d, b0, binf, with_h=False)


def local_p1_closed_form(p: int, d: int, b0, binf) -> GradedSeries:
    """Closed form of the local P^1 structure constants at q^d.

    (1,b): -d^{p-2} t^{p-2}; (b,b): -t^{p-1} if p | d else 0;
    (1,1): -2 d^{p-3} t^{p-3}; (b,1): d^{p-2} t^{p-2}. Here 0^0 = 1.
    """
    b0, binf = InsertionClass.parse(b0), InsertionClass.parse(binf)
    R = _ring(p)
    table = {
        (ONE, B): (-pow(d, p - 2), p - 2),
        (B, B): (-1 if d % p == 0 else 0, p - 1),
        (ONE, ONE): (-2 * pow(d, p - 3), p - 3),
        (B, ONE): (pow(d, p - 2), p - 2),
    }
    c, e = table[(b0, binf)]
    return GradedSeries.monomial(R, c, t=e)


def multiple_cover_integral(p: int, d: int) -> GradedSeries:
    """Integral of c_top(Obs) H^3 over P^{2d+1}; three point constraints on a degree-d cover."""
    H3 = GradedSeries.monomial(_ring(p), 1, x=3)
    return integrate_projective(p, d, obs_euler(d, False, p) * H3)


def pairing_weight(p: int, b0, binf) -> int:
    """(t, h)-weight of the q^d pairing value: p - 2 + (|b0| + |b_inf|)/2."""
    b0, binf = InsertionClass.parse(b0), InsertionClass.parse(binf)
    return p - 2 + (b0.degree + binf.degree) // 2


# --------------------------------------------------------------------------
# low-order closed forms in h


def _c_at(b0, binf, d: int, p: int, shift_t: int) -> GradedSeries:
    """c_{0,inf}(x + shift*t, t) as a polynomial in x."""
    return _shifted_incidence(InsertionClass.parse(b0), InsertionClass.parse(binf), d, shift_t, p)


def _eval_x0(s: GradedSeries) -> GradedSeries:
    return s.select("x", 0)


def h_expansion_closed_form(p: int, d: int, b0, binf, order: int, as_printed: bool = True) -> GradedSeries:
    """Closed form for the h^order coefficient of the q^d pairing value.

    ``as_printed=True`` evaluates the formulas exactly as displayed in the
    literature. ``as_printed=False`` evaluates the corrected forms, which add
    the contributions the displayed formulas drop (see :func:`_h1_corrected`
    and :func:`_h2_corrected`).
    """
    if order not in (0, 1, 2):
        raise DomainError("closed forms exist for orders 0, 1, 2")
    R = _ring(p)
    if order == 0:
        return GradedSeries.zero(R)
    b0, binf = InsertionClass.parse(b0), InsertionClass.parse(binf)
    if order == 1:
        return _h1_printed(p, d, b0, binf) if as_printed else _h1_corrected(p, d, b0, binf)
    return _h2_printed(p, d, b0, binf) if as_printed else _h2_corrected(p, d, b0, binf)


def _inv(R, a):
    return R.inv(R.reduce(a))


def _x_poly_minus(p, R, xpow, c):
    """x^xpow - c*t^(p-1) ... helper producing x^{p-1} - t^{p-1}."""
    return GradedSeries(R, {(0, 0, 0, xpow): 1, (0, p - 1, 0, 0): -c})


def _h1_printed(p, d, b0, binf):
    R = _ring(p)
    split = DegreeSplit.of(d, p)
    if split.beta:
        beta = split.beta
        c = _eval_x0(_c_at(b0, binf, d, p, beta))
        return (c * _inv(R, beta * beta)).shift(t=p - 3) * -1
    c = _c_at(b0, binf, d, p, 0)
    return (c.select("x", 2) * -1).shift(t=p - 1)


def _h2_printed(p, d, b0, binf):
    R = _ring(p)
    split = DegreeSplit.of(d, p)
    a, beta = split.alpha, split.beta
    if beta:
        cb = _eval_x0(_c_at(b0, binf, d, p, beta))
        total = GradedSeries.zero(R)
        for m in range(1, d):
            if (m - beta) % p == 0:
                continue
            total = total + (cb * (2 * _inv(R, (beta - m) * beta * beta))).shift(t=p - 4)
        # -2 alpha t^{p-4} (x^1 : (t/beta^2 - 2x/beta^3) c(x + beta t, t))
        lin = GradedSeries(R, {(0, 1, 0, 0): _inv(R, beta * beta), (0, 0, 0, 1): -2 * _inv(R, beta ** 3)})
        piece = (lin * _c_at(b0, binf, d, p, beta)).select("x", 1)
        return total + (piece * (-2 * a)).shift(t=p - 4)
    c = _c_at(b0, binf, d, p, 0)
    base = _x_poly_minus(p, R, p - 1, 1)
    total = GradedSeries.zero(R)
    for m in range(1, d):
        if m % p == 0:
            continue
        # (x^{p-1} - t^{p-1}) / (x - m t) is a polynomial since m^{p-1} = 1
        quo = _exact_div_linear(base, -m, R)
        total = total + (quo * c).select("x", 2) * -2
    return total + (base * c).select("x", 3) * (-2 * a)


def _exact_div_linear(f: GradedSeries, c: int, R) -> GradedSeries:
    """f / (x + c t) for f a polynomial in x, t vanishing at x = -c t."""
    n = f.max_exp("x")
    coeffs = {e: f.select("x", e) for e in range(n + 1)}
    out = {}
    carry = GradedSeries.zero(R)
    for e in range(n, 0, -1):
        qe = coeffs[e] - carry  # quotient coefficient of x^{e-1}
        out[e - 1] = qe
        carry = (qe * c).shift(t=1)
    if not (coeffs[0] - carry).is_zero():
        raise DomainError("linear factor does not divide")
    total = GradedSeries.zero(R)
    for e, s in out.items():
        total = total + s.shift(x=e)
    return total


def _h1_corrected(p, d, b0, binf):
    """h^1 coefficient, including the ell = 0 component when c_{0,inf}(0, t) != 0.

    For p !| d the components ell = beta and ell = 0 contribute:
    -t^{p-3} (c(beta t) + c(0)) / beta^2. For p | d the ell = 0 component
    contributes (x^2 : (x^{p-1} - t^{p-1}) c(x, t)), which for p = 3 picks up
    an extra c(0, t) term.
    """
    R = _ring(p)
    split = DegreeSplit.of(d, p)
    beta = split.beta
    if beta:
        c = _eval_x0(_c_at(b0, binf, d, p, beta)) + _eval_x0(_c_at(b0, binf, d, p, 0))
        return (c * _inv(R, beta * beta)).shift(t=p - 3) * -1
    base = _x_poly_minus(p, R, p - 1, 1)
    return (base * _c_at(b0, binf, d, p, 0)).select("x", 2)


def _h2_corrected(p, d, b0, binf):
    """h^2 coefficient with the ell = 0 component and the pole counts restored.

    p !| d: components ell = beta and ell = 0 contribute. In each, the terms
    m = ell (mod p) of the h-derivative give simple poles at x = 0, and there
    are alpha of them (not -alpha). p | d: only ell = 0 contributes and the
    pole count is alpha - 1.
    """
    R = _ring(p)
    split = DegreeSplit.of(d, p)
    a, beta = split.alpha, split.beta
    total = GradedSeries.zero(R)
    if beta:
        cb = _eval_x0(_c_at(b0, binf, d, p, beta))
        c0 = _eval_x0(_c_at(b0, binf, d, p, 0))
        for m in range(1, d):
            if (m - beta) % p:
                total = total + (cb * (2 * _inv(R, (beta - m) * beta * beta))).shift(t=p - 4)
            if m % p:
                total = total + (c0 * (-2 * _inv(R, m * beta * beta))).shift(t=p - 4)
        ib2, ib3 = _inv(R, beta * beta), _inv(R, beta ** 3)
        at_beta = GradedSeries(R, {(0, 1, 0, 0): ib2, (0, 0, 0, 1): -2 * ib3})
        at_zero = GradedSeries(R, {(0, 1, 0, 0): ib2, (0, 0, 0, 1): 2 * ib3})
        pole = ((at_beta * _c_at(b0, binf, d, p, beta)).select("x", 1)
                + (at_zero * _c_at(b0, binf, d, p, 0)).select("x", 1))
        return total + (pole * (2 * a)).shift(t=p - 4)
    c = _c_at(b0, binf, d, p, 0)
    base = _x_poly_minus(p, R, p - 1, 1)
    for m in range(1, d):
        if m % p:
            total = total + (_exact_div_linear(base, -m, R) * c).select("x", 2) * -2
    return total + (base * c).select("x", 3) * (-2 * (a - 1))

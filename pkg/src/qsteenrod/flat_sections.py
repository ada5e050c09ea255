"""Arithmetic flat sections of the specialized quantum differential equation.

Everything here works after the specialization h = mu t, with mu represented
by its integer lift m in [0, p). Polynomials are sympy ``Poly`` objects over
GF(p); this keeps the checker on an arithmetic path separate from the series
kernel used by the localization engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Sequence, Tuple

import sympy as sp

from .errors import DivisionNotExact, DomainError
from .exact_arith import FieldElement, PrimeModulus, binom_mod

s, z1, z2, q = sp.symbols("s z1 z2 q")


def _lift(p: int, mu) -> int:
    PrimeModulus(p)
    if isinstance(mu, FieldElement):
        if mu.p != p:
            raise DomainError(f"mu lives in F_{mu.p}, not F_{p}")
        return mu.value
    return int(mu) % p


def _qpoly(coeffs: Sequence[int], p: int) -> sp.Poly:
    return sp.Poly.from_list(list(reversed([c % p for c in coeffs])) or [0], q, modulus=p)


def _coeffs(poly: sp.Poly, p: int) -> Tuple[int, ...]:
    """Ascending coefficient tuple with canonical representatives in [0, p)."""
    if poly.is_zero:
        return ()
    return tuple(int(c) % p for c in reversed(poly.all_coeffs()))


# --------------------------------------------------------------------------
# master function


def master_polynomial(p: int, m: int) -> sp.Poly:
    """s^m (s - z1)^(p-m) (s - z2)^(p-m) over GF(p)."""
    if not 0 <= m < p:
        raise DomainError(f"m must lie in [0, {p})")
    return sp.Poly(s**m * (s - z1) ** (p - m) * (s - z2) ** (p - m), s, z1, z2, modulus=p)


def psi_coefficients(p: int, m: int) -> Tuple[sp.Poly, sp.Poly]:
    """Coefficients of s^(p-1) in master/(s - z1) and master/(s - z2), as polynomials in z1, z2."""
    phi = master_polynomial(p, m)
    out = []
    for z in (z1, z2):
        quo, rem = sp.div(phi, sp.Poly(s - z, s, z1, z2, modulus=p))
        if not rem.is_zero:
            raise DivisionNotExact(f"s - {z} does not divide the master polynomial")
        terms = {(a, b): c for (e, a, b), c in quo.terms() if e == p - 1}
        out.append(sp.Poly.from_dict(terms, z1, z2, modulus=p) if terms
                   else sp.Poly(0, z1, z2, modulus=p))
    return out[0], out[1]


def psi_closed_form(p: int, m: int) -> Tuple[sp.Poly, sp.Poly]:
    """Binomial expansion of the same coefficients (independent of the division route)."""
    n = p - m
    sign = (-1) ** n
    first = sum(sign * comb(n - 1, j) * comb(n, n - j) * z1**j * z2 ** (n - j) for j in range(n + 1))
    second = sum(sign * comb(n, j) * comb(n - 1, n - j) * z1**j * z2 ** (n - j) for j in range(n + 1))
    return (sp.Poly(first, z1, z2, modulus=p), sp.Poly(second, z1, z2, modulus=p))


def dehomogenize(poly: sp.Poly, degree: int, p: int) -> sp.Poly:
    """z1^(-degree) * poly with z2/z1 -> q; poly must be homogeneous of that degree."""
    terms = {}
    for (a, b), c in poly.terms():
        if a + b != degree:
            raise DomainError("polynomial is not homogeneous of the stated degree")
        terms[(b,)] = c
    return sp.Poly.from_dict(terms, q, modulus=p) if terms else sp.Poly(0, q, modulus=p)


# --------------------------------------------------------------------------
# the section


@dataclass(frozen=True)
class FlatSection:
    """Pair of q-polynomials over F_p in the stable basis (ascending coefficients)."""

    p: int
    m: int
    entries: Tuple[Tuple[int, ...], Tuple[int, ...]]
    basis: str = "stable"

    @property
    def mu(self) -> FieldElement:
        return FieldElement(self.m, PrimeModulus(self.p))

    def polys(self) -> Tuple[sp.Poly, sp.Poly]:
        return _qpoly(self.entries[0], self.p), _qpoly(self.entries[1], self.p)

    def degree(self) -> int:
        return max(len(e) for e in self.entries) - 1

    def times(self, coeffs: Sequence[int]) -> "FlatSection":
        """Multiply both entries by the polynomial with ascending ``coeffs``."""
        f = _qpoly(coeffs, self.p)
        return FlatSection(self.p, self.m, tuple(_coeffs(f * e, self.p) for e in self.polys()), self.basis)

    def to_dict(self):
        return {
            "p": self.p,
            "m": self.m,
            "basis": self.basis,
            "entries": [[{"q": d, "c": c} for d, c in enumerate(e) if c] for e in self.entries],
        }

    @classmethod
    def from_dict(cls, data) -> "FlatSection":
        p = data["p"]
        entries = []
        for e in data["entries"]:
            top = max((r["q"] for r in e), default=-1)
            coeffs = [0] * (top + 1)
            for r in e:
                coeffs[r["q"]] = r["c"] % p
            entries.append(tuple(coeffs))
        return cls(p, data["m"], (entries[0], entries[1]), data.get("basis", "stable"))


def arithmetic_flat_section(p: int, m: int) -> FlatSection:
    """(-1)^(p-m) (1-q)^(2m) (sum_d C(p-m-1, p-m-d) C(p-m, d) q^d, sum_d C(p-m, p-m-d) C(p-m-1, d) q^d)."""
    if not 0 <= m < p:
        raise DomainError(f"m must lie in [0, {p})")
    n = p - m
    sign = (-1) ** n
    first = _qpoly([sign * comb(n - 1, n - d) * comb(n, d) if n - d >= 0 else 0 for d in range(n + 1)], p)
    second = _qpoly([sign * comb(n, n - d) * comb(n - 1, d) for d in range(n + 1)], p)
    gauge = sp.Poly((1 - q) ** (2 * m), q, modulus=p)
    return FlatSection(p, m, (_coeffs(gauge * first, p), _coeffs(gauge * second, p)))


def gauged_psi_section(p: int, m: int, gauge_exponent: int = None) -> Tuple[sp.Poly, sp.Poly]:
    """(1-q)^(2m) z1^-(p-m) (Psi_1, Psi_2) via the master-polynomial route."""
    e = 2 * m if gauge_exponent is None else gauge_exponent
    psi = psi_coefficients(p, m)
    gauge = sp.Poly((1 - q) ** e, q, modulus=p)
    return tuple(gauge * dehomogenize(f, p - m, p) for f in psi)


# --------------------------------------------------------------------------
# specialized structure-constant matrices


@dataclass(frozen=True)
class SpecializedSigma:
    """q^d matrix of the operation in the stable basis at h = mu t.

    ``matrix`` holds the coefficients of t^p (all entries are multiples of t^p).
    """

    p: int
    mu: int
    d: int
    matrix: Tuple[Tuple[int, int], Tuple[int, int]]
    basis: str = "stable"

    def scaled(self, c: int) -> "SpecializedSigma":
        mat = tuple(tuple(v * c % self.p for v in row) for row in self.matrix)
        return SpecializedSigma(self.p, self.mu, self.d, mat, self.basis)


def _a(mu, ell, d, p):
    # C(mu + d - ell - 1, d) C(d, ell); binom(., negative) = 0, binom(d, ell > d) = 0
    if d < 0 or ell < 0 or ell > d:
        return 0
    return binom_mod(mu + d - ell - 1, d, p) * comb(d, ell)


def _b(mu, ell, d, p):
    if d < 0 or ell < 0 or ell > d:
        return 0
    return binom_mod(mu + d - ell, d, p) * comb(d, ell)


def sigma_d_specialized(p: int, mu, d: int) -> SpecializedSigma:
    m = _lift(p, mu)
    if d < 0 or d > p:
        raise DomainError(f"d must lie in [0, {p}]")
    if d == 0:
        mat = ((0, 0), (m, 0))
    elif d == p:
        mat = ((0, m), (m, 0))
    else:
        e = [[0, 0], [0, 0]]
        for ell in range(d + 1):
            e[0][0] -= _a(m, ell - 1, d - 1, p) * _b(m, ell, d, p)
            e[0][1] -= _a(m, ell - 1, d - 1, p) * _b(m, ell, d - 1, p)
            e[1][0] += _a(m, ell, d, p) * _b(m, ell, d, p)
            e[1][1] += _a(m, ell, d, p) * _b(m, ell, d - 1, p)
        mat = tuple(tuple(m * v % p for v in row) for row in e)
    return SpecializedSigma(p, m, d, mat)


def _apply(mat, vec: Tuple[sp.Poly, sp.Poly]) -> Tuple[sp.Poly, sp.Poly]:
    return (vec[0] * mat[0][0] + vec[1] * mat[0][1], vec[0] * mat[1][0] + vec[1] * mat[1][1])


def annihilation_check(p: int, mu, section: FlatSection = None):
    """Check q^p (S_0 - S_p) I = (S_0 + S_1 q + ... + S_{p-1} q^{p-1}) I.

    Returns ``(ok, defect)`` where defect is the pair of ascending coefficient
    tuples of left minus right (after dividing out the common t^p).
    """
    m = _lift(p, mu)
    I = (section or arithmetic_flat_section(p, m)).polys()
    s0 = sigma_d_specialized(p, m, 0).matrix
    sp_ = sigma_d_specialized(p, m, p).matrix
    diff = tuple(tuple((s0[i][j] - sp_[i][j]) % p for j in range(2)) for i in range(2))
    qp = sp.Poly(q**p, q, modulus=p)
    lhs = tuple(qp * v for v in _apply(diff, I))
    rhs = (sp.Poly(0, q, modulus=p), sp.Poly(0, q, modulus=p))
    for d in range(p):
        qd = sp.Poly(q**d, q, modulus=p)
        term = _apply(sigma_d_specialized(p, m, d).matrix, I)
        rhs = (rhs[0] + qd * term[0], rhs[1] + qd * term[1])
    defect = (_coeffs(lhs[0] - rhs[0], p), _coeffs(lhs[1] - rhs[1], p))
    return (not defect[0] and not defect[1]), defect


def hypergeometric_structure_constant(p: int, mu, d: int) -> FieldElement:
    """mu sum_{ell <= d} C(mu-ell+d-1, d) C(mu-ell+d, d) C(d, ell)^2, for 1 <= d < p."""
    if not 1 <= d < p:
        raise DomainError(f"d must lie in [1, {p})")
    m = _lift(p, mu)
    total = 0
    for ell in range(d + 1):
        total += binom_mod(m - ell + d - 1, d, p) * binom_mod(m - ell + d, d, p) * comb(d, ell) ** 2
    return FieldElement(m * total % p, PrimeModulus(p))


# --------------------------------------------------------------------------
# differential equations


def _euler_z(poly: sp.Poly) -> sp.Poly:
    """(z2 d/dz2 - z1 d/dz1) applied to a polynomial in z1, z2."""
    return poly.diff(z2) * sp.Poly(z2, z1, z2, modulus=poly.get_modulus()) - poly.diff(z1) * sp.Poly(
        z1, z1, z2, modulus=poly.get_modulus())


def pregauge_dde_holds(p: int, m: int) -> bool:
    """(z2 - z1) D I = m [(z2 - z1) A + (z1 + z2) K] I for I = (Psi_1, Psi_2),
    where D = z2 d/dz2 - z1 d/dz1 = 2 q d/dq, A = [[0, 1], [-1, 0]], K = [[-1, 1], [1, -1]].
    """
    P = lambda e: sp.Poly(e, z1, z2, modulus=p)
    I = psi_coefficients(p, m)
    lhs = [P(z2 - z1) * _euler_z(f) for f in I]
    A = ((0, 1), (-1, 0))
    K = ((-1, 1), (1, -1))
    rhs = []
    for i in range(2):
        acc = P(0)
        for j in range(2):
            acc = acc + (P(z2 - z1) * A[i][j] + P(z1 + z2) * K[i][j]) * I[j]
        rhs.append(acc * m)
    return all((l - r).is_zero for l, r in zip(lhs, rhs))


def stable_qde_holds(p: int, m: int, vec: Tuple[sp.Poly, sp.Poly]) -> bool:
    """(1-q) q I' = -m ((1-q) N + q J) I with N = [[0, 0], [1, 0]], J all ones."""
    one_minus_q = sp.Poly(1 - q, q, modulus=p)
    qq = sp.Poly(q, q, modulus=p)
    lhs = [one_minus_q * qq * f.diff(q) for f in vec]
    total = vec[0] + vec[1]
    rhs = [qq * total * (-m), (one_minus_q * vec[0] + qq * total) * (-m)]
    return all((l - r).is_zero for l, r in zip(lhs, rhs))


def reduced_dde_check(p: int, m: int, gauge_exponent: int = None) -> bool:
    """Pre-gauge equation for (Psi_1, Psi_2) and the stable-basis equation after the gauge."""
    return pregauge_dde_holds(p, m) and stable_qde_holds(p, m, gauged_psi_section(p, m, gauge_exponent))

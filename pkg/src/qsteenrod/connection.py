"""Quantum connection of T*P^1 and flat endomorphisms.

Conventions. Matrices act on column vectors in the basis ``(1, b)`` (the
"geometric" basis) or ``(b - h, b)`` (the "stable" basis). The connection is
``t q d/dq - B`` where ``B`` is the matrix of quantum multiplication by the
fiber class; only ``B`` is stored. An endomorphism ``S`` is flat when

    t q dS/dq = B S - S B.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Tuple

from .errors import (
    BasisMismatch,
    InconsistentSystem,
    NonInvertibleOrder,
    NotFlat,
    RingMismatch,
    TruncationError,
)
from .localization import INSERTION_PAIRS, ONE, B as CLS_B, InsertionClass, structure_constant_s1
from .poly_series import (
    EXACT,
    GEOMETRIC,
    GF,
    STABLE,
    Endo2,
    GradedSeries,
    ScalarRing,
    Window,
    series_inv_unit,
)

CHAR0 = "char0"
MOD_P = "mod_p"


class TruncationTooShallow(TruncationError):
    pass


def _mono(ring, c=1, q=0, t=0, h=0, window=EXACT):
    return GradedSeries.monomial(ring, c, q=q, t=t, h=h, window=window)


def geometric_series(ring: ScalarRing, q_max: int) -> GradedSeries:
    """q/(1-q) through q^q_max, computed as q * (1-q)^-1."""
    w = Window(q_max=q_max)
    one_minus_q = GradedSeries(ring, {(0, 0, 0, 0): 1, (1, 0, 0, 0): -1}, w)
    return (series_inv_unit(one_minus_q, "q") * _mono(ring, q=1)).restrict(w)


# --------------------------------------------------------------------------
# pairing


def pairing_matrix(ring: ScalarRing) -> Endo2:
    """Gram matrix of the S^1-equivariant pairing on (1, b): [[2/h^2, 1/h], [1/h, 0]]."""
    z = GradedSeries.zero(ring)
    return Endo2([[_mono(ring, 2, h=-2), _mono(ring, 1, h=-1)], [_mono(ring, 1, h=-1), z]])


def inverse_pairing_matrix(ring: ScalarRing) -> Endo2:
    """[[0, h], [h, -2]]."""
    z = GradedSeries.zero(ring)
    return Endo2([[z, _mono(ring, 1, h=1)], [_mono(ring, 1, h=1), _mono(ring, -2)]])


_INDEX = {ONE: 0, CLS_B: 1}


def pairing_to_matrix(constants: Dict[Tuple[InsertionClass, InsertionClass], GradedSeries]) -> Endo2:
    """Endomorphism M with (M e_j, e_i) = constants[(e_j, e_i)].

    ``constants`` maps (b0, b_inf) to the pairing value (S(b0), b_inf).
    """
    entries = {(_INDEX[b_inf], _INDEX[b0]): v for (b0, b_inf), v in
               ((tuple(InsertionClass.parse(c) for c in k), v) for k, v in constants.items())}
    ring = next(iter(constants.values())).ring
    P = Endo2([[entries[(i, j)] for j in range(2)] for i in range(2)])
    return inverse_pairing_matrix(ring) @ P


def matrix_to_pairing(m: Endo2) -> Dict[Tuple[InsertionClass, InsertionClass], GradedSeries]:
    if m.basis != GEOMETRIC:
        raise BasisMismatch("pairing values are read off in the geometric basis")
    P = pairing_matrix(m.ring) @ m
    return {(b0, b_inf): P[_INDEX[b_inf], _INDEX[b0]] for b0, b_inf in INSERTION_PAIRS}


# --------------------------------------------------------------------------
# connections


@dataclass(frozen=True)
class Connection:
    """t q d/dq - matrix."""

    matrix: Endo2
    scalar_mode: str = MOD_P

    @property
    def basis(self) -> str:
        return self.matrix.basis

    @property
    def ring(self) -> ScalarRing:
        return self.matrix.ring


def quantum_product_b(ring: ScalarRing, q_max: int) -> Endo2:
    """Matrix of quantum multiplication by b on (1, b).

    Built from the three-point invariants: <b,b,b>_d = h for all d >= 1 and
    <b,b,1>_d = 0 (fundamental class axiom), so (b*b, b) = h q/(1-q) and
    (b*b, 1) = 0; the pairing converts these into coordinates.
    """
    geo = geometric_series(ring, q_max)
    w = geo.window
    bb_pairings = (GradedSeries.zero(ring, w), geo * _mono(ring, h=1))  # (b*b, 1), (b*b, b)
    ginv = inverse_pairing_matrix(ring)
    bb = ginv.apply(bb_pairings)
    z = GradedSeries.zero(ring, w)
    return Endo2([[z, bb[0]], [GradedSeries.one(ring, w), bb[1]]])


def geometric_connection(ring: ScalarRing, q_max: int) -> Connection:
    return Connection(quantum_product_b(ring, q_max), MOD_P if ring.p else CHAR0)


def stable_connection(ring: ScalarRing, q_max: int) -> Connection:
    """-h (N + q/(1-q) J) in the stable basis, written down directly."""
    geo = geometric_series(ring, q_max)
    mh = _mono(ring, -1, h=1)
    a = geo * mh
    return Connection(Endo2([[a, a], [a + mh, a]], STABLE), MOD_P if ring.p else CHAR0)


def _basis_change(ring) -> Tuple[Endo2, Endo2]:
    """S with columns (b - h, b) in (1, b) coordinates, and its inverse."""
    z = GradedSeries.zero(ring)
    one = GradedSeries.one(ring)
    S = Endo2([[_mono(ring, -1, h=1), z], [one, one]])
    Sinv = Endo2([[_mono(ring, -1, h=-1), z], [_mono(ring, 1, h=-1), one]])
    return S, Sinv


def to_stable_basis(e: Endo2) -> Endo2:
    """S^-1 e S. One order of h precision is lost to the 1/h in S^-1."""
    if e.basis != GEOMETRIC:
        raise BasisMismatch("expected a geometric-basis matrix")
    S, Sinv = _basis_change(e.ring)
    out = Sinv @ e @ S
    return Endo2(out.entries, STABLE)


def from_stable_basis(e: Endo2) -> Endo2:
    if e.basis != STABLE:
        raise BasisMismatch("expected a stable-basis matrix")
    S, Sinv = _basis_change(e.ring)
    out = S @ Endo2(e.entries, GEOMETRIC) @ Sinv
    return out


def t_q_derivative(e: Endo2) -> Endo2:
    return e.map(lambda s: s.q_derivative().shift(t=1))


def covariant_constancy_defect(sigma: Endo2, conn: Connection) -> Endo2:
    """t q d(sigma)/dq - [B, sigma]."""
    if sigma.basis != conn.basis:
        raise BasisMismatch(f"{sigma.basis} endomorphism against a {conn.basis} connection")
    if sigma.ring != conn.ring:
        raise RingMismatch("endomorphism and connection over different rings")
    q_max = sigma.window.meet(conn.matrix.window).q_max
    if q_max is not None and q_max < 2:
        raise TruncationTooShallow("need q_max >= 2 for a meaningful flatness check")
    return t_q_derivative(sigma) - conn.matrix.commutator(sigma)


# --------------------------------------------------------------------------
# the operation itself, assembled from localization


def classical_steenrod_term(p: int, basis: str = GEOMETRIC, mu: Optional[int] = None) -> Endo2:
    """St(b) cup: [[0, 0], [-t^{p-1}, 0]] on (1, b).

    In the stable basis pass ``mu`` to get the specialization h = mu t,
    which is mu t^p [[0, 0], [1, 0]].
    """
    from .poly_series import substitute_h

    R = GF(p)
    z = GradedSeries.zero(R)
    geo = Endo2([[z, z], [_mono(R, -1, t=p - 1), z]])
    if basis == GEOMETRIC:
        return geo
    st = to_stable_basis(geo)
    if mu is None:
        return st
    return st.map(lambda s: substitute_h(s, mu))


def classical_pairings(p: int) -> Dict[Tuple[InsertionClass, InsertionClass], GradedSeries]:
    """(St(b) cup b0, b_inf); only (1, 1) is nonzero: -t^{p-1}/h."""
    R = GF(p)
    out = {k: GradedSeries.zero(R) for k in INSERTION_PAIRS}
    out[(ONE, ONE)] = _mono(R, -1, t=p - 1, h=-1)
    return out


def steenrod_pairings(p: int, q_max: int, h_max: Optional[int]):
    """All four pairing values (QSigma(b0), b_inf) as q-series through q^q_max, h^h_max.

    ``h_max=None`` gives the exact polynomial dependence on h.
    """
    w = Window(q_max=q_max, h_max=h_max)
    out = {}
    for pair, classical in classical_pairings(p).items():
        acc = classical.with_window(w)
        for d in range(1, q_max + 1):
            hm = h_max if h_max is not None else 2 * d
            acc = acc + structure_constant_s1(p, d, *pair, hm).shift(q=d).with_window(w)
        out[pair] = acc
    return out


def steenrod_matrix(p: int, q_max: int, h_max: Optional[int] = None) -> Endo2:
    """The S^1-equivariant quantum Steenrod operation of b, geometric basis."""
    return pairing_to_matrix(steenrod_pairings(p, q_max, h_max))


# --------------------------------------------------------------------------
# order-by-order solutions


def _split_by_q(e: Endo2, q_max: int):
    return [e.map(lambda s, d=d: s.select("q", d)) for d in range(q_max + 1)]


def char0_recursion(classical: Endo2, q_max: int, ring: Optional[ScalarRing] = None) -> Endo2:
    """Flat extension of a classical term commuting with the q^0 part of B.

    Solves t k S_k - [B_0, S_k] = sum_{j<k} [B_{k-j}, S_j] degree by degree.
    Since B_0 is nilpotent, the left side inverts as a finite geometric series
    in ad(B_0)/(t k). Over F_p the step k = 0 mod p has no solution in general
    and raises :class:`NonInvertibleOrder`.
    """
    ring = ring or classical.ring
    if classical.ring != ring:
        raise RingMismatch("classical term over a different ring")
    B = _split_by_q(quantum_product_b(ring, q_max).restrict(EXACT), q_max)
    B0 = B[0]
    zero = GradedSeries.zero(ring)
    S = [classical.map(lambda s: s.select("q", 0))]
    if not B0.commutator(S[0]).is_zero():
        raise InconsistentSystem("classical term does not commute with cup product by b")
    for k in range(1, q_max + 1):
        if ring.p and k % ring.p == 0:
            raise NonInvertibleOrder(k, ring.p)
        rhs = Endo2([[zero, zero], [zero, zero]])
        for j in range(k):
            rhs = rhs + B[k - j].commutator(S[j])
        inv_tk = ring.inv(ring.reduce(k)) if ring.p else Fraction(1, k)
        term = rhs.map(lambda s: s.shift(t=-1) * inv_tk)
        sol = term
        for _ in range(3):
            term = B0.commutator(term).map(lambda s: s.shift(t=-1) * inv_tk)
            if term.is_zero():
                break
            sol = sol + term
        S.append(sol)
    total = S[0]
    for k in range(1, q_max + 1):
        total = total + S[k].map(lambda s, k=k: s.shift(q=k))
    return total.restrict(Window(q_max=q_max))


def normalize_traceless(e: Endo2) -> Endo2:
    """e - (tr e / 2) id."""
    half = e.trace() * e.ring.inv(e.ring.reduce(2))
    return e - Endo2.scalar(e.ring, half, e.basis)


def modp_flat_solver(p: int, c_prime: GradedSeries, q_max: int, h_max: Optional[int] = None) -> Endo2:
    """The traceless flat endomorphism [[a, b], [c, -a]] whose lower-left entry
    has q^{pk} coefficients given by ``c_prime``.

    Writing Q = q/(1-q) and (Qf)_k = sum_{j<k} f_j, flatness reads
        k t a_k = h^2 (Qc)_k - b_k
        k t b_k = 2h (Qb)_k - 2h^2 (Qa)_k
        k t c_k = 2 a_k - 2h (Qc)_k
    For p !| k this determines (a_k, b_k, c_k); for p | k it forces
    b_k = h^2 (Qc)_k, a_k = h (Qc)_k, leaves c_k free, and the middle
    equation becomes a consistency condition.
    """
    R = GF(p)
    if c_prime.ring != R:
        raise RingMismatch("c_prime must be a series over F_p")
    if any(k[0] % p for k in c_prime.terms):
        raise ValueError("c_prime must be supported on q-exponents divisible by p")
    w = Window(h_max=h_max)
    zero = GradedSeries.zero(R, w)
    a, b, c = [zero], [zero], [c_prime.select("q", 0).restrict(w)]
    Sa, Sb, Sc = zero, zero, zero  # running sums over j < k
    h1, h2 = _mono(R, 1, h=1), _mono(R, 1, h=2)
    for k in range(1, q_max + 1):
        Sa, Sb, Sc = Sa + a[-1], Sb + b[-1], Sc + c[-1]
        if k % p:
            inv_tk = R.inv(k % p)
            bk = ((Sb * h1) * 2 - (Sa * h2) * 2).shift(t=-1) * inv_tk
            ak = ((Sc * h2) - bk).shift(t=-1) * inv_tk
            ck = ((ak * 2) - (Sc * h1) * 2).shift(t=-1) * inv_tk
        else:
            if not ((Sb * h1) * 2 - (Sa * h2) * 2).is_zero():
                raise InconsistentSystem(f"flatness fails to close at q^{k}")
            bk = Sc * h2
            ak = Sc * h1
            ck = c_prime.select("q", k).restrict(w)
        a.append(ak.restrict(w))
        b.append(bk.restrict(w))
        c.append(ck)

    def assemble(parts):
        out = GradedSeries.zero(R, Window(q_max=q_max, h_max=h_max))
        for k, s in enumerate(parts):
            out = out + s.shift(q=k)
        return out

    A, Bs, C = assemble(a), assemble(b), assemble(c)
    return Endo2([[A, Bs], [C, -A]])


def rank2_decompose(sigma: Endo2, qsigma: Endo2, p: int, check_flat: bool = True):
    """Write a flat sigma as f1 id + f2 qsigma with f1, f2 in F_p((t, h))[[q^p]]."""
    R = GF(p)
    q_max = sigma.window.meet(qsigma.window).q_max
    if check_flat:
        defect = covariant_constancy_defect(sigma, geometric_connection(R, q_max))
        if not defect.is_zero():
            raise NotFlat("sigma is not covariantly constant")
    c_q = qsigma[1, 0]
    f2 = sigma[1, 0] * series_inv_unit(c_q, "q", q_max)
    rest = sigma - qsigma * f2
    f1 = rest.trace() * R.inv(2)
    return f1, f2

import json
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from conftest import series, series_triples
from qsteenrod.errors import BasisMismatch, NotAUnit, RingMismatch, TruncationError
from qsteenrod.poly_series import (
    EXACT,
    GF,
    QQ,
    Endo2,
    FactoredRationalFn,
    GradedSeries,
    Window,
    coeff_x,
    format_series,
    homogeneity_check,
    inverse_linear_power,
    poly_rem_x,
    series_inv_unit,
    substitute_h,
)


@given(series_triples())
def test_ring_axioms(abc):
    a, b, c = abc
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + b == b + a
    assert (a - a).is_zero()


@given(series())
def test_one_and_zero(a):
    assert a * GradedSeries.one(a.ring) == a
    assert (a * GradedSeries.zero(a.ring)).is_zero()


@given(st.data(), st.sampled_from([GF(3), GF(5), QQ]))
def test_q_inverse_roundtrip(data, ring):
    a = data.draw(series(ring=ring, window=Window(q_max=6)))
    lead = GradedSeries.monomial(ring, 2, t=1, h=-1)
    u = (a.shift(q=1) + lead).restrict(Window(q_max=6))
    assert u * series_inv_unit(u, "q") == GradedSeries.one(ring, Window(q_max=6))


def test_inverse_needs_single_leading_monomial():
    R = GF(5)
    two_terms = GradedSeries(R, {(0, 1, 0, 0): 1, (0, 0, 1, 0): 1}, Window(q_max=3))
    with pytest.raises(NotAUnit):
        series_inv_unit(two_terms, "q")
    with pytest.raises(TruncationError):
        series_inv_unit(GradedSeries.one(R), "q")


def test_geometric_series_inverse():
    R = GF(3)
    w = Window(q_max=7)
    one_minus_q = GradedSeries(R, {(0, 0, 0, 0): 1, (1, 0, 0, 0): -1}, w)
    inv = series_inv_unit(one_minus_q)
    assert inv == GradedSeries(R, {(k, 0, 0, 0): 1 for k in range(8)}, w)


@pytest.mark.parametrize("ring", [QQ, GF(5), GF(7)])
@pytest.mark.parametrize("c,m", [(1, 1), (-2, 3), (3, 2)])
def test_coeff_x_against_division(ring, c, m):
    # numerator / (x + c t)^m, expanded through x^k, times (x + c t)^m recovers the numerator
    k = 5
    num = GradedSeries(ring, {(0, 2, 0, 0): 1, (0, 1, 1, 1): 3, (0, 0, 0, 3): -1})
    f = FactoredRationalFn(num, ((c, m),))
    expansion = GradedSeries(ring, {})
    for j in range(k + 1):
        expansion = expansion + coeff_x(f, j).shift(x=j)
    linear = GradedSeries.linear_x(ring, c_t=c) ** m
    assert (expansion * linear).restrict(Window(x_max=k)) == num.restrict(Window(x_max=k))


def test_inverse_linear_power_high_order_mod_p():
    # orders past p used to divide by j; the binomial route stays integral
    R = GF(3)
    s = inverse_linear_power(R, 1, 2, 7)
    assert (s * GradedSeries.linear_x(R, c_t=1) ** 2).restrict(Window(x_max=7)) == GradedSeries.one(R, Window(x_max=7))


def test_inverse_linear_power_rejects_zero_shift():
    with pytest.raises(NotAUnit):
        inverse_linear_power(GF(5), 5, 1, 3)


@given(series(ring=GF(5), window=EXACT), series(ring=GF(5), window=EXACT), st.integers(0, 4))
def test_substitute_h_is_multiplicative(a, b, mu):
    assume(mu or (a.min_exp("h") or 0) >= 0 and (b.min_exp("h") or 0) >= 0)
    assert substitute_h(a * b, mu) == substitute_h(a, mu) * substitute_h(b, mu)


def test_substitute_h_char0_refused():
    with pytest.raises(RingMismatch):
        substitute_h(GradedSeries.one(QQ), 1)


def test_precision_rule_for_poles():
    R = GF(5)
    a = GradedSeries(R, {(0, 0, 2, 0): 1}, Window(h_max=3))
    pole = GradedSeries(R, {(0, 0, -1, 0): 1}, Window(h_max=3))
    prod = a * pole
    # known through h^(3 - 1) only
    assert prod.window.h_max == 2
    with pytest.raises(TruncationError):
        prod.h_coefficient(3)


def test_pole_floor_raises():
    with pytest.raises(TruncationError):
        GradedSeries(GF(3), {(0, -9, 0, 0): 1}, Window(t_min=-7))


def test_equality_on_common_window():
    R = GF(3)
    a = GradedSeries(R, {(0, 0, 0, 0): 1, (5, 0, 0, 0): 1}, Window(q_max=6))
    b = GradedSeries(R, {(0, 0, 0, 0): 1}, Window(q_max=4))
    assert a == b
    assert a != GradedSeries(R, {(0, 0, 0, 0): 1}, Window(q_max=6))


def test_ring_mismatch():
    with pytest.raises(RingMismatch):
        GradedSeries.one(GF(3)) + GradedSeries.one(GF(5))


def test_poly_rem_x():
    R = QQ
    x = GradedSeries.monomial(R, 1, x=1)
    g = x * x - GradedSeries.monomial(R, 1, t=2)  # x^2 = t^2
    f = x ** 5
    assert poly_rem_x(f, g) == GradedSeries.monomial(R, 1, t=4, x=1)


@given(series())
def test_records_roundtrip(a):
    back = GradedSeries.from_records(a.ring, json.loads(a.to_json()), a.window)
    assert back == a


def test_homogeneity():
    s = GradedSeries(GF(5), {(1, 3, 1, 0): 1, (2, 2, 2, 0): 4})
    assert homogeneity_check(s, 4)
    assert not homogeneity_check(s, 3)


def test_format_series():
    s = GradedSeries(QQ, {(0, 2, -1, 0): -1, (1, 0, 1, 0): Fraction(1, 2)})
    assert format_series(s) == "-t^2·h^-1 + 1/2·h q"


def test_endo2_algebra():
    R = GF(5)
    one, z = GradedSeries.one(R), GradedSeries.zero(R)
    N = Endo2([[z, z], [one, z]])
    assert (N @ N).is_zero()
    assert N.commutator(Endo2.identity(R)).is_zero()
    assert Endo2.from_dict(R, N.to_dict()) == N
    with pytest.raises(BasisMismatch):
        N + Endo2([[z, z], [one, z]], "stable")

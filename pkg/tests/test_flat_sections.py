import pytest
import sympy as sp
from hypothesis import given, strategies as st

from qsteenrod.connection import steenrod_matrix, to_stable_basis
from qsteenrod.errors import DomainError
from qsteenrod.exact_arith import PrimeModulus
from qsteenrod.flat_sections import (
    FlatSection,
    annihilation_check,
    arithmetic_flat_section,
    gauged_psi_section,
    hypergeometric_structure_constant,
    master_polynomial,
    pregauge_dde_holds,
    psi_closed_form,
    psi_coefficients,
    q,
    reduced_dde_check,
    s,
    sigma_d_specialized,
    stable_qde_holds,
    z1,
    z2,
)
from qsteenrod.poly_series import substitute_h

ALL = [(p, m) for p in (3, 5, 7) for m in range(p)]
NONZERO = [(p, m) for p, m in ALL if m]
pm = st.sampled_from(ALL)


def qpoly(expr, p):
    return sp.Poly(expr, q, modulus=p)


def test_master_polynomial_examples():
    assert master_polynomial(3, 2) == sp.Poly(s**2 * (s - z1) * (s - z2), s, z1, z2, modulus=3)
    # Frobenius: (s - z)^3 = s^3 - z^3 mod 3
    assert master_polynomial(3, 0) == sp.Poly((s**3 - z1**3) * (s**3 - z2**3), s, z1, z2, modulus=3)
    with pytest.raises(DomainError):
        master_polynomial(3, 3)


@pytest.mark.parametrize("p,m", ALL)
def test_psi_division_matches_binomials(p, m):
    psi = psi_coefficients(p, m)
    assert psi == psi_closed_form(p, m)
    for f in psi:
        assert all(a + b == p - m for (a, b), _ in f.terms()) or f.is_zero


def test_flat_section_example():
    sec = arithmetic_flat_section(3, 2)
    expect = (qpoly(-(1 - q) ** 4 * q, 3), qpoly(-(1 - q) ** 4, 3))
    assert sec.polys() == expect


@pytest.mark.parametrize("p,m", ALL)
def test_two_routes_to_the_section(p, m):
    assert arithmetic_flat_section(p, m).polys() == gauged_psi_section(p, m)


@given(pm)
def test_section_solves_stable_equation(pair):
    p, m = pair
    assert stable_qde_holds(p, m, arithmetic_flat_section(p, m).polys())


def test_zero_parameter_section():
    # m = 0: I = (-1)^p (sum C(p-1, p-d) C(p, d) q^d, ...) collapses to a monomial pair mod p
    for p in (3, 5, 7):
        sec = arithmetic_flat_section(p, 0)
        assert stable_qde_holds(p, 0, sec.polys())
        assert sec.polys() == (qpoly(-q**p, p), qpoly(-1, p))


@pytest.mark.parametrize("p,m", [(3, 2), (5, 1)])
def test_reduced_dde_examples(p, m):
    assert pregauge_dde_holds(p, m)
    assert reduced_dde_check(p, m)


@pytest.mark.parametrize("p,m", NONZERO)
def test_corrupted_gauge_fails(p, m):
    assert not reduced_dde_check(p, m, gauge_exponent=2 * m + 1)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_sigma_edges(p):
    for mu in range(p):
        assert sigma_d_specialized(p, mu, 0).matrix == ((0, 0), (mu, 0))
        assert sigma_d_specialized(p, mu, p).matrix == ((0, mu), (mu, 0))
    with pytest.raises(DomainError):
        sigma_d_specialized(p, 1, p + 1)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_sigma_matches_engine(p):
    # the binomial formula against the localization engine in the stable basis at h = mu t
    st_matrix = to_stable_basis(steenrod_matrix(p, p, None))
    for mu in range(p):
        spec = st_matrix.map(lambda e, mu=mu: substitute_h(e, mu))
        for d in range(1, p + 1):
            got = tuple(tuple(spec[i, j].select("q", d).coeff(t=p) for j in range(2)) for i in range(2))
            assert got == sigma_d_specialized(p, mu, d).matrix, (p, mu, d)


@pytest.mark.parametrize("p,mu", [(3, 1), (3, 2)] + [(p, m) for p in (5, 7) for m in range(p)])
def test_annihilation(p, mu):
    ok, defect = annihilation_check(p, mu)
    assert ok and defect == ((), ())


def test_annihilation_detects_perturbation():
    sec = arithmetic_flat_section(3, 2)
    first = list(sec.entries[0])
    first[1] = (first[1] + 1) % 3
    bad = FlatSection(3, 2, (tuple(first), sec.entries[1]))
    ok, defect = annihilation_check(3, 2, bad)
    assert not ok and any(defect)


def test_annihilation_of_q_p_multiples():
    sec = arithmetic_flat_section(5, 3)
    ok, _ = annihilation_check(5, 3, sec.times([1, 0, 0, 0, 0, 2]))
    assert ok


@given(st.integers(0, 6))
def test_hypergeometric_d1(mu):
    p = 7
    assert hypergeometric_structure_constant(p, mu, 1).value == 2 * mu**3 % p


def test_hypergeometric_mu_zero():
    assert all(hypergeometric_structure_constant(5, 0, d).value == 0 for d in range(1, 5))


@pytest.mark.parametrize("p", [3, 5, 7])
def test_hypergeometric_is_lower_left_entry(p):
    for mu in range(p):
        for d in range(1, p):
            assert hypergeometric_structure_constant(p, mu, d).value == sigma_d_specialized(p, mu, d).matrix[1][0]


def test_hypergeometric_accepts_field_elements():
    F5 = PrimeModulus(5)
    assert hypergeometric_structure_constant(5, F5(2), 2) == hypergeometric_structure_constant(5, 2, 2)
    with pytest.raises(DomainError):
        hypergeometric_structure_constant(5, PrimeModulus(3)(1), 2)


@given(pm)
def test_section_json_roundtrip(pair):
    sec = arithmetic_flat_section(*pair)
    data = sec.to_dict()
    assert data["basis"] == "stable" and set(data) == {"p", "m", "basis", "entries"}
    assert FlatSection.from_dict(data) == sec

from hypothesis import HealthCheck, settings, strategies as st

from qsteenrod.poly_series import GF, QQ, GradedSeries, Window

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

PRIMES = (3, 5, 7)

monomials = st.tuples(
    st.integers(0, 5),   # q
    st.integers(-3, 3),  # t
    st.integers(-1, 3),  # h
    st.integers(0, 2),   # x
)


@st.composite
def series(draw, ring=None, window=Window(q_max=5, h_max=3, x_max=2), max_terms=5):
    if ring is None:
        ring = draw(st.sampled_from([QQ, GF(3), GF(5), GF(7)]))
    if ring.p:
        coeff = st.integers(1, ring.p - 1)
    else:
        coeff = st.fractions(min_value=-5, max_value=5, max_denominator=6)
    terms = draw(st.dictionaries(monomials, coeff, max_size=max_terms))
    return GradedSeries(ring, terms, window)


@st.composite
def series_triples(draw):
    ring = draw(st.sampled_from([QQ, GF(3), GF(5), GF(7)]))
    return tuple(draw(series(ring=ring)) for _ in range(3))

from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cgl.poly import (
    UniPoly,
    format_poly,
    fp_powmod,
    parse_poly,
    parse_terms,
    poly_gcd,
    poly_powmod,
    subresultant_gcd,
    z_exact_div,
    z_mul,
    z_trim,
)

small = st.integers(-50, 50)
fractions = st.builds(Fraction, small, st.integers(1, 30))
qpolys = st.lists(fractions, min_size=0, max_size=7).map(lambda cs: UniPoly(tuple(cs)))
nonzero_qpolys = qpolys.filter(lambda f: not f.is_zero())


def naive_eval(coeffs, x):
    return sum(Fraction(c) * Fraction(x) ** i for i, c in enumerate(coeffs))


@given(qpolys, qpolys, fractions)
def test_ring_operations_agree_with_pointwise_values(f, g, x):
    assert (f + g)(x) == f(x) + g(x)
    assert (f - g)(x) == f(x) - g(x)
    assert (f * g)(x) == f(x) * g(x)
    assert f(x) == naive_eval(f.coeffs, x)


@given(qpolys, nonzero_qpolys)
def test_division_identity(f, g):
    q, r = divmod(f, g)
    assert q * g + r == f
    assert r.degree < g.degree


@given(qpolys, qpolys)
def test_gcd_divides_both_and_is_monic(f, g):
    h = poly_gcd(f, g)
    if f.is_zero() and g.is_zero():
        assert h.is_zero()
        return
    assert h.lc == 1
    assert (f % h).is_zero()
    assert (g % h).is_zero()


@given(nonzero_qpolys, nonzero_qpolys, nonzero_qpolys)
def test_gcd_recovers_planted_common_factor(a, b, c):
    h = poly_gcd(a * c, b * c)
    assert (h % c.monic()).is_zero()


@given(
    st.lists(st.integers(0, 12), min_size=1, max_size=5),
    st.lists(st.integers(0, 12), min_size=2, max_size=5),
    st.integers(0, 64),
    st.sampled_from([2, 3, 5, 7, 13]),
)
def test_powmod_matches_repeated_multiplication(base, mod, e, p):
    m = UniPoly(tuple(mod) + (1,), p)
    b = UniPoly(tuple(base), p)
    naive = UniPoly((1,), p) % m
    for _ in range(e):
        naive = (naive * b) % m
    assert poly_powmod(b, e, m, p) == naive
    assert fp_powmod(list(b.coeffs), e, list(m.coeffs), p) == list(naive.coeffs)


def test_powmod_rejects_composite_modulus():
    with pytest.raises(ValueError):
        poly_powmod(UniPoly((0, 1), 4), 3, UniPoly((1, 0, 1), 4), 4)


@given(qpolys)
def test_format_parse_round_trip(f):
    assert parse_poly(format_poly(f)) == f


def test_text_format_examples():
    f = parse_poly("-5/74*t^3 + 1*t^0")
    assert f.coeffs == (1, 0, 0, Fraction(-5, 74))
    assert format_poly(f) == "-5/74*t^3 + 1*t^0"
    assert parse_poly(" 3 t^2  - t + 2 ") == UniPoly((2, -1, 3))
    assert parse_poly("0").is_zero()
    assert parse_terms("5/74y^3 - x*z^2", ["x", "y", "z"]) == {
        (0, 3, 0): Fraction(5, 74),
        (1, 0, 2): Fraction(-1),
    }


@pytest.mark.parametrize("bad", ["", "t^", "2*+", "u^2", "(t+1)"])
def test_parse_rejects_malformed_text(bad):
    with pytest.raises(ValueError):
        parse_poly(bad)


def test_mod_p_coefficients_reduce():
    f = UniPoly((7, -1, 15), 5)
    assert f.coeffs == (2, 4)
    assert f.degree == 1


def test_zero_polynomial_conventions():
    z = UniPoly(())
    assert z.degree == -1
    assert z.is_zero()
    assert (z * UniPoly((1, 2))).is_zero()
    with pytest.raises(ZeroDivisionError):
        divmod(UniPoly((1,)), z)


ints = st.lists(st.integers(-20, 20), min_size=1, max_size=5).filter(any)


@given(ints, ints, ints)
def test_subresultant_gcd_matches_rational_gcd(a, b, c):
    f, g = z_mul(a, c), z_mul(b, c)
    g_int = subresultant_gcd(f, g)
    g_rat = poly_gcd(UniPoly(tuple(f)), UniPoly(tuple(g)))
    assert UniPoly(tuple(g_int)).monic() == g_rat


@given(ints, ints)
def test_exact_division_inverts_multiplication(a, b):
    assert z_exact_div(z_mul(a, b), b) == z_trim(a)


def test_exact_division_refuses_remainder():
    with pytest.raises(ArithmeticError):
        z_exact_div([1, 0, 1], [1, 1])

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from fittkit.exact import (
    CyclotomicNumber,
    GaloisElement,
    LocalScalar,
    cyclotomic_polynomial,
    euler_phi,
    format_rational,
    galois_apply,
    is_local_integer,
    p_valuation,
    parse_rational,
    unit_group,
)

from oracles import close, cyc_value


def test_parse_rational_exact_only():
    assert parse_rational("-7/2") == Fraction(-7, 2)
    assert parse_rational("12") == 12
    for bad in ("0.1", "1e3", "1/0", "", "x"):
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_format_round_trip():
    for x in (Fraction(0), Fraction(5), Fraction(-3, 8)):
        assert parse_rational(format_rational(x)) == x


def test_p_valuation():
    assert p_valuation(Fraction(24), 2) == 3
    assert p_valuation(Fraction(5, 12), 2) == -2
    assert p_valuation(7, 3) == 0
    with pytest.raises(ValueError):
        p_valuation(0, 3)


def test_local_scalar():
    x = LocalScalar(3, Fraction(6, 5))
    assert x.valuation() == 1 and not x.is_unit()
    assert (x / LocalScalar(3, 2)).valuation() == 1
    assert LocalScalar(3, Fraction(2, 5)).is_unit()
    with pytest.raises(ValueError):
        LocalScalar(3, Fraction(1, 3))
    assert is_local_integer(Fraction(7, 10), 3) and not is_local_integer(Fraction(1, 6), 3)


@pytest.mark.parametrize("m", [1, 2, 3, 4, 5, 6, 8, 9, 12, 15, 24])
def test_cyclotomic_polynomial_degree_and_root(m):
    poly = cyclotomic_polynomial(m)
    assert len(poly) - 1 == euler_phi(m)
    import cmath
    z = cmath.exp(2j * cmath.pi / m)
    assert abs(sum(complex(c) * z ** i for i, c in enumerate(poly))) < 1e-9


@pytest.mark.parametrize("m", [3, 4, 5, 8, 12])
def test_zeta_power_is_one(m):
    assert CyclotomicNumber.zeta(m) ** m == CyclotomicNumber.rational(m, 1)
    assert CyclotomicNumber.zeta(m, m) == CyclotomicNumber.rational(m, 1)


coeff = st.fractions(min_value=-5, max_value=5, max_denominator=4)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([3, 4, 5, 8, 12]), st.data())
def test_field_ops_match_complex_embedding(m, data):
    n = euler_phi(m)
    a = CyclotomicNumber(m, data.draw(st.lists(coeff, min_size=n, max_size=n)))
    b = CyclotomicNumber(m, data.draw(st.lists(coeff, min_size=n, max_size=n)))
    va, vb = cyc_value(m, a.coeffs), cyc_value(m, b.coeffs)
    assert close(cyc_value(m, (a + b).coeffs), va + vb)
    assert close(cyc_value(m, (a * b).coeffs), va * vb)
    if not b.is_zero():
        assert (a / b) * b == a
        assert close(cyc_value(m, b.inverse().coeffs), 1 / vb)


@pytest.mark.parametrize("m", [5, 8, 12])
def test_norm_and_trace_via_galois_conjugates(m):
    rng = random.Random(m)
    x = CyclotomicNumber(m, [rng.randint(-3, 3) for _ in range(euler_phi(m))])
    conj = [cyc_value(m, galois_apply(x, GaloisElement(m, k)).coeffs) for k in unit_group(m)]
    prod = 1
    for c in conj:
        prod *= c
    assert close(complex(x.trace()), sum(conj))
    assert close(complex(x.norm()), prod)


def test_galois_is_a_field_automorphism():
    m = 12
    x = CyclotomicNumber.from_powers(m, [(1, 2), (3, -1)])
    y = CyclotomicNumber.from_powers(m, [(0, 1), (5, 3)])
    for k in unit_group(m):
        s = GaloisElement(m, k)
        assert galois_apply(x * y, s) == galois_apply(x, s) * galois_apply(y, s)
        assert galois_apply(x + y, s) == galois_apply(x, s) + galois_apply(y, s)

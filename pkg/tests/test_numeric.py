import cmath
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from permlab.errors import FieldMismatchError, ParseError
from permlab.numeric import (
    ApproxComplex,
    CyclotomicNumber,
    GaussianRational,
    coerce_to_field,
    cyclo_make,
    embed,
    euler_phi,
    exact_real_value,
    format_scalar,
    parse_scalar,
    real_sign,
    to_complex,
)

from strategies import fractions, gaussians

G = GaussianRational


def _ref_mul(a, b):
    return (a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re)


@given(gaussians, gaussians)
def test_gaussian_product_matches_formula(a, b):
    p = a * b
    assert (p.re, p.im) == _ref_mul(a, b)


@given(gaussians, gaussians, gaussians)
def test_gaussian_ring_laws(a, b, c):
    assert (a + b) * c == a * c + b * c
    assert a * b == b * a
    assert (a - a).is_zero()


@given(gaussians.filter(lambda z: not z.is_zero()))
def test_gaussian_inverse(a):
    assert a * (1 / a) == G(1)
    assert a.abs_squared() == a.re**2 + a.im**2
    assert (a * a.conjugate()).is_real()


def test_gaussian_mixed_with_fraction():
    assert G(1, 2) + Fraction(1, 2) == G(Fraction(3, 2), 2)
    assert 2 * G(1, -1) == G(2, -2)


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5, 8, 12, 40])
def test_root_of_unity_order(N):
    z = cyclo_make(N, 1)
    acc = cyclo_make(N, 0)
    for _ in range(N):
        acc = acc * z
    assert acc == cyclo_make(N, 0)
    assert len(z.coeffs) == euler_phi(N)


def test_euler_phi_values():
    assert [euler_phi(n) for n in (1, 2, 3, 4, 5, 8, 12, 40)] == [1, 1, 2, 2, 4, 4, 4, 16]


@given(st.lists(st.integers(-3, 3), min_size=16, max_size=16), st.lists(st.integers(-3, 3), min_size=16, max_size=16))
def test_cyclotomic_product_agrees_with_complex(ca, cb):
    a = CyclotomicNumber(40, ca)
    b = CyclotomicNumber(40, cb)
    w = cmath.exp(2j * cmath.pi / 40)
    za = sum(c * w**k for k, c in enumerate(ca))
    zb = sum(c * w**k for k, c in enumerate(cb))
    assert abs(to_complex(a * b) - za * zb) < 1e-9 * (1 + abs(za * zb))
    assert abs(to_complex(a + b) - (za + zb)) < 1e-9 * (1 + abs(za + zb))


@given(st.lists(st.integers(-3, 3), min_size=4, max_size=4).filter(any))
def test_cyclotomic_inverse(c):
    a = CyclotomicNumber(12, c)
    assert a * a.inverse() == cyclo_make(12, 0)


def test_sqrt2_in_conductor_8_and_40():
    for N in (8, 40):
        k = N // 8
        s = cyclo_make(N, k) + cyclo_make(N, -k)
        assert s * s == CyclotomicNumber.from_rational(N, 2)


def test_cos_pi_over_5_is_golden():
    c = (cyclo_make(40, 4) + cyclo_make(40, -4)) * Fraction(1, 2)
    # 4 c^2 - 2 c - 1 = 0
    assert (4 * c * c - 2 * c - 1).is_zero()


def test_conjugation_and_reality():
    z = cyclo_make(40, 3)
    assert z * z.conjugate() == cyclo_make(40, 0)
    assert (z + z.conjugate()).is_real()
    assert exact_real_value(CyclotomicNumber.from_rational(40, Fraction(7, 3))) == Fraction(7, 3)


def test_gaussian_lifts_into_cyclotomic():
    g = G(3, -2)
    c = coerce_to_field(g, "cycN:40")
    assert c.to_gaussian() == g
    with pytest.raises(FieldMismatchError):
        coerce_to_field(G(1, 1), "rational")
    with pytest.raises(FieldMismatchError):
        coerce_to_field(cyclo_make(5, 1), "gaussian")


@given(fractions, fractions)
def test_embed_contains_true_value(a, b):
    x = G(a, b)
    e = embed(x, 64)
    assert e.contains(x)
    with mpmath.workprec(300):
        true = mpmath.mpc(mpmath.mpf(a.numerator) / a.denominator, mpmath.mpf(b.numerator) / b.denominator)
        assert abs(e.value - true) <= e.radius + mpmath.mpf(2) ** -250


def test_approx_arithmetic_keeps_enclosure():
    third = embed(Fraction(1, 3), 53)
    acc = third
    for _ in range(30):
        acc = acc * third + third
    # exact recurrence in rationals
    q = Fraction(1, 3)
    for _ in range(30):
        q = q * Fraction(1, 3) + Fraction(1, 3)
    assert acc.contains(q)
    assert acc.radius < 1e-13


def test_real_sign():
    assert real_sign(Fraction(-1, 7)) == -1
    assert real_sign(G(0)) == 0
    # cos(pi/5) - 4/5 is about 0.009
    c = (cyclo_make(40, 4) + cyclo_make(40, -4)) * Fraction(1, 2)
    assert real_sign(c - Fraction(4, 5)) == 1
    assert real_sign(c - Fraction(81, 100)) == -1
    # 0.80901699437... against a bound 6e-9 above it
    assert real_sign(c - Fraction(809017, 1000000)) == -1


@pytest.mark.parametrize("text,value", [
    ("3/4", Fraction(3, 4)),
    ("-2", Fraction(-2)),
    ("1/2+3/4*i", G(Fraction(1, 2), Fraction(3, 4))),
    ("-i", G(0, -1)),
    ("2-i", G(2, -1)),
    ("0.5", Fraction(1, 2)),
])
def test_parse_literals(text, value):
    assert parse_scalar(text) == value


@given(gaussians)
def test_format_parse_round_trip(z):
    assert parse_scalar(format_scalar(z), "gaussian") == z


@given(st.lists(st.integers(-5, 5), min_size=16, max_size=16))
def test_cyclotomic_round_trip(c):
    z = CyclotomicNumber(40, c)
    assert parse_scalar(format_scalar(z), "cycN:40") == z


@pytest.mark.parametrize("bad", ["", "1/0x", "cyc(0)[1]", "abc"])
def test_parse_rejects(bad):
    with pytest.raises((ParseError, ValueError, ZeroDivisionError)):
        parse_scalar(bad)


def test_float_literal_in_float_field():
    x = parse_scalar("0.1", "float", 128)
    assert isinstance(x, ApproxComplex)
    assert x.contains(Fraction(1, 10))

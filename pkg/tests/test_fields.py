from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from covrecon.errors import MixedFieldError
from covrecon.fields import (PrimeField, QuadExt, canon, content, field_div, field_of,
                             format_scalar, is_square, parse_scalar, rational_sqrt,
                             sqrt_or_extend, squarefree_decomposition)

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=20)
radicands = st.sampled_from([-7, -3, -1, 2, 3, 5, 6, 10])


@st.composite
def quads(draw, m=None):
    m = m if m is not None else draw(radicands)
    return QuadExt(draw(rationals), draw(rationals), m)


@given(radicands.flatmap(lambda m: st.tuples(quads(m), quads(m), quads(m))))
def test_quadext_ring_axioms(t):
    x, y, z = t
    assert (x + y) * z == x * z + y * z
    assert (x * y) * z == x * (y * z)
    assert x - x == 0


@given(radicands.flatmap(quads))
def test_quadext_inverse_and_norm(x):
    if x == 0:
        return
    assert x * x.inverse() == 1
    assert x * x.conjugate() == x.norm()


def test_quadext_collapses_to_rational():
    r = QuadExt.sqrt(2) * QuadExt.sqrt(2)
    assert canon(r) == 2 and isinstance(canon(r), int)
    assert hash(QuadExt(3, 0, 5)) == hash(3)


def test_mixing_radicands_fails():
    with pytest.raises(MixedFieldError):
        QuadExt.sqrt(2) + QuadExt.sqrt(3)
    with pytest.raises(MixedFieldError):
        PrimeField(3, 7) + PrimeField(3, 11)


@given(rationals)
def test_scalar_round_trip_rational(q):
    assert parse_scalar(format_scalar(q)) == q


@given(radicands.flatmap(quads))
def test_scalar_round_trip_quadratic(x):
    assert parse_scalar(format_scalar(x)) == x


def test_format_examples():
    assert format_scalar(Fraction(-3, 4)) == "-3/4"
    assert format_scalar(QuadExt(0, -1, 2)) == "-sqrt(2)"
    assert format_scalar(QuadExt(1, 2, 3)) == "1 + 2*sqrt(3)"


@given(st.integers(min_value=-10**6, max_value=10**6).filter(bool))
def test_squarefree_decomposition(n):
    s, k = squarefree_decomposition(n)
    assert s * k * k == n
    assert all(s % (p * p) for p in range(2, 1000))


def test_sqrt_or_extend():
    r, rec = sqrt_or_extend(Fraction(9, 4))
    assert r == Fraction(3, 2) and rec is None
    r, rec = sqrt_or_extend(Fraction(8, 9))
    assert rec.radicand == 2 and r * r == Fraction(8, 9)
    assert rational_sqrt(7) is None and is_square(Fraction(49, 25))


def test_prime_field_arithmetic():
    p = 101
    a = PrimeField(Fraction(1, 3), p)
    assert a * 3 == 1
    assert field_div(PrimeField(5, p), PrimeField(5, p)) == 1
    assert field_of([a, 2]) == ("F", p)


def test_content_is_positive():
    assert content([Fraction(-6, 5), 4]) == Fraction(2, 5)
    assert content([QuadExt.sqrt(2), 4]) == 1

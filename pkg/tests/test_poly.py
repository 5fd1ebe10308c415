import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from covrecon.errors import DegreeTooHigh, ParseError, SpaceMismatch
from covrecon.poly import (BIBINARY, BINARY, TERNARY, Form, apolar_pair, canonical_basis,
                           canonical_dual_basis, dual, format_form, lift, linear_change,
                           monomials, multinomial_check, parse_form, primal, random_form,
                           segre_pullback, substitute)

seeds = st.integers(min_value=0, max_value=10**6)


def to_sympy(f, names):
    syms = sympy.symbols(names)
    return sympy.expand(sum(sympy.Rational(c.numerator, c.denominator) * sympy.prod(
        [s ** e for s, e in zip(syms, m)]) for m, c in
        ((m, Fraction(c)) for m, c in f.terms.items()))), syms


def test_monomial_order_and_count():
    ms = monomials(3, 2)
    assert ms[0] == (2, 0, 0) and ms[-1] == (0, 0, 2) and len(ms) == 6


@given(seeds)
@settings(max_examples=30)
def test_format_parse_round_trip(seed):
    rng = random.Random(seed)
    for sp, d in ((BINARY, (5,)), (TERNARY, (3,)), (BIBINARY, (2, 1))):
        f = random_form(sp, d, rng)
        assert parse_form(format_form(f), sp) == f


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as e:
        parse_form("x0^2 + * x1^2", BINARY)
    assert e.value.position is not None
    with pytest.raises(ParseError):
        parse_form("x0^2 + x1", BINARY)


def test_parse_rational_and_quadratic_coefficients():
    f = parse_form("1/2*x0^2 + (1 + 2*sqrt(2))*x1^2", BINARY)
    assert format_form(f) == "1/2*x0^2 + (1 + 2*sqrt(2))*x1^2"


@given(seeds)
@settings(max_examples=25)
def test_arithmetic_matches_sympy(seed):
    rng = random.Random(seed)
    f, g = random_form(TERNARY, (2,), rng), random_form(TERNARY, (3,), rng)
    ef, syms = to_sympy(f, "x0 x1 x2")
    eg, _ = to_sympy(g, "x0 x1 x2")
    prod, _ = to_sympy(f * g, "x0 x1 x2")
    assert sympy.expand(prod - ef * eg) == 0
    d, _ = to_sympy(g.diff(1, 2), "x0 x1 x2")
    assert sympy.expand(d - sympy.diff(eg, syms[1], 2)) == 0


def test_apolar_pairing_canonical_dual_basis():
    for sp, d in ((BINARY, (3,)), (TERNARY, (2,)), (BIBINARY, (1, 2))):
        basis = canonical_basis(sp, d)
        duals = canonical_dual_basis(sp, d)
        for i, u in enumerate(duals):
            for j, q in enumerate(basis):
                assert apolar_pair(u, q).scalar() == (1 if i == j else 0)


def test_apolar_pairing_degree_and_space_checks():
    w = Form.var((dual(2),), 0, 0)
    with pytest.raises(DegreeTooHigh):
        apolar_pair(w ** 3, parse_form("x0^2", BINARY))
    with pytest.raises(SpaceMismatch):
        apolar_pair(parse_form("x0", BINARY), parse_form("x0^2", BINARY))
    # partial pairing lowers the degree
    assert apolar_pair(w, parse_form("x0^3", BINARY)) == parse_form("3*x0^2", BINARY)


@given(seeds)
@settings(max_examples=20)
def test_linear_change_composes(seed):
    rng = random.Random(seed)
    f = random_form(TERNARY, (3,), rng)
    A = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)]
    B = [[rng.randint(-3, 3) for _ in range(3)] for _ in range(3)]
    AB = [[sum(A[i][k] * B[k][j] for k in range(3)) for j in range(3)] for i in range(3)]
    assert linear_change(linear_change(f, A), B) == linear_change(f, AB)


def test_substitute_and_segre():
    X = Form.variables(lift(4))
    assert segre_pullback(X[0] * X[3] - X[1] * X[2]).terms == {}
    f = parse_form("X0^2 + X1*X2", (lift(3),))
    x = Form.variables(primal(2))
    g = substitute(f, [x[0], x[1], x[0] + x[1]])
    assert g == parse_form("x0^2 + x0*x1 + x1^2", BINARY)


def test_multinomial_identity_small():
    assert multinomial_check(2, 2, 1)
    assert multinomial_check(3, 1, 2)

import random
from itertools import combinations_with_replacement
from math import comb, factorial

import pytest
from hypothesis import given, settings, strategies as st

from covrecon.covariants import evaluate_family, search_order1_binary, search_order2_binary
from covrecon.errors import DependentBasis, NotIndependentAtF
from covrecon.linalg import det
from covrecon.poly import (BIBINARY, BINARY, Form, apolar_pair, canonical_basis, lift,
                           linear_change, parse_form, primal, random_form, substitute)
from covrecon.recon import (build_lift, change_of_basis, dual_basis, dual_from_pairing,
                            primal_dual_of, quadric_relations, relation_dimension, scale_to,
                            taylor_identity_check, taylor_sum)
from covrecon.transvectants import tau, transvect

seeds = st.integers(min_value=0, max_value=10**6)


def random_basis(sp, d, rng):
    n = len(canonical_basis(sp, (d,)))
    while True:
        b = [random_form(sp, (d,), rng, -3, 3) for _ in range(n)]
        if det(change_of_basis(b)) != 0:
            return b


@pytest.mark.parametrize("n,d,k", [(1, 1, 5), (1, 2, 3), (2, 1, 4), (2, 2, 2)])
def test_taylor_identity_canonical(n, d, k):
    rng = random.Random(n * 100 + d * 10 + k)
    sp = (primal(n + 1),)
    f = random_form(sp, (k * d,), rng)
    assert taylor_identity_check(f, canonical_basis(sp, (d,)))
    # explicit constant (kd)!/d!^k
    const = factorial(k * d) // factorial(d) ** k
    assert taylor_sum(f, canonical_basis(sp, (d,))) == f.scale(const)


@given(seeds)
@settings(max_examples=15, deadline=None)
def test_taylor_identity_random_basis(seed):
    rng = random.Random(seed)
    sp = (primal(2),)
    f = random_form(sp, (6,), rng)
    assert taylor_identity_check(f, random_basis(sp, 2, rng))


def test_taylor_identity_k1_is_dual_expansion():
    rng = random.Random(1)
    sp = (primal(3),)
    basis = random_basis(sp, 2, rng)
    f = random_form(sp, (2,), rng)
    duals = dual_basis(basis)
    terms = [q.scale(apolar_pair(u, f).scalar()) for u, q in zip(duals, basis)]
    total = terms[0]
    for t in terms[1:]:
        total = total + t
    assert total == f


def test_dual_basis_pairs_to_identity():
    rng = random.Random(3)
    basis = random_basis(BINARY, 3, rng)
    duals = dual_basis(basis)
    for i, u in enumerate(duals):
        for j, q in enumerate(basis):
            assert apolar_pair(u, q).scalar() == (i == j)
    with pytest.raises(DependentBasis):
        dual_basis([basis[0], basis[0], basis[1], basis[2]])


def test_two_family_duals():
    rng = random.Random(4)
    Q = random_basis(BINARY, 2, rng)
    P = [tau(q) for q in random_basis(BINARY, 2, rng)]
    qstar = dual_from_pairing(P, Q)
    for i, u in enumerate(qstar):
        for j, q in enumerate(Q):
            assert apolar_pair(u, q).scalar() == (i == j)
    pstar = primal_dual_of(P, Q)
    for i, p in enumerate(P):
        for j, g in enumerate(pstar):
            assert apolar_pair(p, g).scalar() == (i == j)
    with pytest.raises(NotIndependentAtF):
        dual_from_pairing([P[0], P[0], P[1]], Q)


def test_lift_of_odd_binary_matches_transvectant_formula():
    rng = random.Random(6)
    f = random_form(BINARY, (5,), rng)
    q0, q1 = evaluate_family(search_order1_binary(f), f)
    L = build_lift(f, [tau(q0), tau(q1)]).form
    k = 5
    for i in range(k + 1):
        c = transvect(q0 ** i * q1 ** (k - i), f, k).scalar() * comb(k, i)
        # tau on degree-k products carries k! relative to the product of tau's
        assert L.coeff((i, k - i)) * factorial(k) == c


def test_order1_lift_is_the_form_in_new_coordinates():
    rng = random.Random(7)
    f = random_form(BINARY, (5,), rng)
    ps = [tau(q) for q in random_basis(BINARY, 1, rng)]
    L = build_lift(f, ps).form
    pstar = primal_dual_of(ps, random_basis(BINARY, 1, rng))
    # f~(p*) = 5! f whenever p* is the primal family dual to p
    assert substitute(L, pstar) == f.scale(factorial(5))


def test_lift_coefficients_invariant_under_unimodular_change():
    rng = random.Random(9)
    f = random_form(BINARY, (5,), rng)
    A = [[2, 1], [1, 1]]
    g = linear_change(f, A)
    exprs = search_order1_binary(f)
    raw = lambda h: [tau(q) for q in evaluate_family(exprs, h, normalize=False, primitive=False)]
    assert build_lift(f, raw(f)).form == build_lift(g, raw(g)).form


@pytest.mark.parametrize("n,d,expected", [(1, 2, 1), (1, 3, 3), (2, 2, 6)])
def test_dimension_law(n, d, expected):
    sp = (primal(n + 1),)
    Q = canonical_basis(sp, (d,))
    P = dual_basis(Q)
    assert relation_dimension(n, d) == expected
    rels = quadric_relations(P, Q)
    assert len(rels) == expected
    for r in rels:
        assert substitute(r, Q).terms == {}


def test_dimension_law_double_binary():
    Q = canonical_basis(BIBINARY, (1, 1))
    rels = quadric_relations(dual_basis(Q), Q)
    assert len(rels) == 1 and rels[0] == parse_form("X0*X3 - X1*X2", (lift(4),))


def test_veronese_conic():
    Q = canonical_basis(BINARY, (2,))
    (r,) = quadric_relations(dual_basis(Q), Q)
    assert scale_to(parse_form("X0*X2 - X1^2", (lift(3),)), r) is not None


def test_binary_even_conic_matches_transvectant_formula():
    rng = random.Random(12)
    f = random_form(BINARY, (6,), rng)
    qs = evaluate_family(search_order2_binary(f), f)
    ps = [tau(q) for q in qs]
    (rel,) = quadric_relations(ps, primal_dual_of(ps, qs))
    terms = {}
    for i, j in combinations_with_replacement(range(3), 2):
        e = [0, 0, 0]
        e[i] += 1
        e[j] += 1
        terms[tuple(e)] = transvect(qs[i], qs[j], 2).scalar() * (1 if i == j else 2)
    assert scale_to(Form((lift(3),), terms, (2,)), rel) is not None
    # symmetric coefficient matrix: (qi, qj)_2 = (qj, qi)_2
    assert all(transvect(qs[i], qs[j], 2) == transvect(qs[j], qs[i], 2)
               for i in range(3) for j in range(3))


def test_genus4_relation_matches_transvectant_formula():
    from covrecon.covariants import genus4_catalog
    from covrecon.transvectants import transvect2
    rng = random.Random(13)
    f = random_form(BIBINARY, (3, 3), rng, -4, 4)
    qs = evaluate_family(genus4_catalog(), f)
    ps = [tau(q) for q in qs]
    (rel,) = quadric_relations(ps, primal_dual_of(ps, qs))
    terms = {}
    for i, j in combinations_with_replacement(range(4), 2):
        e = [0] * 4
        e[i] += 1
        e[j] += 1
        terms[tuple(e)] = transvect2(qs[i], qs[j], 1, 1).scalar() * (1 if i == j else 2)
    assert scale_to(Form((lift(4),), terms, (2,)), rel) is not None


def test_scale_to():
    f = parse_form("x0^2 - 3*x1^2", BINARY)
    assert scale_to(f, f.scale(-5)) == -5
    assert scale_to(f, parse_form("x0^2 + x1^2", BINARY)) is None

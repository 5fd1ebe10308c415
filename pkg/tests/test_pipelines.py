import random

import pytest

from covrecon.covariants import evaluate_family, search_order2_binary
from covrecon.errors import (DegreeMismatch, NotIndependentAtF, SpaceMismatch, WrongRank)
from covrecon.fingerprint import fingerprint, fingerprint_equal
from covrecon.poly import (BINARY, TERNARY, Form, dual, lift, linear_change, parse_form,
                           random_form, segre_pullback)
from covrecon.pipelines import (normalize_output, reconstruct_binary_even,
                                reconstruct_binary_odd, reconstruct_genus3,
                                reconstruct_genus4, reconstruct_genus4_rank3,
                                reconstruct_genus4_rank4, reconstruct_sum_6_4)
from covrecon.quadrics import apply_linear, quadric_matrix, quadric_normal_form
from covrecon.recon import primal_dual_of, quadric_relations, scale_to
from covrecon.transvectants import tau

from golden_data import (GENUS4_CUBIC, GENUS4_OUT_CUBIC, GENUS4_OUT_QUADRIC,
                         GENUS4_QUADRIC, SYMMETRIC_QUADRIC, TERNARY_CONTRAVARIANTS,
                         TERNARY_QUARTIC, TERNARY_X0_4, symmetric_cubic)

L4 = (lift(4),)


def test_normalize_output():
    f = parse_form("-2/3*x0^2 + 4/9*x1^2", BINARY)
    assert normalize_output(f) == parse_form("3*x0^2 - 2*x1^2", BINARY)


def test_odd_round_trip():
    rng = random.Random(1)
    for _ in range(3):
        f = random_form(BINARY, (5,), rng)
        r = reconstruct_binary_odd(f)
        assert r.verified and r.extension is None
        assert fingerprint_equal(fingerprint(f), fingerprint(r.output))


def test_odd_septic():
    r = reconstruct_binary_odd(random_form(BINARY, (7,), random.Random(2), -5, 5))
    assert r.verified and r.extension is None


def test_odd_unstable():
    with pytest.raises(NotIndependentAtF):
        reconstruct_binary_odd(parse_form("x0^5", BINARY))


def test_odd_wrong_shape():
    with pytest.raises(DegreeMismatch):
        reconstruct_binary_odd(random_form(BINARY, (6,), random.Random(0)))
    with pytest.raises(SpaceMismatch):
        reconstruct_binary_odd(random_form(TERNARY, (5,), random.Random(0)))


def test_even_round_trip():
    rng = random.Random(3)
    for _ in range(3):
        f = random_form(BINARY, (6,), rng)
        r = reconstruct_binary_even(f)
        assert r.verified
        assert fingerprint_equal(fingerprint(f), fingerprint(r.output))


def test_even_conic_always_has_a_rational_point():
    # the primal duals evaluated at (1, 0) give a rational point of the conic,
    # so for rational input no extension is ever needed
    rng = random.Random(4)
    for _ in range(5):
        f = random_form(BINARY, (6,), rng)
        qs = evaluate_family(search_order2_binary(f), f)
        ps = [tau(q) for q in qs]
        pstar = primal_dual_of(ps, qs)
        (Q,) = quadric_relations(ps, pstar)
        A = quadric_matrix(Q)
        pt = [g.coeff((2, 0)) for g in pstar]
        assert any(pt)
        assert sum(A[i, j] * pt[i] * pt[j] for i in range(3) for j in range(3)) == 0
        assert reconstruct_binary_even(f).extension is None


def test_sum64_round_trip():
    rng = random.Random(5)
    f6, f4 = random_form(BINARY, (6,), rng), random_form(BINARY, (4,), rng)
    r = reconstruct_sum_6_4(f6, f4)
    assert r.verified
    assert fingerprint_equal(fingerprint((f6, f4)), fingerprint(r.output))


def test_sum64_zero_quartic():
    f6 = random_form(BINARY, (6,), random.Random(6))
    with pytest.raises(NotIndependentAtF):
        reconstruct_sum_6_4(f6, Form(BINARY, {}, (4,)))


def test_rank3_model():
    rng = random.Random(7)
    f6, f4 = random_form(BINARY, (6,), rng), random_form(BINARY, (4,), rng)
    r = reconstruct_genus4_rank3(f6, f4)
    assert r.verified and r.output.rank == 3
    assert r.output.E.coeff((0, 0, 0, 3)) == 1
    assert all(e[3] != 2 for e in r.output.E.terms)
    assert r.output.Q.coeff((0, 0, 0, 2)) == 0
    assert reconstruct_genus4(f6, f4=f4).output.E == r.output.E
    with pytest.raises(NotIndependentAtF):
        reconstruct_genus4_rank3(f6, Form(BINARY, {}, (4,)))


def test_genus4_golden():
    Q, E = parse_form(GENUS4_QUADRIC, L4), parse_form(GENUS4_CUBIC, L4)
    r = reconstruct_genus4_rank4(Q, E)
    assert r.verified and r.extension is None
    assert scale_to(parse_form(GENUS4_OUT_QUADRIC, L4), r.output.Q) is not None
    assert scale_to(parse_form(GENUS4_OUT_CUBIC, L4), r.output.E) is not None
    assert len(r.output.E.terms) == 20 and len(r.output.Q.terms) == 10


def test_genus4_output_quadric_contains_curve():
    # pulling the output back along its own normal form gives a bicubic
    # equivalent to the input one
    Q, E = parse_form(GENUS4_QUADRIC, L4), parse_form(GENUS4_CUBIC, L4)
    r = reconstruct_genus4_rank4(Q, E)
    nf = quadric_normal_form(r.output.Q)
    f_out = segre_pullback(apply_linear(r.output.E, nf.T))
    assert fingerprint_equal(fingerprint(r.meta["bicubic"]), fingerprint(f_out))
    A = quadric_matrix(r.output.Q)
    assert all(A[i, j] == A[j, i] for i in range(4) for j in range(4))


def test_genus4_invariant_under_change_of_model():
    Q, E = parse_form(GENUS4_QUADRIC, L4), parse_form(GENUS4_CUBIC, L4)
    M = [[1, 1, 0, 0], [0, 1, 0, 2], [1, 0, 1, 0], [0, 0, 1, 1]]
    r1 = reconstruct_genus4_rank4(Q, E)
    r2 = reconstruct_genus4_rank4(linear_change(Q, M), linear_change(E, M))
    assert r2.verified
    assert fingerprint_equal(r1.fingerprint_in, r2.fingerprint_in)


def test_genus4_symmetric_curve_fails():
    with pytest.raises(NotIndependentAtF):
        reconstruct_genus4_rank4(parse_form(SYMMETRIC_QUADRIC, L4), symmetric_cubic())


def test_genus4_wrong_rank():
    with pytest.raises(WrongRank):
        reconstruct_genus4_rank4(parse_form("X0*X2 - X1^2", L4),
                                 parse_form(GENUS4_CUBIC, L4))


def test_genus4_over_quadratic_field():
    Q = parse_form("X0*X3 - X1^2 + 2*X2^2", L4)
    E = random_form(L4, (3,), random.Random(5), -3, 3)
    r = reconstruct_genus4_rank4(Q, E)
    assert r.extension is not None and r.extension.radicand == 2
    assert r.verified


def test_genus3_golden_scaling():
    F = parse_form(TERNARY_QUARTIC, TERNARY)
    ps = [parse_form(t, (dual(3),)) for t in TERNARY_CONTRAVARIANTS]
    r = reconstruct_genus3(F, normalize=False, contravariants=ps)
    assert r.output.coeff((4, 0, 0)) == TERNARY_X0_4
    assert r.verified and r.extension is None


def test_genus3_round_trip():
    F = random_form(TERNARY, (4,), random.Random(8), -9, 9)
    r = reconstruct_genus3(F)
    assert r.verified and r.extension is None
    assert fingerprint_equal(fingerprint(F), fingerprint(r.output))


def test_genus3_fermat():
    with pytest.raises(NotIndependentAtF):
        reconstruct_genus3(parse_form("x0^4 + x1^4 + x2^4", TERNARY))


def test_determinism():
    f = random_form(BINARY, (6,), random.Random(9))
    assert reconstruct_binary_even(f).output == reconstruct_binary_even(f).output
    F = random_form(TERNARY, (4,), random.Random(9), -5, 5)
    assert reconstruct_genus3(F).output == reconstruct_genus3(F).output

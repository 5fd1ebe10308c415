import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from covrecon.errors import Singular
from covrecon.fields import QuadExt
from covrecon.linalg import Matrix, det, inverse, rank, right_kernel, rank_mod_p, solve

seeds = st.integers(min_value=0, max_value=10**6)


def rand_matrix(rng, n, m=None, lo=-5, hi=5):
    m = m or n
    return [[Fraction(rng.randint(lo, hi), rng.randint(1, 3)) for _ in range(m)] for _ in range(n)]


@given(seeds, st.integers(min_value=1, max_value=6))
@settings(max_examples=40)
def test_det_matches_sympy(seed, n):
    rows = rand_matrix(random.Random(seed), n)
    assert det(Matrix(rows)) == sympy.Matrix(rows).det()


@given(seeds)
@settings(max_examples=30)
def test_inverse_and_solve(seed):
    rng = random.Random(seed)
    M = Matrix(rand_matrix(rng, 4))
    if det(M) == 0:
        with pytest.raises(Singular):
            inverse(M)
        return
    assert inverse(M) @ M == Matrix.identity(4)
    b = [rng.randint(-5, 5) for _ in range(4)]
    assert M @ solve(M, b) == b


@given(seeds)
@settings(max_examples=30)
def test_kernel_and_rank(seed):
    rng = random.Random(seed)
    rows = rand_matrix(rng, 3, 6)
    rows.append([a + b for a, b in zip(rows[0], rows[1])])
    M = Matrix(rows)
    r = rank(M)
    assert r == sympy.Matrix(rows).rank()
    K = right_kernel(M)
    assert len(K) == 6 - r
    for v in K:
        assert all(x == 0 for x in M @ v)
        assert all(Fraction(x).denominator == 1 for x in v)


def test_rank_mod_p_detects_reduction():
    M = Matrix([[1, 2], [3, 6 + 7]])
    assert rank(M) == 2 and rank_mod_p(M, 7) == 1


def test_det_over_quadratic_field():
    s = QuadExt.sqrt(2)
    assert det(Matrix([[s, 1], [1, s]])) == 1

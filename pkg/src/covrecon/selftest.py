"""Identity suites run by ``covrecon selftest``."""
from __future__ import annotations

import random

from .poly import (BIBINARY, BINARY, TERNARY, apolar_pair, linear_change,
                   multinomial_check, primal, random_form)
from .recon import taylor_identity_check
from .transvectants import omega_transvect3, tau, transvect_levels

TAYLOR_CASES = [(1, 1, 5), (1, 2, 3), (1, 2, 4), (2, 1, 4), (2, 2, 2), (3, 1, 3)]


def _basis(spaces, d, rng):
    """A random basis of the degree-``d`` forms (retried until independent)."""
    from .linalg import det
    from .recon import change_of_basis
    from .poly import group_monomials
    n = len(group_monomials(spaces, (d,)))
    while True:
        basis = [random_form(spaces, (d,), rng, -3, 3) for _ in range(n)]
        if det(change_of_basis(basis)) != 0:
            return basis


def suite_multinomial(level):
    top = 8 if level == "quick" else 10
    failures = []
    for n in (1, 2):
        for k in range(1, top + 1):
            for d in range(1, top // k + 1):
                if not multinomial_check(k, d, n):
                    failures.append((k, d, n))
    return failures


def suite_taylor(level, rng):
    failures = []
    reps = 2 if level == "quick" else 5
    for n, d, k in TAYLOR_CASES:
        if level == "quick" and k * d > 8:
            continue
        sp = (primal(n + 1),)
        for _ in range(reps):
            f = random_form(sp, (k * d,), rng)
            if not taylor_identity_check(f, _basis(sp, d, rng)):
                failures.append((n, d, k))
    return failures


def suite_tau(level, rng):
    failures = []
    reps = 10 if level == "quick" else 50
    for _ in range(reps):
        r = rng.randint(0, 6)
        C, C2 = random_form(BINARY, (r,), rng), random_form(BINARY, (r,), rng)
        if apolar_pair(tau(C), C2) != transvect_levels(C, C2, (r,)):
            failures.append(("binary", r))
    for _ in range(reps // 2):
        a, b = rng.randint(0, 3), rng.randint(0, 3)
        C, C2 = random_form(BIBINARY, (a, b), rng), random_form(BIBINARY, (a, b), rng)
        if apolar_pair(tau(C), C2) != transvect_levels(C, C2, (a, b)):
            failures.append(("double-binary", (a, b)))
    return failures


def _det(M):
    from .linalg import det
    return det(M)


def suite_equivariance(level, rng):
    """``(f A, g A)_l = det(A)^l (f, g)_l A`` and the ternary analogue."""
    failures = []
    reps = 3 if level == "quick" else 10
    for _ in range(reps):
        A = [[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)]
        dA = _det(A)
        if dA == 0:
            continue
        k, m = rng.randint(2, 6), rng.randint(2, 6)
        f, g = random_form(BINARY, (k,), rng), random_form(BINARY, (m,), rng)
        lv = rng.randint(1, min(k, m))
        lhs = transvect_levels(linear_change(f, A), linear_change(g, A), (lv,))
        rhs = linear_change(transvect_levels(f, g, (lv,)), A).scale(dA ** lv)
        if lhs != rhs:
            failures.append(("binary", k, m, lv))
    for _ in range(max(1, reps // 3)):
        A = [[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)]
        dA = _det(A)
        if dA == 0:
            continue
        F = random_form(TERNARY, (3,), rng, -5, 5)
        lhs = omega_transvect3(*(linear_change(F, A),) * 3, 2)
        rhs = linear_change(omega_transvect3(F, F, F, 2), A).scale(dA ** 2)
        if lhs != rhs:
            failures.append(("ternary", 2))
    return failures


def run_selftest(level: str = "full", seed: int = 0):
    """Run every suite; returns ``[(name, failures)]``."""
    rng = random.Random(seed)
    return [
        ("multinomial", suite_multinomial(level)),
        ("taylor", suite_taylor(level, rng)),
        ("tau-bridge", suite_tau(level, rng)),
        ("equivariance", suite_equivariance(level, rng)),
    ]


__all__ = ["run_selftest", "TAYLOR_CASES"]

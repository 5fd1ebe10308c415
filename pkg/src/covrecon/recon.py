"""Reconstruction machinery: Taylor-type identity, dual bases, lifts, quadric relations."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement
from math import factorial

from .errors import DependentBasis, NotIndependentAtF
from .linalg import Matrix, combine, det, inverse, pairing_matrix, right_kernel
from .poly import (Form, apolar_pair, canonical_dual_basis, group_monomials, lift,
                   multinomial)


def multiset_multiplicity(idx):
    """Number of orderings of a multiset given as a sorted tuple."""
    counts = {}
    for i in idx:
        counts[i] = counts.get(i, 0) + 1
    return multinomial(len(idx), tuple(counts.values()))


def product_of(forms):
    out = forms[0]
    for g in forms[1:]:
        out = out * g
    return out


def taylor_constant(k, d, groups=1):
    """``(kd)!/d!^k`` per variable group (a product over groups for multi-degrees)."""
    if isinstance(d, int):
        return factorial(k * d) // factorial(d) ** k
    c = 1
    for di in d:
        c *= factorial(k * di) // factorial(di) ** k
    return c


# ---------------------------------------------------------------------------
# dual bases
# ---------------------------------------------------------------------------

def change_of_basis(basis):
    """Matrix ``S`` with ``S[a][j]`` the coefficient of the a-th canonical monomial in ``q_j``."""
    f0 = basis[0]
    mons = group_monomials(f0.spaces, f0.degrees)
    if len(basis) != len(mons):
        raise DependentBasis(f"{len(basis)} forms cannot be a basis of a space of "
                             f"dimension {len(mons)}")
    return Matrix([[q.terms.get(m, 0) for q in basis] for m in mons])


def dual_basis(basis):
    """Dual forms ``q*_i`` with ``D(q*_i, q_j) = delta_ij``.

    ``q*_i = sum_a (S^-1)_{ia} b*_a`` where ``b*_a`` is the canonical dual
    monomial basis and ``S`` the change-of-basis matrix.
    """
    S = change_of_basis(basis)
    if det(S) == 0:
        raise DependentBasis("forms are linearly dependent")
    Sinv = inverse(S)
    f0 = basis[0]
    bstar = canonical_dual_basis(f0.spaces, f0.degrees)
    return [combine(Sinv.row(i), bstar) for i in range(len(basis))]


def dual_from_pairing(P, Q):
    """Dual basis of the primal family ``Q`` built from a dual family ``P``.

    With ``M = (D(p_i, q_j))`` this is ``q*_j = sum_l (M^-1)_{jl} p_l``.
    """
    M = pairing_matrix(P, Q)
    if det(M) == 0:
        raise NotIndependentAtF("pairing matrix is singular", family="p,q", delta=0)
    Minv = inverse(M)
    return [combine(Minv.row(j), P) for j in range(len(Q))]


def primal_dual_of(P, Q):
    """Primal family ``p*`` dual to a dual family ``P``: ``p*_j = sum_l (M^-1)_{lj} q_l``."""
    M = pairing_matrix(P, Q)
    if det(M) == 0:
        raise NotIndependentAtF("pairing matrix is singular", family="p,q", delta=0)
    Minv = inverse(M)
    return [combine(Minv.col(j), Q) for j in range(len(P))]


# ---------------------------------------------------------------------------
# Taylor identity
# ---------------------------------------------------------------------------

def taylor_sum(f: Form, basis, duals=None):
    """``sum over ordered tuples of D(q*_I, f) q_I`` (grouped by multisets)."""
    d = basis[0].degrees
    k = f.degrees[0] // d[0] if d[0] else f.degrees[-1] // d[-1]
    if tuple(k * x for x in d) != f.degrees:
        raise ValueError(f"degree {f.degrees} is not a multiple of {d}")
    duals = duals if duals is not None else dual_basis(basis)
    total = None
    for idx in combinations_with_replacement(range(len(basis)), k):
        c = apolar_pair(product_of([duals[i] for i in idx]), f).scalar()
        if c == 0:
            continue
        term = product_of([basis[i] for i in idx]).scale(c * multiset_multiplicity(idx))
        total = term if total is None else total + term
    return total if total is not None else Form(f.spaces, {}, f.degrees)


def taylor_identity_check(f: Form, basis) -> bool:
    """Check ``((kd)!/d!^k) f == sum_I D(q*_I, f) q_I`` exactly."""
    d = basis[0].degrees
    k = f.degrees[0] // d[0]
    return taylor_sum(f, basis) == f.scale(taylor_constant(k, d if len(d) > 1 else d[0]))


# ---------------------------------------------------------------------------
# lifts
# ---------------------------------------------------------------------------

@dataclass
class Lift:
    form: Form
    k: int
    family_size: int
    provenance: str = ""
    meta: dict = field(default_factory=dict)


def build_lift(f: Form, duals, k: int | None = None, provenance: str = "") -> Lift:
    """``sum_I D(p_{i1} ... p_{ik}, f) X_{i1} ... X_{ik}`` over ordered tuples.

    ``duals`` is a family of dual forms (contravariant values, or a dual
    basis); ``k`` defaults to ``deg f / deg p``.
    """
    duals = list(duals)
    d = duals[0].degrees
    if k is None:
        k = f.degrees[0] // d[0] if d[0] else f.degrees[-1] // d[-1]
    if tuple(k * x for x in d) != f.degrees:
        raise ValueError(f"degree {f.degrees} is not {k} times {d}")
    r1 = len(duals)
    space = (lift(r1),)
    terms = {}
    for idx in combinations_with_replacement(range(r1), k):
        c = apolar_pair(product_of([duals[i] for i in idx]), f).scalar()
        if c == 0:
            continue
        e = [0] * r1
        for i in idx:
            e[i] += 1
        terms[tuple(e)] = c * multiset_multiplicity(idx)
    return Lift(Form(space, terms, (k,)), k, r1, provenance)


def build_lift_pq(f: Form, P, Q, k: int | None = None, provenance: str = "") -> Lift:
    """Lift through the dual basis of ``Q`` obtained from the pairing with ``P``."""
    return build_lift(f, dual_from_pairing(P, Q), k, provenance)


# ---------------------------------------------------------------------------
# quadric relations
# ---------------------------------------------------------------------------

def gram_matrix(dual_family, primal_family):
    """``(D(p_i p_j, q_l q_m))`` over unordered pairs ``i <= j`` and ``l <= m``."""
    n = len(dual_family)
    pairs = list(combinations_with_replacement(range(n), 2))
    rows = [dual_family[i] * dual_family[j] for i, j in pairs]
    cols = [primal_family[l] * primal_family[m] for l, m in pairs]
    return Matrix([[apolar_pair(r, c).scalar() for c in cols] for r in rows]), pairs


def quadric_relations(dual_family, primal_family):
    """Quadrics ``sum v_lm X_l X_m`` vanishing on ``(q_0, ..., q_r)``.

    ``dual_family`` must span the dual space of the products ``q_l q_m``
    (any dual basis of the degree-d space does).  Kernel vectors are
    primitive integer vectors with positive leading entry.
    """
    G, pairs = gram_matrix(dual_family, primal_family)
    n = len(primal_family)
    out = []
    for v in right_kernel(G):
        terms = {}
        for (l, m), c in zip(pairs, v):
            if c:
                e = [0] * n
                e[l] += 1
                e[m] += 1
                terms[tuple(e)] = c
        out.append(Form((lift(n),), terms, (2,)))
    return out


def relation_dimension(n: int, d: int) -> int:
    """``dim Sym^2(Sym^d) - dim Sym^{2d}`` for forms in ``n+1`` variables."""
    from math import comb
    N = comb(n + d, d)
    return N * (N + 1) // 2 - comb(n + 2 * d, 2 * d)


def scale_to(f: Form, g: Form):
    """Scalar ``c`` with ``g = c f``, or ``None`` when not proportional."""
    from .fields import field_div
    if f.spaces != g.spaces or set(f.terms) != set(g.terms):
        return None
    if not f.terms:
        return 1
    m = max(f.terms)
    c = field_div(g.terms[m], f.terms[m])
    if all(g.terms[k] == c * v for k, v in f.terms.items()):
        return c
    return None


__all__ = ["Lift", "build_lift", "build_lift_pq", "dual_basis", "dual_from_pairing",
           "primal_dual_of", "taylor_identity_check", "taylor_sum", "taylor_constant",
           "gram_matrix", "quadric_relations", "relation_dimension", "scale_to",
           "change_of_basis", "multiset_multiplicity", "product_of"]

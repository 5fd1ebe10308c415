"""Transvectants, the ternary Omega-process and the tau maps.

Conventions (unnormalized):

    (f, g)_l = sum_i (-1)^i C(l, i) d^l f/dx0^i dx1^(l-i) * d^l g/dx0^(l-i) dx1^i

and ``tau_r(x0^i x1^j) = r! (-1)^i w0^j w1^i`` so that
``D(tau_r(C), C') = (C, C')_r`` for forms of degree ``r``.
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import permutations
from math import comb, factorial

from .errors import LevelTooHigh, SpaceMismatch
from .poly import DUAL_KIND, Form, Space, _offsets


def _perm_sign(p):
    sign, seen = 1, [False] * len(p)
    for i in range(len(p)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                length += 1
            if length % 2 == 0:
                sign = -sign
    return sign


def transvect_levels(f: Form, g: Form, levels) -> Form:
    """Transvectant taken at ``levels[k]`` in each binary variable group ``k``.

    With one group this is the binary transvectant; with two it is the
    bi-level transvectant ``(f, g)_{l, m}``.  Groups with level 0 are
    simply multiplied.
    """
    if f.spaces != g.spaces:
        raise SpaceMismatch(f"{f.spaces} vs {g.spaces}")
    levels = tuple(levels)
    if len(levels) != len(f.spaces):
        raise ValueError("one level per variable group is required")
    offs = _offsets(f.spaces)
    for (lv, s, df, dg) in zip(levels, f.spaces, f.degrees, g.degrees):
        if lv and s.dim != 2:
            raise SpaceMismatch("transvectants need binary variable groups")
        if lv > min(df, dg) or lv < 0:
            raise LevelTooHigh(f"level {lv} exceeds degrees ({df}, {dg})")
    n = offs[-1][1]
    degs = tuple(a + b - 2 * lv for a, b, lv in zip(f.degrees, g.degrees, levels))
    if not f.terms or not g.terms:
        return Form(f.spaces, {}, degs)

    # per group, the list of (coefficient, f-exponents, g-exponents)
    per_group = []
    for (a, _), lv in zip(offs, levels):
        opts = []
        for i in range(lv + 1):
            ef = [0] * n
            eg = [0] * n
            if lv:
                ef[a], ef[a + 1] = i, lv - i
                eg[a], eg[a + 1] = lv - i, i
            opts.append(((-1) ** i * comb(lv, i), ef, eg))
        per_group.append(opts)

    fcache, gcache = {}, {}
    acc = {}

    def walk(k, coeff, ef, eg):
        if k == len(per_group):
            kf, kg = tuple(ef), tuple(eg)
            if kf not in fcache:
                fcache[kf] = f.diff_multi(kf)
            if kg not in gcache:
                gcache[kg] = g.diff_multi(kg)
            df, dg = fcache[kf], gcache[kg]
            for m1, c1 in df.terms.items():
                c1 = c1 * coeff
                for m2, c2 in dg.terms.items():
                    m = tuple(x + y for x, y in zip(m1, m2))
                    acc[m] = acc.get(m, 0) + c1 * c2
            return
        for c, e1, e2 in per_group[k]:
            walk(k + 1, coeff * c, [x + y for x, y in zip(ef, e1)],
                 [x + y for x, y in zip(eg, e2)])

    walk(0, 1, [0] * n, [0] * n)
    return Form(f.spaces, acc, degs)


def transvect(f: Form, g: Form, l: int, group: int = 0) -> Form:
    """Binary transvectant of level ``l`` in one variable group."""
    levels = [0] * len(f.spaces)
    levels[group] = l
    return transvect_levels(f, g, levels)


def transvect2(f: Form, g: Form, l: int, m: int | None = None) -> Form:
    """Bi-level transvectant ``(f, g)_{l, m}`` of double-binary forms."""
    if len(f.spaces) != 2:
        raise SpaceMismatch("transvect2 expects forms with two binary groups")
    return transvect_levels(f, g, (l, l if m is None else m))


# ---------------------------------------------------------------------------
# tau maps
# ---------------------------------------------------------------------------

def tau(C: Form) -> Form:
    """Turn a (double-)binary covariant value into the matching dual form.

    Each binary group of degree ``r`` maps ``x0^i x1^j`` to
    ``r! (-1)^i w0^j w1^i``; for several groups the factors multiply.
    """
    for s in C.spaces:
        if s.dim != 2 or s.kind not in DUAL_KIND:
            raise SpaceMismatch("tau needs binary primal or dual groups")
    scale = 1
    for r in C.degrees:
        scale *= factorial(r)
    terms = {}
    for m, c in C.terms.items():
        sign = 1
        new = []
        for k in range(0, len(m), 2):
            i, j = m[k], m[k + 1]
            if i % 2:
                sign = -sign
            new.extend((j, i))
        terms[tuple(new)] = c * sign * scale
    spaces = tuple(s.dual for s in C.spaces)
    return Form(spaces, terms, C.degrees)


def tau_inverse(P: Form) -> Form:
    """Inverse of :func:`tau`."""
    scale = 1
    for r in P.degrees:
        scale *= factorial(r)
    terms = {}
    for m, c in P.terms.items():
        sign = 1
        new = []
        for k in range(0, len(m), 2):
            j, i = m[k], m[k + 1]
            if i % 2:
                sign = -sign
            new.extend((i, j))
        terms[tuple(new)] = c * sign * Fraction(1, scale)
    spaces = tuple(s.dual for s in P.spaces)
    return Form(spaces, terms, P.degrees)


def tau2(C: Form) -> Form:
    """tau for bidegree ``(d, e)`` forms."""
    if len(C.spaces) != 2:
        raise SpaceMismatch("tau2 expects a double-binary form")
    return tau(C)


# ---------------------------------------------------------------------------
# ternary Omega-process
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def omega_power(l: int, n: int = 3):
    """Expand ``det(d/dx_i^(j))^l`` as a dict ``(e_1, ..., e_n) -> coefficient``.

    ``e_j`` is the derivative multi-index acting on copy ``j``.
    """
    zero = tuple((0,) * n for _ in range(n))
    cur = {zero: 1}
    perms = [(p, _perm_sign(p)) for p in permutations(range(n))]
    for _ in range(l):
        nxt = {}
        for key, c in cur.items():
            for p, sgn in perms:
                # copy j is differentiated by x_{p[j]}
                new = tuple(tuple(e + (1 if i == p[j] else 0) for i, e in enumerate(key[j]))
                            for j in range(n))
                nxt[new] = nxt.get(new, 0) + c * sgn
        cur = {k: v for k, v in nxt.items() if v}
    return cur


def omega_transvect3(f: Form, g: Form, h: Form, l: int) -> Form:
    """``(f, g, h)_l``: apply Omega ``l`` times to ``f(x1) g(x2) h(x3)`` and identify copies."""
    if not (f.spaces == g.spaces == h.spaces) or len(f.spaces) != 1 or f.spaces[0].dim != 3:
        raise SpaceMismatch("omega_transvect3 expects three ternary forms")
    if l > min(f.degrees[0], g.degrees[0], h.degrees[0]):
        raise LevelTooHigh(f"level {l} too high for degrees "
                           f"{f.degrees[0]}, {g.degrees[0]}, {h.degrees[0]}")
    deg = f.degrees[0] + g.degrees[0] + h.degrees[0] - 3 * l
    acc = {}
    caches = ({}, {}, {})
    forms = (f, g, h)

    def d(k, e):
        if e not in caches[k]:
            caches[k][e] = forms[k].diff_multi(e)
        return caches[k][e]

    for (ea, eb, ec), c in omega_power(l).items():
        A, B, C = d(0, ea), d(1, eb), d(2, ec)
        if not (A.terms and B.terms and C.terms):
            continue
        AB = {}
        for m1, c1 in A.terms.items():
            for m2, c2 in B.terms.items():
                m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
                AB[m] = AB.get(m, 0) + c1 * c2
        for m1, c1 in AB.items():
            if not c1:
                continue
            c1 *= c
            for m2, c2 in C.terms.items():
                m = (m1[0] + m2[0], m1[1] + m2[1], m1[2] + m2[2])
                acc[m] = acc.get(m, 0) + c1 * c2
    return Form(f.spaces, acc, (deg,))


def restrict_to_line(A: Form, aux: Space | None = None) -> Form:
    """Restrict a ternary form to the line cut out by the opposite variables.

    For ``A`` in variables ``y`` and the line ``{z . y = 0}`` written in the
    opposite variables ``z``, the parametrization is
    ``y = (z2 s, z2 t, -(z0 s + z1 t))``.  The result is bihomogeneous in the
    auxiliary pencil ``(s, t)`` and in ``z``.
    """
    from .poly import substitute
    if len(A.spaces) != 1 or A.spaces[0].dim != 3:
        raise SpaceMismatch("restrict_to_line expects a ternary form")
    aux = aux or Space("aux", 2)
    other = A.spaces[0].dual
    sp = (aux, other)
    y0 = Form(sp, {(1, 0, 0, 0, 1): 1})
    y1 = Form(sp, {(0, 1, 0, 0, 1): 1})
    y2 = Form(sp, {(1, 0, 1, 0, 0): -1, (0, 1, 0, 1, 0): -1})
    return substitute(A, [y0, y1, y2])


def line_transvectant(G: Form, template) -> Form:
    """Evaluate a binary template on a restricted form and strip the pencil.

    ``template`` is a callable taking the restricted form and returning a
    form of degree 0 in the pencil; the result is divided by the matching
    power of the last opposite variable.
    """
    T = template(G)
    if T.degrees[0] != 0:
        raise ValueError("template must eliminate the auxiliary pencil")
    T = T.drop_group(0)
    m = G.degrees[1]
    t = T.degrees[0] // m
    # every monomial carries z2^(t*m/2) from the parametrization
    return T.divide_variable_power(2, t * m // 2)

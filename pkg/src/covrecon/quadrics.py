"""Conics and quaternary quadrics: points, parametrizations, normal forms.

Rational points on conics are found by a small-height search followed by
Legendre descent (sympy).  Whether a conic has a rational point at all is
decided independently with Hilbert symbols, so an extension is only ever
introduced when it is provably necessary.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt, lcm

from sympy import factorint, symbols
from sympy.solvers.diophantine.diophantine import diop_ternary_quadratic_normal

from .errors import DegenerateConic, MixedFieldError, WrongRank
from .fields import (ExtensionRecord, PrimeField, QuadExt, canon, field_div, is_rational, rational_sqrt,
                     sqrt_or_extend, squarefree_decomposition)
from .linalg import Matrix, det, rank, right_kernel
from .poly import Form, Space, lift, linear_change

DEFAULT_HEIGHT_BOUND = 30


# ---------------------------------------------------------------------------
# symmetric matrices
# ---------------------------------------------------------------------------

def quadric_matrix(Q: Form) -> Matrix:
    """Symmetric Gram matrix ``A`` with ``Q(X) = X^T A X``."""
    if len(Q.spaces) != 1 or Q.degrees != (2,):
        raise ValueError("expected a quadratic form in one group")
    n = Q.spaces[0].dim
    A = [[0] * n for _ in range(n)]
    for m, c in Q.terms.items():
        idx = [i for i, e in enumerate(m) for _ in range(e)]
        i, j = idx
        if i == j:
            A[i][i] = c
        else:
            A[i][j] = A[j][i] = c * Fraction(1, 2)
    return Matrix(A)


def matrix_quadric(A, space: Space | None = None) -> Form:
    A = A if isinstance(A, Matrix) else Matrix(A)
    n = A.nrows
    space = space or lift(n)
    terms = {}
    for i in range(n):
        for j in range(i, n):
            c = A[i, j] if i == j else 2 * A[i, j]
            if c:
                e = [0] * n
                e[i] += 1
                e[j] += 1
                terms[tuple(e)] = c
    return Form((space,), terms, (2,))


def qeval(A: Matrix, v):
    n = A.nrows
    return canon(sum((A[i, j] * v[i] * v[j] for i in range(n) for j in range(n)), 0))


def bilinear(A: Matrix, u, v):
    n = A.nrows
    return canon(sum((A[i, j] * u[i] * v[j] for i in range(n) for j in range(n)), 0))


def diagonalize(A: Matrix):
    """Return ``(P, d)`` with ``P^T A P = diag(d)`` by symmetric elimination."""
    n = A.nrows
    a = [list(r) for r in A.rows]
    P = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def col_op(i, j, c):  # column_i += c * column_j, and the matching row op
        for r in range(n):
            a[r][i] += c * a[r][j]
        for r in range(n):
            a[i][r] += c * a[j][r]
        for r in range(n):
            P[r][i] += c * P[r][j]

    def swap(i, j):
        for r in range(n):
            a[r][i], a[r][j] = a[r][j], a[r][i]
        a[i], a[j] = a[j], a[i]
        for r in range(n):
            P[r][i], P[r][j] = P[r][j], P[r][i]

    for k in range(n):
        if a[k][k] == 0:
            piv = next((i for i in range(k + 1, n) if a[i][i] != 0), None)
            if piv is not None:
                swap(k, piv)
            else:
                j = next((j for j in range(k + 1, n) if a[k][j] != 0), None)
                if j is None:
                    continue
                col_op(k, j, 1)
        akk = a[k][k]
        for i in range(k + 1, n):
            if a[k][i] != 0:
                col_op(i, k, -field_div(a[k][i], akk))
    return Matrix(P), [canon(a[i][i]) for i in range(n)]


# ---------------------------------------------------------------------------
# Hilbert symbols
# ---------------------------------------------------------------------------

def _int_squarefree(q):
    """Square-class representative of a nonzero rational, as an integer."""
    q = Fraction(q)
    s, _ = squarefree_decomposition(q.numerator * q.denominator)
    return s


def _legendre(a, p):
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def hilbert_symbol(a, b, p) -> int:
    """Hilbert symbol ``(a, b)_p`` of nonzero rationals; ``p = 0`` means the real place."""
    a, b = _int_squarefree(a), _int_squarefree(b)
    if p == 0:
        return -1 if a < 0 and b < 0 else 1
    alpha = beta = 0
    while a % p == 0:
        a //= p
        alpha += 1
    while b % p == 0:
        b //= p
        beta += 1
    if p == 2:
        def eps(u):
            return ((u - 1) // 2) % 2

        def omg(u):
            return ((u * u - 1) // 8) % 2
        e = eps(a) * eps(b) + alpha * omg(b) + beta * omg(a)
        return -1 if e % 2 else 1
    e = (alpha * beta * ((p - 1) // 2)) % 2
    r = -1 if e else 1
    if beta % 2:
        r *= _legendre(a, p)
    if alpha % 2:
        r *= _legendre(b, p)
    return r


def diagonal_conic_isotropic(a, b, c) -> bool:
    """Does ``a x^2 + b y^2 + c z^2`` have a nontrivial rational zero?"""
    if a == 0 or b == 0 or c == 0:
        return True
    A, B = _int_squarefree(-Fraction(a) * c), _int_squarefree(-Fraction(b) * c)
    primes = {2}
    for v in (A, B):
        primes.update(factorint(abs(v)))
    primes.discard(1)
    return all(hilbert_symbol(A, B, p) == 1 for p in sorted(primes | {0}))


def conic_isotropic(Q) -> bool:
    A = Q if isinstance(Q, Matrix) else quadric_matrix(Q)
    _, d = diagonalize(A)
    if any(x == 0 for x in d):
        return True
    return diagonal_conic_isotropic(*d)


# ---------------------------------------------------------------------------
# points on conics
# ---------------------------------------------------------------------------

def _primitive_int(v):
    L = 1
    for x in v:
        if isinstance(x, Fraction):
            L = lcm(L, x.denominator)
    w = [int(x * L) for x in v]
    g = 0
    for x in w:
        g = gcd(g, x)
    w = [x // g for x in w]
    if next(x for x in w if x) < 0:
        w = [-x for x in w]
    return w


def small_point_search(A: Matrix, bound: int):
    """A primitive integer zero of a ternary form, or ``None``.

    Pairs ``(x, y)`` are scanned by ascending max-height up to ``bound`` and
    the last coordinate is solved from the resulting quadratic, so the cost
    is quadratic in the bound.
    """
    if A.nrows != 3:
        raise ValueError("small_point_search expects a ternary form")
    L = 1
    for row in A.rows:
        for x in row:
            L = lcm(L, Fraction(x).denominator)
    M = [[int(Fraction(x) * L) for x in row] for row in A.rows]
    a = M[2][2]
    if a == 0:
        return [0, 0, 1]
    for h in range(1, bound + 1):
        for x in range(0, h + 1):
            for y in range(-h, h + 1):
                if max(x, abs(y)) != h or (x == 0 and y < 0):
                    continue
                b = 2 * (M[0][2] * x + M[1][2] * y)
                c = M[0][0] * x * x + 2 * M[0][1] * x * y + M[1][1] * y * y
                disc = b * b - 4 * a * c
                if disc < 0:
                    continue
                r = isqrt(disc)
                if r * r != disc:
                    continue
                for z in (Fraction(-b + r, 2 * a), Fraction(-b - r, 2 * a)):
                    return _primitive_int([x, y, z])
    return None


def _descent_point(d):
    """Rational zero of ``d0 x^2 + d1 y^2 + d2 z^2`` via Legendre descent, or ``None``."""
    L = 1
    for x in d:
        L = lcm(L, Fraction(x).denominator)
    ints = [int(Fraction(x) * L) for x in d]
    g = gcd(gcd(ints[0], ints[1]), ints[2])
    ints = [x // g for x in ints]
    # strip square factors so the solver sees square-free coefficients
    scale = []
    sf = []
    for x in ints:
        s, k = squarefree_decomposition(x)
        sf.append(s)
        scale.append(k)
    X, Y, Z = symbols("x y z", integer=True)
    sol = diop_ternary_quadratic_normal(sf[0] * X ** 2 + sf[1] * Y ** 2 + sf[2] * Z ** 2)
    if sol[0] is None:
        return None
    # s_i (k_i x_i)^2 = s_i k_i^2 x_i^2; solution of the square-free form is k_i x_i
    return [Fraction(int(sol[i]), scale[i]) for i in range(3)]


@dataclass
class ConicPoint:
    point: list
    extension: ExtensionRecord | None = None
    method: str = "search"


def find_conic_point(Q, height_bound: int = DEFAULT_HEIGHT_BOUND, hints=()) -> ConicPoint:
    """A point on a nondegenerate conic, over Q when one exists.

    Order of attempts: small-height search on the given form, the rational
    ``hints`` that lie on the conic, Legendre descent on a diagonalization,
    and only if the conic is certified anisotropic, a point over the
    smallest suitable quadratic field.
    """
    A = Q if isinstance(Q, Matrix) else quadric_matrix(Q)
    if A.nrows != 3:
        raise ValueError("conic expected")
    if det(A) == 0:
        raise DegenerateConic("conic is degenerate")
    v = small_point_search(A, height_bound)
    if v is not None:
        return ConicPoint(v, None, "search")
    for h in hints:
        if any(h) and all(is_rational(x) for x in h) and qeval(A, h) == 0:
            return ConicPoint(_primitive_int(h), None, "hint")
    P, d = diagonalize(A)
    isotropic = diagonal_conic_isotropic(*d)
    sol = _descent_point(d) if isotropic else None
    if sol is not None:
        pt = _primitive_int(P @ sol)
        if qeval(A, pt) != 0:
            raise ArithmeticError("descent returned a non-solution")
        return ConicPoint(pt, None, "descent")
    if isotropic:
        raise ArithmeticError("descent failed on a conic that has rational points")
    # anisotropic: pick a coordinate pair a x^2 + b y^2 = 0 of the diagonal form
    options = []
    for i, j in ((0, 1), (0, 2), (1, 2)):
        m, _ = squarefree_decomposition(_int_squarefree(-Fraction(d[j]) / d[i]))
        options.append((m < 0, abs(m), i, j))
    _, _, i, j = min(options)
    root, rec = sqrt_or_extend(-Fraction(d[j]) / d[i], reason="conic point")
    w = [0, 0, 0]
    w[i], w[j] = root, 1
    pt = P @ w
    rec = ExtensionRecord(rec.radicand, "conic without rational points")
    return ConicPoint([canon(x) for x in pt], rec, "extension")


@dataclass
class Parametrization:
    """Images of the lift variables as forms in ``(x0, x1)``."""

    forms: list
    extension: ExtensionRecord | None = None
    point: list = field(default_factory=list)


def parametrize_from_point(A: Matrix, P, space: Space | None = None) -> list:
    """Parametrize the conic ``X^T A X = 0`` by lines through ``P``.

    ``X(u, v) = -Q(V) P + 2 B(P, V) V`` with ``V = u V1 + v V2``.
    """
    space = space or Space("primal", 2)
    k = next(i for i in range(3) if P[i] != 0)
    others = [i for i in range(3) if i != k]
    sp = (space,)
    u = Form(sp, {(1, 0): 1})
    v = Form(sp, {(0, 1): 1})
    V = []
    for c in range(3):
        comp = Form(sp, {}, (1,))
        if c == others[0]:
            comp = u
        elif c == others[1]:
            comp = v
        V.append(comp)
    # Q(V) and B(P, V) as forms in u, v
    QV = Form(sp, {}, (2,))
    for i in range(3):
        for j in range(3):
            if A[i, j] != 0 and V[i] and V[j]:
                QV = QV + (V[i] * V[j]).scale(A[i, j])
    BPV = Form(sp, {}, (1,))
    for i in range(3):
        for j in range(3):
            if A[i, j] != 0 and P[i] != 0 and V[j]:
                BPV = BPV + V[j].scale(A[i, j] * P[i])
    out = []
    for c in range(3):
        t = QV.scale(-P[c]) if P[c] != 0 else Form(sp, {}, (2,))
        if V[c]:
            t = t + (BPV * V[c]).scale(2)
        out.append(t)
    return out


def parametrize_conic(Q: Form, height_bound: int = DEFAULT_HEIGHT_BOUND,
                      space: Space | None = None, hints=()) -> Parametrization:
    """Three binary quadrics ``X_i(x0, x1)`` with ``Q(X) = 0`` identically."""
    A = quadric_matrix(Q)
    if A.nrows != 3:
        raise ValueError("parametrize_conic expects three variables")
    if det(A) == 0:
        raise DegenerateConic("conic is degenerate")
    cp = find_conic_point(A, height_bound, hints)
    forms = parametrize_from_point(A, cp.point, space)
    return Parametrization(forms, cp.extension, cp.point)


# ---------------------------------------------------------------------------
# rank-4 quadrics
# ---------------------------------------------------------------------------

@dataclass
class NormalForm:
    """``Q(T y) = scale * (y0 y3 - y1 y2)``; columns of ``T`` are the new basis."""

    T: Matrix
    scale: object
    extension: ExtensionRecord | None = None


def _field_check(values, current):
    m = None
    for x in values:
        if isinstance(x, QuadExt) and x.b != 0:
            if m is None:
                m = x.m
            elif m != x.m:
                raise MixedFieldError("two different quadratic extensions")
    if current is not None and m is not None and current.radicand != m:
        raise MixedFieldError("a second quadratic extension would be needed")
    return m


def _discriminant_radicand(A: Matrix):
    """Square-free part of ``16 det A``; a split form needs its square root."""
    d = det(A)
    if not is_rational(d):
        return None
    d = Fraction(16 * d)
    return squarefree_decomposition(d.numerator * d.denominator)[0]


def _isotropic_vector(A: Matrix, height_bound):
    """An isotropic vector of a nondegenerate quaternary form (at most one extension).

    Among vectors needing an extension, one over the field forced by the
    discriminant wins.
    """
    preferred = False
    n = A.nrows
    for i in range(n):
        if A[i, i] == 0:
            v = [0] * n
            v[i] = 1
            return v, None
    fallback = None
    for drop in range(n - 1, -1, -1):
        keep = [i for i in range(n) if i != drop]
        sub = Matrix([[A[i, j] for j in keep] for i in keep])
        if det(sub) == 0:
            continue
        cp = find_conic_point(sub, height_bound)
        v = [0] * n
        for pos, i in enumerate(keep):
            v[i] = cp.point[pos]
        if cp.extension is None:
            return v, None
        if preferred is False:
            preferred = _discriminant_radicand(A)
        if cp.extension.radicand == preferred:
            return v, cp.extension
        if fallback is None or abs(cp.extension.radicand) < abs(fallback[1].radicand):
            fallback = (v, cp.extension)
    if fallback is None:
        raise WrongRank("no nondegenerate ternary subform", rank=rank(A))
    return fallback


def quadric_normal_form(Q: Form, height_bound: int = DEFAULT_HEIGHT_BOUND) -> NormalForm:
    """Congruence bringing a rank-4 quaternary quadric to ``y0 y3 - y1 y2``.

    Splits off a hyperbolic plane through an isotropic vector, then splits
    the binary orthogonal complement with one square root.  At most one
    quadratic extension is allowed; needing two raises ``MixedFieldError``.
    """
    A = quadric_matrix(Q)
    if A.nrows != 4:
        raise ValueError("quadric_normal_form expects four variables")
    r = rank(A)
    if r != 4:
        raise WrongRank(f"quadric has rank {r}; rank-3 models use the weighted pipeline", rank=r)
    v1, ext = _isotropic_vector(A, height_bound)
    # hyperbolic partner
    w = next(e for e in ([1 if i == j else 0 for i in range(4)] for j in range(4))
             if bilinear(A, v1, e) != 0)
    b = bilinear(A, v1, w)
    qw = qeval(A, w)
    c = field_div(qw, 2 * b)
    v2 = [canon(wi - c * vi) for wi, vi in zip(w, v1)]
    h = bilinear(A, v1, v2)
    # orthogonal complement of span(v1, v2)
    lin = Matrix([[bilinear(A, v1, e) for e in _basis(4)],
                  [bilinear(A, v2, e) for e in _basis(4)]])
    W = right_kernel(lin)
    if len(W) != 2:
        raise WrongRank("degenerate hyperbolic splitting", rank=r)
    a11, a12, a22 = qeval(A, W[0]), bilinear(A, W[0], W[1]), qeval(A, W[1])
    disc = canon(a12 * a12 - a11 * a22)
    # isotropic vectors of a11 s^2 + 2 a12 s t + a22 t^2
    if a11 == 0:
        r1, r2 = (1, 0), (-a22, 2 * a12)
    elif a22 == 0:
        r1, r2 = (0, 1), (2 * a12, -a11)
    else:
        if disc == 0:
            raise WrongRank("binary complement is degenerate", rank=3)
        root = rational_sqrt(disc) if is_rational(disc) else None
        rec = None
        if root is None:
            if not is_rational(disc):
                raise MixedFieldError("complement discriminant outside the base field")
            root, rec = sqrt_or_extend(disc, reason="quadric normal form")
        if rec is not None:
            if ext is not None and ext.radicand != rec.radicand:
                raise MixedFieldError("normal form needs two different quadratic extensions")
            ext = ext or ExtensionRecord(rec.radicand, "quadric normal form")
        r1 = (-a12 + root, a11)
        r2 = (-a12 - root, a11)
    u1 = [canon(r1[0] * x + r1[1] * y) for x, y in zip(W[0], W[1])]
    u2 = [canon(r2[0] * x + r2[1] * y) for x, y in zip(W[0], W[1])]
    g = bilinear(A, u1, u2)
    s = field_div(-h, g)
    u2 = [canon(s * x) for x in u2]
    # Q(y0 v1 + y1 u1 + y2 u2 + y3 v2) = 2h y0 y3 + 2 B(u1,u2) y1 y2 = 2h (y0 y3 - y1 y2)
    T = Matrix([[v1[i], u1[i], u2[i], v2[i]] for i in range(4)])
    _field_check([x for row in T.rows for x in row], ext)
    return NormalForm(T, canon(2 * h), ext)


def _kernel_mod_p(rows, n, p):
    """Kernel basis of an integer matrix over F_p."""
    a = [[x % p for x in r] for r in rows]
    piv, r = [], 0
    for c in range(n):
        k = next((i for i in range(r, len(a)) if a[i][c]), None)
        if k is None:
            continue
        a[r], a[k] = a[k], a[r]
        inv = pow(a[r][c], -1, p)
        a[r] = [x * inv % p for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                m = a[i][c]
                a[i] = [(x - m * y) % p for x, y in zip(a[i], a[r])]
        piv.append(c)
        r += 1
    out = []
    for fcol in (c for c in range(n) if c not in piv):
        v = [0] * n
        v[fcol] = 1
        for i, pc in enumerate(piv):
            v[pc] = -a[i][fcol] % p
        out.append(v)
    return out


def quadric_normal_form_mod_p(Q: Form, p: int, rng):
    """Splitting matrix ``T`` over F_p with ``Q(T y) = s (y0 y3 - y1 y2)``.

    Returns ``(T, s)`` with entries as integers mod ``p``, or ``None`` when
    the quadric is singular mod ``p`` or does not split there (discriminant
    not a square).  Used only for randomized screening.
    """
    from sympy.ntheory import sqrt_mod
    A0 = quadric_matrix(Q)
    n = A0.nrows
    try:
        A = [[PrimeField(A0[i, j], p).value for j in range(n)] for i in range(n)]
    except ZeroDivisionError:
        return None

    def B(u, v):
        return sum(A[i][j] * u[i] * v[j] for i in range(n) for j in range(n)) % p

    def root(x):
        x %= p
        r = sqrt_mod(x, p) if x else 0
        return r

    v1 = next(([int(i == k) for i in range(n)] for k in range(n) if A[k][k] == 0), None)
    tries = 0
    while v1 is None and tries < 200:
        tries += 1
        x = [rng.randrange(p) for _ in range(n)]
        y = [rng.randrange(p) for _ in range(n)]
        qy, bxy, qx = B(y, y), B(x, y), B(x, x)
        r = root(bxy * bxy - qx * qy)
        if qy == 0 or r is None:
            continue
        t = (-bxy + r) * pow(qy, -1, p) % p
        v1 = [(xi + t * yi) % p for xi, yi in zip(x, y)]
        if not any(v1):
            v1 = None
    if v1 is None:
        return None
    w = next((e for e in ([int(i == j) for i in range(n)] for j in range(n)) if B(v1, e)), None)
    if w is None:
        return None
    b = B(v1, w)
    c = B(w, w) * pow(2 * b, -1, p) % p
    v2 = [(wi - c * vi) % p for wi, vi in zip(w, v1)]
    h = B(v1, v2)
    rows = [[sum(A[i][j] * v[i] for i in range(n)) % p for j in range(n)] for v in (v1, v2)]
    W = _kernel_mod_p(rows, n, p)
    if len(W) != 2:
        return None
    a11, a12, a22 = B(W[0], W[0]), B(W[0], W[1]), B(W[1], W[1])
    if a11 == 0:
        r1, r2 = (1, 0), (-a22, 2 * a12)
    elif a22 == 0:
        r1, r2 = (0, 1), (2 * a12, -a11)
    else:
        r = root(a12 * a12 - a11 * a22)
        if not r:
            return None
        r1, r2 = (-a12 + r, a11), (-a12 - r, a11)
    u1 = [(r1[0] * x + r1[1] * y) % p for x, y in zip(W[0], W[1])]
    u2 = [(r2[0] * x + r2[1] * y) % p for x, y in zip(W[0], W[1])]
    g = B(u1, u2)
    if g == 0 or h == 0:
        return None
    s = -h * pow(g, -1, p) % p
    u2 = [s * x % p for x in u2]
    T = [[v1[i], u1[i], u2[i], v2[i]] for i in range(n)]
    return T, 2 * h % p


def _basis(n):
    return [[1 if i == j else 0 for i in range(n)] for j in range(n)]


def apply_linear(f: Form, T: Matrix) -> Form:
    """``f(T y)`` for a form in one group."""
    return linear_change(f, T.tolist())


def rebase_veronese(quadrics, nvars: int, height_bound: int = DEFAULT_HEIGHT_BOUND):
    """Dispatch to the implemented cases of re-embedding a Veronese-type image."""
    from .errors import Unsupported
    qs = list(quadrics)
    if nvars == 3 and len(qs) == 1:
        return parametrize_conic(qs[0], height_bound)
    if nvars == 4 and len(qs) == 1:
        return quadric_normal_form(qs[0], height_bound)
    raise Unsupported(f"re-embedding with {nvars} variables and {len(qs)} quadrics needs a "
                      "general Noether normalization, which is not implemented")


__all__ = ["quadric_matrix", "matrix_quadric", "diagonalize", "hilbert_symbol",
           "diagonal_conic_isotropic", "conic_isotropic", "find_conic_point",
           "parametrize_conic", "parametrize_from_point", "quadric_normal_form",
           "rebase_veronese", "Parametrization", "NormalForm", "apply_linear"]

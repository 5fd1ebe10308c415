"""Exact dense linear algebra over Q, Q(sqrt m) and F_p."""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm

from .errors import NotSquare, Singular
from .fields import DEFAULT_PRIME, PrimeField, canon, is_rational
from .poly import Form, apolar_pair


class Matrix:
    """Immutable rectangular matrix with exact entries."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows):
        rows = [tuple(canon(x) for x in r) for r in rows]
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")
        self.rows = tuple(rows)
        self.nrows = len(rows)
        self.ncols = len(rows[0]) if rows else 0

    @classmethod
    def identity(cls, n):
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, r, c):
        return cls([[0] * c for _ in range(r)])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def row(self, i):
        return list(self.rows[i])

    def col(self, j):
        return [r[j] for r in self.rows]

    def transpose(self):
        return Matrix([self.col(j) for j in range(self.ncols)])

    T = property(transpose)

    def tolist(self):
        return [list(r) for r in self.rows]

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise ValueError("shape mismatch")
            cols = [other.col(j) for j in range(other.ncols)]
            return Matrix([[sum((a * b for a, b in zip(r, c)), 0) for c in cols]
                           for r in self.rows])
        vec = list(other)
        if len(vec) != self.ncols:
            raise ValueError("shape mismatch")
        return [canon(sum((a * b for a, b in zip(r, vec)), 0)) for r in self.rows]

    def __mul__(self, c):
        return Matrix([[x * c for x in r] for r in self.rows])

    __rmul__ = __mul__

    def __add__(self, other):
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __repr__(self):
        return f"Matrix({self.tolist()!r})"

    def is_rational(self):
        return all(is_rational(x) for r in self.rows for x in r)


def _as_matrix(M):
    return M if isinstance(M, Matrix) else Matrix(M)


def _integer_rows(M):
    """Scale each row by the lcm of its denominators (returns rows, product of scalings)."""
    rows, scale = [], 1
    for r in M.rows:
        L = 1
        for x in r:
            if isinstance(x, Fraction):
                L = lcm(L, x.denominator)
        rows.append([int(x * L) for x in r])
        scale *= L
    return rows, scale


def _bareiss_det(a):
    n = len(a)
    a = [list(r) for r in a]
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            row_i, row_k = a[i], a[k]
            for j in range(k + 1, n):
                row_i[j] = (row_i[j] * akk - aik * row_k[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


def _gauss_det(M):
    a = [list(r) for r in M.rows]
    n, det = len(a), 1
    for k in range(n):
        p = next((i for i in range(k, n) if a[i][k] != 0), None)
        if p is None:
            return 0
        if p != k:
            a[k], a[p] = a[p], a[k]
            det = -det
        det = det * a[k][k]
        inv = 1 / a[k][k] if not isinstance(a[k][k], int) else Fraction(1, a[k][k])
        for i in range(k + 1, n):
            if a[i][k] != 0:
                f = a[i][k] * inv
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return canon(det)


def det(M):
    """Exact determinant; fraction-free over Q, Gaussian otherwise."""
    M = _as_matrix(M)
    if M.nrows != M.ncols:
        raise NotSquare(f"{M.nrows}x{M.ncols} matrix has no determinant")
    if M.nrows == 0:
        return 1
    if M.is_rational():
        rows, scale = _integer_rows(M)
        return canon(Fraction(_bareiss_det(rows), scale))
    return _gauss_det(M)


def _inv_scalar(x):
    if isinstance(x, int):
        return Fraction(1, x)
    return 1 / x


def rref(M):
    """Reduced row echelon form and pivot columns."""
    M = _as_matrix(M)
    a = [list(r) for r in M.rows]
    pivots, r = [], 0
    for c in range(M.ncols):
        p = next((i for i in range(r, M.nrows) if a[i][c] != 0), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = _inv_scalar(a[r][c])
        a[r] = [canon(x * inv) for x in a[r]]
        for i in range(M.nrows):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                a[i] = [canon(x - f * y) for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == M.nrows:
            break
    return Matrix(a) if a else M, pivots


def rank(M):
    return len(rref(M)[1])


def inverse(M):
    M = _as_matrix(M)
    if M.nrows != M.ncols:
        raise NotSquare("only square matrices have inverses")
    n = M.nrows
    aug = Matrix([list(r) + [1 if i == j else 0 for j in range(n)]
                  for i, r in enumerate(M.rows)])
    R, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise Singular("matrix is singular")
    return Matrix([r[n:] for r in R.rows])


def solve(M, b):
    """Solve ``M x = b`` for invertible square ``M``."""
    return inverse(M) @ list(b)


def primitive_vector(v):
    """Scale a vector to a primitive integer vector with positive first nonzero entry.

    Vectors with irrational entries are scaled so the first nonzero entry is 1.
    """
    v = [canon(x) for x in v]
    lead = next((x for x in v if x != 0), None)
    if lead is None:
        return v
    if not all(is_rational(x) for x in v):
        inv = _inv_scalar(lead)
        return [canon(x * inv) for x in v]
    L = 1
    for x in v:
        if isinstance(x, Fraction):
            L = lcm(L, x.denominator)
    ints = [int(x * L) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    ints = [x // g for x in ints]
    if next(x for x in ints if x) < 0:
        ints = [-x for x in ints]
    return ints


def right_kernel(M):
    """Basis of ``{v : M v = 0}``, each vector primitive (see :func:`primitive_vector`)."""
    M = _as_matrix(M)
    R, piv = rref(M)
    free = [c for c in range(M.ncols) if c not in piv]
    basis = []
    for fcol in free:
        v = [0] * M.ncols
        v[fcol] = 1
        for r, pc in enumerate(piv):
            v[pc] = -R[r, fcol]
        basis.append(primitive_vector(v))
    return basis


def rank_mod_p(M, p=DEFAULT_PRIME):
    """Rank over F_p; entries must be rationals with denominators prime to p."""
    M = _as_matrix(M)
    a = [[PrimeField(x, p).value if not isinstance(x, int) else x % p for x in r]
         for r in M.rows]
    rk, ncols, nrows = 0, M.ncols, M.nrows
    for c in range(ncols):
        piv = next((i for i in range(rk, nrows) if a[i][c]), None)
        if piv is None:
            continue
        a[rk], a[piv] = a[piv], a[rk]
        inv = pow(a[rk][c], -1, p)
        for i in range(rk + 1, nrows):
            if a[i][c]:
                f = a[i][c] * inv % p
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[rk])]
        rk += 1
    return rk


def pairing_matrix(P, Q):
    """Matrix ``(D(P[i], Q[j]))`` of degree-0 pairings."""
    P, Q = list(P), list(Q)
    if len({p.degrees for p in P}) > 1 or len({q.degrees for q in Q}) > 1:
        raise ValueError("families must have a common degree")
    return Matrix([[apolar_pair(p, q).scalar() for q in Q] for p in P])


def coefficient_matrix(family):
    """Rows are the coefficient vectors of the forms in canonical monomial order."""
    return Matrix([f.coeffs() for f in family])


def combine(coeffs, forms):
    """``sum_i coeffs[i] * forms[i]``."""
    out = None
    for c, f in zip(coeffs, forms):
        if c == 0:
            continue
        t = f.scale(c)
        out = t if out is None else out + t
    if out is None:
        f = forms[0]
        return Form(f.spaces, {}, f.degrees)
    return out


def cofactor_det(M):
    """Laplace expansion; a slow independent check for small matrices."""
    M = _as_matrix(M)
    n = M.nrows
    if n == 0:
        return 1
    if n == 1:
        return M[0, 0]
    total = 0
    for j in range(n):
        if M[0, j] == 0:
            continue
        minor = Matrix([[M[i, k] for k in range(n) if k != j] for i in range(1, n)])
        total += (-1) ** j * M[0, j] * cofactor_det(minor)
    return canon(total)


__all__ = ["Matrix", "det", "inverse", "rank", "rank_mod_p", "right_kernel", "rref",
           "solve", "pairing_matrix", "coefficient_matrix", "combine", "cofactor_det",
           "primitive_vector"]

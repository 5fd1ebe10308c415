"""Sparse homogeneous polynomials graded by variable space.

A :class:`Form` is a polynomial that is homogeneous separately in each of
its variable groups.  Exponent vectors are flattened across the groups, so a
bicubic form in ``(x0, x1)`` and ``(u0, u1)`` has 4-tuples as keys.

Variable letters: ``x`` primal, ``w`` dual, ``X`` lift, ``u`` second primal
factor, ``v`` its dual, ``s`` an auxiliary binary pencil (internal only).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product as iproduct
from math import factorial
import random
import re

from .errors import (ArityMismatch, DegreeTooHigh, InhomogeneousImages,
                     ParseError, SpaceMismatch)
from .fields import QuadExt, canon, format_scalar, parse_scalar

KIND_LETTER = {"primal": "x", "dual": "w", "lift": "X",
               "primal2": "u", "dual2": "v", "aux": "s"}
LETTER_KIND = {v: k for k, v in KIND_LETTER.items()}
DUAL_KIND = {"primal": "dual", "dual": "primal",
             "primal2": "dual2", "dual2": "primal2"}
# group ordering used when a space tuple is inferred from text
KIND_ORDER = ("aux", "primal", "dual", "primal2", "dual2", "lift")


@dataclass(frozen=True)
class Space:
    kind: str
    dim: int

    @property
    def letter(self):
        return KIND_LETTER[self.kind]

    @property
    def dual(self):
        return Space(DUAL_KIND[self.kind], self.dim)

    def __repr__(self):
        return f"{self.kind}({self.dim})"


def primal(n):
    return Space("primal", n)


def dual(n):
    return Space("dual", n)


def lift(n):
    return Space("lift", n)


BINARY = (primal(2),)
TERNARY = (primal(3),)
BIBINARY = (primal(2), Space("primal2", 2))
BIBINARY_DUAL = (dual(2), Space("dual2", 2))


@lru_cache(maxsize=None)
def monomials(n: int, d: int):
    """Exponent tuples of degree ``d`` in ``n`` variables, lexicographically descending."""
    if n == 1:
        return ((d,),)
    out = []
    for a in range(d, -1, -1):
        for rest in monomials(n - 1, d - a):
            out.append((a,) + rest)
    return tuple(out)


def group_monomials(spaces, degrees):
    """Flattened exponent tuples for a multi-group space, in canonical order."""
    parts = [monomials(s.dim, d) for s, d in zip(spaces, degrees)]
    return tuple(sum(p, ()) for p in iproduct(*parts))


@lru_cache(maxsize=None)
def multinomial(d, alpha):
    r = factorial(d)
    for a in alpha:
        r //= factorial(a)
    return r


def exp_factorial(alpha):
    r = 1
    for a in alpha:
        r *= factorial(a)
    return r


def _offsets(spaces):
    out, o = [], 0
    for s in spaces:
        out.append((o, o + s.dim))
        o += s.dim
    return tuple(out)


class Form:
    """Immutable sparse multi-homogeneous polynomial."""

    __slots__ = ("spaces", "degrees", "terms")

    def __init__(self, spaces, terms, degrees=None, check=False):
        spaces = tuple(spaces)
        if degrees is None:
            if not terms:
                raise ValueError("degrees are required for the zero form")
            mono = next(iter(terms))
            degrees = tuple(sum(mono[a:b]) for a, b in _offsets(spaces))
        self.spaces = spaces
        self.degrees = tuple(degrees)
        clean = {}
        for m, c in terms.items():
            if c:
                if type(c) is Fraction and c.denominator == 1:
                    c = c.numerator
                elif type(c) is QuadExt and c.b == 0:
                    c = canon(c.a)
                clean[m] = c
        self.terms = clean
        if check:
            offs = _offsets(spaces)
            for m in clean:
                if len(m) != offs[-1][1] if offs else len(m) != 0:
                    raise SpaceMismatch(f"exponent {m} does not fit {spaces}")
                if tuple(sum(m[a:b]) for a, b in offs) != self.degrees:
                    raise InhomogeneousImages(f"monomial {m} is not of degree {self.degrees}")

    # -- constructors ----------------------------------------------------

    @classmethod
    def zero(cls, spaces, degrees):
        return cls(spaces, {}, degrees)

    @classmethod
    def const(cls, c, spaces=()):
        spaces = tuple(spaces)
        n = sum(s.dim for s in spaces)
        return cls(spaces, {(0,) * n: c}, (0,) * len(spaces))

    @classmethod
    def var(cls, spaces, group, index):
        spaces = tuple(spaces) if not isinstance(spaces, Space) else (spaces,)
        offs = _offsets(spaces)
        e = [0] * offs[-1][1]
        e[offs[group][0] + index] = 1
        degs = [0] * len(spaces)
        degs[group] = 1
        return cls(spaces, {tuple(e): 1}, degs)

    @classmethod
    def variables(cls, space):
        return [cls.var((space,), 0, i) for i in range(space.dim)]

    @classmethod
    def from_coeffs(cls, spaces, degrees, coeffs):
        """Build from a coefficient list in canonical monomial order."""
        mons = group_monomials(tuple(spaces), tuple(degrees))
        if len(coeffs) != len(mons):
            raise ArityMismatch(f"expected {len(mons)} coefficients, got {len(coeffs)}")
        return cls(spaces, dict(zip(mons, coeffs)), degrees)

    # -- basic queries ---------------------------------------------------

    @property
    def degree(self):
        return self.degrees[0] if len(self.degrees) == 1 else self.degrees

    @property
    def nvars(self):
        return sum(s.dim for s in self.spaces)

    def is_zero(self):
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def coeff(self, mono):
        return self.terms.get(tuple(mono), 0)

    def coeffs(self):
        """Coefficient list in canonical monomial order (zeros included)."""
        return [self.terms.get(m, 0) for m in group_monomials(self.spaces, self.degrees)]

    def scalar(self):
        if any(self.degrees):
            raise ValueError("form is not of degree 0")
        return canon(next(iter(self.terms.values()))) if self.terms else 0

    def __eq__(self, other):
        if isinstance(other, Form):
            if not self.terms and not other.terms:
                return self.spaces == other.spaces and self.degrees == other.degrees
            return self.spaces == other.spaces and self.terms == other.terms
        if not any(self.degrees):
            return self.scalar() == other
        return NotImplemented

    def __hash__(self):
        return hash((self.spaces, frozenset(self.terms.items())))

    # -- arithmetic ------------------------------------------------------

    def _same(self, other):
        if self.spaces != other.spaces:
            raise SpaceMismatch(f"{self.spaces} vs {other.spaces}")

    def __add__(self, other):
        if not isinstance(other, Form):
            if other == 0:
                return self
            other = Form.const(other, self.spaces)
        self._same(other)
        if self.degrees != other.degrees and self.terms and other.terms:
            raise SpaceMismatch(f"degrees {self.degrees} and {other.degrees} differ")
        if not self.terms:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return Form(self.spaces, terms, self.degrees)

    __radd__ = __add__

    def __neg__(self):
        return Form(self.spaces, {m: -c for m, c in self.terms.items()}, self.degrees)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, Form):
            return self.scale(other)
        self._same(other)
        terms = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                terms[m] = terms.get(m, 0) + c1 * c2
        degs = tuple(a + b for a, b in zip(self.degrees, other.degrees))
        return Form(self.spaces, terms, degs)

    def __rmul__(self, other):
        return self.scale(other)

    def scale(self, c):
        c = canon(c)
        if c == 0:
            return Form(self.spaces, {}, self.degrees)
        return Form(self.spaces, {m: v * c for m, v in self.terms.items()}, self.degrees)

    def __truediv__(self, c):
        if isinstance(c, int):
            c = Fraction(1, c)
        else:
            c = 1 / c
        return self.scale(c)

    def __pow__(self, e: int):
        if e < 0:
            raise ValueError("negative power of a form")
        result = Form.const(1, self.spaces)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def map_coeffs(self, fn):
        return Form(self.spaces, {m: fn(c) for m, c in self.terms.items()}, self.degrees)

    # -- structure -------------------------------------------------------

    def diff(self, var, times=1):
        """Partial derivative by flattened variable index ``var``."""
        g = next(i for i, (a, b) in enumerate(_offsets(self.spaces)) if a <= var < b)
        terms = {}
        for m, c in self.terms.items():
            e = m[var]
            if e >= times:
                k = 1
                for t in range(times):
                    k *= e - t
                mm = m[:var] + (e - times,) + m[var + 1:]
                terms[mm] = c * k
        degs = list(self.degrees)
        degs[g] -= times
        if degs[g] < 0:
            return Form(self.spaces, {}, [max(d, 0) for d in degs])
        return Form(self.spaces, terms, degs)

    def diff_multi(self, exps):
        """Apply ``prod d^{exps[i]}/dx_i^{exps[i]}`` (flattened indices)."""
        offs = _offsets(self.spaces)
        degs = list(self.degrees)
        for g, (a, b) in enumerate(offs):
            degs[g] -= sum(exps[a:b])
        if min(degs, default=0) < 0:
            return Form(self.spaces, {}, [max(d, 0) for d in degs])
        terms = {}
        for m, c in self.terms.items():
            k = 1
            for e, a in zip(m, exps):
                if a:
                    if e < a:
                        k = 0
                        break
                    for t in range(a):
                        k *= e - t
            if k:
                mm = tuple(e - a for e, a in zip(m, exps))
                terms[mm] = c * k
        return Form(self.spaces, terms, degs)

    def drop_group(self, g):
        """Remove a group of degree 0."""
        if self.degrees[g] != 0:
            raise ValueError("can only drop a group of degree 0")
        a, b = _offsets(self.spaces)[g]
        spaces = self.spaces[:g] + self.spaces[g + 1:]
        degs = self.degrees[:g] + self.degrees[g + 1:]
        return Form(spaces, {m[:a] + m[b:]: c for m, c in self.terms.items()}, degs)

    def divide_variable_power(self, var, k):
        """Exact division by the k-th power of one variable (flattened index)."""
        g = next(i for i, (a, b) in enumerate(_offsets(self.spaces)) if a <= var < b)
        terms = {}
        for m, c in self.terms.items():
            if m[var] < k:
                raise ValueError("form is not divisible by the requested power")
            terms[m[:var] + (m[var] - k,) + m[var + 1:]] = c
        degs = list(self.degrees)
        degs[g] -= k
        return Form(self.spaces, terms, degs)

    def relabel(self, spaces):
        """Reinterpret the same exponents in other spaces of equal dimensions."""
        spaces = tuple(spaces)
        if [s.dim for s in spaces] != [s.dim for s in self.spaces]:
            raise SpaceMismatch("relabel must preserve group dimensions")
        return Form(spaces, self.terms, self.degrees)

    def primitive(self):
        """Divide by the positive rational content; sign is kept."""
        from .fields import content
        c = content(self.terms.values())
        if not c:
            return self
        return self.scale(Fraction(1) / c)

    def primitive_signed(self):
        """Primitive form with positive leading coefficient."""
        p = self.primitive()
        if p.terms and lead_coeff(p) < 0:
            p = -p
        return p

    def __repr__(self):
        return f"Form({format_form(self)!r})"

    def __str__(self):
        return format_form(self)


def lead_coeff(f: Form):
    mono = max(f.terms)
    return f.terms[mono]


# ---------------------------------------------------------------------------
# apolarity
# ---------------------------------------------------------------------------

@lru_cache(maxsize=1 << 16)
def _falling(e, a):
    k = 1
    for t in range(a):
        k *= e - t
    return k


def apolar_pair(u: Form, f: Form) -> Form:
    """Contract ``u`` against ``f`` by partial differentiation.

    Each monomial ``w^a`` of ``u`` acts on ``f`` as ``d^a/dx^a``; the spaces
    of ``u`` must be dual, group by group, to those of ``f``.  The result lives
    in ``f``'s spaces with degrees reduced by ``u``'s.
    """
    if len(u.spaces) != len(f.spaces) or any(
            s.kind not in DUAL_KIND or DUAL_KIND[s.kind] != t.kind or s.dim != t.dim
            for s, t in zip(u.spaces, f.spaces)):
        raise SpaceMismatch(f"cannot pair {u.spaces} against {f.spaces}")
    degs = tuple(b - a for a, b in zip(u.degrees, f.degrees))
    if min(degs, default=0) < 0:
        raise DegreeTooHigh(f"degree {u.degrees} exceeds {f.degrees}")
    terms = {}
    n = len(next(iter(f.terms))) if f.terms else 0
    idx = range(n)
    for a, cu in u.terms.items():
        support = [i for i in idx if a[i]]
        for m, cf in f.terms.items():
            k = 1
            for i in support:
                e = m[i]
                if e < a[i]:
                    break
                k *= _falling(e, a[i])
            else:
                mm = tuple(m[i] - a[i] for i in idx)
                terms[mm] = terms.get(mm, 0) + cu * cf * k
    return Form(f.spaces, terms, degs)


def apolar_pair_multi(u: Form, f: Form) -> Form:
    """Pairing over several variable groups; acts group by group."""
    return apolar_pair(u, f)


def pair_scalar(u: Form, f: Form):
    """Pairing of forms of equal degree, returned as a scalar."""
    return apolar_pair(u, f).scalar()


def dual_basis_monomial(space_or_spaces, alpha):
    """The canonical dual monomial ``w^alpha / alpha!`` (over the dual spaces)."""
    spaces = (space_or_spaces,) if isinstance(space_or_spaces, Space) else tuple(space_or_spaces)
    dspaces = tuple(s.dual for s in spaces)
    return Form(dspaces, {tuple(alpha): Fraction(1, exp_factorial(alpha))})


def canonical_basis(spaces, degrees):
    spaces = tuple(spaces)
    return [Form(spaces, {m: 1}, degrees) for m in group_monomials(spaces, tuple(degrees))]


def canonical_dual_basis(spaces, degrees):
    spaces = tuple(spaces)
    return [dual_basis_monomial(spaces, m) for m in group_monomials(spaces, tuple(degrees))]


# ---------------------------------------------------------------------------
# substitution
# ---------------------------------------------------------------------------

def substitute(f: Form, images) -> Form:
    """Replace the variables of ``f`` (all groups, flattened) by forms ``images``."""
    images = list(images)
    if len(images) != f.nvars:
        raise ArityMismatch(f"{len(images)} images for {f.nvars} variables")
    if not images:
        return f
    spaces, degs = images[0].spaces, images[0].degrees
    for g in images:
        if g.spaces != spaces or (g.degrees != degs and g.terms):
            raise InhomogeneousImages("images must share spaces and degrees")
    out_deg = tuple(sum(f.degrees) * d for d in degs)
    cache = {}

    def power(i, e):
        key = (i, e)
        if key not in cache:
            if e == 0:
                cache[key] = Form.const(1, spaces)
            elif e == 1:
                cache[key] = images[i]
            else:
                h = power(i, e // 2)
                cache[key] = h * h if e % 2 == 0 else h * h * images[i]
        return cache[key]

    acc = {}
    for m, c in f.terms.items():
        t = Form.const(c, spaces)
        for i, e in enumerate(m):
            if e:
                t = t * power(i, e)
        for mm, cc in t.terms.items():
            acc[mm] = acc.get(mm, 0) + cc
    return Form(spaces, acc, out_deg)


def linear_change(f: Form, matrix, group: int = 0) -> Form:
    """Substitute ``x_i -> sum_j matrix[i][j] x_j`` inside one group."""
    offs = _offsets(f.spaces)
    a, b = offs[group]
    n = b - a
    if len(matrix) != n or any(len(r) != n for r in matrix):
        raise ArityMismatch("matrix size does not match the group dimension")
    rows = [{j: matrix[i][j] for j in range(n) if matrix[i][j]} for i in range(n)]
    # expand each monomial group-wise
    result = {}
    pcache = {}

    def lin_power(i, e):
        key = (i, e)
        if key not in pcache:
            if e == 0:
                pcache[key] = {(0,) * n: 1}
            else:
                prev = lin_power(i, e - 1)
                cur = {}
                for m, c in prev.items():
                    for j, cj in rows[i].items():
                        mm = m[:j] + (m[j] + 1,) + m[j + 1:]
                        cur[mm] = cur.get(mm, 0) + c * cj
                pcache[key] = cur
        return pcache[key]

    for m, c in f.terms.items():
        part = {(0,) * n: c}
        for i in range(n):
            e = m[a + i]
            if e:
                lp = lin_power(i, e)
                nxt = {}
                for m1, c1 in part.items():
                    for m2, c2 in lp.items():
                        mm = tuple(x + y for x, y in zip(m1, m2))
                        nxt[mm] = nxt.get(mm, 0) + c1 * c2
                part = nxt
        for mm, cc in part.items():
            key = m[:a] + mm + m[b:]
            result[key] = result.get(key, 0) + cc
    return Form(f.spaces, result, f.degrees)


def segre_images():
    """The Segre map ``[x0u0, x0u1, x1u0, x1u1]`` as bihomogeneous forms."""
    return [Form(BIBINARY, {(1, 0, 1, 0): 1}), Form(BIBINARY, {(1, 0, 0, 1): 1}),
            Form(BIBINARY, {(0, 1, 1, 0): 1}), Form(BIBINARY, {(0, 1, 0, 1): 1})]


def segre_pullback(E: Form) -> Form:
    """Pull a form in four lift variables back along the Segre map."""
    if E.nvars != 4 or len(E.spaces) != 1:
        raise ArityMismatch("segre_pullback expects a form in four variables")
    return substitute(E, segre_images())


def random_form(spaces, degrees, rng: random.Random, lo=-20, hi=20) -> Form:
    spaces = tuple(spaces)
    mons = group_monomials(spaces, tuple(degrees))
    return Form(spaces, {m: rng.randint(lo, hi) for m in mons}, degrees)


# ---------------------------------------------------------------------------
# combinatorial self-check
# ---------------------------------------------------------------------------

def _compositions_matrix(k, d, alpha):
    """Enumerate k x (n+1) nonnegative matrices with row sums d and column sums alpha."""
    n1 = len(alpha)

    def rows(i, remaining):
        if i == k:
            if not any(remaining):
                yield ()
            return
        for row in monomials(n1, d):
            if all(r <= c for r, c in zip(row, remaining)):
                rest = tuple(c - r for r, c in zip(row, remaining))
                for tail in rows(i + 1, rest):
                    yield (row,) + tail

    return rows(0, tuple(alpha))


def multinomial_check(k, d, n) -> bool:
    """Brute-force check of the multinomial convolution identity for all alpha.

    For every alpha of size ``k*d`` in ``n+1`` parts, the sum over matrices with
    row sums ``d`` and column sums ``alpha`` of the product of row multinomials
    equals the multinomial ``(kd; alpha)``.
    """
    for alpha in monomials(n + 1, k * d):
        total = 0
        for mat in _compositions_matrix(k, d, alpha):
            p = 1
            for row in mat:
                p *= multinomial(d, row)
            total += p
        if total != multinomial(k * d, alpha):
            return False
    return True


# ---------------------------------------------------------------------------
# text form
# ---------------------------------------------------------------------------

def _var_names(spaces):
    names = []
    for s in spaces:
        names.extend(f"{s.letter}{i}" for i in range(s.dim))
    return names


def format_monomial(mono, names):
    parts = []
    for e, nm in zip(mono, names):
        if e == 1:
            parts.append(nm)
        elif e > 1:
            parts.append(f"{nm}^{e}")
    return "*".join(parts)


def format_form(f: Form) -> str:
    if not f.terms:
        return "0"
    names = _var_names(f.spaces)
    out = []
    for mono in sorted(f.terms, reverse=True):
        c = canon(f.terms[mono])
        mon = format_monomial(mono, names)
        if isinstance(c, QuadExt):
            cs, neg = f"({format_scalar(c)})", False
        else:
            neg = c < 0
            cs = format_scalar(-c if neg else c)
        if mon:
            body = mon if cs == "1" else f"{cs}*{mon}"
        else:
            body = cs
        if not out:
            out.append(f"-{body}" if neg else body)
        else:
            out.append(f" - {body}" if neg else f" + {body}")
    return "".join(out)


_TOKEN = re.compile(r"\s*(?:(?P<num>\d+(?:/\d+)?)|(?P<var>[xwXuv])(?P<idx>\d+)|(?P<op>[-+*^]))")


def _tokenize(text):
    pos, toks = 0, []
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        if text[pos] == "(":
            depth, end = 0, pos
            while end < len(text):
                depth += {"(": 1, ")": -1}.get(text[end], 0)
                if depth == 0:
                    break
                end += 1
            if depth:
                raise ParseError("unbalanced parenthesis", pos, text)
            toks.append(("paren", text[pos + 1:end], pos))
            pos = end + 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", pos, text)
        if m.group("num") is not None:
            toks.append(("num", m.group("num"), m.start("num")))
        elif m.group("var") is not None:
            toks.append(("var", (m.group("var"), int(m.group("idx"))), m.start("var")))
        else:
            toks.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    return toks


def parse_terms(text: str):
    """Parse to a list of ``(coefficient, {(letter, index): exponent}, position)``."""
    toks = _tokenize(text)
    if not toks:
        raise ParseError("empty polynomial", 0, text)
    i, terms = 0, []

    def expect_int(j):
        if j >= len(toks) or toks[j][0] != "num" or "/" in toks[j][1]:
            p = toks[j][2] if j < len(toks) else len(text)
            raise ParseError("expected an integer exponent", p, text)
        return int(toks[j][1])

    first = True
    while i < len(toks):
        sign = 1
        if toks[i][0] == "op" and toks[i][1] in "+-":
            sign = -1 if toks[i][1] == "-" else 1
            i += 1
        elif not first:
            raise ParseError("expected '+' or '-'", toks[i][2], text)
        first = False
        if i >= len(toks):
            raise ParseError("dangling sign", len(text), text)
        start = toks[i][2]
        coeff, mono, need_factor = 1, {}, True
        while need_factor:
            kind, val, p = toks[i]
            if kind == "num":
                coeff *= Fraction(val)
            elif kind == "paren":
                try:
                    coeff *= parse_scalar(val)
                except (ValueError, ZeroDivisionError) as exc:
                    raise ParseError(f"bad coefficient ({exc})", p, text) from None
            elif kind == "var":
                e = 1
                if i + 1 < len(toks) and toks[i + 1] == ("op", "^", toks[i + 1][2]):
                    e = expect_int(i + 2)
                    i += 2
                mono[val] = mono.get(val, 0) + e
            else:
                raise ParseError(f"unexpected {val!r}", p, text)
            i += 1
            need_factor = i < len(toks) and toks[i][0] == "op" and toks[i][1] == "*"
            if need_factor:
                i += 1
                if i >= len(toks):
                    raise ParseError("dangling '*'", len(text), text)
            elif i < len(toks) and toks[i][0] != "op":
                raise ParseError("missing operator", toks[i][2], text)
        terms.append((canon(coeff * sign), mono, start))
    return terms


def infer_spaces(terms):
    dims = {}
    for _, mono, _ in terms:
        for (letter, idx) in mono:
            kind = LETTER_KIND[letter]
            dims[kind] = max(dims.get(kind, 0), idx + 1)
    return tuple(Space(k, dims[k]) for k in KIND_ORDER if k in dims)


def parse_form(text: str, spaces=None) -> Form:
    """Parse the polynomial text grammar into a homogeneous :class:`Form`."""
    terms = parse_terms(text)
    if spaces is None:
        spaces = infer_spaces(terms)
    spaces = tuple(spaces)
    offs = _offsets(spaces)
    where = {}
    for g, (s, (a, _)) in enumerate(zip(spaces, offs)):
        if s.letter in where:
            raise SpaceMismatch("two groups share a variable letter")
        where[s.letter] = (g, a, s.dim)
    n = offs[-1][1] if offs else 0
    acc, degs = {}, None
    for coeff, mono, pos in terms:
        e = [0] * n
        for (letter, idx), k in mono.items():
            if letter not in where or idx >= where[letter][2]:
                raise ParseError(f"variable {letter}{idx} not in {spaces}", pos, text)
            e[where[letter][1] + idx] += k
        e = tuple(e)
        d = tuple(sum(e[a:b]) for a, b in offs)
        if degs is None:
            degs = d
        elif d != degs:
            raise ParseError(f"inhomogeneous term of degree {d}, expected {degs}", pos, text)
        acc[e] = acc.get(e, 0) + coeff
    return Form(spaces, acc, degs)

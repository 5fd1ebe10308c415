"""Covariant and contravariant expressions, their evaluation, and catalogs.

An expression is a small immutable tree over the input form(s).  Evaluation
is memoized per call, so shared subtrees (``sigma`` appears several times in
the ternary quartic chain) are computed once.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .errors import (DegreeMismatch, NotIndependent, SearchExhausted, SpaceMismatch)
from .fields import content, field_div
from .linalg import Matrix, det, rank
from .poly import Form, apolar_pair, group_monomials
from .transvectants import (omega_transvect3, restrict_to_line, tau,
                            transvect_levels)

COV, CONTRA = "covariant", "contravariant"


@dataclass(frozen=True, eq=True)
class Cov:
    """Node of a covariant expression tree.

    ``op`` is one of ``input``, ``transvect``, ``omega``, ``pair``,
    ``product``, ``power``, ``restrict``, ``tau``.  ``params`` holds the
    integer data of the node (levels, exponent, input index) and ``template``
    the binary template used by ``restrict``.
    """

    op: str
    args: tuple = ()
    params: tuple = ()
    template: "Cov | None" = None
    name: str | None = field(default=None, compare=False)

    # -- builders --------------------------------------------------------

    def named(self, name):
        return Cov(self.op, self.args, self.params, self.template, name)

    def __mul__(self, other):
        return Cov("product", (self, other))

    def __pow__(self, k):
        return Cov("power", (self,), (k,))

    def __str__(self):
        if self.name:
            return self.name
        if self.op == "input":
            return "f" if self.params[0] == 0 else f"f{self.params[0]}"
        if self.op == "transvect":
            lv = self.params
            lvl = ",".join(str(x) for x in lv) if len(set(lv)) > 1 else str(lv[0])
            return f"({self.args[0]},{self.args[1]})_{lvl}"
        if self.op == "omega":
            a, b, c = self.args
            return f"({a},{b},{c})_{self.params[0]}"
        if self.op == "pair":
            return f"D({self.args[0]},{self.args[1]})"
        if self.op == "product":
            return f"{self.args[0]}*{self.args[1]}"
        if self.op == "power":
            return f"{self.args[0]}^{self.params[0]}"
        if self.op == "restrict":
            return f"{self.args[0]}'[{self.template}]"
        if self.op == "tau":
            return f"tau({self.args[0]})"
        return self.op

    __repr__ = __str__


def inp(index=0, name=None):
    return Cov("input", (), (index,), name=name)


def tr(a: Cov, b: Cov, *levels, name=None):
    """Transvectant; one level per binary group (a single level is broadcast later)."""
    return Cov("transvect", (a, b), tuple(levels), name=name)


def omega(a: Cov, b: Cov, c: Cov, l: int, name=None):
    return Cov("omega", (a, b, c), (l,), name=name)


def pair(a: Cov, b: Cov, name=None):
    return Cov("pair", (a, b), name=name)


def restrict(a: Cov, template: Cov, name=None):
    return Cov("restrict", (a,), (), template, name=name)


def tau_of(a: Cov, name=None):
    return Cov("tau", (a,), name=name)


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------

def _positive_content_normalize(form: Form) -> Form:
    c = content(form.terms.values()) if form.terms else 0
    if not c or c == 1:
        return form
    return form.scale(Fraction(1) / c)


class Evaluator:
    """Evaluate expressions at fixed inputs with memoization.

    With ``normalize=True`` every intermediate value is divided by its
    positive rational content.  This changes values only by positive
    scalars, keeps coefficients small, and leaves the primitive form of every
    final value unchanged.
    """

    def __init__(self, inputs: Sequence[Form], normalize: bool = False):
        self.inputs = tuple(inputs)
        self.normalize = normalize
        self.cache: dict = {}

    def __call__(self, expr: Cov) -> Form:
        return self.eval(expr)

    def eval(self, expr: Cov) -> Form:
        hit = self.cache.get(expr)
        if hit is not None:
            return hit
        val = self._eval(expr)
        if self.normalize:
            val = _positive_content_normalize(val)
        self.cache[expr] = val
        return val

    def _eval(self, e: Cov) -> Form:
        op = e.op
        if op == "input":
            try:
                return self.inputs[e.params[0]]
            except IndexError:
                raise DegreeMismatch(f"expression needs input {e.params[0]}") from None
        if op == "transvect":
            a, b = (self.eval(x) for x in e.args)
            levels = e.params
            if len(levels) == 1 and len(a.spaces) > 1:
                levels = levels + (0,) * (len(a.spaces) - 1)
            return transvect_levels(a, b, levels)
        if op == "omega":
            a, b, c = (self.eval(x) for x in e.args)
            return omega_transvect3(a, b, c, e.params[0])
        if op == "pair":
            a, b = (self.eval(x) for x in e.args)
            return apolar_pair(a, b)
        if op == "product":
            a, b = (self.eval(x) for x in e.args)
            return a * b
        if op == "power":
            return self.eval(e.args[0]) ** e.params[0]
        if op == "tau":
            return tau(self.eval(e.args[0]))
        if op == "restrict":
            A = self.eval(e.args[0])
            G = restrict_to_line(A)
            sub = Evaluator([G], normalize=False)
            T = sub.eval(e.template)
            if T.degrees[0] != 0:
                raise DegreeMismatch("restriction template must have order 0 in the pencil")
            T = T.drop_group(0)
            t = T.degrees[0] // A.degrees[0]
            return T.divide_variable_power(2, t * A.degrees[0] // 2)
        raise ValueError(f"unknown node {op!r}")


def evaluate(expr: Cov, f, normalize: bool = False) -> Form:
    """Evaluate ``expr`` at a form (or tuple of forms for multi-input expressions)."""
    inputs = f if isinstance(f, (tuple, list)) else (f,)
    return Evaluator(inputs, normalize)(expr)


def evaluate_family(exprs, f, normalize=True, primitive=True):
    """Evaluate several expressions sharing one cache.

    With ``primitive`` each result is divided by its positive content, which
    is the normalization used throughout the catalogs.
    """
    inputs = f if isinstance(f, (tuple, list)) else (f,)
    ev = Evaluator(inputs, normalize)
    out = []
    for e in exprs:
        v = ev(e)
        out.append(_positive_content_normalize(v) if primitive else v)
    return out


# ---------------------------------------------------------------------------
# bookkeeping
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Shape:
    """Order (per group), degree (per input) and variance of an expression."""

    order: tuple
    degree: tuple
    variance: str


def shape(expr: Cov, input_orders: Sequence[tuple]) -> Shape:
    """Compute the shape bottom-up from the orders of the inputs."""
    memo = {}
    n_in = len(input_orders)

    def go(e):
        if e in memo:
            return memo[e]
        op = e.op
        if op == "input":
            i = e.params[0]
            deg = tuple(1 if j == i else 0 for j in range(n_in))
            r = Shape(tuple(input_orders[i]), deg, COV)
        elif op in ("transvect", "omega", "pair", "product"):
            parts = [go(a) for a in e.args]
            deg = tuple(sum(x) for x in zip(*(p.degree for p in parts)))
            if op == "transvect":
                lv = e.params
                if len(lv) == 1:
                    lv = lv + (0,) * (len(parts[0].order) - 1)
                order = tuple(a + b - 2 * l for a, b, l in zip(parts[0].order, parts[1].order, lv))
                var = parts[0].variance
            elif op == "omega":
                order = (sum(p.order[0] for p in parts) - 3 * e.params[0],)
                var = parts[0].variance
            elif op == "pair":
                if parts[0].variance == parts[1].variance:
                    raise SpaceMismatch(f"{e}: pairing needs opposite variances")
                order = tuple(b - a for a, b in zip(parts[0].order, parts[1].order))
                var = parts[1].variance
            else:
                order = tuple(a + b for a, b in zip(parts[0].order, parts[1].order))
                var = parts[0].variance
            if min(order) < 0:
                raise DegreeMismatch(f"{e}: negative order {order}")
            r = Shape(order, deg, var)
        elif op == "power":
            p = go(e.args[0])
            k = e.params[0]
            r = Shape(tuple(k * o for o in p.order), tuple(k * d for d in p.degree), p.variance)
        elif op == "tau":
            p = go(e.args[0])
            r = Shape(p.order, p.degree, CONTRA if p.variance == COV else COV)
        elif op == "restrict":
            p = go(e.args[0])
            m = p.order[0]
            ts = shape(e.template, [(m, m)])
            if ts.order[0] != 0:
                raise DegreeMismatch("restriction template must have pencil order 0")
            t = ts.degree[0]
            r = Shape((t * m // 2,), tuple(t * d for d in p.degree),
                      CONTRA if p.variance == COV else COV)
        else:
            raise ValueError(op)
        memo[e] = r
        return r

    return go(expr)


def weight(expr: Cov, input_orders, nvars=None):
    """Weight of a single-input expression on forms in ``nvars`` variables.

    ``(k*degree - order)/nvars`` for covariants, ``(k*degree + order)/nvars``
    for contravariants, with ``k`` the input order.  Returns a Fraction so
    that non-integral weights are visible.
    """
    s = shape(expr, input_orders)
    k = sum(input_orders[0])
    nvars = nvars or 2
    order = sum(s.order)
    sign = -1 if s.variance == COV else 1
    return Fraction(k * s.degree[0] + sign * order, nvars)


# ---------------------------------------------------------------------------
# independence
# ---------------------------------------------------------------------------

def independence_at(family, f=None, normalize=True):
    """Linear independence of a family at ``f``.

    ``family`` is a list of expressions (evaluated at ``f``) or already
    evaluated forms.  Returns ``(independent, det)`` when the family size
    equals the dimension of its target space, else ``(independent, rank)``.
    """
    forms = list(family)
    if forms and isinstance(forms[0], Cov):
        forms = evaluate_family(forms, f, normalize=normalize)
    mons = group_monomials(forms[0].spaces, forms[0].degrees)
    M = Matrix([[g.terms.get(m, 0) for m in mons] for g in forms])
    if M.nrows == M.ncols:
        d = det(M)
        return d != 0, d
    r = rank(M)
    return r == len(forms), r


# ---------------------------------------------------------------------------
# catalogs
# ---------------------------------------------------------------------------

_G = inp(0, "G")
QUARTIC_PENCIL = tr(_G, _G, 4, 0)
CUBIC_PENCIL = tr(tr(_G, _G, 2, 0), _G, 4, 0)


def genus3_chain():
    """The full chain of ternary quartic (contra)variants, keyed by name."""
    F = inp(0, "F")
    H = omega(F, F, F, 2, name="H")
    sigma = restrict(F, QUARTIC_PENCIL, name="sigma")
    psi = restrict(F, CUBIC_PENCIL, name="psi")
    rho = pair(F, psi, name="rho")
    c54 = pair(F, sigma ** 2, name="c5,4")
    C44 = restrict(sigma, QUARTIC_PENCIL, name="C4,4")
    C52 = pair(sigma, H, name="C5,2")
    C85 = omega(F, H, C44, 3, name="C8,5")
    c123 = pair(C85, sigma ** 2, name="c12,3")
    C123 = pair(rho, C85, name="C12,3")
    p0 = pair(C123, sigma, name="p0")
    p1 = pair(C123, c54, name="p1")
    p2 = pair(C52, c123, name="p2")
    return {str(n): n for n in (F, H, sigma, psi, rho, c54, C44, C52, C85, c123, C123,
                                p0, p1, p2)}


GENUS3_SHAPES = {
    # name: (degree, order, variance)
    "H": (3, 6, COV), "sigma": (2, 4, CONTRA), "psi": (3, 6, CONTRA),
    "rho": (4, 2, CONTRA), "c5,4": (5, 4, CONTRA), "C4,4": (4, 4, COV),
    "C5,2": (5, 2, COV), "C8,5": (8, 5, COV), "c12,3": (12, 3, CONTRA),
    "C12,3": (12, 3, COV), "p0": (14, 1, CONTRA), "p1": (17, 1, CONTRA),
    "p2": (17, 1, CONTRA),
}


def genus3_catalog():
    """The three order-1 contravariants of a ternary quartic."""
    c = genus3_chain()
    return [c["p0"], c["p1"], c["p2"]]


def genus4_chain():
    f = inp(0, "f")
    h = tr(f, f, 2, 2, name="h")
    j = tr(f, f, 1, 1, name="j")
    c31 = tr(h, f, 2, 2, name="c31")
    c33_1 = tr(j, f, 2, 2, name="c33,1")
    c33_2 = tr(h, f, 1, 1, name="c33,2")
    c42_1 = tr(h, h, 1, 1, name="c42,1")
    c42_2 = tr(c31, f, 1, 1, name="c42,2")
    c42_3 = tr(c33_2, f, 2, 2, name="c42,3")
    c44_1 = tr(c33_2, f, 1, 1, name="c44,1")
    c44_2 = tr(tr(j, f, 1, 1), f, 2, 2, name="c44,2")
    c51_1 = tr(c42_2, f, 2, 2, name="c51,1")
    c51_2 = tr(c44_1, f, 3, 3, name="c51,2")
    c51_3 = tr(c44_2, f, 3, 3, name="c51,3")
    return {str(n): n for n in (f, h, j, c31, c33_1, c33_2, c42_1, c42_2, c42_3,
                                c44_1, c44_2, c51_1, c51_2, c51_3)}


GENUS4_SHAPES = {
    "h": (2, (2, 2)), "j": (2, (4, 4)), "c31": (3, (1, 1)), "c33,1": (3, (3, 3)),
    "c33,2": (3, (3, 3)), "c42,1": (4, (2, 2)), "c42,2": (4, (2, 2)),
    "c42,3": (4, (2, 2)), "c44,1": (4, (4, 4)), "c44,2": (4, (4, 4)),
    "c51,1": (5, (1, 1)), "c51,2": (5, (1, 1)), "c51,3": (5, (1, 1)),
}


def genus4_catalog():
    """The four bi-order (1, 1) covariants of a bicubic form."""
    c = genus4_chain()
    return [c["c31"], c["c51,1"], c["c51,2"], c["c51,3"]]


def sum64_catalog():
    """Three order-2 covariants of a pair (sextic, quartic)."""
    f6, f4 = inp(0, "f6"), inp(1, "f4")
    q0 = tr(f6, f4, 4, name="(f6,f4)_4")
    q1 = tr(f6, f4 ** 2, 6, name="(f6,f4^2)_6")
    q2 = tr(f6 ** 2, f4 ** 3, 11, name="(f6^2,f4^3)_11")
    return [q0, q1, q2]


# ---------------------------------------------------------------------------
# search for binary covariants of a given order
# ---------------------------------------------------------------------------

@dataclass
class _Candidate:
    expr: Cov
    value: Form
    depth: int


def _proportional(a: Form, b: Form) -> bool:
    if a.degrees != b.degrees or set(a.terms) != set(b.terms):
        return False
    m = next(iter(a.terms))
    r = field_div(b.terms[m], a.terms[m])
    return all(b.terms[k] == r * c for k, c in a.terms.items())


def search_binary_covariants(f: Form, target_order: int, count: int, max_depth: int = 4,
                             max_order: int | None = None, max_pool: int = 60):
    """Find ``count`` covariants of ``target_order`` linearly independent at ``f``.

    Enumerates transvectant compositions generation by generation (depth
    bounded by ``max_depth``, intermediate orders by ``max_order``, default
    twice the degree).  Candidates vanishing at ``f`` or proportional at
    ``f`` to an earlier one are pruned.  The enumeration order is fixed, so
    the result is deterministic.
    """
    if len(f.spaces) != 1 or f.spaces[0].dim != 2:
        raise SpaceMismatch("search_binary_covariants expects a binary form")
    k = f.degrees[0]
    if not f.terms:
        raise SearchExhausted("the zero form has no nonzero covariants", bound=max_depth)
    max_order = max_order if max_order is not None else 2 * k
    base = inp(0, "f")
    ev = Evaluator([f], normalize=True)
    pool = [_Candidate(base, ev(base), 0)]
    found = []
    found_vals = []
    seen_any_target = False

    def consider(expr, depth):
        nonlocal seen_any_target
        val = ev(expr)
        if not val.terms:
            return None
        o = val.degrees[0]
        for c in pool:
            if c.value.degrees[0] == o and _proportional(c.value, val):
                return None
        for v in found_vals:
            if o == target_order and _proportional(v, val):
                return None
        if o == target_order:
            seen_any_target = True
            trial = found_vals + [val]
            if independence_at(trial)[0] if len(trial) == target_order + 1 \
                    else rank(Matrix([t.coeffs() for t in trial])) == len(trial):
                found.append(expr)
                found_vals.append(val)
        return _Candidate(expr, val, depth)

    for depth in range(1, max_depth + 1):
        new = []
        snapshot = list(pool)
        for i, a in enumerate(snapshot):
            for b in snapshot[i:]:
                if a.depth + 1 < depth and b.depth + 1 < depth:
                    continue  # already combined in an earlier generation
                oa, ob = a.value.degrees[0], b.value.degrees[0]
                for l in range(min(oa, ob), 0, -1):
                    if a is b and l % 2:
                        continue
                    o = oa + ob - 2 * l
                    if o > max_order:
                        break
                    expr = tr(a.expr, b.expr, l)
                    cand = consider(expr, depth)
                    if len(found) == count:
                        return found
                    if cand is not None and o > 0:
                        new.append(cand)
        pool.extend(new[:max_pool])
    if not seen_any_target:
        raise SearchExhausted(f"no covariant of order {target_order} within depth {max_depth}",
                              bound=max_depth)
    raise NotIndependent(f"only {len(found)} independent covariants of order {target_order} "
                         f"at this form")


def search_order1_binary(f: Form, max_depth: int = 4):
    """Two order-1 covariants of an odd binary form, independent at ``f``."""
    k = f.degrees[0]
    if k % 2 == 0 or k < 5:
        raise ValueError("search_order1_binary needs an odd degree >= 5")
    return search_binary_covariants(f, 1, 2, max_depth=max_depth)


def search_order2_binary(f: Form, max_depth: int = 4):
    """Three order-2 covariants of an even binary form, independent at ``f``."""
    k = f.degrees[0]
    if k % 2 or k < 6:
        raise ValueError("search_order2_binary needs an even degree >= 6")
    return search_binary_covariants(f, 2, 3, max_depth=max_depth)

"""End-to-end reconstruction of forms and curves from covariants.

Every pipeline evaluates a family of covariants at the input, lifts the
input through the matching dual forms, re-embeds the result when the
family has order > 1, and certifies the output by comparing invariant
fingerprints.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import lcm
import random

from .covariants import (evaluate_family, genus3_catalog, genus4_catalog, independence_at,
                         search_order1_binary, search_order2_binary, sum64_catalog)
from .errors import (CovreconError, DegenerateConic, DegreeMismatch, MixedFieldError,
                     NotIndependent, NotIndependentAtF, SearchExhausted, SpaceMismatch,
                     Unsupported)
from .fields import ExtensionRecord, PrimeField, canon, content, is_rational
from .fingerprint import Fingerprint, fingerprint, fingerprint_scale
from .poly import BINARY, TERNARY, Form, lift, linear_change, segre_pullback, substitute
from .quadrics import (DEFAULT_HEIGHT_BOUND, apply_linear, parametrize_conic, quadric_matrix,
                       quadric_normal_form, quadric_normal_form_mod_p)
from .linalg import rank
from .recon import (build_lift, multiset_multiplicity, primal_dual_of, product_of,
                    quadric_relations, taylor_constant)
from .transvectants import tau, transvect_levels

NORMALIZATION_LABEL = "content/sign normalization (no lattice minimization)"


@dataclass
class CurveModelG4:
    """A genus-4 model ``{Q = 0, E = 0}`` in ``X0..X3``; ``rank`` is that of ``Q``."""

    Q: Form
    E: Form
    rank: int


@dataclass
class ReconstructionResult:
    kind: str
    output: object
    extension: ExtensionRecord | None
    verified: bool
    fingerprint_in: Fingerprint | None = None
    fingerprint_out: Fingerprint | None = None
    scale: object = None
    covariants: list = field(default_factory=list)
    meta: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------

def normalize_output(f: Form) -> Form:
    """Clear denominators, divide by the content and make the leading coefficient positive.

    Forms with irrational coefficients are made monic instead.
    """
    if not f.terms:
        return f
    lead = f.terms[max(f.terms)]
    if not all(is_rational(c) for c in f.terms.values()):
        return f.scale(1 / lead)
    c = content(f.terms.values())
    g = f.scale(Fraction(1) / c)
    if lead < 0:
        g = -g
    den = lcm(*(Fraction(v).denominator for v in g.terms.values()))
    return g.scale(den) if den != 1 else g


def _certify(fp_in, obj_out):
    fp_out = fingerprint(obj_out, fp_in.battery)
    lam = fingerprint_scale(fp_in, fp_out)
    return lam is not None, fp_out, lam


def _require_binary(f, parity, kmin):
    if f.spaces != BINARY:
        raise SpaceMismatch(f"expected a binary form, got spaces {f.spaces}")
    k = f.degrees[0]
    if k < kmin or k % 2 != parity:
        raise DegreeMismatch(f"degree {k} is not {'odd' if parity else 'even'} and >= {kmin}")
    return k


def _search(fn, f, what):
    try:
        return fn(f)
    except (SearchExhausted, NotIndependent) as exc:
        raise NotIndependentAtF(f"no independent family of {what} at this form: {exc}",
                                family=what, delta=0) from exc


def _check_independent(forms, what):
    ok, delta = independence_at(forms)
    if not ok:
        raise NotIndependentAtF(f"{what} are linearly dependent at this input",
                                family=what, delta=delta)


def _conic_route(inputs, qs, ks, height_bound):
    """Shared path for order-2 binary families.

    ``qs`` are three order-2 covariant values, ``inputs`` the forms to lift
    with lift degrees ``ks``.  Returns the lifts (divided by the Taylor
    constants), the conic and its parametrization.
    """
    _check_independent(qs, "order-2 covariants")
    ps = [tau(q) for q in qs]
    pstar = primal_dual_of(ps, qs)
    lifts = []
    for g, k in zip(inputs, ks):
        L = build_lift(g, ps, k).form
        lifts.append(L.scale(Fraction(1, taylor_constant(k, 2))))
    rel = quadric_relations(ps, pstar)
    if len(rel) != 1:
        raise DegenerateConic(f"expected one conic relation, found {len(rel)}")
    Q = rel[0]
    if rank(quadric_matrix(Q)) != 3:
        raise DegenerateConic("conic relation is degenerate")
    # p*(1, 0) is a rational point of the conic; tried after the small search
    hint = [g.coeff((2, 0)) for g in pstar]
    par = parametrize_conic(Q, height_bound, space=BINARY[0], hints=[hint])
    return lifts, Q, par


# ---------------------------------------------------------------------------
# binary forms
# ---------------------------------------------------------------------------

def reconstruct_binary_odd(f: Form, normalize: bool = True) -> ReconstructionResult:
    """Rebuild an odd-degree binary form from two order-1 covariants.

    The lift through ``tau(q0), tau(q1)`` is itself a binary form in the
    new coordinates, so no re-embedding is needed and the result stays over
    the base field.
    """
    _require_binary(f, 1, 5)
    exprs = _search(search_order1_binary, f, "order-1 covariants")
    qs = evaluate_family(exprs, f)
    _check_independent(qs, "order-1 covariants")
    ps = [tau(q) for q in qs]
    out = build_lift(f, ps).form.relabel(BINARY)
    if normalize:
        out = normalize_output(out)
    fp_in = fingerprint(f)
    ok, fp_out, lam = _certify(fp_in, out)
    return ReconstructionResult("binary-odd", out, None, ok, fp_in, fp_out, lam, qs,
                                {"covariants": [str(e) for e in exprs],
                                 "normalization": NORMALIZATION_LABEL if normalize else "none"})


def reconstruct_binary_even(f: Form, height_bound: int = DEFAULT_HEIGHT_BOUND,
                            normalize: bool = True) -> ReconstructionResult:
    """Rebuild an even-degree binary form through a conic.

    The lift by three order-2 covariants is a form on the plane; the images
    of the covariants satisfy one quadric relation, and a parametrization
    of that conic pulls the lift back to a binary form.
    """
    k = _require_binary(f, 0, 6)
    exprs = _search(search_order2_binary, f, "order-2 covariants")
    qs = evaluate_family(exprs, f)
    (L,), Q, par = _conic_route([f], qs, [k // 2], height_bound)
    out = substitute(L, par.forms)
    if normalize:
        out = normalize_output(out)
    fp_in = fingerprint(f)
    ok, fp_out, lam = _certify(fp_in, out)
    return ReconstructionResult("binary-even", out, par.extension, ok, fp_in, fp_out, lam, qs,
                                {"covariants": [str(e) for e in exprs], "conic": Q,
                                 "lift": L, "point": par.point,
                                 "normalization": NORMALIZATION_LABEL if normalize else "none"})


def _sum64_lifts(f6, f4, height_bound):
    if f6.spaces != BINARY or f4.spaces != BINARY or f6.degrees != (6,) or f4.degrees != (4,):
        raise DegreeMismatch("expected a binary sextic and a binary quartic")
    exprs = sum64_catalog()
    qs = evaluate_family(exprs, (f6, f4))
    (L6, L4), Q, par = _conic_route([f6, f4], qs, [3, 2], height_bound)
    return exprs, qs, L6, L4, Q, par


def reconstruct_sum_6_4(f6: Form, f4: Form,
                        height_bound: int = DEFAULT_HEIGHT_BOUND) -> ReconstructionResult:
    """Rebuild a pair (sextic, quartic) through one shared conic.

    The pair is not rescaled: independent scalings of the two outputs would
    break the weighted equivalence.
    """
    exprs, qs, L6, L4, Q, par = _sum64_lifts(f6, f4, height_bound)
    out = (substitute(L6, par.forms), substitute(L4, par.forms))
    fp_in = fingerprint((f6, f4))
    ok, fp_out, lam = _certify(fp_in, out)
    return ReconstructionResult("sum64", out, par.extension, ok, fp_in, fp_out, lam, qs,
                                {"covariants": [str(e) for e in exprs], "conic": Q,
                                 "lifts": (L6, L4), "point": par.point,
                                 "normalization": "none"})


# ---------------------------------------------------------------------------
# genus 4
# ---------------------------------------------------------------------------

def _pad(f: Form, n: int) -> Form:
    """Reinterpret a form in ``X0..X_{m-1}`` inside ``X0..X_{n-1}``."""
    m = f.spaces[0].dim
    return Form((lift(n),), {e + (0,) * (n - m): c for e, c in f.terms.items()}, f.degrees)


def reconstruct_genus4_rank3(f6: Form, f4: Form,
                             height_bound: int = DEFAULT_HEIGHT_BOUND) -> ReconstructionResult:
    """Model on a quadric cone for the curve ``w^3 + w f4 + f6 = 0``.

    ``Q`` is the conic in ``X0..X2`` and ``E = X3^3 + X3 f4~ + f6~``.  The
    model is certified by pulling ``E`` back along the conic and comparing
    the resulting pair with the input.
    """
    exprs, qs, L6, L4, Q, par = _sum64_lifts(f6, f4, height_bound)
    X3 = Form.var((lift(4),), 0, 3)
    E = X3 ** 3 + X3 * _pad(L4, 4) + _pad(L6, 4)
    model = CurveModelG4(_pad(Q, 4), E, 3)
    g6, g4 = _rank3_pullback(model, par.forms)
    fp_in = fingerprint((f6, f4))
    ok, fp_out, lam = _certify(fp_in, (g6, g4))
    return ReconstructionResult("genus4-rank3", model, par.extension, ok, fp_in, fp_out, lam, qs,
                                {"covariants": [str(e) for e in exprs], "point": par.point,
                                 "normalization": "none"})


def _rank3_pullback(model: CurveModelG4, conic_forms):
    """The pair ``(f6, f4)`` read off ``E`` along a parametrization of the conic."""
    parts = {0: {}, 1: {}}
    for e, c in model.E.terms.items():
        if e[3] in parts:
            parts[e[3]][e[:3]] = c
    L6 = Form((lift(3),), parts[0], (3,))
    L4 = Form((lift(3),), parts[1], (2,))
    return substitute(L6, conic_forms), substitute(L4, conic_forms)


def _bicubic_of(Q: Form, E: Form, height_bound):
    nf = quadric_normal_form(Q, height_bound)
    return segre_pullback(apply_linear(E, nf.T)), nf


def _g4_outputs(qs, f):
    """``Q = sum (qi, qj)_{1,1} Xi Xj`` and ``E = sum (qi qj ql, f)_{3,3} Xi Xj Xl``."""
    n = len(qs)
    sp = (lift(n),)
    qterms = {}
    for i, j in combinations_with_replacement(range(n), 2):
        c = transvect_levels(qs[i], qs[j], (1, 1)).scalar()
        if c:
            e = [0] * n
            e[i] += 1
            e[j] += 1
            qterms[tuple(e)] = c * (1 if i == j else 2)
    eterms = {}
    for idx in combinations_with_replacement(range(n), 3):
        c = transvect_levels(product_of([qs[i] for i in idx]), f, (3, 3)).scalar()
        if c:
            e = [0] * n
            for i in idx:
                e[i] += 1
            eterms[tuple(e)] = c * multiset_multiplicity(idx)
    return Form(sp, qterms, (2,)), Form(sp, eterms, (3,))


def screen_genus4_independence(Q: Form, E: Form, seed: int = 0, nprimes: int = 3,
                               start: int = 1_000_003):
    """Independence of the genus-4 catalog checked modulo a few primes.

    Over a finite field every rank-4 quadric with square discriminant
    splits, so the bicubic pullback always exists there.  Returns a list of
    ``(p, independent mod p)``; empty when no usable prime was found.
    """
    from sympy import nextprime
    rng = random.Random(seed)
    out, p, tried = [], start, 0
    while len(out) < nprimes and tried < 50:
        p = nextprime(p)
        tried += 1
        try:
            Ep = E.map_coeffs(lambda c: PrimeField(c, p))
        except ZeroDivisionError:
            continue
        nf = quadric_normal_form_mod_p(Q, p, rng)
        if nf is None:
            continue
        T, _ = nf
        f = segre_pullback(linear_change(Ep, T))
        qs = evaluate_family(genus4_catalog(), f, normalize=False, primitive=False)
        ok, _ = independence_at(qs)
        out.append((p, ok))
    return out


def reconstruct_genus4_rank4(Q: Form, E: Form, height_bound: int = DEFAULT_HEIGHT_BOUND,
                             normalize: bool = True, seed: int = 0) -> ReconstructionResult:
    """Rebuild a genus-4 model whose quadric has rank 4.

    ``Q`` is brought to ``y0 y3 - y1 y2``, ``E`` is pulled back along the
    Segre map to a bicubic ``f``, and the output is assembled from four
    bi-order (1, 1) covariants of ``f``.  Certification pulls the output
    back again and compares bicubic fingerprints.
    """
    for g, d in ((Q, 2), (E, 3)):
        if len(g.spaces) != 1 or g.spaces[0].dim != 4 or g.degrees != (d,):
            raise DegreeMismatch("expected a quadric and a cubic in four variables")
    Q = Q.relabel((lift(4),))
    E = E.relabel((lift(4),))
    try:
        f, nf = _bicubic_of(Q, E, height_bound)
    except MixedFieldError as exc:
        screen = screen_genus4_independence(Q, E, seed)
        if screen and not any(ok for _, ok in screen):
            raise NotIndependentAtF(
                "bi-order (1,1) covariants are dependent modulo every screening prime "
                f"{[p for p, _ in screen]}", family="bi-order (1,1) covariants",
                delta=0) from exc
        raise Unsupported("the quadric splits only over a biquadratic field; "
                          "exact reconstruction there is not implemented") from exc
    exprs = genus4_catalog()
    qs = evaluate_family(exprs, f)
    _check_independent(qs, "bi-order (1,1) covariants")
    Qo, Eo = _g4_outputs(qs, f)
    if normalize:
        Qo, Eo = normalize_output(Qo), normalize_output(Eo)
    model = CurveModelG4(Qo, Eo, 4)
    fp_in = fingerprint(f)
    # the dual family maps P1 x P1 onto the output quadric; pulling E back
    # along it needs no conic point, unlike a fresh normal form of Qo
    pstar = primal_dual_of([tau(q) for q in qs], qs)
    on_quadric = not substitute(Qo, pstar).terms
    f_out = substitute(Eo, pstar)
    method = "pullback along the dual family"
    ok, fp_out, lam = _certify(fp_in, f_out)
    ok = ok and on_quadric
    return ReconstructionResult("genus4", model, nf.extension, ok, fp_in, fp_out, lam, qs,
                                {"covariants": [str(e) for e in exprs], "bicubic": f,
                                 "certification": method,
                                 "normalization": NORMALIZATION_LABEL if normalize else "none"})


def reconstruct_genus4(Q: Form, E: Form | None = None, f4: Form | None = None,
                       height_bound: int = DEFAULT_HEIGHT_BOUND,
                       seed: int = 0) -> ReconstructionResult:
    """Route to the rank-4 pipeline, or the rank-3 one when given ``(f6, f4)``."""
    if f4 is not None:
        return reconstruct_genus4_rank3(Q, f4, height_bound)
    return reconstruct_genus4_rank4(Q, E, height_bound, seed=seed)


# ---------------------------------------------------------------------------
# genus 3
# ---------------------------------------------------------------------------

def reconstruct_genus3(F: Form, normalize: bool = True, contravariants=None) -> ReconstructionResult:
    """Rebuild a ternary quartic from three order-1 contravariants.

    The lift is directly a ternary quartic, so no re-embedding is needed.
    ``contravariants`` overrides the computed family (used to reproduce a
    known scaling of the family).
    """
    if F.spaces != TERNARY or F.degrees != (4,):
        raise DegreeMismatch("expected a ternary quartic")
    if contravariants is None:
        ps = evaluate_family(genus3_catalog(), F)
    else:
        ps = list(contravariants)
    _check_independent(ps, "order-1 contravariants")
    out = build_lift(F, ps, 4).form.relabel(TERNARY)
    if normalize:
        out = normalize_output(out)
    fp_in = fingerprint(F)
    ok, fp_out, lam = _certify(fp_in, out)
    return ReconstructionResult("genus3", out, None, ok, fp_in, fp_out, lam, ps,
                                {"covariants": ["p0", "p1", "p2"],
                                 "normalization": NORMALIZATION_LABEL if normalize else "none"})


__all__ = ["CurveModelG4", "ReconstructionResult", "normalize_output",
           "reconstruct_binary_odd", "reconstruct_binary_even", "reconstruct_sum_6_4",
           "reconstruct_genus4", "reconstruct_genus4_rank3", "reconstruct_genus4_rank4",
           "reconstruct_genus3", "CovreconError", "canon"]

"""Invariant fingerprints and weighted projective comparison.

A battery is a fixed list of order-0 expressions.  Two inputs are judged
equivalent when their battery values agree up to ``v_j -> lambda^{w_j} v_j``
for a single scalar ``lambda``.  This is a necessary condition for
equivalence, not a proof of it.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
import random

from .covariants import (Evaluator, genus3_chain, genus4_chain, inp, pair, shape, tr)
from .errors import BatteryMismatch, BatteryUndefined
from .fields import canon
from .poly import BIBINARY, BINARY, TERNARY, random_form

REFERENCE_SEED = 20240601


@dataclass(frozen=True)
class Battery:
    ident: str
    exprs: tuple
    weights: tuple
    degrees: tuple
    input_orders: tuple


@dataclass(frozen=True)
class Fingerprint:
    values: tuple
    weights: tuple
    degrees: tuple
    battery: str

    def entries(self):
        return list(zip(self.values, self.weights, self.degrees))


# ---------------------------------------------------------------------------
# batteries
# ---------------------------------------------------------------------------

_SPAN_PRIME = 2305843009213693951


def _residue(x, p=_SPAN_PRIME):
    x = Fraction(x)
    return x.numerator * pow(x.denominator, -1, p) % p


class _Span:
    """Incremental echelon basis mod a large prime.

    A vector independent mod ``p`` is independent over Q, so pruning by this
    test never keeps a redundant entry; it can at worst drop a useful one.
    """

    def __init__(self):
        self.rows = {}  # pivot -> reduced row

    def add(self, vec) -> bool:
        p = _SPAN_PRIME
        v = [_residue(x) for x in vec]
        for piv, row in self.rows.items():
            if v[piv]:
                c = v[piv]
                v = [(a - c * b) % p for a, b in zip(v, row)]
        piv = next((i for i, a in enumerate(v) if a), None)
        if piv is None:
            return False
        inv = pow(v[piv], -1, p)
        v = [a * inv % p for a in v]
        for q, row in self.rows.items():
            if row[piv]:
                c = row[piv]
                self.rows[q] = [(a - c * b) % p for a, b in zip(row, v)]
        self.rows[piv] = v
        return True


def _bfs_battery(input_degrees, size, max_depth, max_degree, nrefs=8, max_order=None):
    """Order-0 transvectant compositions of binary inputs found by a fixed BFS.

    Candidates are evaluated at seeded reference inputs.  A candidate is kept
    only if its values are linearly independent of those already kept with
    the same order and multidegree.  The search order is fixed, so the
    battery is deterministic.
    """
    rng = random.Random(REFERENCE_SEED + 97 * sum(input_degrees) + len(input_degrees))
    refs = [tuple(random_form(BINARY, (k,), rng, -9, 9) for k in input_degrees)
            for _ in range(nrefs)]
    evals = [Evaluator(r) for r in refs]
    orders = [(k,) for k in input_degrees]
    leaves = [inp(i, "f" if len(input_degrees) == 1 else f"f{k}")
              for i, k in enumerate(input_degrees)]
    pool = [(e, 0) for e in leaves]
    spans = {}

    def fresh(e, s):
        key = (s.order, s.degree)
        vec = []
        for ev in evals:
            vec.extend(ev(e).coeffs())
        return spans.setdefault(key, _Span()).add(vec)

    for e in leaves:
        fresh(e, shape(e, orders))
    found = []
    max_order = max_order or 2 * max(input_degrees)
    for depth in range(1, max_depth + 1):
        snapshot = list(pool)
        new = []
        for i, (a, da) in enumerate(snapshot):
            for b, db in snapshot[i:]:
                if max(da, db) + 1 != depth:
                    continue
                sa, sb = shape(a, orders), shape(b, orders)
                if sum(sa.degree) + sum(sb.degree) > max_degree:
                    continue
                oa, ob = sa.order[0], sb.order[0]
                for l in range(min(oa, ob), 0, -1):
                    if a == b and l % 2:
                        continue
                    o = oa + ob - 2 * l
                    if o > max_order:
                        break
                    e = tr(a, b, l)
                    if not fresh(e, shape(e, orders)):
                        continue
                    if o == 0:
                        found.append(e)
                        if len(found) == size:
                            return found
                    else:
                        new.append((e, depth))
        pool.extend(new)
    return found


def _weights_binary(exprs, input_degrees):
    orders = [(k,) for k in input_degrees]
    weights, degrees = [], []
    for e in exprs:
        s = shape(e, orders)
        w = Fraction(sum(k * d for k, d in zip(input_degrees, s.degree)), 2)
        weights.append(w)
        degrees.append(sum(s.degree))
    if any(w.denominator != 1 for w in weights):
        weights = [2 * w for w in weights]
    return tuple(int(w) for w in weights), tuple(degrees)


@lru_cache(maxsize=None)
def binary_battery(k: int) -> Battery:
    """Battery for binary forms of degree ``k``."""
    if k < 2:
        raise BatteryUndefined(f"no battery for binary forms of degree {k}")
    exprs = tuple(_bfs_battery((k,), size=12, max_depth=5, max_degree=16, nrefs=6,
                               max_order=k))
    if not exprs:
        raise BatteryUndefined(f"no invariants found for degree {k}")
    w, d = _weights_binary(exprs, (k,))
    return Battery(f"binary-{k}", exprs, w, d, ((k,),))


@lru_cache(maxsize=None)
def sum64_battery() -> Battery:
    """Battery for pairs (sextic, quartic)."""
    exprs = tuple(_bfs_battery((6, 4), size=14, max_depth=3, max_degree=6, nrefs=6,
                               max_order=6))
    w, d = _weights_binary(exprs, (6, 4))
    return Battery("sum-6-4", exprs, w, d, ((6,), (4,)))


@lru_cache(maxsize=None)
def ternary_quartic_battery() -> Battery:
    c = genus3_chain()
    F, H, sig, psi, rho = c["F"], c["H"], c["sigma"], c["psi"], c["rho"]
    c54, C44, C52 = c["c5,4"], c["C4,4"], c["C5,2"]
    exprs = (pair(sig, F), pair(psi, H), pair(sig, C44), pair(c54, F), pair(rho, C52),
             pair(c54, C44), pair(sig * rho, H), pair(rho ** 2, C44))
    degrees = tuple(shape(e, [(4,)]).degree[0] for e in exprs)
    weights = tuple(4 * d // 3 for d in degrees)
    return Battery("ternary-4", exprs, weights, degrees, ((4,),))


@lru_cache(maxsize=None)
def bicubic_battery() -> Battery:
    c = genus4_chain()
    f, h, j = c["f"], c["h"], c["j"]
    c31, c33_1, c33_2 = c["c31"], c["c33,1"], c["c33,2"]
    c42 = [c["c42,1"], c["c42,2"], c["c42,3"]]
    c44_1 = c["c44,1"]
    c51 = [c["c51,1"], c["c51,2"], c["c51,3"]]
    exprs = [tr(h, h, 2, 2), tr(j, j, 4, 4), tr(f, c33_1, 3, 3), tr(f, c33_2, 3, 3),
             tr(c31, c31, 1, 1), tr(c44_1, j, 4, 4),
             tr(c42[0], c42[0], 2, 2), tr(c42[1], c42[1], 2, 2), tr(c42[0], c42[2], 2, 2)]
    exprs += [tr(c31, c, 1, 1) for c in c51]
    exprs += [tr(c51[0], c51[1], 1, 1), tr(c51[1], c51[2], 1, 1)]
    exprs = tuple(exprs)
    degrees = tuple(shape(e, [(3, 3)]).degree[0] for e in exprs)
    weights = tuple(3 * d // 2 for d in degrees)
    return Battery("bicubic-3-3", exprs, weights, degrees, ((3, 3),))


def battery_for(f) -> Battery:
    """Pick the battery matching the shape of the input."""
    if isinstance(f, (tuple, list)):
        degs = tuple(g.degrees for g in f)
        if degs == ((6,), (4,)) and all(g.spaces == BINARY for g in f):
            return sum64_battery()
        raise BatteryUndefined(f"no battery for inputs of degrees {degs}")
    if f.spaces == BINARY:
        return binary_battery(f.degrees[0])
    if f.spaces == TERNARY and f.degrees == (4,):
        return ternary_quartic_battery()
    if f.spaces == BIBINARY and f.degrees == (3, 3):
        return bicubic_battery()
    raise BatteryUndefined(f"no battery for forms over {f.spaces} of degree {f.degrees}")


BATTERIES = {
    "ternary-4": ternary_quartic_battery,
    "bicubic-3-3": bicubic_battery,
    "sum-6-4": sum64_battery,
}


def get_battery(ident: str) -> Battery:
    if ident in BATTERIES:
        return BATTERIES[ident]()
    if ident.startswith("binary-"):
        try:
            return binary_battery(int(ident.split("-", 1)[1]))
        except ValueError:
            pass
    raise BatteryUndefined(f"unknown battery {ident!r}")


def fingerprint(f, battery: Battery | str | None = None) -> Fingerprint:
    """Exact battery values of ``f`` (a form, or a pair for the sum battery)."""
    if battery is None:
        battery = battery_for(f)
    elif isinstance(battery, str):
        battery = get_battery(battery)
    inputs = tuple(f) if isinstance(f, (tuple, list)) else (f,)
    orders = tuple(g.degrees for g in inputs)
    if orders != battery.input_orders:
        raise BatteryUndefined(f"battery {battery.ident} does not apply to degrees {orders}")
    ev = Evaluator(inputs, normalize=False)
    values = tuple(ev(e).scalar() for e in battery.exprs)
    return Fingerprint(values, battery.weights, battery.degrees, battery.ident)


# ---------------------------------------------------------------------------
# comparison
# ---------------------------------------------------------------------------

def _bezout(ws):
    """Integers ``a`` with ``sum a_i w_i = gcd(w)``."""
    g, coeffs = ws[0], [1] + [0] * (len(ws) - 1)
    for i in range(1, len(ws)):
        # extended Euclid on (g, ws[i])
        old_r, r = g, ws[i]
        old_s, s = 1, 0
        old_t, t = 0, 1
        while r:
            q = old_r // r
            old_r, r = r, old_r - q * r
            old_s, s = s, old_s - q * s
            old_t, t = t, old_t - q * t
        coeffs = [c * old_s for c in coeffs]
        coeffs[i] = old_t
        g = old_r
    return g, coeffs


def fingerprint_scale(F1: Fingerprint, F2: Fingerprint):
    """The scalar ``lambda`` with ``F2_j = lambda^{w_j/g} F1_j`` (``g`` the weight gcd).

    Returns ``None`` when no such scalar exists or the zero patterns differ.
    """
    if F1.battery != F2.battery or F1.weights != F2.weights:
        raise BatteryMismatch(f"{F1.battery} vs {F2.battery}")
    nz = [j for j, v in enumerate(F1.values) if v != 0]
    if nz != [j for j, v in enumerate(F2.values) if v != 0]:
        return None
    if not nz:
        return 1
    ws = [F1.weights[j] for j in nz]
    g = 0
    for w in ws:
        g = gcd(g, w)
    ws = [w // g for w in ws]
    ratios = [F2.values[j] * _inv(F1.values[j]) for j in nz]
    _, a = _bezout(ws)
    lam = 1
    for r, e in zip(ratios, a):
        if e:
            lam = lam * _pow(r, e)
    lam = canon(lam)
    for r, w in zip(ratios, ws):
        if canon(_pow(lam, w)) != canon(r):
            return None
    return lam


def _inv(x):
    return Fraction(1, x) if isinstance(x, int) else 1 / x


def _pow(x, e):
    if e < 0:
        return _pow(_inv(x), -e)
    if isinstance(x, int):
        return x ** e
    return x ** e


def fingerprint_equal(F1: Fingerprint, F2: Fingerprint) -> bool:
    """Weighted projective equality of two fingerprints from the same battery."""
    return fingerprint_scale(F1, F2) is not None

import random
from fractions import Fraction

import pytest

from covrecon.errors import BatteryMismatch, BatteryUndefined
from covrecon.fingerprint import (_bezout, binary_battery, bicubic_battery, fingerprint,
                                  fingerprint_equal, fingerprint_scale, get_battery,
                                  sum64_battery, ternary_quartic_battery)
from covrecon.poly import BIBINARY, BINARY, TERNARY, Form, linear_change, parse_form, random_form


@pytest.mark.parametrize("k", [5, 6])
def test_identical_fingerprints(k):
    f = random_form(BINARY, (k,), random.Random(k))
    F = fingerprint(f)
    assert fingerprint_scale(F, F) == 1


@pytest.mark.parametrize("k", [5, 6, 7])
def test_det_one_change_is_identical(k):
    f = random_form(BINARY, (k,), random.Random(10 + k))
    g = linear_change(f, [[2, 0], [0, Fraction(1, 2)]])
    assert fingerprint(f) == fingerprint(g)
    g = linear_change(f, [[2, 3], [1, 2]])
    assert fingerprint(f) == fingerprint(g)


@pytest.mark.parametrize("k", [5, 6])
def test_general_change_is_equal(k):
    f = random_form(BINARY, (k,), random.Random(20 + k))
    g = linear_change(f, [[1, 2], [3, -1]]).scale(Fraction(3, 7))
    assert fingerprint_equal(fingerprint(f), fingerprint(g))


@pytest.mark.parametrize("k", [5, 6])
def test_perturbation_detected(k):
    rng = random.Random(30 + k)
    for _ in range(5):
        f = random_form(BINARY, (k,), rng)
        g = f + Form(BINARY, {(k, 0): 1}, (k,))
        assert not fingerprint_equal(fingerprint(f), fingerprint(g))


def test_scaling_by_constant():
    f = random_form(BINARY, (6,), random.Random(1))
    F, G = fingerprint(f), fingerprint(f.scale(2))
    for v, w, d in zip(F.values, G.values, F.degrees):
        assert w == v * 2 ** d
    assert fingerprint_equal(F, G)


def test_ternary_and_bicubic():
    rng = random.Random(4)
    F = random_form(TERNARY, (4,), rng, -5, 5)
    A = [[1, 2, 0], [0, 1, -1], [1, 0, 1]]
    assert fingerprint_equal(fingerprint(F), fingerprint(linear_change(F, A).scale(5)))
    assert not fingerprint_equal(fingerprint(F),
                                 fingerprint(F + Form(TERNARY, {(4, 0, 0): 1}, (4,))))
    f = random_form(BIBINARY, (3, 3), rng, -4, 4)
    g = linear_change(linear_change(f, [[1, 1], [0, 1]], 0), [[2, 1], [1, 1]], 1)
    assert fingerprint_equal(fingerprint(f), fingerprint(g))


def test_sum64_pair():
    rng = random.Random(6)
    f6, f4 = random_form(BINARY, (6,), rng), random_form(BINARY, (4,), rng)
    A = [[1, -1], [2, 1]]
    assert fingerprint_equal(fingerprint((f6, f4)),
                             fingerprint((linear_change(f6, A), linear_change(f4, A))))
    # the two forms must be transformed by the same matrix
    assert not fingerprint_equal(fingerprint((f6, f4)),
                                 fingerprint((linear_change(f6, A), f4)))


def test_battery_sizes_and_determinism():
    for b in (binary_battery(5), binary_battery(6), sum64_battery(),
              ternary_quartic_battery(), bicubic_battery()):
        assert 8 <= len(b.exprs) <= 15
        assert len(b.weights) == len(b.degrees) == len(b.exprs)
    assert get_battery("binary-6") is binary_battery(6)
    assert binary_battery(6).degrees[0] == 2


def test_battery_errors():
    with pytest.raises(BatteryUndefined):
        get_battery("nonsense")
    with pytest.raises(BatteryUndefined):
        fingerprint(parse_form("x0 + x1", BINARY))
    f5 = random_form(BINARY, (5,), random.Random(0))
    f6 = random_form(BINARY, (6,), random.Random(0))
    with pytest.raises(BatteryMismatch):
        fingerprint_scale(fingerprint(f5), fingerprint(f6))
    with pytest.raises(BatteryUndefined):
        fingerprint(f5, "binary-6")


def test_zero_pattern_mismatch():
    F = fingerprint(random_form(BINARY, (6,), random.Random(8)))
    zeroed = F.__class__((0,) + F.values[1:], F.weights, F.degrees, F.battery)
    assert fingerprint_scale(F, zeroed) is None


def test_bezout():
    for ws in ([4, 6], [6, 10, 15], [3], [12, 18, 8]):
        g, a = _bezout(ws)
        assert sum(x * y for x, y in zip(a, ws)) == g

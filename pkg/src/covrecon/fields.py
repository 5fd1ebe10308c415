"""Exact scalars: rationals, quadratic extensions Q(sqrt m) and prime fields.

Rationals are plain :class:`fractions.Fraction` (and ``int`` where the
denominator is one); :func:`canon` is the single normalization point.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, isqrt
import re

from sympy import factorint

from .errors import MixedFieldError

Rational = Fraction

# 2**61 - 1, a Mersenne prime; default modulus for probabilistic screens.
DEFAULT_PRIME = 2305843009213693951
DEFAULT_SEED = 0


def canon(x):
    """Return the canonical representative of an exact scalar."""
    if type(x) is int:
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, QuadExt):
        return canon(x.a) if x.b == 0 else x
    if isinstance(x, bool):
        return int(x)
    return x


def as_rational(x):
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, QuadExt) and x.b == 0:
        return Fraction(x.a)
    raise TypeError(f"{x!r} is not rational")


def is_rational(x):
    return isinstance(x, (int, Fraction)) or (isinstance(x, QuadExt) and x.b == 0)


# ---------------------------------------------------------------------------
# square-free parts
# ---------------------------------------------------------------------------

@lru_cache(maxsize=4096)
def squarefree_decomposition(n: int):
    """Write ``n = s * k**2`` with ``s`` square-free (sign kept in ``s``)."""
    if n == 0:
        raise ValueError("0 has no square-free decomposition")
    sign = -1 if n < 0 else 1
    n = abs(n)
    r = isqrt(n)
    if r * r == n:
        return sign, r
    s, k = 1, 1
    for p, e in factorint(n).items():
        k *= p ** (e // 2)
        if e % 2:
            s *= p
    return sign * s, k


def is_square(q) -> bool:
    q = as_rational(q)
    if q < 0:
        return False
    return isqrt(q.numerator) ** 2 == q.numerator and isqrt(q.denominator) ** 2 == q.denominator


def rational_sqrt(q):
    """Exact square root of a rational square, else ``None``."""
    q = as_rational(q)
    if q < 0:
        return None
    a, b = isqrt(q.numerator), isqrt(q.denominator)
    if a * a == q.numerator and b * b == q.denominator:
        return canon(Fraction(a, b))
    return None


# ---------------------------------------------------------------------------
# Q(sqrt m)
# ---------------------------------------------------------------------------

class QuadExt:
    """Element ``a + b*sqrt(m)`` of Q(sqrt m), ``m`` square-free and not 1."""

    __slots__ = ("a", "b", "m")

    def __init__(self, a, b, m: int):
        if m in (0, 1):
            raise ValueError("radicand must be square-free and different from 0, 1")
        self.a = canon(Fraction(a)) if not isinstance(a, int) else a
        self.b = canon(Fraction(b)) if not isinstance(b, int) else b
        self.m = m

    @classmethod
    def sqrt(cls, m: int):
        return cls(0, 1, m)

    def _coerce(self, other):
        if isinstance(other, QuadExt):
            if other.m != self.m:
                raise MixedFieldError(f"cannot mix Q(sqrt {self.m}) and Q(sqrt {other.m})")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadExt(other, 0, self.m)
        if isinstance(other, PrimeField):
            raise MixedFieldError("cannot mix a quadratic extension with a prime field")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return canon(QuadExt(self.a + o.a, self.b + o.b, self.m))

    __radd__ = __add__

    def __neg__(self):
        return QuadExt(-self.a, -self.b, self.m)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return canon(QuadExt(self.a - o.a, self.b - o.b, self.m))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return canon(QuadExt(self.a * other, self.b * other, self.m))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return canon(QuadExt(self.a * o.a + self.m * self.b * o.b,
                             self.a * o.b + self.b * o.a, self.m))

    __rmul__ = __mul__

    def norm(self):
        return canon(Fraction(self.a) ** 2 - self.m * Fraction(self.b) ** 2)

    def conjugate(self):
        return canon(QuadExt(self.a, -self.b, self.m))

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(sqrt m)")
        return canon(QuadExt(Fraction(self.a) / n, -Fraction(self.b) / n, self.m))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division by zero")
            return canon(QuadExt(Fraction(self.a) / other, Fraction(self.b) / other, self.m))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result, base = 1, self
        while e:
            if e & 1:
                result = base * result
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, QuadExt):
            return (self.a, self.b, self.m) == (other.a, other.b, other.m) or (
                self.b == 0 and other.b == 0 and self.a == other.a)
        if isinstance(other, (int, Fraction)):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.m))

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __repr__(self):
        return f"QuadExt({self.a}, {self.b}, {self.m})"

    def __str__(self):
        return format_scalar(self)


# ---------------------------------------------------------------------------
# prime fields
# ---------------------------------------------------------------------------

class PrimeField:
    """Element of F_p, used only for randomized screening."""

    __slots__ = ("value", "modulus")

    def __init__(self, value, modulus: int = DEFAULT_PRIME):
        if isinstance(value, Fraction):
            den = value.denominator % modulus
            if den == 0:
                raise ZeroDivisionError(f"denominator divisible by {modulus}")
            value = value.numerator * pow(den, -1, modulus)
        self.value = value % modulus
        self.modulus = modulus

    def _coerce(self, other):
        if isinstance(other, PrimeField):
            if other.modulus != self.modulus:
                raise MixedFieldError(f"cannot mix F_{self.modulus} and F_{other.modulus}")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return PrimeField(other, self.modulus).value
        if isinstance(other, QuadExt):
            raise MixedFieldError("cannot mix a prime field with a quadratic extension")
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else PrimeField(self.value + o, self.modulus)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else PrimeField(self.value - o, self.modulus)

    def __rsub__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else PrimeField(o - self.value, self.modulus)

    def __neg__(self):
        return PrimeField(-self.value, self.modulus)

    def __mul__(self, other):
        o = self._coerce(other)
        return o if o is NotImplemented else PrimeField(self.value * o, self.modulus)

    __rmul__ = __mul__

    def inverse(self):
        if self.value == 0:
            raise ZeroDivisionError(f"inverse of 0 in F_{self.modulus}")
        return PrimeField(pow(self.value, -1, self.modulus), self.modulus)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * PrimeField(o, self.modulus).inverse()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return PrimeField(o, self.modulus) * self.inverse()

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        return PrimeField(pow(self.value, e, self.modulus), self.modulus)

    def __eq__(self, other):
        if isinstance(other, PrimeField):
            return self.modulus == other.modulus and self.value == other.value
        if isinstance(other, int):
            return (other - self.value) % self.modulus == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.modulus))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"PrimeField({self.value}, {self.modulus})"

    def __str__(self):
        return str(self.value)


def reduce_mod(x, p: int = DEFAULT_PRIME) -> PrimeField:
    if isinstance(x, PrimeField):
        if x.modulus != p:
            raise MixedFieldError("already reduced modulo a different prime")
        return x
    if isinstance(x, QuadExt):
        raise MixedFieldError("cannot reduce a quadratic-extension element")
    return PrimeField(x, p)


# ---------------------------------------------------------------------------
# the three field operations of the contract
# ---------------------------------------------------------------------------

def field_add(a, b):
    return canon(a + b)


def field_mul(a, b):
    return canon(a * b)


def field_inv(a):
    if a == 0:
        raise ZeroDivisionError("inverse of zero")
    if isinstance(a, (QuadExt, PrimeField)):
        return a.inverse()
    return canon(1 / Fraction(a))


def field_div(a, b):
    return field_mul(a, field_inv(b))


def field_of(values):
    """Return a tag ``('Q',)``, ``('Q', m)`` or ``('F', p)`` for a set of scalars."""
    tag = ("Q",)
    for v in values:
        if isinstance(v, QuadExt) and v.b != 0:
            new = ("Q", v.m)
        elif isinstance(v, PrimeField):
            new = ("F", v.modulus)
        else:
            continue
        if tag == ("Q",):
            tag = new
        elif tag != new:
            raise MixedFieldError(f"values from {tag} and {new}")
    return tag


# ---------------------------------------------------------------------------
# square roots
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExtensionRecord:
    """A quadratic extension Q(sqrt radicand) introduced during a computation."""

    radicand: int
    reason: str = ""

    def __str__(self):
        return f"Q(sqrt({self.radicand}))"


def sqrt_or_extend(a, reason: str = "square root"):
    """Square root of a nonzero rational, extending to Q(sqrt m) when needed.

    Returns ``(root, record)`` where ``record`` is ``None`` if no extension was
    introduced.
    """
    a = as_rational(a)
    if a == 0:
        raise ValueError("sqrt_or_extend requires a nonzero input")
    r = rational_sqrt(a)
    if r is not None:
        return r, None
    # a = N / D**2 with N = num*den
    s, k = squarefree_decomposition(a.numerator * a.denominator)
    return QuadExt(0, Fraction(k, a.denominator), s), ExtensionRecord(s, reason)


# ---------------------------------------------------------------------------
# text form
# ---------------------------------------------------------------------------

def format_scalar(x) -> str:
    x = canon(x)
    if isinstance(x, int):
        return str(x)
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, QuadExt):
        a, b = x.a, x.b
        bs = "" if abs(b) == 1 else format_scalar(abs(b)) + "*"
        if a == 0:
            return f"{'-' if b < 0 else ''}{bs}sqrt({x.m})"
        return f"{format_scalar(a)} {'-' if b < 0 else '+'} {bs}sqrt({x.m})"
    if isinstance(x, PrimeField):
        return str(x.value)
    raise TypeError(f"not an exact scalar: {x!r}")


_QUAD_RE = re.compile(
    r"^\s*(?:(?P<a>[-+]?\d+(?:/\d+)?)\s*(?P<op>[-+])\s*)?"
    r"(?P<b>\d+(?:/\d+)?)?\s*\*?\s*sqrt\(\s*(?P<m>-?\d+)\s*\)\s*$")


def parse_scalar(text: str):
    """Inverse of :func:`format_scalar` for rationals and quadratic elements."""
    t = text.strip()
    if "sqrt" not in t:
        return canon(Fraction(t))
    neg = t.startswith("-") and "+" not in t[1:] and "-" not in t[1:]
    body = t[1:] if neg else t
    mt = _QUAD_RE.match(body)
    if not mt:
        raise ValueError(f"cannot parse scalar {text!r}")
    m = int(mt.group("m"))
    s, k = squarefree_decomposition(m)
    b = Fraction(mt.group("b") or 1) * k
    if mt.group("op") == "-":
        b = -b
    a = Fraction(mt.group("a") or 0)
    if neg:
        b = -b
    return canon(QuadExt(a, b, s)) if s != 1 else canon(a + b)


def content(values):
    """Positive rational content of rational values (gcd of numerators / lcm of denominators).

    Irrational values have no content; 1 is returned for them.
    """
    num, den = 0, 1
    values = list(values)
    if not all(is_rational(v) for v in values):
        return 1
    for v in values:
        v = as_rational(v)
        num = gcd(num, v.numerator)
        den = den * v.denominator // gcd(den, v.denominator)
    return canon(Fraction(num, den)) if num else 0

"""Exact arithmetic in Q and in the cyclotomic field Q(w), w**2 + w + 1 = 0.

Elements are written ``p + q*w`` with rational ``p`` and ``q``.  All three
cube roots of a rational number ``a**3`` (namely ``a``, ``w*a``, ``w**2*a``)
live in this field, which is why every series computation of the package
is carried out here.

Text form::

    "3"          -> 3
    "-1/4"       -> -1/4
    "w"          -> w
    "1/2 - 3 w"  -> 1/2 - 3*w
    "-w"         -> -w
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Sequence

import numpy as np
from gmpy2 import mpq

__all__ = [
    "CycloNumber",
    "OMEGA",
    "ONE",
    "ZERO",
    "as_cyclo",
    "cube_roots_of",
    "cyclo_arith",
    "cyclo_inverse",
    "embed_complex",
    "field_roots",
    "parse_cyclo",
    "parse_rational",
    "format_rational",
]

OMEGA_COMPLEX = complex(-0.5, math.sqrt(3.0) / 2.0)
_MPQ = type(mpq(0))


class CycloNumber:
    """An element ``p + q*w`` of Q(w), stored as two reduced GMP rationals.

    Instances are immutable and hashable.  Python ints, Fractions and
    ``gmpy2.mpq`` values are accepted on either side of the operators.
    """

    __slots__ = ("_p", "_q")

    def __init__(self, p=0, q=0):
        self._p = p if type(p) is _MPQ else mpq(p)
        self._q = q if type(q) is _MPQ else mpq(q)

    @property
    def p(self) -> Fraction:
        return Fraction(int(self._p.numerator), int(self._p.denominator))

    @property
    def q(self) -> Fraction:
        return Fraction(int(self._q.numerator), int(self._q.denominator))

    # -- predicates ---------------------------------------------------
    def is_zero(self) -> bool:
        return not self._p and not self._q

    def is_rational(self) -> bool:
        return not self._q

    def __bool__(self) -> bool:
        return bool(self._p) or bool(self._q)

    def norm(self) -> Fraction:
        """Field norm ``p**2 - p*q + q**2``; zero only for the zero element."""
        p, q = self._p, self._q
        n = p * p - p * q + q * q
        return Fraction(int(n.numerator), int(n.denominator))

    def conjugate(self) -> CycloNumber:
        # w -> w**2 = -1 - w
        return CycloNumber(self._p - self._q, -self._q)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return CycloNumber(self._p + other._p, self._q + other._q)

    __radd__ = __add__

    def __sub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return CycloNumber(self._p - other._p, self._q - other._q)

    def __rsub__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return CycloNumber(other._p - self._p, other._q - self._q)

    def __neg__(self):
        return CycloNumber(-self._p, -self._q)

    def __pos__(self):
        return self

    def __mul__(self, other):
        if type(other) is _MPQ or isinstance(other, int):
            return CycloNumber(self._p * other, self._q * other)
        other = _coerce(other)
        if other is None:
            return NotImplemented
        p1, q1, p2, q2 = self._p, self._q, other._p, other._q
        if not q1:
            return CycloNumber(p1 * p2, p1 * q2)
        if not q2:
            return CycloNumber(p1 * p2, q1 * p2)
        qq = q1 * q2
        return CycloNumber(p1 * p2 - qq, p1 * q2 + q1 * p2 - qq)

    __rmul__ = __mul__

    def inverse(self) -> CycloNumber:
        p, q = self._p, self._q
        n = p * p - p * q + q * q
        if not n:
            raise ZeroDivisionError("inverse of zero in Q(w)")
        c = self.conjugate()
        return CycloNumber(c._p / n, c._q / n)

    def __truediv__(self, other):
        if type(other) is _MPQ or isinstance(other, int):
            if not other:
                raise ZeroDivisionError("division by zero in Q(w)")
            return CycloNumber(self._p / other, self._q / other)
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    # -- comparison / hashing -----------------------------------------
    def __eq__(self, other):
        other = _coerce(other)
        if other is None:
            return NotImplemented
        return self._p == other._p and self._q == other._q

    def __hash__(self):
        if not self._q:
            return hash(self._p)
        return hash((self._p, self._q))

    # -- conversions --------------------------------------------------
    def __complex__(self):
        return embed_complex(self)

    def to_fraction(self) -> Fraction:
        if self._q:
            raise ValueError(f"{self} is not rational")
        return self.p

    def __repr__(self):
        return f"CycloNumber({self})"

    def __str__(self):
        return format_cyclo(self)


ZERO = CycloNumber(0, 0)
ONE = CycloNumber(1, 0)
OMEGA = CycloNumber(0, 1)


def _coerce(x):
    if type(x) is CycloNumber:
        return x
    if isinstance(x, (int, _MPQ, Fraction)):
        return CycloNumber(x, 0)
    if isinstance(x, _RationalABC):
        return CycloNumber(mpq(int(x.numerator), int(x.denominator)), 0)
    return None


def as_cyclo(x) -> CycloNumber:
    """Convert ints, Fractions or text into a :class:`CycloNumber`."""
    if isinstance(x, str):
        return parse_cyclo(x)
    c = _coerce(x)
    if c is None:
        raise TypeError(f"cannot convert {x!r} to CycloNumber")
    return c


def cyclo_arith(x: CycloNumber, y: CycloNumber, op: str) -> CycloNumber:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown operation {op!r}")


def cyclo_inverse(x: CycloNumber) -> CycloNumber:
    return as_cyclo(x).inverse()


def embed_complex(x: CycloNumber) -> complex:
    """Image of ``x`` under w -> exp(2*pi*i/3)."""
    x = as_cyclo(x)
    q = float(x._q)
    return complex(float(x._p) - 0.5 * q, q * (math.sqrt(3.0) / 2.0))


def cube_roots_of(a) -> list[CycloNumber]:
    """The three numbers ``a, w*a, w**2*a`` sharing the cube ``a**3``."""
    a = as_cyclo(a)
    wa = OMEGA * a
    return [a, wa, OMEGA * wa]


# -- roots -------------------------------------------------------------------
def field_roots(poly: Sequence[CycloNumber]) -> list:
    """Roots of ``poly`` (constant first), exact where recognisable in Q(w)."""
    while len(poly) > 1 and not poly[-1]:
        poly = poly[:-1]
    if len(poly) <= 1:
        return []
    numeric = np.roots([embed_complex(c) for c in reversed(poly)])
    found = []
    sqrt3 = math.sqrt(3.0)
    for z in numeric:
        q = 2 * z.imag / sqrt3
        p = z.real + q / 2
        cand = CycloNumber(
            Fraction(p).limit_denominator(10 ** 6), Fraction(q).limit_denominator(10 ** 6)
        )
        acc = ZERO
        for c in reversed(poly):
            acc = acc * cand + c
        found.append(cand if not acc else complex(z))
    return found


# -- text form ------------------------------------------------------------
def format_rational(r: Fraction) -> str:
    r = Fraction(r)
    if r.denominator == 1:
        return str(r.numerator)
    return f"{r.numerator}/{r.denominator}"


def format_cyclo(x: CycloNumber) -> str:
    p, q = x.p, x.q
    if not q:
        return format_rational(p)
    if q == 1:
        qs = "w"
    elif q == -1:
        qs = "-w"
    else:
        qs = f"{format_rational(q)} w"
    if not p:
        return qs
    if qs.startswith("-"):
        return f"{format_rational(p)} - {qs[1:]}"
    return f"{format_rational(p)} + {qs}"


_RAT = r"\d+(?:/\d+)?"
_TERM = re.compile(
    rf"\s*(?P<sign>[+-])?\s*(?:(?P<num>{_RAT})\s*\*?\s*(?P<w1>w)?|(?P<w2>w))\s*"
)


def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"cannot parse rational {text!r}: {exc}") from None


def parse_cyclo(text: str) -> CycloNumber:
    """Parse ``"p/q + r/s w"``-style text; integers and bare ``w`` allowed."""
    if not isinstance(text, str):
        return as_cyclo(text)
    s = text.strip()
    if not s:
        raise ValueError("empty number")
    pos = 0
    p = Fraction(0)
    q = Fraction(0)
    first = True
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos:
            raise ValueError(f"cannot parse {text!r} at position {pos}")
        if m.group("sign") is None and not first:
            raise ValueError(f"missing operator in {text!r} at position {pos}")
        sign = -1 if m.group("sign") == "-" else 1
        if m.group("w2"):
            q += sign
        else:
            try:
                val = Fraction(m.group("num"))
            except ZeroDivisionError:
                raise ValueError(f"zero denominator in {text!r}") from None
            if m.group("w1"):
                q += sign * val
            else:
                p += sign * val
        pos = m.end()
        first = False
    return CycloNumber(p, q)

"""Truncated Taylor jets over complex numbers.

A jet of order ``n`` at a point stores ``f(z), f'(z), f''(z)/2!, ...,
f^(n)(z)/n!``.  Composing closed-form expressions on jets gives exact
derivatives (up to rounding) without finite differences.
"""
from __future__ import annotations

import cmath
import math
from typing import Sequence

__all__ = ["Jet"]


class Jet:
    __slots__ = ("c",)

    def __init__(self, coeffs: Sequence[complex]):
        self.c = [complex(x) for x in coeffs]

    @property
    def order(self) -> int:
        return len(self.c) - 1

    @classmethod
    def variable(cls, z: complex, order: int) -> Jet:
        return cls([z, 1.0] + [0.0] * (order - 1))

    @classmethod
    def const(cls, value: complex, order: int) -> Jet:
        return cls([value] + [0.0] * order)

    def derivatives(self) -> list[complex]:
        return [x * math.factorial(i) for i, x in enumerate(self.c)]

    def value(self) -> complex:
        return self.c[0]

    def _lift(self, other) -> Jet:
        if isinstance(other, Jet):
            return other
        return Jet.const(complex(other), self.order)

    def __add__(self, other):
        other = self._lift(other)
        return Jet([x + y for x, y in zip(self.c, other.c)])

    __radd__ = __add__

    def __neg__(self):
        return Jet([-x for x in self.c])

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, Jet):
            k = complex(other)
            return Jet([x * k for x in self.c])
        n = min(len(self.c), len(other.c))
        out = [0j] * n
        for i in range(n):
            xi = self.c[i]
            if xi:
                for j in range(n - i):
                    out[i + j] += xi * other.c[j]
        return Jet(out)

    __rmul__ = __mul__

    def reciprocal(self) -> Jet:
        n = len(self.c)
        c0 = self.c[0]
        if c0 == 0:
            raise ZeroDivisionError("jet reciprocal at a zero")
        out = [1 / c0] + [0j] * (n - 1)
        for i in range(1, n):
            s = sum(self.c[j] * out[i - j] for j in range(1, i + 1))
            out[i] = -s / c0
        return Jet(out)

    def __truediv__(self, other):
        if not isinstance(other, Jet):
            return self * (1 / complex(other))
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return self._lift(other) * self.reciprocal()

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.reciprocal() ** (-n)
        out = Jet.const(1.0, self.order)
        for _ in range(n):
            out = out * self
        return out

    def compose(self, derivs: Sequence[complex]) -> Jet:
        """``g(self)`` given ``g, g', g'', ...`` at ``self.value()``."""
        n = self.order
        delta = Jet([0j] + self.c[1:])
        out = Jet.const(derivs[0], n)
        power = Jet.const(1.0, n)
        for i in range(1, n + 1):
            power = power * delta
            out = out + power * (derivs[i] / math.factorial(i))
        return out

    def exp(self) -> Jet:
        e = cmath.exp(self.c[0])
        return self.compose([e] * (self.order + 1))

    def diff(self) -> Jet:
        return Jet([(i + 1) * self.c[i + 1] for i in range(self.order)])

    def __repr__(self):
        return f"Jet({self.c})"

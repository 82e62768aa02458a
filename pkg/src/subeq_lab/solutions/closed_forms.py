"""Closed-form solutions and their evaluation with Taylor jets.

Four shapes cover every solution the families produce:

``RationalForm``      u = C + sum r_i/(z - z_i)
``ExpRational``       u = C + sum r_i/(exp(k (z - z0)) - Z_i)
``EllipticBinomial``  1/(u - e0) = (P'(z - z0) - A)/N1
``EllipticBB``        u from w = 2 k1/e0 + A/(P(z - z0) - B) by the
                      birational map u = (-3a w w' - e0 w^3 + 6 k1 w^2 + 2 e0)/(2 (w^3 + 1))

Parameters are kept as exact :class:`CycloNumber` values where the
construction allows it and as Python complex numbers otherwise.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Union

from ..cyclofield import CycloNumber
from .jets import Jet
from .weierstrass import wp_jets, wp_radius

__all__ = [
    "ClosedForm",
    "EllipticBB",
    "EllipticBinomial",
    "ExpRational",
    "NearSingularity",
    "RationalForm",
    "eval_closed_form",
    "tag_value",
]

Number = Union[CycloNumber, complex]
SINGULAR_DISTANCE = 1e-3


class NearSingularity(ValueError):
    """Evaluation point too close to a pole of the closed form."""


def tag_value(x) -> dict:
    """JSON form that keeps the exact/float distinction explicit."""
    if isinstance(x, CycloNumber):
        return {"exact": str(x)}
    x = complex(x)
    return {"float": [x.real, x.imag]}


def _c(x) -> complex:
    return complex(x)


@dataclass
class ClosedForm:
    z0: Number = 0j
    notes: list = field(default_factory=list, kw_only=True)
    selection: str = field(default="", kw_only=True)

    kind = "closed-form"

    def params(self) -> dict:
        raise NotImplementedError

    def jet(self, z: complex, order: int = 3) -> Jet:
        raise NotImplementedError

    def poles_near(self, z: complex, radius: float) -> list[complex]:
        """Known poles within ``radius`` of ``z`` (elliptic forms: none)."""
        return []

    def radius(self) -> float:
        """Distance from ``z0`` within which evaluation is supported."""
        return math.inf

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "z0": tag_value(self.z0),
            "params": {k: tag_value(v) for k, v in self.params().items()},
            "selection": self.selection,
            "notes": list(self.notes),
        }


@dataclass
class RationalForm(ClosedForm):
    poles: list = field(default_factory=list)
    residues: list = field(default_factory=list)
    C: Number = 0j

    kind = "rational"

    def params(self) -> dict:
        out = {"C": self.C}
        for i, (p, r) in enumerate(zip(self.poles, self.residues)):
            out[f"z{i + 1}"] = p
            out[f"r{i + 1}"] = r
        return out

    def jet(self, z, order=3):
        x = Jet.variable(complex(z), order)
        u = Jet.const(_c(self.C), order)
        for p, r in zip(self.poles, self.residues):
            u = u + _c(r) / (x - _c(p))
        return u

    def poles_near(self, z, radius):
        return [_c(p) for p in self.poles if abs(_c(p) - z) <= radius]


@dataclass
class ExpRational(ClosedForm):
    k: complex = 1
    pole_data: list = field(default_factory=list)  # [(r_i, Z_i)]
    C: Number = 0j

    kind = "exp-rational"

    def params(self) -> dict:
        out = {"k": self.k, "C": self.C}
        for i, (r, Z) in enumerate(self.pole_data):
            out[f"r{i + 1}"] = r
            out[f"Z{i + 1}"] = Z
        return out

    def jet(self, z, order=3):
        t = Jet.variable(complex(z) - _c(self.z0), order)
        e = (t * complex(self.k)).exp()
        u = Jet.const(_c(self.C), order)
        for r, Z in self.pole_data:
            u = u + _c(r) / (e - _c(Z))
        return u

    def pole_residues(self) -> list[complex]:
        """Residue in ``z`` of each term, ``r_i/(k Z_i)``."""
        k = complex(self.k)
        return [_c(r) / (k * _c(Z)) for r, Z in self.pole_data]

    def poles_near(self, z, radius):
        k = complex(self.k)
        out = []
        t = complex(z) - _c(self.z0)
        period = 2j * math.pi / k
        for _, Z in self.pole_data:
            base = cmath.log(_c(Z)) / k
            # the lattice base + n*period closest to t
            n0 = round(((t - base) / period).real)
            for n in range(n0 - 1, n0 + 2):
                p = base + n * period
                if abs(p - t) <= radius:
                    out.append(p + _c(self.z0))
        return out

    def recentered(self, index: int) -> ExpRational:
        """Same function with the variable rescaled so pole ``index`` sits at ``z0``.

        Equivalent to translating ``z0`` to that pole.
        """
        Zi = _c(self.pole_data[index][1])
        shift = cmath.log(Zi) / complex(self.k)
        data = [(_c(r) / Zi, _c(Z) / Zi) for r, Z in self.pole_data]
        return ExpRational(_c(self.z0) + shift, k=self.k, pole_data=data, C=self.C,
                           notes=list(self.notes), selection=self.selection)


@dataclass
class _Elliptic(ClosedForm):
    g2: Number = 0
    g3: Number = 0

    def radius(self):
        """Radius of the series disk; evaluation reaches 8 times further."""
        return wp_radius(_c(self.g2), _c(self.g3))

    def _wp_jet(self, z, order):
        t = complex(z) - _c(self.z0)
        if abs(t) < SINGULAR_DISTANCE:
            raise NearSingularity("too close to the lattice point z0 of P")
        return wp_jets(_c(self.g2), _c(self.g3), t, order)


@dataclass
class EllipticBinomial(_Elliptic):
    a: Number = 1
    e0: Number = 0
    k5sq: Number = 0
    N1: Number = 0
    A: Number = 0

    kind = "elliptic-binomial"

    def params(self):
        return {"a": self.a, "e0": self.e0, "k5sq": self.k5sq, "g2": self.g2,
                "g3": self.g3, "N1": self.N1, "A": self.A}

    def jet(self, z, order=3):
        _, dwp = self._wp_jet(z, order)
        return _c(self.e0) + _c(self.N1) / (dwp - _c(self.A))


@dataclass
class EllipticBB(_Elliptic):
    a: Number = 1
    k1: Number = 0
    e0: Number = 1
    A: Number = 0
    B: Number = 0

    kind = "elliptic-bb"

    def params(self):
        return {"a": self.a, "k1": self.k1, "e0": self.e0, "g2": self.g2,
                "g3": self.g3, "A": self.A, "B": self.B}

    def jet(self, z, order=3):
        wp, _ = self._wp_jet(z, order + 1)
        a, k1, e0 = _c(self.a), _c(self.k1), _c(self.e0)
        w = 2 * k1 / e0 + _c(self.A) / (wp - _c(self.B))
        dw = w.diff()
        w = Jet(w.c[: order + 1])
        w3 = w ** 3
        num = -3 * a * w * dw - e0 * w3 + 6 * k1 * w * w + 2 * e0
        return num / (2 * (w3 + 1))


def eval_closed_form(cf: ClosedForm, z: complex, check: bool = True) -> tuple:
    """``(u, u', u'', u''')`` at ``z``.

    With ``check`` set, points within 1e-3 of a known pole raise
    :class:`NearSingularity`; for elliptic forms a pole is inferred from
    ``|u|`` being large compared with the residue scale ``|a|``.
    """
    z = complex(z)
    if check and cf.poles_near(z, SINGULAR_DISTANCE):
        raise NearSingularity(f"z = {z} is within {SINGULAR_DISTANCE} of a pole")
    try:
        jet = cf.jet(z, 3)
    except ZeroDivisionError:
        raise NearSingularity(f"z = {z} is a pole") from None
    d = jet.derivatives()
    if check and isinstance(cf, _Elliptic):
        if abs(d[0]) * SINGULAR_DISTANCE > abs(_c(cf.a)) * 1.5:
            raise NearSingularity(f"z = {z} is close to a pole (|u| = {abs(d[0]):.3g})")
    return tuple(d)

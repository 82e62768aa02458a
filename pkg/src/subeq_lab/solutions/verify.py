"""Numeric verification of closed forms against the ODE and a subequation."""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from ..laurent import OdeInstance
from ..subeq import Subequation
from .closed_forms import ClosedForm, NearSingularity, eval_closed_form
from .weierstrass import OutOfRadius

__all__ = [
    "ANNULUS",
    "VerificationReport",
    "elliptic_residues",
    "find_poles",
    "numeric_residue",
    "ode_terms",
    "sample_points",
    "verify_numeric",
]

ANNULUS = (0.05, 0.4)


@dataclass
class VerificationReport:
    points: list
    max_rel_ode_residual: float
    max_rel_subeq_residual: float
    passed: bool
    notes: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "points": [[z.real, z.imag] for z in self.points],
            "max_rel_ode_residual": self.max_rel_ode_residual,
            "max_rel_subeq_residual": self.max_rel_subeq_residual,
            "passed": self.passed,
            "notes": list(self.notes),
        }


def ode_terms(ode: OdeInstance, d: tuple) -> list[complex]:
    c = ode.complex_coefficients()
    u, u1, u2, u3 = d
    return [
        c["c0"] * u3, 6 * u ** 4, c["c1"] * u2, c["c2"] * u * u1,
        c["c4"] * u1, c["c5"] * u * u, c["c6"] * u, c["c7"],
    ]


def _relative(terms) -> float:
    scale = max(abs(t) for t in terms)
    return abs(sum(terms)) / scale if scale else 0.0


def sample_points(cf: ClosedForm, n: int = 20, seed: int = 1,
                  annulus: tuple = ANNULUS) -> list[complex]:
    """``n`` seeded points in an annulus around ``cf.z0``, avoiding poles.

    The outer radius is clipped to 80% of the form's evaluation radius.
    """
    rmin, rmax = annulus
    rmax = min(rmax, 0.8 * cf.radius())
    rmin = min(rmin, rmax / 2)
    rng = np.random.default_rng(seed)
    z0 = complex(cf.z0)
    out: list[complex] = []
    tries = 0
    while len(out) < n and tries < 100 * n:
        tries += 1
        r = math.sqrt(rng.uniform(rmin * rmin, rmax * rmax))
        z = z0 + r * cmath.exp(1j * rng.uniform(0, 2 * math.pi))
        try:
            eval_closed_form(cf, z)
        except (NearSingularity, OutOfRadius):
            continue
        out.append(z)
    return out


def verify_numeric(cf: ClosedForm, ode: OdeInstance, s: Subequation | None = None,
                   points=None, tol: float = 1e-9) -> VerificationReport:
    """Relative residuals of the ODE and of ``s`` along ``cf``.

    Each residual is divided by the largest single term at that point.
    Failures are reported, never raised.
    """
    if points is None:
        points = sample_points(cf)
    points = [complex(z) for z in points]
    notes = []
    max_ode = 0.0
    max_sub = 0.0
    for z in points:
        try:
            d = eval_closed_form(cf, z)
        except (NearSingularity, OutOfRadius) as exc:
            notes.append(f"skipped {z}: {exc}")
            continue
        max_ode = max(max_ode, _relative(ode_terms(ode, d)))
        if s is not None:
            scale = s.term_magnitude(d[0], d[1])
            sub = abs(s.evaluate(d[0], d[1])) / scale if scale else 0.0
            max_sub = max(max_sub, sub)
    evaluated = len(points) - len(notes)
    passed = evaluated > 0 and max_ode <= tol and max_sub <= tol
    if not evaluated:
        notes.append("no point could be evaluated")
    if math.isnan(max_ode) or math.isnan(max_sub):
        passed = False
        notes.append("NaN residual")
    return VerificationReport(points, max_ode, max_sub, passed, notes)


# -- poles and residues ------------------------------------------------------
def _u(cf, z):
    return eval_closed_form(cf, z, check=False)


def find_poles(cf: ClosedForm, radius: float, rings: int = 6, rays: int = 16,
               newton_steps: int = 60) -> list[complex]:
    """Poles of ``cf`` within ``radius`` of ``z0``, nearest first.

    Newton's method on ``1/u`` from a polar grid of seeds.
    """
    z0 = complex(cf.z0)
    found: list[complex] = []
    for i in range(1, rings + 1):
        for j in range(rays):
            z = z0 + radius * i / rings * cmath.exp(2j * math.pi * (j + 0.5 * (i % 2)) / rays)
            for _ in range(newton_steps):
                try:
                    u, du = _u(cf, z)[:2]
                except (ZeroDivisionError, OutOfRadius, NearSingularity):
                    break
                if du == 0:
                    break
                # f = 1/u, f' = -u'/u^2, step = -f/f' = u/u'
                step = u / du
                z = z + step
                if abs(z - z0) > radius:
                    break
                if abs(step) < 1e-14 * (1 + abs(z)):
                    if not any(abs(z - p) < 1e-7 for p in found):
                        found.append(z)
                    break
    return sorted(found, key=lambda p: (round(abs(p - z0), 9), cmath.phase(p - z0)))


def numeric_residue(cf: ClosedForm, pole: complex, rho: float, n: int = 128) -> complex:
    """Trapezoidal contour integral of ``u`` on a circle of radius ``rho``."""
    total = 0j
    for j in range(n):
        e = cmath.exp(2j * math.pi * j / n)
        total += _u(cf, pole + rho * e)[0] * rho * e
    return total / n


def elliptic_residues(cf: ClosedForm, count: int = 3,
                      radius: float | None = None) -> list[tuple[complex, complex]]:
    """``(pole, residue)`` for the ``count`` nearest pairwise inequivalent poles.

    An elliptic solution of the ODE has one pole of each residue ``a``,
    ``w a``, ``w**2 a`` per period cell, so two poles with the same residue
    are congruent; walking outwards from ``z0`` and keeping only new
    residues yields one representative of each class.
    """
    if radius is None:
        r = cf.radius()
        radius = 2.5 * r if math.isfinite(r) else 4.0
    z0 = complex(cf.z0)
    poles = find_poles(cf, radius)
    scale = abs(complex(getattr(cf, "a", 1)))
    out: list[tuple[complex, complex]] = []
    for p in poles:
        others = [abs(p - q) for q in poles if q != p]
        rho = 0.3 * min(others + [abs(p - z0), radius - abs(p - z0)])
        res = numeric_residue(cf, p, rho)
        if all(abs(res - r) > 1e-4 * scale for _, r in out):
            out.append((p, res))
        if len(out) == count:
            break
    return out

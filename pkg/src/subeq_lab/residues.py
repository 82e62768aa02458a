"""Residue-sum conditions for elliptic solutions.

An elliptic solution has exactly three simple poles per period
parallelogram, one on each Laurent branch.  For every ``k >= 0`` and
``n >= 1`` the residues of ``(u^(k))**n`` over the parallelogram must then
add up to zero.  The functions here evaluate those sums exactly on a given
instance.
"""
from __future__ import annotations

from dataclasses import dataclass

from .cyclofield import ZERO, CycloNumber
from .laurent import DepthExhausted, LaurentSeries, OdeInstance, expand_laurent

__all__ = [
    "ResidueCondition",
    "enumerate_conditions",
    "match_elliptic_families",
    "residue_power_sum",
]


@dataclass(frozen=True)
class ResidueCondition:
    k: int
    n: int
    value: CycloNumber

    def to_json(self) -> dict:
        return {"k": self.k, "n": self.n, "value": str(self.value)}


def _required_depth(k: int, n: int) -> int:
    # (u^(k))**n has a pole of order n(k+1); six coefficients of margin
    return n * (k + 1) + 6


def _power_residues(u: LaurentSeries, k: int, nmax: int) -> list[CycloNumber]:
    """Residues of ``(u^(k))**n`` for ``n = 1..nmax``."""
    p = u
    for _ in range(k):
        p = p.diff()
    # only coefficients up to t**-1 of the nmax-th power are ever needed
    p = p.truncate((nmax - 1) * (k + 1))
    out = []
    acc = p
    for n in range(1, nmax + 1):
        out.append(acc.coefficient(-1))
        if n < nmax:
            acc = (acc * p).truncate((nmax - n - 1) * (k + 1))
    return out


def residue_power_sum(
    ode: OdeInstance, k: int, n: int, depth: int | None = None
) -> CycloNumber:
    """Sum over the three branches of the residue of ``(u^(k))**n``."""
    if k < 0 or n < 1:
        raise ValueError("need k >= 0 and n >= 1")
    depth = depth or _required_depth(k, n)
    while True:
        try:
            total = ZERO
            for r in ode.branches():
                u = expand_laurent(ode, r, depth)
                total += _power_residues(u, k, n)[-1]
            return total
        except DepthExhausted:
            depth *= 2


def enumerate_conditions(
    ode: OdeInstance, kmax: int = 4, nmax: int = 10, depth: int | None = None
) -> list[ResidueCondition]:
    """Violated conditions ``(k, n)`` for ``0 <= k <= kmax``, ``1 <= n <= nmax``.

    The list is ordered by ``k`` then ``n``; an empty list means every
    residue sum in range vanishes.
    """
    if kmax < 0 or nmax < 1:
        raise ValueError("need kmax >= 0 and nmax >= 1")
    depth = depth or _required_depth(kmax, nmax)
    series = [expand_laurent(ode, r, depth) for r in ode.branches()]
    violated = []
    for k in range(kmax + 1):
        sums = [ZERO] * nmax
        for u in series:
            for i, res in enumerate(_power_residues(u, k, nmax)):
                sums[i] += res
        for i, value in enumerate(sums):
            if not value.is_zero():
                violated.append(ResidueCondition(k, i + 1, value))
    return violated


def match_elliptic_families(ode: OdeInstance) -> str | None:
    """Which of the three candidate coefficient sets the instance lies in.

    ``"A"``: c2 = c1 = c4 = 0, c6 != 0, c7 = c5**2/128;
    ``"B"``: c2 = c1 = c4 = c6 = 0 and c5 (c5**2 - 128 c7)(c5**2 - 32 c7) = 0;
    ``"C"``: c2 = 0, c1 != 0, c4 = c1**2/(12 a**3), c5 = c7 = 0.

    Family B is stated with c5, c7 free, but the (k, n) = (2, 5) sum then
    only vanishes on the three listed branches, so those are required.
    """
    a, c1, c2, c4, c5, c6, c7 = (
        ode.a, ode.c1, ode.c2, ode.c4, ode.c5, ode.c6, ode.c7,
    )
    if c2:
        return None
    if not c1 and not c4:
        if c6 and c7 == c5 * c5 / 128:
            return "A"
        if not c6 and (not c5 or c5 * c5 == 128 * c7 or c5 * c5 == 32 * c7):
            return "B"
        return None
    if c1 and c4 == c1 * c1 / (12 * a ** 3) and not c5 and not c7:
        return "C"
    return None

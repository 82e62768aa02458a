"""The five coefficient families admitting meromorphic solutions.

Each family is a set of polynomial equalities among ``c1 .. c7`` given the
cube root ``a`` of ``c0``.  :func:`classify_family` tests an instance
exactly against all of them; the ``*_instance`` constructors go the other
way and build instances from free parameters.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from ..cyclofield import ZERO, CycloNumber, as_cyclo
from ..laurent import OdeInstance
from ..subeq import Subequation

__all__ = [
    "FAMILY_ORDER",
    "FamilyMatch",
    "canonical_subequation",
    "classify_family",
    "family_members",
    "s1_instance",
    "s2a_from_params",
    "s2a_instance",
    "s2b_instance",
    "s3a_instance",
    "s3b_instance",
]

FAMILY_ORDER = ("S3b", "S3a", "S2A", "S2B", "S1")
FAMILY_DEGREE = {"S3a": 3, "S3b": 3, "S2A": 2, "S2B": 2, "S1": 1}


@dataclass
class FamilyMatch:
    family: str | None
    params: dict[str, CycloNumber] = field(default_factory=dict)
    matches: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def degree(self) -> int | None:
        return FAMILY_DEGREE.get(self.family)

    def to_json(self) -> dict:
        return {
            "family": self.family,
            "params": {k: str(v) for k, v in sorted(self.params.items())},
            "matches": list(self.matches),
            "notes": list(self.notes),
        }


# -- defining equalities -----------------------------------------------------
def _s3a(o: OdeInstance) -> bool:
    return not o.c2 and not o.c5 and not o.c7 and o.c4 == o.c1 * o.c1 / (12 * o.c0)


def _s3b(o: OdeInstance) -> bool:
    return not o.c1 and not o.c2 and not o.c4 and o.c7 == o.c5 * o.c5 / 128


def _s2a(o: OdeInstance) -> bool:
    a, c1, c4 = o.a, o.c1, o.c4
    a3 = a ** 3
    return (
        not o.c2
        and o.c5 == (c1 * c1 - 12 * a3 * c4) / (4 * a ** 4)
        and o.c6 == -c1 * (c1 * c1 + 36 * a3 * c4) / (144 * a ** 6)
        and o.c7 == (12 * a3 * c4 - c1 * c1) * (36 * a3 * c4 - 11 * c1 * c1) / (1536 * a ** 8)
    )


def _s2b(o: OdeInstance) -> bool:
    return o == s2b_instance(o.a, o.c1, o.c2)


def _s1(o: OdeInstance) -> bool:
    return o == s1_instance(o.a, o.c1, o.c2, o.c4, o.c5)


_TESTS = {"S3a": _s3a, "S3b": _s3b, "S2A": _s2a, "S2B": _s2b, "S1": _s1}


def family_members(ode: OdeInstance) -> list[str]:
    """Every family whose equalities hold, in precedence order."""
    return [f for f in FAMILY_ORDER if _TESTS[f](ode)]


def _params(ode: OdeInstance, fam: str) -> dict[str, CycloNumber]:
    a = ode.a
    if fam == "S3b":
        return {"k5sq": -ode.c5 / 16, "k6": ode.c6 / 4}
    if fam == "S3a":
        return {"k1": ode.c1 / (12 * a * a), "k6": ode.c6 / 4}
    if fam == "S2A":
        k1 = -ode.c1 / (3 * a * a)
        return {"k1": k1, "bsq": (ode.c4 - 3 * a * k1 * k1 / 4) / (2 * a)}
    if fam == "S2B":
        return {"b": (ode.c2 + 2 * ode.c1 / a) / (6 * a)}
    b1 = (2 * ode.c1 - a * ode.c2) / (12 * a * a)
    b0 = (
        44 * ode.c1 ** 2 - 32 * a * ode.c1 * ode.c2 + 5 * a * a * ode.c2 ** 2
        - 144 * a ** 3 * ode.c4 + 144 * a ** 4 * ode.c5
    ) / (1152 * a ** 4)
    return {"b1": b1, "b0": b0}


def _degenerate(fam: str, params: dict) -> str | None:
    if fam == "S2A" and not params["bsq"]:
        return "S2A with b = 0 is excluded (b != 0 required)"
    if fam == "S2B" and not params["b"]:
        return "S2B with b = 0 is excluded (b != 0 required)"
    return None


def classify_family(ode: OdeInstance) -> FamilyMatch:
    """Most specific family the instance belongs to, with its parameters.

    Precedence is S3b > S3a > S2A > S2B > S1.  Families whose parameters
    are degenerate (``b = 0`` in degree two) are listed but not selected.
    """
    matches = family_members(ode)
    notes = []
    chosen = None
    for fam in matches:
        why = _degenerate(fam, _params(ode, fam))
        if why:
            notes.append(why)
        elif chosen is None:
            chosen = fam
    if len(matches) > 1:
        notes.append(f"instance lies in several families: {', '.join(matches)}; "
                     f"selected {chosen} by fixed precedence")
    if chosen is None:
        notes.append("no meromorphic solution family matched")
        return FamilyMatch(None, {}, matches, notes)
    return FamilyMatch(chosen, _params(ode, chosen), matches, notes)


# -- constructors ------------------------------------------------------------
def s3a_instance(a, k1, k6) -> OdeInstance:
    a, k1, k6 = as_cyclo(a), as_cyclo(k1), as_cyclo(k6)
    c1 = 12 * a * a * k1
    return OdeInstance(a=a, c1=c1, c4=c1 * c1 / (12 * a ** 3), c6=4 * k6)


def s3b_instance(a, k5sq, k6) -> OdeInstance:
    c5 = -16 * as_cyclo(k5sq)
    return OdeInstance(a=a, c5=c5, c6=4 * as_cyclo(k6), c7=c5 * c5 / 128)


def s2a_instance(a, c1, c4) -> OdeInstance:
    a, c1, c4 = as_cyclo(a), as_cyclo(c1), as_cyclo(c4)
    a3 = a ** 3
    return OdeInstance(
        a=a, c1=c1, c4=c4,
        c5=(c1 * c1 - 12 * a3 * c4) / (4 * a ** 4),
        c6=-c1 * (c1 * c1 + 36 * a3 * c4) / (144 * a ** 6),
        c7=(12 * a3 * c4 - c1 * c1) * (36 * a3 * c4 - 11 * c1 * c1) / (1536 * a ** 8),
    )


def s2a_from_params(a, k1, bsq) -> OdeInstance:
    """S2A instance from ``k1`` and ``b**2`` (``c1 = -3a^2 k1``)."""
    a, k1, bsq = as_cyclo(a), as_cyclo(k1), as_cyclo(bsq)
    return s2a_instance(a, -3 * a * a * k1, 2 * a * bsq + 3 * a * k1 * k1 / 4)


def s2b_instance(a, c1, c2) -> OdeInstance:
    a, c1, c2 = as_cyclo(a), as_cyclo(c1), as_cyclo(c2)
    return OdeInstance(
        a=a, c1=c1, c2=c2,
        c4=(44 * c1 * c1 + 8 * a * c1 * c2 - a * a * c2 * c2) / (144 * a ** 3),
        c5=(-32 * c1 * c1 - 24 * a * c1 * c2 - 7 * a * a * c2 * c2) / (48 * a ** 4),
        c6=-(c1 + a * c2) * (12 * c1 * c1 + 6 * a * c1 * c2 + a * a * c2 * c2) / (144 * a ** 6),
        # the factor c2 is required by weight homogeneity and by substitution
        # of the explicit solution; without it the instance is not solvable
        c7=-c2 * (4 * c1 + 3 * a * c2) * (48 * c1 * c1 + 20 * a * c1 * c2 + a * a * c2 * c2)
        / (55296 * a ** 7),
    )


def s1_instance(a, c1, c2, c4, c5) -> OdeInstance:
    a, c1, c2, c4, c5 = (as_cyclo(x) for x in (a, c1, c2, c4, c5))
    c6 = (
        -56 * c1 ** 3 + 60 * a * c1 ** 2 * c2 - 18 * a ** 2 * c1 * c2 ** 2
        + a ** 3 * c2 ** 3 + 288 * a ** 3 * c1 * c4 - 144 * a ** 4 * c2 * c4
        - 96 * a ** 4 * c1 * c5 + 48 * a ** 5 * c2 * c5
    ) / (1152 * a ** 6)
    c7 = (
        -176 * c1 ** 4 + 128 * a * c1 ** 3 * c2 + 24 * a ** 2 * c1 ** 2 * c2 ** 2
        - 32 * a ** 3 * c1 * c2 ** 3 + 5 * a ** 4 * c2 ** 4 + 2688 * a ** 3 * c1 ** 2 * c4
        - 1536 * a ** 4 * c1 * c2 * c4 + 96 * a ** 5 * c2 ** 2 * c4 - 6912 * a ** 6 * c4 ** 2
        + 128 * a ** 4 * c1 ** 2 * c5 - 512 * a ** 5 * c1 * c2 * c5
        + 224 * a ** 6 * c2 ** 2 * c5 + 4608 * a ** 7 * c4 * c5 + 2304 * a ** 8 * c5 ** 2
    ) / (2 ** 13 * 3 ** 2 * a ** 8)
    return OdeInstance(a=a, c1=c1, c2=c2, c4=c4, c5=c5, c6=c6, c7=c7)


# -- canonical subequations --------------------------------------------------
Poly = dict  # {(j, k): CycloNumber} for u**j u'**k


def _pmul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for (j1, k1), c1 in p.items():
        for (j2, k2), c2 in q.items():
            key = (j1 + j2, k1 + k2)
            out[key] = out.get(key, ZERO) + c1 * c2
    return out


def _padd(*ps: Poly) -> Poly:
    out: Poly = {}
    for p in ps:
        for key, c in p.items():
            out[key] = out.get(key, ZERO) + c
    return out


def _pscale(p: Poly, c) -> Poly:
    return {key: v * c for key, v in p.items()}


def _lin(*terms) -> Poly:
    """Polynomial from ``(coeff, j, k)`` triples."""
    return _padd(*({(j, k): as_cyclo(c)} for c, j, k in terms))


def canonical_subequation(ode: OdeInstance, family: str, params: dict | None = None) -> Subequation:
    """The family's first-order equation written in ``(u, u')``."""
    params = params or _params(ode, family)
    a = ode.a
    if family == "S1":
        return Subequation(1, {(0, 1): a, (2, 0): 1, (1, 0): params["b1"], (0, 0): params["b0"]})
    if family == "S3b":
        cubic = _lin((1, 3, 0), (-3 * params["k5sq"], 1, 0), (params["k6"], 0, 0))
        return Subequation(3, _padd({(0, 3): a ** 3}, _pmul(cubic, cubic)))
    if family == "S3a":
        k1 = params["k1"]
        p = _lin((a, 0, 1), (4 * k1, 1, 0))
        q = _lin((a, 0, 1), (-2 * k1, 1, 0))
        cubic = _lin((1, 3, 0), (20 * k1 ** 3 + params["k6"], 0, 0))
        return Subequation(3, _padd(_pmul(_pmul(p, p), q), _pmul(cubic, cubic)))
    # degree two, written in v and shifted back to u
    if family == "S2A":
        bsq, k1 = params["bsq"], params["k1"]
        tail = _pmul(_lin((1, 2, 0), (-bsq, 0, 0)), _pmul(_lin((1, 1, 0), (-k1, 0, 0)),
                                                          _lin((1, 1, 0), (-k1, 0, 0))))
        shift = k1 / 2  # v = u + k1/2
    elif family == "S2B":
        b = params["b"]
        bsq = b * b
        vpb = _lin((1, 1, 0), (b, 0, 0))
        tail = _pmul(_pmul(vpb, vpb), _pmul(vpb, _lin((1, 1, 0), (-b, 0, 0))))
        shift = -(b / 4 + ode.c1 / (12 * a * a))  # v = u - b/4 - c1/(12 a^2)
    else:
        raise ValueError(f"unknown family {family!r}")
    head = _lin((a, 0, 1), (CycloNumber(-1, 0) / 2, 2, 0), (bsq / 2, 0, 0))
    g = Subequation(2, _padd(_pmul(head, head), _pscale(tail, CycloNumber(3, 0) / 4)))
    return g.shift(shift)

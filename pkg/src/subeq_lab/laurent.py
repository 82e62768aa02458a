"""Truncated Laurent series over Q(w) and local analysis at a movable pole.

The ODE studied throughout the package is

    c0*u''' + 6*u**4 + c1*u'' + c2*u*u' + c4*u' + c5*u**2 + c6*u + c7 = 0,

with ``c0 = a**3``.  Near a movable pole ``z0`` a solution behaves like
``r/(z - z0)`` with ``r**3 = c0``, giving three branches ``a, w*a, w**2*a``.
The expansion variable is always ``t = z - z0``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from gmpy2 import mpq

from .cyclofield import ZERO, CycloNumber, as_cyclo, cube_roots_of

__all__ = [
    "DEFAULT_DEPTH",
    "DepthExhausted",
    "FuchsReport",
    "InvalidResidue",
    "LaurentSeries",
    "OdeInstance",
    "PivotZero",
    "check_fuchs_indices",
    "dominant_monomials",
    "expand_laurent",
    "indicial_polynomial",
    "ode_residual",
    "poly_eval",
    "poly_mul",
    "series_arith",
    "series_diff",
    "series_pow",
]

DEFAULT_DEPTH = 24
_Q0 = mpq(0)


class DepthExhausted(ValueError):
    """A requested coefficient lies beyond the guaranteed truncation order."""


class InvalidResidue(ValueError):
    """The proposed leading coefficient does not satisfy ``r**3 = c0``."""


class PivotZero(ArithmeticError):
    """The recurrence for a Laurent coefficient has a vanishing pivot."""


class LaurentSeries:
    """Truncated Laurent series ``sum coeffs[i] * t**(lead + i) + O(t**order)``.

    ``order`` is the first exponent whose coefficient is unknown.  Leading
    zeros are stripped on construction, so ``coeffs[0]`` is nonzero unless
    the series is zero to its order (then ``coeffs`` is empty).
    """

    __slots__ = ("lead", "coeffs", "order")

    def __init__(self, lead: int, coeffs: Iterable, order: int | None = None):
        cs = [as_cyclo(c) for c in coeffs]
        if order is None:
            order = lead + len(cs)
        if order < lead + len(cs):
            cs = cs[: max(order - lead, 0)]
        elif order > lead + len(cs):
            cs.extend([ZERO] * (order - lead - len(cs)))
        i = 0
        while i < len(cs) and cs[i].is_zero():
            i += 1
        self.lead = lead + i if i < len(cs) else order
        self.coeffs = tuple(cs[i:])
        self.order = order

    @classmethod
    def _raw(cls, lead: int, coeffs: list, order: int) -> LaurentSeries:
        # trusted constructor: coeffs are CycloNumbers, len == order - lead
        obj = cls.__new__(cls)
        i = 0
        n = len(coeffs)
        while i < n and not coeffs[i]:
            i += 1
        obj.lead = lead + i if i < n else order
        obj.coeffs = tuple(coeffs[i:]) if i else tuple(coeffs)
        obj.order = order
        return obj

    @classmethod
    def monomial(cls, coeff, exponent: int, order: int) -> LaurentSeries:
        """``coeff * t**exponent + O(t**order)``."""
        if order <= exponent:
            return cls(order, [], order)
        return cls(exponent, [coeff], order)

    @classmethod
    def constant(cls, value, order: int) -> LaurentSeries:
        return cls.monomial(value, 0, order)

    @property
    def depth(self) -> int:
        return len(self.coeffs)

    def is_zero(self) -> bool:
        return not self.coeffs

    def coefficient(self, exponent: int) -> CycloNumber:
        if exponent >= self.order:
            raise DepthExhausted(
                f"coefficient of t^{exponent} requested, series known to O(t^{self.order})"
            )
        i = exponent - self.lead
        if i < 0:
            return ZERO
        return self.coeffs[i]

    def __getitem__(self, exponent: int) -> CycloNumber:
        return self.coefficient(exponent)

    def residue(self) -> CycloNumber:
        return self.coefficient(-1)

    def items(self):
        """``(exponent, coefficient)`` pairs of the stored coefficients."""
        return [(self.lead + i, c) for i, c in enumerate(self.coeffs)]

    def truncate(self, order: int) -> LaurentSeries:
        if order >= self.order:
            return self
        return LaurentSeries(self.lead, self.coeffs[: max(order - self.lead, 0)], order)

    # -- arithmetic ---------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries.constant(as_cyclo(other), self.order)
        order = min(self.order, other.order)
        lead = min(self.lead, other.lead, order)
        out = [ZERO] * (order - lead)
        for s in (self, other):
            for i, c in enumerate(s.coeffs):
                k = s.lead + i - lead
                if k >= len(out):
                    break
                out[k] = out[k] + c
        return LaurentSeries._raw(lead, out, order)

    __radd__ = __add__

    def __neg__(self):
        return LaurentSeries._raw(self.lead, [-c for c in self.coeffs], self.order)

    def __sub__(self, other):
        if not isinstance(other, LaurentSeries):
            other = LaurentSeries.constant(as_cyclo(other), self.order)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> LaurentSeries:
        c = as_cyclo(c)
        if c.is_zero():
            return LaurentSeries(self.order, [], self.order)
        return LaurentSeries._raw(self.lead, [c * x for x in self.coeffs], self.order)

    def __mul__(self, other):
        if not isinstance(other, LaurentSeries):
            return self.scale(other)
        lead = self.lead + other.lead
        order = min(self.lead + other.order, other.lead + self.order)
        n = order - lead
        if n <= 0:
            return LaurentSeries(order, [], order)
        na = min(len(self.coeffs), n)
        nb = min(len(other.coeffs), n)
        ap = [c._p for c in self.coeffs[:na]]
        aq = [c._q for c in self.coeffs[:na]]
        bp = [c._p for c in other.coeffs[:nb]]
        bq = [c._q for c in other.coeffs[:nb]]
        zero = _Q0
        outp = [zero] * n
        outq = [zero] * n
        a_rat = not any(aq)
        b_rat = not any(bq)
        for i in range(na):
            xp = ap[i]
            xq = aq[i]
            if not xp and not xq:
                continue
            lim = min(nb, n - i)
            if a_rat and b_rat:
                for j in range(lim):
                    outp[i + j] += xp * bp[j]
            else:
                for j in range(lim):
                    yp = bp[j]
                    yq = bq[j]
                    qq = xq * yq
                    outp[i + j] += xp * yp - qq
                    outq[i + j] += xp * yq + xq * yp - qq
        out = [CycloNumber(x, y) for x, y in zip(outp, outq)]
        return LaurentSeries._raw(lead, out, order)

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 1:
            raise ValueError("series power needs a positive integer exponent")
        result = self
        for _ in range(n - 1):
            result = result * self
        return result

    def diff(self) -> LaurentSeries:
        out = [c * (self.lead + i) for i, c in enumerate(self.coeffs)]
        return LaurentSeries._raw(self.lead - 1, out, self.order - 1)

    # -- comparison / display -----------------------------------------
    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (
            self.order == other.order
            and self.lead == other.lead
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.lead, self.coeffs, self.order))

    def __repr__(self):
        terms = [f"({c})*t^{e}" for e, c in self.items()]
        body = " + ".join(terms) if terms else "0"
        return f"LaurentSeries({body} + O(t^{self.order}))"

    def to_json(self) -> dict:
        return {"lead": self.lead, "coeffs": [str(c) for c in self.coeffs], "order": self.order}

    @classmethod
    def from_json(cls, data: Mapping) -> LaurentSeries:
        coeffs = [as_cyclo(c) for c in data["coeffs"]]
        return cls(int(data["lead"]), coeffs, data.get("order"))

    def evaluate(self, t: complex) -> complex:
        """Numerical value of the stored partial sum at ``t``."""
        from .cyclofield import embed_complex

        return sum(embed_complex(c) * t ** e for e, c in self.items())


def series_arith(x: LaurentSeries, y: LaurentSeries, op: str) -> LaurentSeries:
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    raise ValueError(f"unknown operation {op!r}")


def series_diff(x: LaurentSeries) -> LaurentSeries:
    return x.diff()


def series_pow(x: LaurentSeries, n: int) -> LaurentSeries:
    return x ** n


# -- the ODE ---------------------------------------------------------------
_COEFF_NAMES = ("c1", "c2", "c4", "c5", "c6", "c7")


@dataclass(frozen=True)
class OdeInstance:
    """Coefficients of the ODE; ``a`` is the chosen cube root of ``c0``."""

    a: CycloNumber
    c1: CycloNumber = ZERO
    c2: CycloNumber = ZERO
    c4: CycloNumber = ZERO
    c5: CycloNumber = ZERO
    c6: CycloNumber = ZERO
    c7: CycloNumber = ZERO

    def __post_init__(self):
        for name in ("a",) + _COEFF_NAMES:
            object.__setattr__(self, name, as_cyclo(getattr(self, name)))
        if self.a.is_zero():
            raise ValueError("a must be nonzero (c0 = a**3)")

    @property
    def c0(self) -> CycloNumber:
        return self.a ** 3

    @classmethod
    def from_mapping(cls, data: Mapping) -> OdeInstance:
        unknown = set(data) - {"a", "c0", "c3", *_COEFF_NAMES}
        if unknown:
            raise ValueError(f"unknown coefficient names: {sorted(unknown)}")
        if "a" not in data:
            raise ValueError("the cube root 'a' of c0 is required")
        if "c3" in data and not as_cyclo(data["c3"]).is_zero():
            raise ValueError("c3 must be zero (the term is absent from the ODE)")
        inst = cls(**{k: as_cyclo(data[k]) for k in ("a",) + _COEFF_NAMES if k in data})
        if "c0" in data and as_cyclo(data["c0"]) != inst.c0:
            raise ValueError("c0 must equal a**3")
        return inst

    def to_dict(self) -> dict:
        d = {"a": str(self.a), "c0": str(self.c0)}
        d.update({k: str(getattr(self, k)) for k in _COEFF_NAMES})
        return d

    def coefficients(self) -> dict:
        return {k: getattr(self, k) for k in ("a",) + _COEFF_NAMES}

    def replace(self, **changes) -> OdeInstance:
        d = self.coefficients()
        d.update({k: as_cyclo(v) for k, v in changes.items()})
        return OdeInstance(**d)

    def branches(self) -> list[CycloNumber]:
        """Leading coefficients ``a, w*a, w**2*a`` of the three Laurent series."""
        return cube_roots_of(self.a)

    def complex_coefficients(self) -> dict[str, complex]:
        d = {k: complex(v) for k, v in self.coefficients().items()}
        d["c0"] = d["a"] ** 3
        return d


def ode_residual(u: LaurentSeries, ode: OdeInstance) -> LaurentSeries:
    """Truncated series of the ODE left-hand side evaluated on ``u``."""
    du = u.diff()
    d2u = du.diff()
    d3u = d2u.diff()
    u2 = u * u
    terms = [
        d3u.scale(ode.c0),
        (u2 * u2).scale(6),
        d2u.scale(ode.c1),
        (u * du).scale(ode.c2),
        du.scale(ode.c4),
        u2.scale(ode.c5),
        u.scale(ode.c6),
    ]
    order = min(t.order for t in terms)
    nominal = min([t.lead for t in terms if not t.is_zero()] + [0])
    if order <= nominal:
        raise DepthExhausted("series too short to produce any residual coefficient")
    res = LaurentSeries.constant(ode.c7, order)
    for t in terms:
        res = res + t
    return res


# -- indicial analysis ----------------------------------------------------
def poly_eval(coeffs: Sequence, x):
    """Horner evaluation; ``coeffs`` listed from the constant term upward."""
    acc = ZERO
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_mul(p: Sequence, q: Sequence) -> list:
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, x in enumerate(p):
        for j, y in enumerate(q):
            out[i + j] = out[i + j] + as_cyclo(x) * as_cyclo(y)
    return out


def indicial_polynomial(ode: OdeInstance, residue) -> list[CycloNumber]:
    """Monic cubic in the Fuchs index ``r``, constant term first.

    Linearizing around ``u ~ residue/t`` keeps only the dominant terms
    ``c0*v''' + 24*u**3*v``.  A perturbation ``v = t**(r-1)`` then gives
    ``c0*(r-1)(r-2)(r-3) + 24*residue**3`` at ``t**(r-4)``.
    """
    residue = as_cyclo(residue)
    c0 = ode.c0
    if residue ** 3 != c0:
        raise InvalidResidue(f"residue {residue} does not satisfy r**3 = c0 = {c0}")
    falling = poly_mul(poly_mul([-1, 1], [-2, 1]), [-3, 1])  # (r-1)(r-2)(r-3)
    shift = 24 * residue ** 3 / c0
    return [falling[0] + shift] + falling[1:]


@dataclass
class FuchsReport:
    integer_roots: list[int]
    has_nonneg_integer: bool
    multiplicities: dict = field(default_factory=dict)


def _integer_poly(coeffs: Sequence) -> list[int] | None:
    fr = [as_cyclo(c).p for c in coeffs]
    den = 1
    for f in fr:
        den = den * f.denominator // math.gcd(den, f.denominator)
    return [int(f * den) for f in fr]


def _divisors(n: int) -> list[int]:
    n = abs(n)
    small, large = [], []
    d = 1
    while d * d <= n:
        if n % d == 0:
            small.append(d)
            if d * d != n:
                large.append(n // d)
        d += 1
    return small + large[::-1]


def check_fuchs_indices(poly: Sequence) -> FuchsReport:
    """Integer roots of ``poly`` (constant term first) by rational-root testing."""
    coeffs = [as_cyclo(c) for c in poly]
    while len(coeffs) > 1 and coeffs[-1].is_zero():
        coeffs.pop()
    if all(c.is_zero() for c in coeffs):
        raise ValueError("zero polynomial has no finite root set")
    # an integer root must annihilate both the rational and the w parts
    parts = [[c.p for c in coeffs], [c.q for c in coeffs]]
    part = next(pt for pt in parts if any(pt))
    ints = _integer_poly([CycloNumber(x) for x in part])
    while len(ints) > 1 and ints[-1] == 0:
        ints.pop()
    candidates = set()
    if ints[0] == 0:
        candidates.add(0)
    nz = next(i for i in ints if i != 0)
    for d in _divisors(nz):
        candidates.update((d, -d))
    roots = []
    mult = {}
    for r in sorted(candidates):
        if poly_eval(coeffs, CycloNumber(r)).is_zero():
            roots.append(r)
            m, q = 0, list(coeffs)
            while len(q) > 1 and poly_eval(q, CycloNumber(r)).is_zero():
                q = _deflate(q, r)
                m += 1
            mult[r] = m
    return FuchsReport(roots, any(r >= 0 for r in roots), mult)


def _deflate(coeffs: list, r: int) -> list:
    # synthetic division by (x - r)
    n = len(coeffs) - 1
    out = [ZERO] * n
    acc = ZERO
    for i in range(n, 0, -1):
        acc = acc * r + coeffs[i]
        out[i - 1] = acc
    return out


# -- Laurent expansion ----------------------------------------------------
def expand_laurent(
    ode: OdeInstance, residue, depth: int = DEFAULT_DEPTH, method: str = "incremental"
) -> LaurentSeries:
    """Laurent series of the solution with leading term ``residue/t``.

    Returns ``depth`` coefficients ``u_{-1}, ..., u_{depth-2}``.  Each
    ``u_j`` is read off from the coefficient of ``t**(j-3)`` of the
    residual, which is affine in ``u_j`` with slope ``c0 * P(j+1)`` where
    ``P`` is the indicial polynomial.

    ``method="incremental"`` evaluates only that one residual coefficient,
    reusing the finished coefficients of ``u**2``; ``method="full"``
    recomputes the whole truncated residual with :func:`ode_residual` at
    every step (cubic cost, kept as an independent cross-check).
    """
    if depth < 2:
        raise ValueError("depth must be at least 2")
    if method not in ("incremental", "full"):
        raise ValueError(f"unknown method {method!r}")
    residue = as_cyclo(residue)
    indicial = indicial_polynomial(ode, residue)
    fuchs = check_fuchs_indices(indicial)
    if any(r >= 1 for r in fuchs.integer_roots):
        # a resonance at j = r - 1 >= 0 leaves u_j undetermined
        raise PivotZero(f"nonnegative resonance in Fuchs indices {fuchs.integer_roots}")
    c0 = ode.c0
    coeffs = [residue]
    step = _IncrementalResidual(ode, residue) if method == "incremental" else None
    for j in range(0, depth - 1):
        pivot = c0 * poly_eval(indicial, CycloNumber(j + 1))
        if pivot.is_zero():
            raise PivotZero(f"zero pivot for u_{j}")
        if step is None:
            trial = LaurentSeries._raw(-1, coeffs + [ZERO], j + 1)
            rhs = ode_residual(trial, ode).coefficient(j - 3)
        else:
            rhs = step.tentative(j)
        uj = -rhs / pivot
        coeffs.append(uj)
        if step is not None:
            step.commit(j, uj)
    return LaurentSeries._raw(-1, coeffs, depth - 1)


class _IncrementalResidual:
    """Coefficient ``t**(j-3)`` of the residual with ``u_j`` still set to 0.

    ``U[e + 1]`` is the coefficient of ``t**e`` in u and ``sq[t + 2]`` that
    of ``u**2``; a square coefficient is stored once all its inputs exist.
    """

    def __init__(self, ode: OdeInstance, residue: CycloNumber):
        self.ode = ode
        self.U = [residue]
        self.sq = [residue * residue]  # t^-2
        self.pending = ZERO  # partial sum of sq_{j-1} without u_j

    def u(self, e: int) -> CycloNumber:
        i = e + 1
        return self.U[i] if 0 <= i < len(self.U) else ZERO

    def s(self, t: int) -> CycloNumber:
        return self.sq[t + 2]

    def tentative(self, j: int) -> CycloNumber:
        ode, e, u = self.ode, j - 3, self.u
        # sq_{j-1} without the two u_{-1} u_j cross terms
        self.pending = sum((u(i) * u(j - 1 - i) for i in range(0, j)), ZERO)
        sq = self.sq + [self.pending]
        quart = ZERO
        for s in range(-2, e + 3):
            quart += sq[s + 2] * sq[e - s + 2]
        uu1 = ZERO
        for i in range(-1, e + 3):
            k = e - i  # exponent in u'
            uu1 += u(i) * (u(k + 1) * (k + 1))
        total = 6 * quart + ode.c2 * uu1
        total += ode.c1 * (u(e + 2) * ((e + 1) * (e + 2)))
        total += ode.c4 * (u(e + 1) * (e + 1))
        if e >= -2:
            total += ode.c5 * sq[e + 2]
        total += ode.c6 * u(e)
        if e == 0:
            total += ode.c7
        return total

    def commit(self, j: int, uj: CycloNumber) -> None:
        self.U.append(uj)
        self.sq.append(self.pending + 2 * self.U[0] * uj)


# -- admissible monomials -------------------------------------------------
_DERIV_NAMES = ("u", "u'", "u''")


def dominant_monomials(max_degree: int) -> dict[int, list[tuple[int, int, int]]]:
    """Monomials ``u**i * u'**j * u''**k`` grouped by singularity degree.

    The singularity degree of ``u**i u'**j u''**k`` is ``i + 2j + 3k``; it is
    the pole order the monomial acquires on a simple-pole solution.
    """
    if max_degree < 0:
        raise ValueError("max_degree must be nonnegative")
    out: dict[int, list[tuple[int, int, int]]] = {d: [] for d in range(max_degree + 1)}
    for k in range(max_degree // 3 + 1):
        for j in range((max_degree - 3 * k) // 2 + 1):
            for i in range(max_degree - 3 * k - 2 * j + 1):
                out[i + 2 * j + 3 * k].append((i, j, k))
    for d in out:
        out[d].sort(key=lambda m: (-m[0], m[2], m[1]))
    return out


def monomial_name(exps: tuple[int, int, int]) -> str:
    parts = []
    for name, e in zip(_DERIV_NAMES, exps):
        if e == 1:
            parts.append(name)
        elif e > 1:
            parts.append(f"{name}^{e}")
    return "*".join(parts) if parts else "1"

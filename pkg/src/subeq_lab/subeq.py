"""First-order polynomial subequations F(u, u') = 0 of degree m in u'.

A subequation of degree ``m`` is a polynomial

    F(u, u') = sum_{k=0}^{m} sum_{j=0}^{2m-2k} a[j, k] * u**j * u'**k,

so every monomial has singularity degree ``j + 2k <= 2m``.  Its top-degree
part factors as a product of ``(r_i*u' + u**2)`` over the residues of the
Laurent branches it carries.  Fitting substitutes those Laurent series
into a template and solves the resulting linear equations for the free
coefficients exactly.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .cyclofield import ONE, ZERO, CycloNumber, as_cyclo, embed_complex, field_roots
from .laurent import DepthExhausted, LaurentSeries, OdeInstance, expand_laurent
from .linsolve import EchelonSystem

__all__ = [
    "DEFAULT_BRANCHES",
    "DEFAULT_EXTRA_ORDERS",
    "FitReport",
    "Subequation",
    "SubequationTemplate",
    "candidate_template",
    "distinct_series_count",
    "fit_subequation",
    "subeq_residual",
]

log = logging.getLogger(__name__)

DEFAULT_EXTRA_ORDERS = 4
# branch indices into ode.branches() = [a, w*a, w**2*a]; each template's
# leading part only admits these residues
DEFAULT_BRANCHES = {1: (0,), 2: (1, 2), 3: (0, 1, 2)}

Monomial = tuple[int, int]  # (power of u, power of u')


def monomial_label(jk: Monomial) -> str:
    j, k = jk
    parts = []
    if j:
        parts.append("u" if j == 1 else f"u^{j}")
    if k:
        parts.append("u'" if k == 1 else f"u'^{k}")
    return "*".join(parts) if parts else "1"


def _binomial_row(n: int) -> list[int]:
    return [math.comb(n, i) for i in range(n + 1)]


class Subequation:
    """Polynomial ``F(u, u')`` stored as ``{(j, k): coefficient}``."""

    def __init__(self, m: int, coeffs: Mapping[Monomial, object]):
        self.m = m
        self.coeffs = {
            (int(j), int(k)): as_cyclo(c) for (j, k), c in coeffs.items() if as_cyclo(c)
        }
        for j, k in self.coeffs:
            if k > m or j + 2 * k > 2 * m:
                raise ValueError(f"monomial {monomial_label((j, k))} exceeds degree {m}")
        if not self.coeffs.get((0, m)):
            raise ValueError("coefficient of u'^m must be nonzero")

    def __getitem__(self, jk: Monomial) -> CycloNumber:
        return self.coeffs.get(jk, ZERO)

    def __eq__(self, other):
        if not isinstance(other, Subequation):
            return NotImplemented
        return self.m == other.m and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.m, frozenset(self.coeffs.items())))

    def scale(self, c) -> Subequation:
        c = as_cyclo(c)
        return Subequation(self.m, {jk: v * c for jk, v in self.coeffs.items()})

    def normalized(self) -> Subequation:
        """Same equation scaled so that the ``u'^m`` coefficient is 1."""
        return self.scale(self[(0, self.m)].inverse())

    def shift(self, s) -> Subequation:
        """``F(v + s, v')`` as a polynomial in ``(v, v')``."""
        s = as_cyclo(s)
        out: dict[Monomial, CycloNumber] = {}
        for (j, k), c in self.coeffs.items():
            binom = _binomial_row(j)
            spow = ONE
            for i in range(j, -1, -1):  # term v**i * s**(j-i)
                key = (i, k)
                out[key] = out.get(key, ZERO) + c * binom[i] * spow
                spow = spow * s
        return Subequation(self.m, out)

    def leading_polynomial(self) -> list[CycloNumber]:
        """Coefficients (constant first) of ``F(r/t, -r/t**2) * t**(2m) / r**m``."""
        m = self.m
        poly = [ZERO] * (m + 1)
        for (j, k), c in self.coeffs.items():
            if j + 2 * k == 2 * m:
                # r**(j+k) * (-1)**k, and j + k = 2m - k
                poly[m - k] = poly[m - k] + (c if k % 2 == 0 else -c)
        return poly

    def evaluate(self, u, du):
        """Numerical value of ``F`` at complex ``u, u'``."""
        total = 0j
        for (j, k), c in self.coeffs.items():
            total += embed_complex(c) * u ** j * du ** k
        return total

    def term_magnitude(self, u, du) -> float:
        return max(abs(embed_complex(c) * u ** j * du ** k) for (j, k), c in self.coeffs.items())

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "terms": [
                {"monomial": monomial_label(jk), "j": jk[0], "k": jk[1], "coeff": str(c)}
                for jk, c in sorted(self.coeffs.items(), key=lambda t: _slot_key(t[0]))
            ],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> Subequation:
        return cls(int(data["m"]), {(t["j"], t["k"]): as_cyclo(t["coeff"]) for t in data["terms"]})

    def __str__(self):
        parts = []
        for jk, c in sorted(self.coeffs.items(), key=lambda t: _slot_key(t[0])):
            parts.append(f"({c})*{monomial_label(jk)}")
        return " + ".join(parts) + " = 0"

    def __repr__(self):
        return f"Subequation(m={self.m}, {self})"


def _slot_key(jk: Monomial):
    j, k = jk
    return (-(j + 2 * k), -k)


def subeq_residual(s: Subequation, u: LaurentSeries) -> LaurentSeries:
    """Truncated Laurent series of ``F(u, u')``."""
    du = u.diff()
    upow = [LaurentSeries.constant(ONE, u.order + 2 * s.m)]
    dpow = [LaurentSeries.constant(ONE, u.order + 2 * s.m)]
    maxj = max(j for j, _ in s.coeffs)
    maxk = max(k for _, k in s.coeffs)
    for _ in range(maxj):
        upow.append(upow[-1] * u)
    for _ in range(maxk):
        dpow.append(dpow[-1] * du)
    total = None
    for (j, k), c in s.coeffs.items():
        term = (upow[j] * dpow[k]).scale(c)
        total = term if total is None else total + term
    if total.order <= -2 * s.m:
        raise DepthExhausted("series too short to evaluate the subequation")
    return total


# -- templates --------------------------------------------------------------
@dataclass(frozen=True)
class SubequationTemplate:
    m: int
    fixed: dict  # monomial -> CycloNumber
    unknowns: tuple  # ordered monomials

    @property
    def labels(self) -> list[str]:
        return [monomial_label(jk) for jk in self.unknowns]

    def instantiate(self, values: Sequence) -> Subequation:
        coeffs = dict(self.fixed)
        for jk, v in zip(self.unknowns, values):
            coeffs[jk] = coeffs.get(jk, ZERO) + as_cyclo(v)
        return Subequation(self.m, coeffs)


def candidate_template(m: int, ode: OdeInstance) -> SubequationTemplate:
    """Template with the top-degree part fixed and every other slot unknown.

    * ``m = 1``: ``a*u' + u**2 + ...``
    * ``m = 2``: ``a**2*u'**2 - a*u**2*u' + u**4 + ...``
    * ``m = 3``: ``-a**3*u'**3 - u**6 + ...``; the two remaining top-degree
      slots ``u**4*u'`` and ``u**2*u'**2`` stay unknown and come out zero.
    """
    a = ode.a
    if m == 1:
        fixed = {(0, 1): a, (2, 0): ONE}
    elif m == 2:
        fixed = {(0, 2): a * a, (2, 1): -a, (4, 0): ONE}
    elif m == 3:
        fixed = {(0, 3): -(a ** 3), (6, 0): -ONE}
    else:
        raise ValueError(f"unsupported subequation degree {m}")
    slots = [
        (j, k)
        for k in range(m + 1)
        for j in range(2 * m - 2 * k + 1)
        if (j, k) not in fixed and not (j + 2 * k == 2 * m and m < 3)
    ]
    slots.sort(key=_slot_key)
    return SubequationTemplate(m, fixed, tuple(slots))


# -- fitting ------------------------------------------------------------------
@dataclass
class FitReport:
    status: str  # fitted | infeasible | underdetermined | reducible
    m: int
    branches: tuple
    subequation: Subequation | None = None
    orders_checked: int = 0
    violated_order: int | None = None
    unknowns: list = field(default_factory=list)
    free_unknowns: list = field(default_factory=list)
    notes: list = field(default_factory=list)

    @property
    def fitted(self) -> bool:
        return self.status == "fitted"

    def coefficient_table(self) -> dict[str, CycloNumber]:
        if self.subequation is None:
            return {}
        return {monomial_label(jk): c for jk, c in self.subequation.coeffs.items()}

    def to_json(self) -> dict:
        return {
            "status": self.status,
            "degree": self.m,
            "branches": list(self.branches),
            "orders_checked": self.orders_checked,
            "violated_order": self.violated_order,
            "subequation": None if self.subequation is None else self.subequation.to_json(),
            "free_unknowns": list(self.free_unknowns),
            "notes": list(self.notes),
        }


def _monomial_series(u: LaurentSeries, monomials, order: int) -> dict:
    du = u.diff()
    maxj = max(j for j, _ in monomials)
    maxk = max(k for _, k in monomials)
    base = u.order + 2 * maxk + maxj
    upow = [LaurentSeries.constant(ONE, base)]
    dpow = [LaurentSeries.constant(ONE, base)]
    for _ in range(maxj):
        upow.append((upow[-1] * u).truncate(order + 2 * maxk))
    for _ in range(maxk):
        dpow.append((dpow[-1] * du).truncate(order + maxj))
    return {jk: (upow[jk[0]] * dpow[jk[1]]).truncate(order) for jk in monomials}


def fit_subequation(
    ode: OdeInstance,
    m: int,
    branches: Sequence[int] | None = None,
    extra_orders: int = DEFAULT_EXTRA_ORDERS,
    depth: int | None = None,
) -> FitReport:
    """Fit the degree-``m`` template to the Laurent branches ``branches``.

    ``branches`` index ``ode.branches()`` (0: ``a``, 1: ``w*a``, 2: ``w**2*a``).
    Equations are the coefficients ``F_j`` of ``t**(j - 2m)`` for
    ``j = 0 .. 2m + extra_orders``, stacked over the branches order by order.
    """
    template = candidate_template(m, ode)
    if branches is None:
        branches = DEFAULT_BRANCHES[m]
    branches = tuple(sorted(set(int(b) for b in branches)))
    if len(branches) != m or any(b not in (0, 1, 2) for b in branches):
        raise ValueError(f"a degree-{m} subequation needs {m} distinct branches out of 0, 1, 2")
    last = 2 * m + extra_orders  # highest j checked
    depth = depth or last + 2 * m + 2
    residues = ode.branches()
    series = [expand_laurent(ode, residues[b], depth) for b in branches]
    top = last - 2 * m + 1  # F known to O(t**top) is enough
    monomials = list(template.unknowns) + list(template.fixed)
    per_branch = [_monomial_series(u, monomials, top) for u in series]

    system = EchelonSystem(len(template.unknowns))
    violated = None
    for j in range(last + 1):
        e = j - 2 * m
        for mono in per_branch:
            row = [mono[jk].coefficient(e) for jk in template.unknowns]
            rhs = ZERO
            for jk, c in template.fixed.items():
                rhs -= c * mono[jk].coefficient(e)
            if not system.add(row, rhs) and violated is None:
                violated = j
        if violated is not None:
            break
    report = FitReport(
        status="infeasible",
        m=m,
        branches=branches,
        orders_checked=(violated + 1) if violated is not None else last + 1,
        violated_order=violated,
        unknowns=template.labels,
    )
    if violated is not None:
        return report
    sol = system.solution()
    if sol is None:
        report.status = "underdetermined"
        report.free_unknowns = [template.labels[i] for i in system.free_columns()]
        return report
    s = template.instantiate(sol)
    report.subequation = s
    report.status = "fitted"
    count = distinct_series_count(s)
    if count != m:
        report.status = "reducible"
        report.notes.append(f"subequation carries {count} distinct Laurent series, expected {m}")
    elif m > 1:
        factor = _linear_factor(s, [residues[b] for b in branches], depth)
        if factor is not None:
            report.status = "reducible"
            report.notes.append(f"divisible by the first-degree factor {factor}")
    return report


def _linear_factor(s: Subequation, residues, depth: int) -> Subequation | None:
    """A factor ``r*u' + u**2 + b1*u + b0`` of ``s`` carried by one branch."""
    for r in residues:
        u = _subeq_series(s, r, depth)
        if u is None:
            continue
        # fit b1, b0 so that r*u' + u**2 + b1*u + b0 vanishes on this series
        g = (u.diff().scale(r) + u * u).truncate(1)
        b1 = -g.coefficient(-1) / r
        b0 = -(g.coefficient(0) + b1 * u.coefficient(0))
        # u' = -(u**2 + b1*u + b0)/r on the factor; F must vanish identically
        if _vanishes_on_riccati(s, r, b1, b0):
            return Subequation(1, {(0, 1): r, (2, 0): ONE, (1, 0): b1, (0, 0): b0})
    return None


def _vanishes_on_riccati(s: Subequation, r, b1, b0) -> bool:
    # substitute u' = q(u) = -(u**2 + b1*u + b0)/r and expand in u
    q = [-b0 / r, -b1 / r, -ONE / r]
    maxk = max(k for _, k in s.coeffs)
    qpow = [[ONE]]
    for _ in range(maxk):
        prev = qpow[-1]
        nxt = [ZERO] * (len(prev) + 2)
        for i, x in enumerate(prev):
            for jj, y in enumerate(q):
                nxt[i + jj] += x * y
        qpow.append(nxt)
    total: dict[int, CycloNumber] = {}
    for (j, k), c in s.coeffs.items():
        for i, x in enumerate(qpow[k]):
            total[j + i] = total.get(j + i, ZERO) + c * x
    return all(not v for v in total.values())


def _subeq_series(s: Subequation, r, depth: int) -> LaurentSeries | None:
    """Laurent series ``r/t + ...`` solving ``s``; None if the branch breaks.

    Coefficients enter the ``t**(j + 1 - 2m)`` coefficient of ``F`` affinely
    (or not at all, at a resonance, where a zero value is chosen).
    """
    r = as_cyclo(r)
    coeffs = [r]
    m = s.m
    for j in range(0, depth - 1):
        e = j + 1 - 2 * m
        vals = []
        for trial in (ZERO, ONE):
            u = LaurentSeries(-1, coeffs + [trial], j + 1)
            try:
                vals.append(subeq_residual(s, u).coefficient(e))
            except DepthExhausted:
                return None
        slope = vals[1] - vals[0]
        if slope:
            coeffs.append(-vals[0] / slope)
        elif vals[0]:
            return None
        else:
            coeffs.append(ZERO)
    return LaurentSeries(-1, coeffs, depth - 1)


def distinct_series_count(s: Subequation, depth: int = 12) -> int:
    """Number of distinct simple-pole Laurent branches admitted by ``s``."""
    lead = s.leading_polynomial()
    if not any(lead):
        raise ValueError("non-simple leading balance: top-degree part vanishes on u ~ r/t")
    roots = field_roots(lead)
    distinct = []
    for r in roots:
        if isinstance(r, complex):
            log.warning("leading residue %s not in Q(w); counted without extension check", r)
            if all(abs(r - embed_complex(x) if isinstance(x, CycloNumber) else r - x) > 1e-9
                   for x in distinct) and abs(r) > 1e-12:
                distinct.append(r)
            continue
        if not r or r in distinct:
            continue
        if _subeq_series(s, r, depth) is not None:
            distinct.append(r)
    return len(distinct)

"""Construction of closed forms for each family.

Where a formula involves a square root or a choice among candidate
normalizations, every candidate is built and checked with
:func:`verify_numeric`; the first passing one is kept and the outcome of
all of them is written to ``ClosedForm.notes``.
"""
from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass

from numpy.polynomial import Polynomial

from ..cyclofield import OMEGA, ZERO, CycloNumber, as_cyclo, embed_complex, field_roots
from ..laurent import OdeInstance
from ..subeq import FitReport
from .closed_forms import (
    ClosedForm,
    EllipticBB,
    EllipticBinomial,
    ExpRational,
    RationalForm,
)
from .families import FAMILY_DEGREE, FamilyMatch, _params, canonical_subequation, classify_family
from .jets import Jet
from .verify import sample_points, verify_numeric

log = logging.getLogger(__name__)

__all__ = [
    "DegenerateParameter",
    "NoRoot",
    "RiccatiChain",
    "build_closed_form",
    "s2a_chain",
    "s3a_A_candidates",
    "s3a_g3_candidates",
]


class NoRoot(ValueError):
    """The cubic defining e0 has no usable root."""


class DegenerateParameter(ValueError):
    """Family parameters fall on an excluded value."""


def _cx(x) -> complex:
    return embed_complex(x) if isinstance(x, CycloNumber) else complex(x)


def _select(candidates, ode, s, tol, points, seed) -> ClosedForm:
    """First candidate passing verification; all outcomes go to the notes."""
    if not candidates:
        raise DegenerateParameter("no admissible parameter choice")
    results = []
    for label, cf in candidates:
        rep = verify_numeric(cf, ode, s, sample_points(cf, points, seed), tol)
        worst = max(rep.max_rel_ode_residual, rep.max_rel_subeq_residual)
        results.append((label, cf, rep.passed, worst))
    lines = [f"candidate {label}: residual {worst:.2e} {'pass' if ok else 'fail'}"
             for label, _, ok, worst in results]
    passing = [r for r in results if r[2]]
    label, cf, _, _ = passing[0] if passing else min(results, key=lambda r: r[3])
    cf.selection = label
    cf.notes = lines + ([] if passing else ["no candidate passed verification"])
    return cf


# -- S1 ----------------------------------------------------------------------
S1_NORMALIZATIONS = (
    ("k^2 = (b1^2 - 4 b0)/(2 a^2)", 2),
    ("k^2 = (b1^2 - 4 b0)/a^2", 1),
)


def _s1(ode, params, z0, s, tol, points, seed):
    a = ode.a
    b1, b0 = params["b1"], params["b0"]
    disc = b1 * b1 - 4 * b0
    if not disc:
        cf = RationalForm(z0, poles=[z0], residues=[a], C=-b1 / 2, selection="rational")
        cf.notes.append("b1^2 - 4 b0 = 0: rational branch")
        return cf
    candidates = []
    for label, div in S1_NORMALIZATIONS:
        k = cmath.sqrt(_cx(disc / (div * a * a)))
        ak = _cx(a) * k
        # a (k/2) coth(k t/2) = a k/2 + a k/(exp(k t) - 1)
        cf = ExpRational(z0, k=k, pole_data=[(ak, 1 + 0j)], C=_cx(-b1 / 2) + ak / 2)
        candidates.append((label, cf))
    return _select(candidates, ode, s, tol, points, seed)


# -- degree two ----------------------------------------------------------------
def _degenerate_exp(a, b, shift, z0) -> ExpRational:
    """``u = shift - b + 2b/w``, ``w = 1 + 3 (1 + exp(b (z - z0)/(2a)))**2``."""
    k = _cx(b / (2 * a))
    # 3 Y^2 + 6 Y + 4 = 3 (Y - Zp)(Y - Zm)
    zp = complex(-1, 1 / math.sqrt(3))
    zm = zp.conjugate()
    r = 2 * _cx(b) / (3 * (zp - zm))
    return ExpRational(z0, k=k, pole_data=[(r, zp), (-r, zm)], C=_cx(shift - b))


def _place_branch(cf: ExpRational, a, branch: int | None) -> ExpRational:
    """Move the pole with residue ``w**branch * a`` to ``z0``."""
    if branch is None:
        return cf
    target = _cx(a * OMEGA ** branch)
    res = cf.pole_residues()
    i = min(range(len(res)), key=lambda j: abs(res[j] - target))
    if abs(res[i] - target) > 1e-8 * (1 + abs(target)):
        raise DegenerateParameter(f"no pole with residue w^{branch} a")
    out = cf.recentered(i)
    out.z0 = cf.z0
    return out


@dataclass
class RiccatiChain:
    """The point transformation v = k1 + 2/w, w = w(lambda), lambda Riccati.

    With the literature constants c, N, M and alpha the numerator of the first
    step must be 2; with numerator 1 no Riccati equation for lambda exists.
    ``lam`` is the Mobius function ``(p + q y)/(r + s y)`` of ``y``, where
    ``y = exp(mu t)`` or ``y = t`` when the Riccati has a double root.
    """

    a: complex
    k1: complex
    bsq: complex
    N: complex
    M: complex
    mobius: tuple
    mu: complex | None
    z0: complex = 0j

    @property
    def cterm(self) -> complex:
        return -2 * self.k1 / (self.k1 ** 2 - self.bsq)

    def v_jet(self, z: complex, order: int = 3) -> Jet:
        t = Jet.variable(complex(z) - self.z0, order)
        y = (t * self.mu).exp() if self.mu is not None else t
        p, q, r, s = self.mobius
        lam = (y * q + p) / (y * s + r)
        w = self.cterm + self.N * (lam - 1 / lam)
        return self.k1 + 2 / w

    def riccati_residual(self, z: complex) -> float:
        """Relative residual of ``a N lam' - M lam - alpha (lam^2 + 1)``."""
        t = Jet.variable(complex(z) - self.z0, 1)
        y = (t * self.mu).exp() if self.mu is not None else t
        p, q, r, s = self.mobius
        lam = (y * q + p) / (y * s + r)
        alpha = self.bsq / (4 * (self.k1 ** 2 - self.bsq))
        lv, dl = lam.c[0], lam.c[1]
        terms = [self.a * self.N * dl, -self.M * lv, -alpha * (lv * lv + 1)]
        return abs(sum(terms)) / max(abs(x) for x in terms)

    def to_closed_form(self) -> ClosedForm:
        """Partial fractions of ``u = v - k1/2`` in ``y``."""
        p, q, r, s = self.mobius
        L = Polynomial([p, q])
        R = Polynomial([r, s])
        num = 2 * L * R
        den = self.cterm * L * R + self.N * (L * L - R * R)
        den = den.trim(tol=0)
        if den.degree() < 2 or abs(den.coef[-1]) < 1e-12 * max(abs(den.coef)):
            raise DegenerateParameter("Mobius chain degenerates (pole at infinity)")
        roots = den.roots()
        dden = den.deriv()
        lead = num.coef[2] if len(num.coef) > 2 else 0
        C = self.k1 / 2 + lead / den.coef[-1]
        res = [num(zr) / dden(zr) for zr in roots]
        if self.mu is None:
            return RationalForm(self.z0, poles=[self.z0 + zr for zr in roots], residues=res, C=C)
        return ExpRational(self.z0, k=self.mu, pole_data=list(zip(res, roots)), C=C)


def s2a_chain(a, k1, bsq, N, M, pole_root: int, z0=0j) -> RiccatiChain:
    """Chain with ``u`` having a pole at ``z0``; ``pole_root`` picks lambda there."""
    a, k1, bsq = _cx(a), _cx(k1), _cx(bsq)
    D = k1 * k1 - bsq
    alpha = bsq / (4 * D)
    kappa = alpha / (a * N)
    beta = 2 * k1 / (N * D)
    # w = 0 at lambda_p: lambda^2 - beta lambda - 1 = 0
    sq = cmath.sqrt(beta * beta + 4)
    lam_p = (beta + sq) / 2 if pole_root == 0 else (beta - sq) / 2
    disc = (M / alpha) ** 2 - 4
    if abs(disc) < 1e-12:
        lam0 = -M / (2 * alpha)
        t1 = 1 / (kappa * (lam_p - lam0))
        mobius = (-lam0 * kappa * t1 - 1, lam0 * kappa, -kappa * t1, kappa)
        return RiccatiChain(a, k1, bsq, N, M, mobius, None, complex(z0))
    rd = cmath.sqrt(disc)
    lp = (-M / alpha + rd) / 2
    lm = (-M / alpha - rd) / 2
    c0 = (lam_p - lp) / (lam_p - lm)
    mu = kappa * (lp - lm)
    return RiccatiChain(a, k1, bsq, N, M, (lp, -lm * c0, 1, -c0), mu, complex(z0))


def _s2a(ode, params, z0, s, tol, points, seed, branch):
    a = ode.a
    k1, bsq = params["k1"], params["bsq"]
    if not bsq:
        raise DegenerateParameter("b = 0 is excluded in S2A")
    if bsq == k1 * k1:
        # k1 = -b after fixing the sign of b
        cf = _degenerate_exp(a, -k1, -k1 / 2, z0)
        cf = _place_branch(cf, a, branch)
        return _select([("k1^2 = b^2, b = -k1", cf)], ode, s, tol, points, seed)
    D = _cx(k1 * k1 - bsq)
    n0 = cmath.sqrt(-_cx(bsq)) / D
    m0 = cmath.sqrt(3 * _cx(bsq) / (4 * D))
    target = _cx(a * OMEGA ** (branch if branch is not None else 1))
    candidates = []
    for sn in (1, -1):
        for sm in (1, -1):
            for root in (0, 1):
                chain = s2a_chain(a, k1, bsq, sn * n0, sm * m0, root, z0)
                cf = chain.to_closed_form()
                # keep the lambda root whose pole at z0 has the requested residue
                if isinstance(cf, ExpRational):
                    res = [r for (r, Z), rr in zip(cf.pole_data, cf.pole_residues())
                           if abs(Z - 1) < 1e-9 for r in [rr]]
                else:
                    res = [r for p, r in zip(cf.poles, cf.residues) if abs(p - complex(z0)) < 1e-9]
                if not res or abs(res[0] - target) > 1e-6 * (1 + abs(target)):
                    continue
                sign = lambda x: "+" if x > 0 else "-"
                candidates.append((f"N {sign(sn)}, M {sign(sm)}", cf))
    return _select(candidates, ode, s, tol, points, seed)


def _s2b(ode, params, z0, s, tol, points, seed, branch):
    a, b = ode.a, params["b"]
    if not b:
        raise DegenerateParameter("b = 0 is excluded in S2B")
    shift = b / 4 + ode.c1 / (12 * a * a)
    cf = _place_branch(_degenerate_exp(a, b, shift, z0), a, branch)
    return _select([("w = 1 + 3 (1 + exp(b t/(2a)))^2", cf)], ode, s, tol, points, seed)


# -- degree three ---------------------------------------------------------------
def _cubic_roots(poly, e0, numeric_fallback: bool):
    if e0 is not None:
        e0 = as_cyclo(e0)
        acc = ZERO
        for c in reversed(poly):
            acc = acc * e0 + c
        if acc:
            raise ValueError(f"e0 = {e0} is not a root of the defining cubic")
        return [e0]
    roots = field_roots(poly)
    exact = list(dict.fromkeys(r for r in roots if isinstance(r, CycloNumber)))
    if exact:
        return exact
    if not numeric_fallback:
        raise NoRoot("the cubic in e0 has no root in Q(w) and numeric fallback is off")
    # drop rounding noise in the imaginary part of real roots
    roots = [complex(z.real, 0.0) if abs(z.imag) < 1e-13 * (1 + abs(z)) else complex(z)
             for z in roots]
    return sorted(roots, key=lambda z: (round(z.real, 12), round(z.imag, 12)))


# literature value first; 27 is what substitution into the subequation gives
S3B_G3_DENOMINATORS = (("g3 = (...)/(243 a^6)", 243), ("g3 = (...)/(27 a^6)", 27))


def _s3b(ode, params, z0, s, tol, points, seed, e0, numeric_fallback):
    a = ode.a
    k5sq, k6 = params["k5sq"], params["k6"]
    roots = _cubic_roots([k6, -3 * k5sq, ZERO, as_cyclo(1)], e0, numeric_fallback)
    candidates = []
    skipped = []
    for r in roots:
        exact = isinstance(r, CycloNumber)
        if (r * r == k5sq) if exact else abs(r * r - _cx(k5sq)) < 1e-12:
            skipped.append(f"e0 = {r} skipped: e0^2 = k5^2 makes N1 vanish")
            continue
        A3 = a ** 3 if exact else _cx(a) ** 3
        k5 = k5sq if exact else _cx(k5sq)
        d = r * r - k5
        top = d * d * (r * r - 4 * k5)
        for label, den in S3B_G3_DENOMINATORS:
            cf = EllipticBinomial(
                z0, a=a, e0=r, k5sq=k5sq, g2=ZERO if exact else 0j,
                g3=top / (den * A3 * A3), N1=2 * d * d / (3 * A3), A=r * d / (3 * A3),
            )
            candidates.append((f"e0 = {r}, {label}", cf))
    if not candidates:
        raise DegenerateParameter("; ".join(skipped) or "no admissible e0")
    cf = _select(candidates, ode, s, tol, points, seed)
    cf.notes[:0] = skipped
    return cf


def s3a_g3_candidates(a, k1, e0) -> list[tuple[str, object]]:
    """The literature value of g3 and the two signs consistent with the discriminant."""
    top = e0 ** 6 - 20 * e0 ** 3 * k1 ** 3 - 8 * k1 ** 6
    return [
        ("g3 = (...)/(17 a^6)", top / (17 * a ** 6)),
        ("g3 = (...)/(27 a^6)", top / (27 * a ** 6)),
        ("g3 = -(...)/(27 a^6)", -top / (27 * a ** 6)),
    ]


def s3a_A_candidates(a, k1, e0) -> list[tuple[str, object]]:
    """The literature A and the value the Weierstrass reduction of the w-equation gives."""
    A = -(e0 ** 3 + 8 * k1 ** 3) / (3 * a * a)
    return [("A = -(e0^3 + 8 k1^3)/(3 a^2)", A), ("A = -(e0^3 + 8 k1^3)/(3 a^2 e0)", A / e0)]


def _s3a(ode, params, z0, s, tol, points, seed, e0, numeric_fallback):
    a = ode.a
    k1, k6 = params["k1"], params["k6"]
    roots = _cubic_roots([20 * k1 ** 3 + k6, ZERO, ZERO, as_cyclo(1)], e0, numeric_fallback)
    candidates = []
    skipped = []
    for r in roots:
        exact = isinstance(r, CycloNumber)
        A_ = a if exact else _cx(a)
        K = k1 if exact else _cx(k1)
        e3 = r ** 3
        if (not r or e3 == -8 * K ** 3) if exact else (abs(r) < 1e-12 or abs(e3 + 8 * K ** 3) < 1e-12):
            skipped.append(f"e0 = {r} skipped: e0 = 0 or e0^3 = -8 k1^3")
            continue
        g2 = 4 * K * (K ** 3 - e3) / (3 * A_ ** 4)
        for alabel, Aval in s3a_A_candidates(A_, K, r):
            for glabel, g3 in s3a_g3_candidates(A_, K, r):
                cf = EllipticBB(z0, a=a, k1=k1, e0=r, g2=g2, g3=g3, A=Aval,
                                B=-K * K / (A_ * A_))
                candidates.append((f"e0 = {r}, {alabel}, {glabel}", cf))
    if not candidates:
        raise DegenerateParameter("; ".join(skipped) or "no admissible e0")
    cf = _select(candidates, ode, s, tol, points, seed)
    cf.notes[:0] = skipped
    return cf


# -- entry point ----------------------------------------------------------------
def build_closed_form(
    ode: OdeInstance,
    family: FamilyMatch | str | None = None,
    fit: FitReport | None = None,
    *,
    e0=None,
    z0: complex = 0j,
    branch: int | None = None,
    numeric_fallback: bool = True,
    tol: float = 1e-9,
    points: int = 20,
    seed: int = 1,
) -> ClosedForm:
    """Closed-form solution of ``ode`` in the given (or detected) family.

    ``e0`` optionally fixes the root of the family cubic exactly (degree 3).
    ``branch`` (degree 2) selects which residue ``w**branch * a`` sits at a
    pole placed at ``z0``; by default S2A puts ``w a`` there and S2B uses
    the literature normalization of ``z0``.
    """
    if isinstance(family, FamilyMatch):
        order = [family]
    else:
        match = classify_family(ode)
        if family is not None:
            if family not in match.matches:
                raise ValueError(f"instance is not in family {family}")
            order = [FamilyMatch(family, _family_params(ode, family), match.matches)]
        elif match.family is None:
            raise ValueError("instance matches no family")
        else:
            # the selected family first, then the other matches as fallbacks
            rest = [f for f in match.matches if f != match.family]
            order = [match] + [FamilyMatch(f, _family_params(ode, f), match.matches) for f in rest]
    skipped = []
    for i, m in enumerate(order):
        try:
            cf = _build_one(ode, m, fit, e0, complex(z0), branch, numeric_fallback,
                            tol, points, seed)
        except (DegenerateParameter, NoRoot) as exc:
            if i == len(order) - 1:
                raise
            skipped.append(f"{m.family} skipped: {exc}")
            continue
        cf.notes[1:1] = skipped
        log.info("built %s for %s: %s", cf.kind, m.family, cf.selection)
        return cf
    raise DegenerateParameter("no family could be integrated")  # pragma: no cover


def _build_one(ode, match, fit, e0, z0, branch, numeric_fallback, tol, points, seed):
    fam = match.family
    s = canonical_subequation(ode, fam, match.params)
    fit_note = None
    if fit is not None and fit.fitted and fit.m == FAMILY_DEGREE[fam]:
        same = fit.subequation.normalized() == s.normalized()
        fit_note = (f"fitted degree-{fit.m} subequation "
                    f"{'equals' if same else 'differs from'} the family form")
        s = fit.subequation
    args = (ode, match.params, z0, s, tol, points, seed)
    if fam == "S1":
        cf = _s1(*args)
    elif fam == "S2A":
        cf = _s2a(*args, branch)
    elif fam == "S2B":
        cf = _s2b(*args, branch)
    elif fam == "S3b":
        cf = _s3b(*args, e0, numeric_fallback)
    else:
        cf = _s3a(*args, e0, numeric_fallback)
    cf.notes.insert(0, f"family {fam}")
    if fit_note:
        cf.notes.append(fit_note)
    return cf


def _family_params(ode, family):
    return _params(ode, family)


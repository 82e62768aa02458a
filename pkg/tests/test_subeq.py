from fractions import Fraction
from itertools import permutations

import pytest

from subeq_lab.cyclofield import ONE, ZERO, as_cyclo
from subeq_lab.laurent import LaurentSeries, OdeInstance, expand_laurent
from subeq_lab.solutions import s1_instance, s2a_from_params, s2b_instance, s3a_instance, s3b_instance
from subeq_lab.subeq import (
    FitReport,
    Subequation,
    candidate_template,
    distinct_series_count,
    fit_subequation,
    subeq_residual,
)

from conftest import random_instance

H = Fraction(1, 2)


def sub(m, **terms):
    """Subequation from keywords like ``u2_d0=1`` meaning u**2 * u'**0."""
    coeffs = {}
    for key, c in terms.items():
        j, k = key[1:].split("_d")
        coeffs[(int(j), int(k))] = c
    return Subequation(m, coeffs)


def test_template_unknown_counts():
    o = OdeInstance(as_cyclo(2))
    assert len(candidate_template(1, o).unknowns) == 2
    assert len(candidate_template(2, o).unknowns) == 6
    assert len(candidate_template(3, o).unknowns) == 14
    t1 = candidate_template(1, o)
    assert t1.fixed == {(0, 1): as_cyclo(2), (2, 0): ONE}
    assert set(t1.unknowns) == {(1, 0), (0, 0)}
    with pytest.raises(ValueError):
        candidate_template(4, o)


def test_template_degree_two_leading_part():
    t = candidate_template(2, OdeInstance(as_cyclo(3)))
    assert t.fixed == {(0, 2): as_cyclo(9), (2, 1): as_cyclo(-3), (4, 0): ONE}
    assert set(t.unknowns) == {(1, 1), (3, 0), (0, 1), (2, 0), (1, 0), (0, 0)}


def test_subequation_rejects_bad_monomials():
    with pytest.raises(ValueError):
        Subequation(1, {(0, 1): 1, (3, 0): 1})
    with pytest.raises(ValueError):
        Subequation(2, {(2, 0): 1})


def test_residual_examples():
    s = sub(1, u0_d1=1, u2_d0=1)
    assert subeq_residual(s, LaurentSeries(-1, [ONE], order=6)).is_zero()
    r = subeq_residual(s, LaurentSeries(-1, [as_cyclo(2)], order=6))
    assert r.lead == -2 and r.coefficient(-2) == as_cyclo(2)


def test_s3b_fit_is_the_binomial_form():
    o = OdeInstance(as_cyclo(1), c5=-16, c7=2)
    rep = fit_subequation(o, 3)
    assert rep.fitted and rep.violated_order is None
    # (u')^3 + (u^3 - 3u)^2
    expected = sub(3, u0_d3=1, u6_d0=1, u4_d0=-6, u2_d0=9)
    assert rep.subequation.normalized() == expected
    assert distinct_series_count(rep.subequation) == 3


def test_generic_instance_is_infeasible():
    o = OdeInstance(as_cyclo(1), c1=1, c2=1, c4=1, c5=1, c6=1, c7=1)
    for m in (1, 2, 3):
        rep = fit_subequation(o, m)
        assert rep.status == "infeasible" and rep.violated_order is not None


def test_s1_trivial_fit():
    o = s1_instance(1, 0, 0, 0, 0)
    assert o == OdeInstance(as_cyclo(1))
    rep = fit_subequation(OdeInstance(as_cyclo(1)), 1)
    assert rep.fitted
    assert rep.subequation.normalized() == sub(1, u0_d1=1, u2_d0=1)


@pytest.mark.parametrize("a", [1, 2, Fraction(1, 2), -1])
def test_s1_fit_matches_closed_formulas(a):
    c1, c2, c4, c5 = Fraction(3), Fraction(-1, 2), Fraction(2), Fraction(5, 7)
    o = s1_instance(a, c1, c2, c4, c5)
    rep = fit_subequation(o, 1)
    assert rep.fitted
    s = rep.subequation.scale(as_cyclo(a) / rep.subequation[(0, 1)])
    b1 = (2 * c1 - a * c2) / (12 * a * a)
    b0 = (44 * c1 ** 2 - 32 * a * c1 * c2 + 5 * a * a * c2 ** 2 - 144 * a ** 3 * c4
          + 144 * a ** 4 * c5) / (1152 * a ** 4)
    assert s[(2, 0)] == ONE and s[(1, 0)] == as_cyclo(b1) and s[(0, 0)] == as_cyclo(b0)


def test_fit_is_independent_of_branch_order():
    o = s3b_instance(2, Fraction(1, 3), Fraction(-2, 5))
    fits = {fit_subequation(o, 3, list(p)).subequation for p in permutations(range(3))}
    assert len(fits) == 1
    o = s2a_from_params(1, Fraction(1, 3), Fraction(5, 4))
    assert fit_subequation(o, 2, [1, 2]).subequation == fit_subequation(o, 2, [2, 1]).subequation


@pytest.mark.parametrize("o, m", [
    (s3b_instance(1, 1, 0), 3),
    (s3a_instance(1, 1, 3), 3),
    (s2a_from_params(2, Fraction(1, 3), Fraction(5, 4)), 2),
    (s2b_instance(1, 2, 3), 2),
    (s1_instance(2, 1, 2, 3, 4), 1),
])
def test_fitted_residual_vanishes_beyond_fitting_orders(o, m):
    rep = fit_subequation(o, m)
    assert rep.fitted
    for b in rep.branches:
        u = expand_laurent(o, o.branches()[b], 40)
        assert subeq_residual(rep.subequation, u).is_zero()


def test_s2a_fit_shifts_to_canonical_form():
    a, k1, bsq = as_cyclo(2), as_cyclo(Fraction(1, 3)), as_cyclo(Fraction(5, 4))
    rep = fit_subequation(s2a_from_params(a, k1, bsq), 2)
    # (a v' - (v^2 - b^2)/2)^2 + 3/4 (v^2 - b^2)(v - k1)^2, expanded
    canonical = {
        (0, 2): a * a, (2, 1): -a, (0, 1): a * bsq,
        (4, 0): as_cyclo(1) / 4 + Fraction(3, 4), (2, 0): -bsq / 2 + Fraction(3, 4) * (k1 * k1 - bsq),
        (0, 0): bsq * bsq / 4 - Fraction(3, 4) * bsq * k1 * k1,
        (3, 0): Fraction(3, 4) * (-2 * k1), (1, 0): Fraction(3, 4) * (2 * k1 * bsq),
    }
    expected = Subequation(2, canonical).normalized()
    assert rep.subequation.shift(-k1 / 2).normalized() == expected


def test_distinct_series_counts():
    assert distinct_series_count(sub(1, u0_d1=1, u2_d0=1)) == 1
    o = s2a_from_params(1, Fraction(1, 3), Fraction(5, 4))
    assert distinct_series_count(fit_subequation(o, 2).subequation) == 2


def test_unsupported_requests():
    o = OdeInstance(as_cyclo(1))
    with pytest.raises(ValueError):
        fit_subequation(o, 4)
    with pytest.raises(ValueError):
        fit_subequation(o, 2, [0])


def test_unforced_equation_fits_are_reducible():
    o = OdeInstance(as_cyclo(1))
    assert fit_subequation(o, 1).fitted
    # u' + u**2 divides the degree 2 and 3 solutions of u''' + 6 u**4 = 0
    assert fit_subequation(o, 2).status == "reducible"
    assert fit_subequation(o, 3).status == "reducible"


def test_random_perturbations_break_degree_three(rng):
    bases = [s3b_instance(1, 1, 0), s3a_instance(1, 1, 3), s3b_instance(2, Fraction(1, 4), 1)]
    # c6 = 4 k6 is free in both degree-3 families, so it is left alone here
    names = ("c1", "c2", "c4", "c5", "c7")
    for i in range(100):
        base = bases[i % len(bases)]
        name = rng.choice(names)
        delta = Fraction(rng.choice([-1, 1]) * rng.randint(1, 9), rng.randint(1, 5))
        o = base.replace(**{name: getattr(base, name) + delta})
        rep = fit_subequation(o, 3)
        assert not rep.fitted, (i, name, delta)


def test_c6_is_free_in_degree_three_families():
    for base in (s3b_instance(1, 1, 0), s3a_instance(1, 1, 3)):
        assert fit_subequation(base.replace(c6=base.c6 + Fraction(3, 4)), 3).fitted


def test_report_json_is_plain():
    rep = fit_subequation(OdeInstance(as_cyclo(1), c5=-16, c7=2), 3)
    d = rep.to_json()
    assert d["status"] == "fitted" and d["degree"] == 3
    assert all(isinstance(t["coeff"], str) for t in d["subequation"]["terms"])
    assert Subequation.from_json(d["subequation"]) == rep.subequation
    assert isinstance(rep, FitReport)


def test_generic_random_instances_infeasible(rng):
    for _ in range(10):
        o = random_instance(rng)
        assert all(fit_subequation(o, m).status == "infeasible" for m in (1, 2, 3))


def test_zero_coefficient_not_stored():
    s = Subequation(1, {(0, 1): 1, (1, 0): 0, (0, 0): ZERO})
    assert set(s.coeffs) == {(0, 1)}

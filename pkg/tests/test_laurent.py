import random
from itertools import product

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from subeq_lab.cyclofield import OMEGA, ONE, ZERO, as_cyclo
from subeq_lab.laurent import (
    DepthExhausted,
    InvalidResidue,
    LaurentSeries,
    OdeInstance,
    check_fuchs_indices,
    dominant_monomials,
    expand_laurent,
    indicial_polynomial,
    ode_residual,
    series_arith,
    series_diff,
    series_pow,
)

from conftest import cyclo_numbers, random_instance

INDICIAL = [18, 11, -6, 1]  # (r+1)(r^2-7r+18), constant term first


def series(lead, coeffs, order):
    return LaurentSeries(lead, [as_cyclo(c) for c in coeffs], order=order)


def sympy_indicial():
    """Linearize c0 u''' + 6 u^4 at u = a/t with a perturbation t^(r-1)."""
    r, t, a = sp.symbols("r t a")
    v = t ** (r - 1)
    lin = a ** 3 * sp.diff(v, t, 3) + 24 * (a / t) ** 3 * v
    return sp.Poly(sp.expand(sp.simplify(lin / (a ** 3 * t ** (r - 4)))), r)


def test_sympy_oracle_agrees_with_factored_form():
    r = sp.Symbol("r")
    assert sympy_indicial() == sp.Poly(sp.expand((r + 1) * (r ** 2 - 7 * r + 18)), r)
    assert [int(c) for c in reversed(sympy_indicial().all_coeffs())] == INDICIAL


def test_diff_of_reciprocal():
    assert series_diff(series(-1, [1], 5)) == series(-2, [-1], 4)


def test_fourth_power():
    assert series_pow(series(-1, [1], 5), 4) == series(-4, [1], 2)


def test_product_example():
    x = series(-1, [1, 1], 5)
    y = series(-1, [1, -1], 5)
    assert series_arith(x, y, "mul") == series(-2, [1, 0, -1], 4)


def test_depth_exhausted():
    p = series_pow(series(-1, [1], 0), 4)
    assert p.order == -3 and p.coefficient(-4) == ONE
    with pytest.raises(DepthExhausted):
        p.coefficient(-2)


random_series = st.builds(
    lambda lead, cs: series(lead, cs, lead + len(cs)),
    st.integers(-3, 1),
    st.lists(cyclo_numbers, min_size=3, max_size=6),
)


@given(random_series, random_series)
def test_leibniz(x, y):
    lhs = series_diff(series_arith(x, y, "mul"))
    rhs = series_arith(series_arith(series_diff(x), y, "mul"), series_arith(x, series_diff(y), "mul"), "add")
    order = min(lhs.order, rhs.order)
    for e in range(min(lhs.lead, rhs.lead), order):
        assert lhs.coefficient(e) == rhs.coefficient(e)


@pytest.mark.parametrize("residue", [ONE, OMEGA, OMEGA * OMEGA])
def test_indicial_polynomial_any_branch(residue, rng):
    for _ in range(5):
        ode = random_instance(rng).replace(a=as_cyclo(1))
        assert indicial_polynomial(ode, residue) == [as_cyclo(c) for c in INDICIAL]


def test_indicial_rejects_bad_residue():
    with pytest.raises(InvalidResidue):
        indicial_polynomial(OdeInstance(as_cyclo(1)), as_cyclo(2))


def test_fuchs_examples():
    rep = check_fuchs_indices(INDICIAL)
    assert rep.integer_roots == [-1] and not rep.has_nonneg_integer
    # (r+1)(r-2)(r-3) = r^3 - 4 r^2 + r + 6
    rep = check_fuchs_indices([6, 1, -4, 1])
    assert rep.integer_roots == [-1, 2, 3] and rep.has_nonneg_integer
    rep = check_fuchs_indices([1, 0, 0, 1])
    assert rep.integer_roots == [-1] and not rep.has_nonneg_integer


def test_fuchs_multiplicity():
    # (r-1)^2 (r+2) = r^3 - 3r + 2
    rep = check_fuchs_indices([2, -3, 0, 1])
    assert rep.integer_roots == [-2, 1]
    assert rep.multiplicities == {-2: 1, 1: 2}


@pytest.mark.parametrize("c1, c2, u0", [(0, 0, 0), (12, 0, -1)])
def test_leading_coefficients(c1, c2, u0):
    u = expand_laurent(OdeInstance(as_cyclo(1), c1=c1, c2=c2), ONE, 10)
    assert u.lead == -1
    assert u.coefficient(-1) == ONE and u.coefficient(0) == as_cyclo(u0)


def test_unforced_equation_gives_exact_pole():
    u = expand_laurent(OdeInstance(as_cyclo(1)), ONE, 10)
    assert u.coefficient(-1) == ONE
    assert all(u.coefficient(e).is_zero() for e in range(0, u.order))
    assert ode_residual(u, OdeInstance(as_cyclo(1))).is_zero()


def test_residual_of_wrong_pole():
    res = ode_residual(series(-1, [2], 6), OdeInstance(as_cyclo(1)))
    assert res.lead == -4 and res.coefficient(-4) == as_cyclo(84)


def test_depth_must_be_at_least_two():
    with pytest.raises(ValueError):
        expand_laurent(OdeInstance(as_cyclo(1)), ONE, 1)


def test_u0_formula_and_vanishing_residual(rng):
    for _ in range(8):
        ode = random_instance(rng)
        a = ode.a
        for r in ode.branches():
            u = expand_laurent(ode, r, 20)
            assert u.coefficient(-1) == r
            assert u.coefficient(0) == (-2 * ode.c1 * r + ode.c2 * r * r) / (24 * ode.c0)
            assert ode_residual(u, ode).is_zero()
        lead = [expand_laurent(ode, r, 4).coefficient(-1) for r in ode.branches()]
        assert len(set(lead)) == 3 and lead[0] == a


def test_recurrence_against_sympy_series():
    """Plug a truncated expansion into the ODE symbolically and check the residual order."""
    ode = OdeInstance(as_cyclo(2), c1=1, c2=-3, c4=2, c5=1, c6=-1, c7=5)
    u = expand_laurent(ode, ode.a, 12)
    t = sp.Symbol("t")
    expr = sum(sp.Rational(str(u.coefficient(e))) * t ** e for e in range(-1, u.order))
    c = {k: sp.Rational(str(v)) for k, v in ode.coefficients().items()}
    ode_expr = (c["a"] ** 3 * sp.diff(expr, t, 3) + 6 * expr ** 4 + c["c1"] * sp.diff(expr, t, 2)
                + c["c2"] * expr * sp.diff(expr, t) + c["c4"] * sp.diff(expr, t)
                + c["c5"] * expr ** 2 + c["c6"] * expr + c["c7"])
    low = sp.expand(ode_expr * t ** 4)
    # everything below t^(order-4+4) must cancel
    poly = sp.Poly(low, t)
    for (deg,), coeff in poly.terms():
        if deg < u.order:
            assert coeff == 0, deg


def test_dominant_monomials_examples():
    mons = dominant_monomials(4)
    assert set(mons[2]) == {(2, 0, 0), (0, 1, 0)}
    assert set(mons[3]) == {(3, 0, 0), (1, 1, 0), (0, 0, 1)}
    assert set(mons[4]) == {(4, 0, 0), (2, 1, 0), (0, 2, 0), (1, 0, 1)}


@pytest.mark.parametrize("n", range(0, 9))
def test_dominant_monomial_counts(n):
    brute = sum(1 for al, be, ga in product(range(n + 1), repeat=3) if al + 2 * be + 3 * ga == n)
    # coefficient of t^n in 1/((1-t)(1-t^2)(1-t^3))
    t = sp.Symbol("t")
    gen = sp.series(1 / ((1 - t) * (1 - t ** 2) * (1 - t ** 3)), t, 0, n + 1).coeff(t, n)
    assert len(dominant_monomials(n)[n]) == brute == gen


def test_json_round_trip():
    u = expand_laurent(OdeInstance(as_cyclo(1), c1=1, c2=OMEGA), OMEGA, 8)
    assert LaurentSeries.from_json(u.to_json()) == u


def test_instance_validation():
    with pytest.raises(ValueError):
        OdeInstance(ZERO)
    with pytest.raises(ValueError):
        OdeInstance.from_mapping({"a": "1", "c3": "1"})
    with pytest.raises(ValueError):
        OdeInstance.from_mapping({"a": "1", "c0": "2"})
    assert OdeInstance.from_mapping({"a": "2", "c0": "8"}).c0 == as_cyclo(8)


def test_random_generator_is_reproducible():
    a = random_instance(random.Random(3))
    b = random_instance(random.Random(3))
    assert a == b

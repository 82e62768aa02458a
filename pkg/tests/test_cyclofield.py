from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given

from subeq_lab.cyclofield import (
    OMEGA,
    ONE,
    ZERO,
    CycloNumber,
    as_cyclo,
    cube_roots_of,
    cyclo_arith,
    cyclo_inverse,
    embed_complex,
    field_roots,
    parse_cyclo,
)

from conftest import cyclo_numbers, nonzero_cyclo

W = OMEGA


def to_sympy(x: CycloNumber):
    w = sp.Rational(-1, 2) + sp.sqrt(3) * sp.I / 2
    return sp.Rational(x.p.numerator, x.p.denominator) + sp.Rational(x.q.numerator, x.q.denominator) * w


def test_omega_squared():
    assert cyclo_arith(W, W, "mul") == CycloNumber(-1, -1)


def test_one_plus_omega_times_one_plus_omega_squared():
    assert cyclo_arith(1 + W, 1 + W * W, "mul") == ONE


def test_cube_roots_of_unity_sum():
    assert W + W * W + 1 == ZERO


@pytest.mark.parametrize("x, expected", [
    (W, CycloNumber(-1, -1)),
    (as_cyclo(2), CycloNumber(Fraction(1, 2))),
    (1 + W, -W),
])
def test_inverse_examples(x, expected):
    assert cyclo_inverse(x) == expected
    assert x * expected == ONE


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        cyclo_inverse(ZERO)


def test_embed_examples():
    assert embed_complex(ONE) == 1 + 0j
    assert embed_complex(W) == complex(-0.5, 0.8660254037844386)
    assert embed_complex(CycloNumber(3, 0)) == 3 + 0j


@pytest.mark.parametrize("a", [1, 2, Fraction(5, 3)])
def test_cube_roots(a):
    roots = cube_roots_of(as_cyclo(a))
    assert roots == [as_cyclo(a), a * W, a * W * W]
    assert all(r ** 3 == as_cyclo(a) ** 3 for r in roots)
    assert len(set(roots)) == 3


@given(cyclo_numbers, cyclo_numbers, cyclo_numbers)
def test_ring_axioms(x, y, z):
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x + y == y + x and x * y == y * x
    assert (x - y) + y == x


@given(nonzero_cyclo)
def test_inverse_round_trip(x):
    assert x * cyclo_inverse(x) == ONE
    assert x.norm() > 0


@given(cyclo_numbers)
def test_norm_zero_only_at_zero(x):
    assert (x.norm() == 0) == x.is_zero()


@given(cyclo_numbers, cyclo_numbers)
def test_embedding_is_homomorphism(x, y):
    ex, ey = embed_complex(x), embed_complex(y)
    assert abs(embed_complex(x * y) - ex * ey) <= 1e-14 * (1 + abs(ex * ey))
    assert abs(embed_complex(x + y) - (ex + ey)) <= 1e-14 * (1 + abs(ex) + abs(ey))


@given(cyclo_numbers, cyclo_numbers)
def test_product_matches_sympy(x, y):
    assert sp.simplify(to_sympy(x * y) - to_sympy(x) * to_sympy(y)) == 0


@given(cyclo_numbers)
def test_text_round_trip(x):
    assert parse_cyclo(str(x)) == x


@pytest.mark.parametrize("text, expected", [
    ("3", CycloNumber(3)),
    ("-1/4 + 1/2 w", CycloNumber(Fraction(-1, 4), Fraction(1, 2))),
    ("w", W),
    ("2 - w", CycloNumber(2, -1)),
])
def test_parse(text, expected):
    assert parse_cyclo(text) == expected


@pytest.mark.parametrize("text", ["", "abc", "1/0", "1 +", "2 3"])
def test_parse_rejects(text):
    with pytest.raises(ValueError):
        parse_cyclo(text)


def test_field_roots_exact_and_fallback():
    # (x - 1)(x - w)(x - 2) has all roots in Q(w)
    poly = [ONE]
    for r in (ONE, W, as_cyclo(2)):
        poly = [ZERO] + poly
        for i in range(len(poly) - 1):
            poly[i] = poly[i] - r * poly[i + 1]
    roots = field_roots(poly)
    assert set(roots) == {ONE, W, as_cyclo(2)}
    # x^2 - 2 has none
    roots = field_roots([as_cyclo(-2), ZERO, ONE])
    assert all(isinstance(r, complex) for r in roots)
    assert sorted(abs(r) for r in roots) == pytest.approx([2 ** 0.5] * 2)

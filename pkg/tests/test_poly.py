"""Polynomial arithmetic, parsing, differentiation and composition."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from germkit.errors import (
    DimensionMismatch,
    NegativeExponent,
    NonFinite,
    ParseError,
    UnknownVariable,
)
from germkit.poly import (
    PolyMap,
    Polynomial,
    compose,
    euclidean_rho,
    parse_polynomial,
)

XYZ = ("x", "y", "z")
XYZW = ("x", "y", "z", "w")
UVT = ("u", "v", "t")


def P(text, variables=XYZW):
    return parse_polynomial(text, variables)


# ---------------------------------------------------------------------------
# parsing


def test_parse_quartic_surface_polynomial():
    p = parse_polynomial(
        "x^4+5*x^2*z^4-x^2*z^2-y^4-5*y^2*z^4+3*y^2*z^2+z^6", XYZ
    )
    assert p.terms[(4, 0, 0)] == 1
    assert p.terms[(2, 0, 4)] == 5
    assert p.terms[(2, 0, 2)] == -1
    assert p.terms[(0, 4, 0)] == -1
    assert p.terms[(0, 2, 4)] == -5
    assert p.terms[(0, 2, 2)] == 3
    assert p.terms[(0, 0, 6)] == 1
    assert len(p.terms) == 7


def test_parse_zero():
    p = parse_polynomial("0", ["x"])
    assert p.is_zero()
    assert p.terms == {}


def test_parse_ring_identity_cancels_to_zero():
    p = parse_polynomial("(x+y)^2 - x^2 - 2*x*y - y^2", ("x", "y"))
    assert p.is_zero()


def test_parse_rational_literal():
    p = parse_polynomial("1/3*x*w", XYZW)
    assert p.terms[(1, 0, 0, 1)] == Fraction(1, 3)


def test_parse_whitespace_insensitive():
    assert P(" x ^ 2 + 3 * y ") == P("x^2+3*y")


def test_parse_unary_minus():
    assert P("-x^2") == -P("x^2")
    assert P("- - x") == P("x")


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as err:
        parse_polynomial("x^2 + @", XYZ)
    assert err.value.position == 6
    with pytest.raises(ParseError):
        parse_polynomial("x^2 +", XYZ)
    with pytest.raises(ParseError):
        parse_polynomial("2 x", XYZ)  # implicit multiplication is rejected


def test_parse_unknown_variable():
    with pytest.raises(UnknownVariable) as err:
        parse_polynomial("x + q", XYZ)
    assert err.value.name == "q"


def test_parse_negative_exponent():
    with pytest.raises(NegativeExponent):
        parse_polynomial("x^-2", XYZ)


# ---------------------------------------------------------------------------
# differentiation


def test_partial_of_example_component():
    p = P("z*(x^2+y^2+z^2+w^2)")
    assert p.differentiate("w") == P("2*z*w")
    assert p.differentiate("z") == P("x^2+y^2+3*z^2+w^2")


def test_partial_of_zero():
    assert Polynomial.zero(XYZ).differentiate("x").is_zero()


def test_partial_of_euclidean_rho():
    rho = euclidean_rho(XYZW)
    assert rho == P("x^2+y^2+z^2+w^2")
    assert rho.differentiate("x") == P("2*x")


def test_unknown_variable_in_diff():
    with pytest.raises(UnknownVariable):
        P("x^2").differentiate("t")


# ---------------------------------------------------------------------------
# evaluation


def test_evaluate_exact_quartic_at_unit_z():
    p = parse_polynomial(
        "x^4+5*x^2*z^4-x^2*z^2-y^4-5*y^2*z^4+3*y^2*z^2+z^6", XYZ
    )
    assert p.evaluate_exact([0, 0, 1]) == 1


def test_evaluate_exact_origin_is_constant_term():
    p = P("x^2*y + 7")
    assert p.evaluate_exact([0, 0, 0, 0]) == 7


def test_evaluate_exact_difference_of_squares():
    p = parse_polynomial("x^2-y^2", ("x", "y"))
    assert p.evaluate_exact([3, 2]) == 5


def test_evaluate_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        P("x").evaluate_exact([1, 2])


def test_evaluate_float_overflow():
    p = parse_polynomial("x^8", ["x"])
    with pytest.raises(NonFinite):
        p.evaluate_float([1e100])


# ---------------------------------------------------------------------------
# composition


def test_compose_corner_pair():
    f = PolyMap.from_strings(["x", "y", "z*(x^2+y^2+z^4)"], XYZW)
    g = PolyMap.from_strings(["u*v", "v*t"], UVT)
    h = compose(g, f)
    assert h == PolyMap.from_strings(["x*y", "y*z*(x^2+y^2+z^4)"], XYZW)
    assert h.source_dim == 4 and h.target_dim == 2


def test_compose_scaling_pair():
    f = PolyMap.from_strings(["1/3*x*w", "y*w", "z*w"], XYZW)
    g = PolyMap.from_strings(["u*t", "v*t*(9*u^2+v^2+t^2)"], UVT)
    h = compose(g, f)
    assert h == PolyMap.from_strings(
        ["1/3*w^2*x*z", "w^4*y*z*(x^2+y^2+z^2)"], XYZW
    )


def test_compose_identity_is_neutral():
    f = PolyMap.from_strings(["x*y", "y+z^2"], XYZ)
    assert compose(PolyMap.identity(("u", "v")), f) == f
    assert compose(f, PolyMap.identity(XYZ)) == f


def test_compose_dimension_mismatch():
    f = PolyMap.from_strings(["x", "y"], XYZ)
    g = PolyMap.from_strings(["u*v*t"], UVT)
    with pytest.raises(DimensionMismatch):
        compose(g, f)


def test_germ_constraint_enforced():
    with pytest.raises(ValueError):
        PolyMap.from_strings(["x + 1"], ["x", "y"])


# ---------------------------------------------------------------------------
# printing round trip


@pytest.mark.parametrize(
    "text",
    [
        "0",
        "x^4+5*x^2*z^4-x^2*z^2-y^4-5*y^2*z^4+3*y^2*z^2+z^6",
        "-x + 1/2*y^3 - 7",
        "2/3*x*y*z*w",
    ],
)
def test_print_parse_round_trip(text):
    p = P(text)
    assert parse_polynomial(str(p), XYZW) == p


# ---------------------------------------------------------------------------
# property tests

_coeff = st.integers(min_value=-4, max_value=4)
_exps = st.tuples(
    st.integers(min_value=0, max_value=3),
    st.integers(min_value=0, max_value=3),
    st.integers(min_value=0, max_value=2),
)
_polys = st.dictionaries(_exps, _coeff, max_size=6).map(
    lambda terms: Polynomial(XYZ, terms)
)
_points = st.tuples(
    st.fractions(min_value=-1, max_value=1, max_denominator=8),
    st.fractions(min_value=-1, max_value=1, max_denominator=8),
    st.fractions(min_value=-1, max_value=1, max_denominator=8),
)


@given(_polys, _polys, _polys)
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + Polynomial.zero(XYZ) == a


@given(_polys)
def test_schwarz_symmetry(p):
    assert p.differentiate("x").differentiate("y") == p.differentiate(
        "y"
    ).differentiate("x")


@given(_polys, _points)
@settings(max_examples=60)
def test_float_eval_tracks_exact_eval(p, point):
    exact = p.evaluate_exact(point)
    approx = p.evaluate_float([float(v) for v in point])
    scale = max(1.0, abs(float(exact)))
    assert abs(approx - float(exact)) <= 1e-9 * scale


@given(_points)
@settings(max_examples=30)
def test_chain_rule_on_rational_points(point):
    # Jacobian of a composition equals the exact matrix product of the
    # factors' Jacobians, checked entrywise at rational points.
    f = PolyMap.from_strings(["x*y - z^2", "y + x^2", "z*x"], XYZ)
    g = PolyMap.from_strings(["u*t", "v - u^2"], UVT)
    h = compose(g, f)
    fx = f.evaluate_exact(point)
    jf = [[c.differentiate(v).evaluate_exact(point) for v in XYZ] for c in f.components]
    jg = [[c.differentiate(v).evaluate_exact(fx) for v in UVT] for c in g.components]
    jh = [[c.differentiate(v).evaluate_exact(point) for v in XYZ] for c in h.components]
    for i in range(2):
        for j in range(3):
            assert jh[i][j] == sum(jg[i][k] * jf[k][j] for k in range(3))


@given(_polys, _polys)
@settings(max_examples=40)
def test_product_evaluates_to_product(a, b):
    pt = (Fraction(1, 3), Fraction(-1, 2), Fraction(2))
    assert (a * b).evaluate_exact(pt) == a.evaluate_exact(pt) * b.evaluate_exact(pt)

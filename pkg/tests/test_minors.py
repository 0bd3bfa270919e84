"""Jacobians, determinants, and singular/Milnor set generators."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from germkit.errors import DimensionMismatch, InvalidRho
from germkit.minors import (
    IdealGenerators,
    PolyMatrix,
    all_minors,
    determinant,
    gradient_row,
    jacobian,
    milnor_set_ideal,
    singular_set_ideal,
    validate_proper_rho,
)
from germkit.poly import PolyMap, Polynomial, parse_polynomial

XYZW = ("x", "y", "z", "w")
UVT = ("u", "v", "t")


def P(text, variables=XYZW):
    return parse_polynomial(text, variables)


# ---------------------------------------------------------------------------
# jacobian


def test_jacobian_of_graph_like_map():
    f = PolyMap.from_strings(["x", "y", "z*(x^2+y^2+z^2+w^2)"], XYZW)
    jac = jacobian(f)
    assert jac.rows == 3 and jac.cols == 4
    assert jac.row(0) == (P("1"), P("0"), P("0"), P("0"))
    assert jac.row(1) == (P("0"), P("1"), P("0"), P("0"))
    assert jac.row(2) == (
        P("2*x*z"),
        P("2*y*z"),
        P("x^2+y^2+3*z^2+w^2"),
        P("2*z*w"),
    )


def test_jacobian_of_identity():
    f = PolyMap.identity(("x", "y"))
    jac = jacobian(f)
    assert jac.entry(0, 0) == parse_polynomial("1", ("x", "y"))
    assert jac.entry(0, 1).is_zero()
    assert jac.entry(1, 0).is_zero()
    assert jac.entry(1, 1) == parse_polynomial("1", ("x", "y"))


def test_jacobian_zero_columns_for_absent_variables():
    vars5 = ("x", "y", "z", "w", "k")
    f = PolyMap.from_strings(["x*z", "y*z"], vars5)
    jac = jacobian(f)
    assert jac.rows == 2 and jac.cols == 5
    for i in range(2):
        assert jac.entry(i, 3).is_zero()
        assert jac.entry(i, 4).is_zero()


# ---------------------------------------------------------------------------
# singular set ideals


def test_singular_set_isolated_at_origin():
    f = PolyMap.from_strings(["x", "y", "z*(x^2+y^2+z^2+w^2)"], XYZW)
    ideal = singular_set_ideal(f)
    gens = set(ideal.generators)
    assert P("x^2+y^2+3*z^2+w^2") in gens
    # The positive-definite generator pins the zero locus to the origin.
    assert ideal.vanishes_exact([0, 0, 0, 0])
    for pt in [(1, 0, 0, 0), (0, 0, 1, 0), (0, 0, 0, 1), (1, 2, 3, 4)]:
        assert not ideal.vanishes_exact(pt)


def test_singular_set_of_projection_is_empty():
    g = PolyMap.from_strings(["u", "v"], UVT)
    ideal = singular_set_ideal(g)
    assert ideal.is_trivially_empty()


def test_singular_set_of_radial_fold_is_plane():
    g = PolyMap.from_strings(["u*t", "v*t"], UVT)
    ideal = singular_set_ideal(g)
    for a, b in [(1, 2), (0, 0), (Fraction(1, 3), -5)]:
        assert ideal.vanishes_exact([a, b, 0])
    assert not ideal.vanishes_exact([1, 2, Fraction(1, 7)])
    assert not ideal.vanishes_exact([0, 0, 1])


# ---------------------------------------------------------------------------
# Milnor set ideals


def test_milnor_set_of_projection_is_single_linear_minor():
    f = PolyMap.from_strings(["x", "y", "z"], XYZW)
    stacked = jacobian(f).stack(gradient_row(parse_polynomial("x^2+y^2+z^2+w^2", XYZW)))
    raw = determinant(stacked)
    assert raw in (P("2*w"), P("-2*w"))
    ideal = milnor_set_ideal(f)
    assert ideal.generators == (P("w"),)


def test_milnor_set_of_identity_is_empty():
    f = PolyMap.identity(("x", "y"))
    ideal = milnor_set_ideal(f)
    assert ideal.is_trivially_empty()


def test_milnor_set_of_corner_composite():
    h = PolyMap.from_strings(["x*y", "y*z*(x^2+y^2+z^4)"], XYZW)
    ideal = milnor_set_ideal(h)
    p = parse_polynomial(
        "x^4+5*x^2*z^4-x^2*z^2-y^4-5*y^2*z^4+3*y^2*z^2+z^6", ("x", "y", "z")
    )
    # Points on the plane piece {y=0}.
    for pt in [(1, 0, 2, 3), (Fraction(1, 3), 0, 0, 0), (0, 0, 0, 5)]:
        assert ideal.vanishes_exact(pt)
    # Points on the quartic piece {w=0, p=0}: z=0 forces x^4 = y^4.
    for pt in [(1, 1, 0, 0), (1, -1, 0, 0), (Fraction(2, 7), Fraction(2, 7), 0, 0)]:
        assert p.evaluate_exact(pt[:3]) == 0
        assert ideal.vanishes_exact(pt)
    # Off both pieces.
    for pt in [(1, 1, 0, 1), (1, 2, 3, 4), (0, 1, 0, 1)]:
        assert not ideal.vanishes_exact(pt)


def test_milnor_set_rejects_mismatched_rho():
    f = PolyMap.from_strings(["x", "y", "z"], XYZW)
    with pytest.raises(DimensionMismatch):
        milnor_set_ideal(f, parse_polynomial("u^2", UVT))


# ---------------------------------------------------------------------------
# rho properness check


def test_proper_rho_accepts_papers_alternates():
    validate_proper_rho(P("x^2+y^2+z^4+w^2"))
    validate_proper_rho(parse_polynomial("9*u^2+v^2+t^2", UVT))


@pytest.mark.parametrize(
    "text",
    ["x^2+y^2+z^2", "x^2+y^3+z^2+w^2", "x^2-y^2+z^2+w^2", "x^2*y^2+z^2+w^2", "0"],
)
def test_proper_rho_rejects(text):
    with pytest.raises(InvalidRho):
        validate_proper_rho(P(text))


# ---------------------------------------------------------------------------
# determinant correctness and canonical form

_entries = st.lists(
    st.dictionaries(
        st.tuples(st.integers(0, 2), st.integers(0, 2)),
        st.integers(-3, 3),
        max_size=3,
    ).map(lambda t: Polynomial(("x", "y"), t)),
    min_size=9,
    max_size=9,
)
_points2 = st.tuples(
    st.fractions(min_value=-2, max_value=2, max_denominator=6),
    st.fractions(min_value=-2, max_value=2, max_denominator=6),
)


def _fraction_det(rows):
    # Gaussian elimination over Q, used as an independent oracle.
    n = len(rows)
    m = [list(r) for r in rows]
    det = Fraction(1)
    for col in range(n):
        pivot = next((r for r in range(col, n) if m[r][col] != 0), None)
        if pivot is None:
            return Fraction(0)
        if pivot != col:
            m[col], m[pivot] = m[pivot], m[col]
            det = -det
        det *= m[col][col]
        inv = 1 / m[col][col]
        for r in range(col + 1, n):
            factor = m[r][col] * inv
            if factor:
                for c in range(col, n):
                    m[r][c] -= factor * m[col][c]
    return det


@given(_entries, _points2)
@settings(max_examples=50)
def test_symbolic_minor_matches_numeric_determinant(entries, point):
    mat = PolyMatrix(3, 3, tuple(entries))
    symbolic = determinant(mat).evaluate_exact(point)
    numeric = _fraction_det(mat.evaluate_exact(point))
    assert symbolic == numeric


@given(_entries, _points2)
@settings(max_examples=30)
def test_two_by_two_minors_match_submatrix_determinants(entries, point):
    mat = PolyMatrix(3, 3, tuple(entries))
    minors = all_minors(mat, 2)
    assert len(minors) == 9
    values = mat.evaluate_exact(point)
    idx = 0
    for r0, r1 in [(0, 1), (0, 2), (1, 2)]:
        for c0, c1 in [(0, 1), (0, 2), (1, 2)]:
            expected = values[r0][c0] * values[r1][c1] - values[r0][c1] * values[r1][c0]
            assert minors[idx].evaluate_exact(point) == expected
            idx += 1


@given(
    st.lists(
        st.dictionaries(
            st.tuples(st.integers(0, 2), st.integers(0, 2)),
            st.integers(-3, 3),
            max_size=3,
        ).map(lambda t: Polynomial(("x", "y"), t)),
        min_size=1,
        max_size=4,
    ),
    st.fractions(min_value=-3, max_value=3, max_denominator=4).filter(lambda q: q != 0),
    _points2,
)
@settings(max_examples=40)
def test_scalar_multiple_dedup_preserves_zero_set(polys, scale, point):
    plain = IdealGenerators.from_polynomials(("x", "y"), polys)
    padded = IdealGenerators.from_polynomials(
        ("x", "y"), list(polys) + [p * scale for p in polys]
    )
    assert padded.generators == plain.generators
    assert padded.vanishes_exact(point) == plain.vanishes_exact(point)


def test_singular_subset_of_milnor_on_fold_plane():
    # Points of the singular set always lie in the Milnor set; exact check
    # on the fold map whose singular plane is easy to parametrize.
    g = PolyMap.from_strings(["u*t", "v*t"], UVT)
    sing = singular_set_ideal(g)
    milnor = milnor_set_ideal(g)
    for a in (-2, Fraction(-1, 2), 0, Fraction(3, 7), 1):
        for b in (-1, 0, Fraction(5, 3)):
            assert sing.vanishes_exact([a, b, 0])
            assert milnor.vanishes_exact([a, b, 0])

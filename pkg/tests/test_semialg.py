"""Constructible set membership, set algebra, and sphere sampling."""

import math
from fractions import Fraction

import numpy as np
import pytest

from germkit.errors import DimensionMismatch, InvalidTolerance, NoConvergence
from germkit.minors import milnor_set_ideal, singular_set_ideal
from germkit.poly import PolyMap, parse_polynomial
from germkit.semialg import BasicPiece, ConstructibleSet
from germkit.sampling import (
    SamplerConfig,
    nearest_distance,
    sample_on_sphere,
    set_difference_samples,
)

XYZW = ("x", "y", "z", "w")
UVT = ("u", "v", "t")
CFG = SamplerConfig()


def P(text, variables=XYZW):
    return parse_polynomial(text, variables)


def cset(pieces, variables=XYZW):
    return ConstructibleSet(
        variables,
        [
            BasicPiece(
                tuple(P(e, variables) for e in eqs),
                tuple(P(i, variables) for i in ineqs),
            )
            for eqs, ineqs in pieces
        ],
    )


W_PLANE = cset([(["w"], [])])
CORNER_MILNOR = cset(
    [
        (["y"], []),
        (["w", "x^4+5*x^2*z^4-x^2*z^2-y^4-5*y^2*z^4+3*y^2*z^2+z^6"], []),
    ]
)


# ---------------------------------------------------------------------------
# membership


def test_member_exact_plane():
    assert W_PLANE.member_exact([1, 2, 3, 0])
    assert not W_PLANE.member_exact([1, 2, 3, Fraction(1, 9)])


def test_member_exact_union_picks_any_piece():
    # (0,0,1,5): the quartic is 1 there but y = 0, so the plane piece accepts.
    assert CORNER_MILNOR.member_exact([0, 0, 1, 5])
    assert not CORNER_MILNOR.member_exact([0, 1, 0, 1])


def test_member_exact_empty_set():
    assert not ConstructibleSet.empty(XYZW).member_exact([0, 0, 0, 0])


def test_member_float_tolerances():
    assert W_PLANE.member_float([0.5, -0.25, 0.0, 1e-12], tol=1e-8)
    assert not W_PLANE.member_float([0.5, -0.25, 0.0, 1e-6], tol=1e-8)
    with pytest.raises(InvalidTolerance):
        W_PLANE.member_float([0, 0, 0, 0], tol=0.0)


def test_member_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        W_PLANE.member_exact([1, 2, 3])


def test_member_exact_and_float_agree_on_exact_points():
    pts = [(1, 2, 3, 0), (0, 0, 1, 5), (1, 1, 0, 0), (0, 0, 0, 0)]
    for pt in pts:
        exact = CORNER_MILNOR.member_exact(pt)
        approx = CORNER_MILNOR.member_float([float(v) for v in pt], tol=1e-12)
        assert exact == approx


def test_inequations_block_membership():
    plane_minus_axis = cset([(["w"], ["y"])])
    assert plane_minus_axis.member_exact([1, 2, 3, 0])
    assert not plane_minus_axis.member_exact([1, 0, 3, 0])


# ---------------------------------------------------------------------------
# set algebra


def test_difference_of_varieties():
    plane = W_PLANE
    smaller = cset([(["w", "y"], [])])
    diff = plane.difference(smaller)
    assert diff.member_exact([1, 2, 3, 0])
    assert not diff.member_exact([1, 0, 3, 0])
    assert not diff.member_exact([1, 2, 3, 4])


def test_difference_with_self_is_empty_on_points():
    diff = W_PLANE.difference(W_PLANE)
    for pt in [(1, 2, 3, 0), (0, 0, 0, 0), (5, 5, 5, 5)]:
        assert not diff.member_exact(pt)


def test_complement_of_union_piece_with_inequation():
    s = cset([(["w"], ["y"])])
    comp = s.complement()
    for pt in [(1, 2, 3, 0), (0, 0, 0, 0), (1, 2, 3, 4), (1, 0, 3, 0)]:
        assert comp.member_exact(pt) != s.member_exact(pt)


def test_trivially_empty_pieces_are_dropped():
    s = cset([(["1"], []), (["w"], ["0"])])
    assert s.is_syntactically_empty()


# ---------------------------------------------------------------------------
# sampling on spheres


def test_sample_linear_plane_slice():
    cloud = sample_on_sphere(W_PLANE, radius=0.1, count=40, seed=11, config=CFG)
    assert len(cloud) >= 30
    for point, res in zip(cloud.points, cloud.residuals):
        assert res <= 1e-12
        assert abs(point[3]) <= 1e-12
        assert abs(math.dist(point, (0, 0, 0, 0)) - 0.1) <= 1e-9


def test_sample_cone_piece():
    cone = cset([(["z^2-x^2-y^2", "w"], [])])
    cloud = sample_on_sphere(cone, radius=0.1, count=30, seed=3, config=CFG)
    assert len(cloud) >= 10
    q = P("z^2-x^2-y^2")
    for point in cloud.points:
        assert abs(q.evaluate_float(point)) <= CFG.tol
        assert abs(point[3]) <= CFG.tol


def test_sample_empty_set_raises():
    with pytest.raises(NoConvergence) as err:
        sample_on_sphere(ConstructibleSet.empty(XYZW), 0.1, 5, seed=0)
    assert err.value.diagnostics["starts"] == 0


def test_sampling_is_deterministic():
    a = sample_on_sphere(CORNER_MILNOR, 0.1, 25, seed=42, config=CFG)
    b = sample_on_sphere(CORNER_MILNOR, 0.1, 25, seed=42, config=CFG)
    assert a.points == b.points and a.residuals == b.residuals
    c = sample_on_sphere(CORNER_MILNOR, 0.1, 25, seed=43, config=CFG)
    assert a.points != c.points


def test_sampled_points_pass_member_float():
    cloud = sample_on_sphere(CORNER_MILNOR, 0.05, 30, seed=9, config=CFG)
    for point in cloud.points:
        assert CORNER_MILNOR.member_float(point, tol=1e-8)


# ---------------------------------------------------------------------------
# difference sampling


def test_difference_sampling_keeps_cone_only():
    milnor = cset([(["z"], []), (["w", "z^2-x^2-y^2"], [])])
    sing = cset([(["z"], [])])
    cloud = set_difference_samples(milnor, sing, 0.1, 40, seed=5, config=CFG)
    assert len(cloud) >= 5
    q = P("z^2-x^2-y^2")
    for point in cloud.points:
        assert abs(q.evaluate_float(point)) <= 1e-8
        assert abs(point[2]) > CFG.reject_tol


def test_difference_sampling_with_self_is_empty_cloud():
    cloud = set_difference_samples(W_PLANE, W_PLANE, 0.1, 20, seed=5, config=CFG)
    assert len(cloud) == 0


def test_difference_sampling_respects_reject_tol():
    smaller = cset([(["w", "y"], [])])
    cloud = set_difference_samples(W_PLANE, smaller, 0.1, 30, seed=5, config=CFG)
    assert len(cloud) >= 10
    for point in cloud.points:
        assert abs(point[1]) > CFG.reject_tol


# ---------------------------------------------------------------------------
# nearest distance


def test_nearest_distance_to_plane():
    d = nearest_distance(W_PLANE, (0.0, 0.0, 0.0, 0.3), CFG, seed=1)
    assert abs(d - 0.3) <= 1e-9


def test_nearest_distance_target_on_set():
    folds = ConstructibleSet(
        UVT, [BasicPiece((P("t", UVT), P("v^2-3*u^2", UVT)), ())]
    )
    d = nearest_distance(folds, (1.0, math.sqrt(3.0), 0.0), CFG, seed=1)
    assert d <= 1e-9


def test_nearest_distance_sphere_shell_against_grid_oracle():
    # Independent oracle: a dense lattice over a small box, filtered to the
    # shell |x.x - r^2| <= band, gives a reference minimum norm.
    shell = cset([(["x^2+y^2+z^2+w^2-1/100"], [])])
    axes = np.linspace(-0.15, 0.15, 50)
    grid = np.stack(np.meshgrid(axes, axes, axes, axes, indexing="ij"), axis=-1).reshape(-1, 4)
    norms_sq = np.sum(grid * grid, axis=1)
    spacing = axes[1] - axes[0]
    # Gradient bound of x.x over the shell times half a cell diagonal.
    band = 2 * 0.12 * spacing * math.sqrt(4) / 2
    on_shell = grid[np.abs(norms_sq - 0.01) <= band]
    oracle = float(np.min(np.linalg.norm(on_shell, axis=1)))
    assert abs(oracle - 0.1) <= 0.02  # lattice resolution check
    d = nearest_distance(shell, (0.0, 0.0, 0.0, 0.0), CFG, seed=2)
    assert abs(d - 0.1) <= 1e-9
    assert abs(d - oracle) <= 0.02


# ---------------------------------------------------------------------------
# transversality consequence near the origin


def test_zero_locus_minus_singular_avoids_milnor_set():
    # For a tame germ, regular points of the zero locus near the origin are
    # never Milnor-set points: fibers meet spheres transversally there.
    f = PolyMap.from_strings(["x", "y", "z*(x^2+y^2+z^2+w^2)"], XYZW)
    milnor = ConstructibleSet.variety(milnor_set_ideal(f))
    sing = ConstructibleSet.variety(singular_set_ideal(f))
    v_f = cset([(["x", "y", "z*(x^2+y^2+z^2+w^2)"], [])])
    for radius in (0.2, 0.1, 0.05):
        # The regular zero locus here is an axis: each slice is a point pair.
        cloud = set_difference_samples(v_f, sing, radius, 20, seed=8, config=CFG)
        assert len(cloud) >= 1
        for point in cloud.points:
            assert not milnor.member_float(point, tol=1e-8)


# ---------------------------------------------------------------------------
# CSV round trip


def test_cloud_csv_round_trip(tmp_path):
    cloud = sample_on_sphere(W_PLANE, 0.1, 10, seed=4, config=CFG)
    path = cloud.write_csv(tmp_path / "plane.csv")
    rows = path.read_text().strip().splitlines()
    assert rows[0].split(",") == list(XYZW)
    assert len(rows) == len(cloud) + 1
    reread = [tuple(float(v) for v in row.split(",")) for row in rows[1:]]
    assert reread == [tuple(p) for p in cloud.points]
    sidecar = (tmp_path / "plane.csv.json").read_text()
    assert '"seed": 4' in sidecar

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from classes.conlinear_class import OrderingCone, UpperSet, set_equal
from classes.errors_class import StructuralError, ValidationError
from classes.extreal_class import PLUS_INF, ExtReal
from classes.instance_class import linf_vector_map
from classes.lp_class import vadd, vec, vscale, zeros
from classes.polyhedron_class import Polyhedron
from classes.setmap_class import (
    AffineFunction,
    AffinePoint,
    ConcavePWL,
    ConvexPWL,
    HFamilyMap,
    Region,
    SetValuedData,
    VectorMap,
    epigraphical_extension,
    restrict,
    scalarize,
    set_extension,
    validate_convexity,
    weighted_concave,
)
from tests.strategies import maps_with_directions

H = Fraction(1, 2)


def test_r2_values(r2):
    f = r2.f
    at_zero = f.evaluate((0,))
    assert at_zero.contains((H, H))
    assert not at_zero.contains((Fraction(1, 4), Fraction(1, 4)))
    assert f.evaluate((1,)).empty
    assert scalarize(f, (-1, -1))((0,)) == ExtReal.of(1)


def test_scalarization_needs_a_dual_functional(r2):
    with pytest.raises(ValidationError):
        scalarize(r2.f, (1, 0))
    with pytest.raises(StructuralError):
        scalarize(r2.f, (-1,))


def test_restriction_follows_the_segment(r2):
    g = restrict(r2.f, (0,), (Fraction(2, 3),))
    assert g.xdim == 1
    assert set_equal(g.evaluate((1,)), r2.f.evaluate((Fraction(2, 3),)))
    assert set_equal(g.evaluate((H,)), r2.f.evaluate((Fraction(1, 3),)))
    assert g.evaluate((Fraction(3, 2),)).empty


def test_pareto_scalarization_is_a_coordinate(pareto):
    phi = scalarize(pareto.f, (-1, 0))
    assert phi((1, 2)) == ExtReal.of(1)
    assert phi((0, 0)) == PLUS_INF  # outside S


def test_linf_vector_vanishes_at_one():
    assert linf_vector_map(5)((1,)) == zeros(5)
    with pytest.raises(StructuralError):
        linf_vector_map(1)


def test_concave_component_is_not_c_convex():
    tent = ConcavePWL((AffineFunction.of([1], 0), AffineFunction.of([-1], 0)))
    psi = VectorMap("tent", OrderingCone.orthant(1), 1, Polyhedron.box([-1], [1]), (tent,))
    cert = psi.c_convexity()
    assert not cert.certified
    assert cert.counterexample is not None
    with pytest.raises(ValidationError) as err:
        epigraphical_extension(psi)
    assert err.value.counterexample


def test_structural_convexity_certificate(r2):
    cert = validate_convexity(r2.f)
    assert cert.certified
    assert cert.method == "structural"


def test_normals_must_lie_in_the_dual_cone():
    with pytest.raises(StructuralError):
        HFamilyMap("bad", OrderingCone.orthant(2), 1, Polyhedron.whole(1),
                   (vec([1, 0]),), (ConcavePWL.constant(1, 0),))


class NegatedParabola:
    """x ↦ [-x², ∞), reachable only through evaluate."""
    name = "parabola-down"
    cone = OrderingCone.orthant(1)
    xdim = 1

    def evaluate(self, x):
        return UpperSet.translate(self.cone, [-x[0] * x[0]])


def test_midpoint_test_catches_nonconvex_maps():
    cert = validate_convexity(NegatedParabola(), points=[(-1,), (0,), (1,)])
    assert not cert.certified
    assert cert.counterexample["x1"] == vec([-1])
    assert cert.counterexample["x2"] == vec([0])


def _segment_data(lo: int, second: AffinePoint) -> SetValuedData:
    """F(x) = conv{(x, 0), second(x)} on [lo, 1]."""
    first = AffinePoint((vec([1]), vec([0])), zeros(2))
    region = Region(Polyhedron.box([lo], [1]), (first, second))
    return SetValuedData("segment", OrderingCone.orthant(2), 1, (region,))


def test_set_extension_of_a_moving_segment():
    f = set_extension(_segment_data(0, AffinePoint((vec([0]), vec([1])), zeros(2))))
    expected = UpperSet.from_rows(f.cone, [((-1, -1), -H), ((-1, 0), 0), ((0, -1), 0)])
    assert set_equal(f.evaluate((H,)), expected)


def test_set_extension_rejects_non_affine_support():
    with pytest.raises(ValidationError):
        set_extension(_segment_data(-1, AffinePoint((vec([-1]), vec([0])), zeros(2))))


@settings(max_examples=30, deadline=None)
@given(maps_with_directions())
def test_restriction_commutes_with_scalarization(fu):
    f, u = fu
    x0 = zeros(f.xdim)
    g = restrict(f, x0, u)
    for v in f.cone.base_vertices:
        along, direct = scalarize(g, v), scalarize(f, v)
        for t in [Fraction(k, 4) for k in range(5)]:
            assert along((t,)) == direct(vadd(x0, vscale(t, u)))


class ScaledParabola:
    """x ↦ [-c·x², ∞)."""
    name = "parabola-scaled"
    cone = OrderingCone.orthant(1)
    xdim = 1

    def __init__(self, c: Fraction):
        self.c = c

    def evaluate(self, x):
        return UpperSet.translate(self.cone, [-self.c * x[0] * x[0]])


@settings(max_examples=30, deadline=None)
@given(
    st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=8),
    st.lists(st.fractions(min_value=-2, max_value=2, max_denominator=4), min_size=2, max_size=6, unique=True),
    st.integers(0, 100),
)
def test_midpoint_check_rejects_strictly_concave_offsets(c, xs, seed):
    f = ScaledParabola(c)
    cert = validate_convexity(f, points=[(x,) for x in xs], seed=seed, trials=4)
    assert not cert.certified
    p, q = cert.counterexample["x1"][0], cert.counterexample["x2"][0]
    mid = (p + q) / 2
    assert -c * mid * mid > -c * (p * p + q * q) / 2


def test_single_piece_components_weight_either_way():
    one = ConcavePWL((AffineFunction.of([2], 1),))
    assert weighted_concave(one, Fraction(-3)) == ConcavePWL((AffineFunction.of([-6], -3),))
    assert weighted_concave(ConvexPWL((AffineFunction.of([1], 0),)), Fraction(2)) == ConcavePWL((AffineFunction.of([2], 0),))
    tent = ConcavePWL((AffineFunction.of([1], 0), AffineFunction.of([-1], 0)))
    assert weighted_concave(tent, Fraction(-1)) is None
    assert weighted_concave(ConvexPWL(tent.pieces), Fraction(1)) is None

from fractions import Fraction

import pytest
from hypothesis import given, settings

from classes.conlinear_class import (
    OrderingCone,
    UpperSet,
    contained_in,
    excess_linf,
    has_interior_point,
    in_interior,
    inf_residual,
    lattice_inf,
    lattice_sup,
    margin,
    oplus,
    order_leq,
    scalar_representation,
    scale,
    set_equal,
    support,
    subset_of_interior,
)
from classes.errors_class import ConeMismatchError, StructuralError, ValidationError
from classes.extreal_class import MINUS_INF, PLUS_INF, ExtReal
from tests.strategies import ORTHANT2, orthant_sets


def point(cone, *xs):
    return UpperSet.translate(cone, [Fraction(x) for x in xs])


def test_orthant_base_vertices(orthant2):
    assert orthant2.base_vertices == ((-1, 0), (0, -1))
    assert orthant2.is_orthant
    assert orthant2.normalize((-2, -2)) == (Fraction(-1, 2), Fraction(-1, 2))
    with pytest.raises(ValidationError):
        orthant2.normalize((1, 0))


def test_skewed_cone_and_bad_interior():
    skew = OrderingCone.from_generators([(1, 0), (1, 1)], (2, 1))
    assert skew.contains((Fraction(3), Fraction(1)))
    assert not skew.contains((Fraction(0), Fraction(1)))
    with pytest.raises(ValidationError):
        OrderingCone.from_generators([(1, 0), (1, 1)], (1, 1))  # on the boundary ray


def test_support_values(orthant2):
    a = point(orthant2, 1, 2)
    assert support((-1, -1), a) == ExtReal.of(-3)
    assert support((1, 0), UpperSet.cone_set(orthant2)) == PLUS_INF
    assert support((-1, 0), UpperSet.empty_set(orthant2)) == MINUS_INF


def test_order_is_reverse_inclusion(orthant2):
    low, high = point(orthant2, 0, 0), point(orthant2, 1, 1)
    assert contained_in(high, low)
    assert order_leq(low, high)
    assert not order_leq(high, low)
    assert order_leq(UpperSet.whole(orthant2), low)
    assert order_leq(low, UpperSet.empty_set(orthant2))


def test_lattice_sup_and_inf_of_two_points(orthant2):
    a, b = point(orthant2, 1, 0), point(orthant2, 0, 1)
    top = lattice_sup([a, b])
    assert set_equal(top, point(orthant2, 1, 1))
    bottom = lattice_inf([a, b])
    assert bottom.contains((Fraction(1, 2), Fraction(1, 2)))
    assert not bottom.contains((Fraction(1, 4), Fraction(1, 4)))
    assert bottom.contains((Fraction(0), Fraction(5)))


def test_empty_collections(orthant2):
    assert lattice_sup([], orthant2).is_whole
    assert lattice_inf([], orthant2).empty
    with pytest.raises(StructuralError):
        lattice_sup([])


def test_cone_mismatch_is_rejected(orthant2):
    skew = OrderingCone.from_generators([(1, 0), (1, 1)], (2, 1))
    with pytest.raises(ConeMismatchError):
        oplus(point(orthant2, 0, 0), UpperSet.cone_set(skew))


def test_scaling(orthant2):
    assert set_equal(scale(2, point(orthant2, 1, 1)), point(orthant2, 2, 2))
    assert set_equal(scale(0, UpperSet.empty_set(orthant2)), UpperSet.cone_set(orthant2))
    assert set_equal(scale(0, UpperSet.whole(orthant2)), UpperSet.cone_set(orthant2))
    with pytest.raises(StructuralError):
        scale(-1, point(orthant2, 0, 0))


def test_residual_special_values(orthant2):
    a = point(orthant2, 1, 1)
    assert set_equal(inf_residual(a, UpperSet.cone_set(orthant2)), a)
    assert inf_residual(a, UpperSet.empty_set(orthant2)).is_whole
    assert inf_residual(a, UpperSet.whole(orthant2)).empty
    assert inf_residual(UpperSet.empty_set(orthant2), a).empty


def test_interior_and_margins(orthant2):
    c = UpperSet.cone_set(orthant2)
    assert in_interior((1, 1), c)
    assert not in_interior((0, 1), c)
    assert margin(point(orthant2, 1, 1), c) == ExtReal.of(1)
    assert subset_of_interior(point(orthant2, 1, 1), c)
    assert not subset_of_interior(point(orthant2, 1, 0), c)
    assert excess_linf(c, point(orthant2, 1, 1)) == ExtReal.of(1)
    assert excess_linf(point(orthant2, 2, 2), c) == ExtReal.of(0)
    assert has_interior_point(point(orthant2, 0, 0))
    assert not has_interior_point(UpperSet.empty_set(orthant2))


def test_scalar_representation_keeps_only_vertex_rows(orthant2):
    a = point(orthant2, 2, 3)
    assert set_equal(scalar_representation(a), a)
    hull = lattice_inf([point(orthant2, 1, 0), point(orthant2, 0, 1)])
    rep = scalar_representation(hull)
    assert contained_in(hull, rep)
    assert not set_equal(rep, hull)


def test_dump_parses_back(orthant2):
    a = lattice_inf([point(orthant2, 1, 0), point(orthant2, 0, 1)])
    assert set_equal(UpperSet.parse_dump(orthant2, a.dump()), a)


@settings(max_examples=30, deadline=None)
@given(orthant_sets(allow_special=True), orthant_sets(allow_special=True), orthant_sets(allow_special=True))
def test_residual_is_adjoint_to_addition(a, b, d):
    assert order_leq(a, oplus(b, d)) == order_leq(inf_residual(a, b), d)


@settings(max_examples=30, deadline=None)
@given(orthant_sets(), orthant_sets())
def test_absorption(a, b):
    assert set_equal(lattice_sup([a, lattice_inf([a, b])]), a)
    assert set_equal(lattice_inf([a, lattice_sup([a, b])]), a)


@settings(max_examples=30, deadline=None)
@given(orthant_sets(), orthant_sets())
def test_sum_is_commutative_and_bounded_by_sup(a, b):
    s = oplus(a, b)
    assert set_equal(s, oplus(b, a))
    assert order_leq(lattice_inf([a, b]), lattice_sup([a, b]))


@settings(max_examples=30, deadline=None)
@given(orthant_sets())
def test_every_set_absorbs_the_cone(a):
    assert set_equal(oplus(a, UpperSet.cone_set(ORTHANT2)), a)


def residuation_law(a, b, d):
    assert order_leq(a, oplus(b, d)) == order_leq(inf_residual(a, b), d)


def neutral_and_dominant(a):
    assert set_equal(oplus(a, UpperSet.cone_set(ORTHANT2)), a)
    assert oplus(a, UpperSet.empty_set(ORTHANT2)).empty
    assert set_equal(scale(0, a), UpperSet.cone_set(ORTHANT2))


def distributes_over_inf(b, a1, a2):
    left = oplus(b, lattice_inf([a1, a2]))
    right = lattice_inf([oplus(b, a1), oplus(b, a2)])
    assert set_equal(left, right)


def sup_and_inf_are_semilattices(a, b, d):
    for op in (lattice_sup, lattice_inf):
        assert set_equal(op([a, a]), a)
        assert set_equal(op([op([a, b]), d]), op([a, op([b, d])]))


def scalar_representation_reconstructs(a):
    rep = scalar_representation(a)
    assert contained_in(a, rep)
    if all(ORTHANT2.normalize(n) in ORTHANT2.base_vertices for n, _ in a.rows):
        assert set_equal(rep, a)


@settings(max_examples=30, deadline=None)
@given(orthant_sets(allow_special=True))
def test_cone_is_neutral_and_empty_dominates(a):
    neutral_and_dominant(a)


@settings(max_examples=30, deadline=None)
@given(orthant_sets(allow_special=True), orthant_sets(allow_special=True), orthant_sets(allow_special=True))
def test_sum_distributes_over_inf(b, a1, a2):
    distributes_over_inf(b, a1, a2)


@settings(max_examples=30, deadline=None)
@given(orthant_sets(allow_special=True), orthant_sets(allow_special=True), orthant_sets(allow_special=True))
def test_sup_and_inf_are_associative_and_idempotent(a, b, d):
    sup_and_inf_are_semilattices(a, b, d)


@settings(max_examples=30, deadline=None)
@given(orthant_sets(allow_special=True))
def test_scalar_representation_on_random_sets(a):
    scalar_representation_reconstructs(a)


@pytest.mark.slow
@settings(max_examples=200, deadline=None)
@given(orthant_sets(allow_special=True), orthant_sets(allow_special=True), orthant_sets(allow_special=True))
def test_structural_laws_on_two_hundred_triples(a, b, d):
    residuation_law(a, b, d)
    neutral_and_dominant(a)
    distributes_over_inf(a, b, d)
    sup_and_inf_are_semilattices(a, b, d)
    scalar_representation_reconstructs(a)

from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from classes.conlinear_class import UpperSet, contained_in, oplus, order_leq, scale, set_equal, support
from classes.dini_class import (
    check_SR,
    check_WR,
    difference_quotient,
    exact_step,
    regularity_functionals,
    scalar_dini,
    scalar_dini_sampled,
    set_dini,
    set_dini_upper_lower,
)
from classes.extreal_class import MINUS_INF, PLUS_INF, ExtReal
from classes.instance_class import generate_random_vector
from classes.lp_class import vadd, vec, vscale, zeros
from classes.polyhedron_class import Polyhedron
from classes.settings_class import Settings
from classes.setmap_class import ConcavePWL, HFamilyMap, scalarize
from tests.strategies import LINE, halves, maps_with_directions

H = Fraction(1, 2)


def test_set_derivative_at_zero(r2):
    d = set_dini(r2.f, (0,), (1,))
    assert d.in_domain
    assert set_equal(d.value, UpperSet.translate(r2.f.cone, (1, 1)))


def test_scalar_derivative_at_zero(r2):
    phi = scalarize(r2.f, (-1, -1))
    assert phi((0,)) == ExtReal.of(1)
    assert scalar_dini(phi, (0,), (1,)) == ExtReal.of(-H)


def test_derivative_off_the_domain(r2):
    d = set_dini(r2.f, (1,), (1,))
    assert not d.in_domain
    assert d.value.is_whole
    phi = scalarize(r2.f, (-1, 0))
    assert scalar_dini(phi, (1,), (1,)) == MINUS_INF


def test_ray_leaving_the_domain(r2):
    d = set_dini(r2.f, (0,), (-1,))
    assert d.value.empty
    assert scalar_dini(scalarize(r2.f, (-1, 0)), (0,), (-1,)) == PLUS_INF


def test_sampled_derivative_settles_on_the_exact_value(r2):
    phi = scalarize(r2.f, (-1, -1))
    sampled = scalar_dini_sampled(phi, (0,), (1,))
    assert sampled.converged
    assert sampled.bound == ExtReal.of(-H)


def test_bracket_closes_on_a_convex_map(r2):
    bracket = set_dini_upper_lower(r2.f, (0,), (1,))
    assert not bracket.gap
    assert set_equal(bracket.upper, set_dini(r2.f, (0,), (1,)).value)


def test_difference_quotient_below_the_kink(r2):
    q = difference_quotient(r2.f, (0,), (1,), Fraction(1, 8))
    assert set_equal(q, UpperSet.translate(r2.f.cone, (1, 1)))


def test_regularity_functionals_include_normalized_normals(r2):
    zs = regularity_functionals(r2.f)
    assert zs[:2] == [(-1, 0), (0, -1)]
    assert (-H, -H) in zs


def test_strong_regularity_fails_where_weak_holds(r2):
    sr = check_SR(r2.f, (0,), (1,))
    assert not sr.holds
    bad = sr.failing_entry()
    assert bad.zstar == (-H, -H)
    assert bad.set_side == ExtReal.of(1)
    assert bad.scalar_side == ExtReal.of(Fraction(-1, 4))
    assert sr.inequality_ok
    assert check_WR(r2.f, (0,), (1,)).holds


def test_vector_extension_is_strongly_regular(pareto):
    for u in [(1, 0), (0, -1), (1, 1)]:
        assert check_SR(pareto.f, (1, 1), u).holds


@settings(max_examples=30, deadline=None)
@given(maps_with_directions(), st.sampled_from([Fraction(1, 3), H, Fraction(2), Fraction(3)]))
def test_derivative_is_positively_homogeneous(fu, alpha):
    f, u = fu
    x = zeros(f.xdim)
    d = set_dini(f, x, u).value
    assert set_equal(set_dini(f, x, vscale(alpha, u)).value, scale(alpha, d))


@settings(max_examples=30, deadline=None)
@given(maps_with_directions(count=2))
def test_derivative_is_sublinear_in_the_direction(fuv):
    f, u, v = fuv
    x = zeros(f.xdim)
    both = set_dini(f, x, vadd(u, v)).value
    assert order_leq(both, oplus(set_dini(f, x, u).value, set_dini(f, x, v).value))


@settings(max_examples=30, deadline=None)
@given(maps_with_directions())
def test_quotients_grow_as_the_step_shrinks(fu):
    f, u = fu
    x = zeros(f.xdim)
    d = set_dini(f, x, u).value
    steps = [Fraction(1, 2 ** k) for k in range(4)]
    quotients = [difference_quotient(f, x, u, t) for t in steps]
    for wide, narrow in zip(quotients, quotients[1:]):
        assert contained_in(wide, narrow)
    assert all(contained_in(q, d) for q in quotients)


@settings(max_examples=30, deadline=None)
@given(maps_with_directions())
def test_bracket_is_exact_below_the_exact_step(fu):
    f, u = fu
    x = zeros(f.xdim)
    step = exact_step(f, x, u)
    if step is None:
        return
    d = set_dini(f, x, u).value
    assert set_equal(difference_quotient(f, x, u, step), d)
    bracket = set_dini_upper_lower(f, x, u)
    assert max(bracket.window) <= step
    assert not bracket.gap
    assert set_equal(bracket.lower, d)


@settings(max_examples=30, deadline=None)
@given(maps_with_directions(m=1))
def test_set_and_scalar_derivatives_agree_on_the_line(fu):
    f, u = fu
    x = zeros(f.xdim)
    lhs = -support((-1,), set_dini(f, x, u).value)
    assert lhs == scalar_dini(scalarize(f, (-1,)), x, u)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 2), st.integers(1, 3), st.integers(1, 3), st.data())
def test_vector_extensions_are_strongly_regular(seed, n, m, pieces, data):
    f = generate_random_vector(seed, n, m, pieces)
    u = tuple(data.draw(halves) for _ in range(n))
    assert check_SR(f, zeros(n), u).holds


def test_bracket_window_moves_below_a_slack_row():
    # f(x) = [max(-x, x - 1), inf) on [-2, 2]: the second row is slack at 0 and binds from t = 1/2 on
    f = HFamilyMap(
        "slack", LINE, 1, Polyhedron.box([-2], [2]),
        (vec([-1]), vec([-1])),
        (ConcavePWL.affine((1,), 0), ConcavePWL.affine((-1,), 1)),
    )
    assert exact_step(f, (0,), (1,)) == H
    bracket = set_dini_upper_lower(f, (0,), (1,), Settings(bracket_depth=0, bracket_window=1))
    assert bracket.window == (H,)
    assert not bracket.gap
    assert set_equal(bracket.upper, UpperSet.translate(LINE, (-1,)))

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from classes.certifier_class import (
    ALL_CONDITIONS,
    Condition,
    Strategy,
    TestSet,
    Verdict,
    WitnessSearch,
    certify,
    certify_all,
    certify_min,
    certify_mvi,
    certify_weak_min,
    check_condition_at,
    grid_functionals,
    parse_conditions,
    parse_point,
    parse_testset,
    regularity_sweep,
)
from classes.conlinear_class import OrderingCone, UpperSet
from classes.errors_class import StructuralError, ValidationError
from classes.instance_class import brute_force_pareto, pareto_vector_map, random_instance
from classes.lp_class import vec
from classes.polyhedron_class import Polyhedron
from classes.setmap_class import HFamilyMap

H = Fraction(1, 2)


def _table(inst):
    return {v.condition: v.verdict for v in certify_all(inst.f, inst.x0, inst.testset)}


def test_r2_verdict_table(r2):
    got = _table(r2)
    for cond, want in r2.expected.items():
        assert got[cond] == want, cond.value


def test_r2_witnesses(r2):
    verdict = certify_min(r2.f, r2.x0, r2.testset)
    assert verdict.witness.x == (0,)
    mvi = certify_mvi(r2.f, r2.x0, r2.testset, strong=True, scalarized=False)
    assert mvi.witness.x == (0,)
    assert mvi.witness.exact


def test_minty_gap_shows_up_once_the_test_set_reaches_it(r2):
    T = r2.testset.with_point((H,))
    verdict = certify(r2.f, r2.x0, T, Condition.MVI_M_SCALAR)
    assert verdict.verdict == Verdict.FAILS
    assert verdict.witness.x == (H,)
    assert verdict.witness.exact
    assert verdict.certified


@pytest.mark.parametrize("x, ok", [
    ((Fraction(1, 3),), True),
    ((Fraction(2, 5),), False),
    ((Fraction(3, 5),), False),
])
def test_scalar_minty_threshold(r2, x, ok):
    assert check_condition_at(r2.f, r2.x0, x, Condition.MVI_M_SCALAR).ok is ok


def test_holds_carries_the_testset_caveat(r2):
    verdict = certify(r2.f, r2.x0, r2.testset, Condition.MVI_M_SCALAR)
    assert verdict.holds
    assert "on-testset" in verdict.caveats
    assert verdict.strategy == "regions"


def test_pareto_verdict_table(pareto):
    got = _table(pareto)
    for cond, want in pareto.expected.items():
        assert got[cond] == want, cond.value
    assert certify_min(pareto.f, pareto.x0, pareto.testset).witness.x == (0, 1)


def test_interior_dominated_point_fails_weak_l(pareto):
    x0 = (1, 2)
    corner = certify_weak_min(pareto.f, x0, TestSet.of([(1, 1)]), "l")
    assert corner.holds  # (1, 2) sits on the boundary of (1, 1) + C
    strictly_below = certify_weak_min(pareto.f, x0, TestSet.of([(1, 1), (H, 1)]), "l")
    assert not strictly_below.holds
    assert strictly_below.witness.x == (H, 1)


def test_min_agrees_with_brute_force_pareto(pareto):
    front = brute_force_pareto(pareto_vector_map(), pareto.testset)
    assert set(front.efficient) == {(0, 1), (H, H), (1, 0)}
    for x0 in pareto.testset:
        if not pareto.f.in_domain(x0):
            continue
        assert certify_min(pareto.f, x0, pareto.testset).holds == (x0 in front.efficient), x0
        weak = certify_weak_min(pareto.f, x0, pareto.testset, "l")
        assert weak.holds == (x0 in front.weakly_efficient), x0


def test_linf_verdict_table(linf3):
    got = _table(linf3)
    for cond, want in linf3.expected.items():
        assert got[cond] == want, cond.value


def test_extreals_instance_holds_everything(extreals_instance):
    got = _table(extreals_instance)
    assert all(v == Verdict.HOLDS for v in got.values())


def test_candidate_outside_domain_is_rejected(r2):
    with pytest.raises(ValidationError) as err:
        certify(r2.f, (1,), r2.testset, Condition.MIN)
    assert err.value.counterexample["x0"] == (1,)


def test_testset_dimension_must_match(r2):
    with pytest.raises(StructuralError):
        certify(r2.f, r2.x0, TestSet.of([(0, 0)]), Condition.MIN)


def test_constant_map_skips_the_strong_inequalities():
    cone = OrderingCone.orthant(1)
    f = HFamilyMap.constant("flat", cone, 1, UpperSet.translate(cone, (0,)))
    # f′ = C, so 0 sits on its boundary
    verdict = certify(f, (0,), TestSet.of([(1,), (-1,)]), Condition.SVI_W)
    assert verdict.holds
    strong = certify(f, (0,), TestSet.of([(1,), (-1,)]), Condition.SVI_M)
    assert strong.holds
    assert all(c.skipped for c in strong.checks)


def test_incomplete_search_is_flagged(r2):
    search = WitnessSearch.mstar(r2.f.cone, [(-1, 0)])
    verdict = certify(r2.f, r2.x0, r2.testset, Condition.MVI_M_SCALAR, search)
    assert not verdict.holds
    assert "witness-search-incomplete" in verdict.caveats
    assert not verdict.certified
    assert verdict.strategy == "mstar(1)"


def test_regularity_sweep_covers_both_directions(r2):
    sweep = regularity_sweep(r2.f, r2.x0, r2.testset, "WR")
    assert len(sweep.points) == 3
    assert sweep.stampacchia_at((0,)) is not None
    assert sweep.minty_at(r2.x0) is None
    with pytest.raises(StructuralError):
        regularity_sweep(r2.f, r2.x0, r2.testset, "XR")


def test_parse_helpers():
    assert parse_point("0,2") == (0, 2)
    assert parse_point(" 2/3 ") == (Fraction(2, 3),)
    with pytest.raises(StructuralError):
        parse_point("0.5")
    assert len(parse_testset("grid:0,0:2,2:3")) == 9
    assert parse_testset("0;1/2;1").points == (vec([0]), vec(["1/2"]), vec([1]))
    with pytest.raises(StructuralError):
        parse_testset("grid:0:1")


def test_condition_parsing():
    assert parse_conditions("mvi_M, Min") == (Condition.MIN, Condition.MVI_M_SCALAR)
    assert parse_conditions(None) == ALL_CONDITIONS
    with pytest.raises(StructuralError):
        Condition.parse("MVI")
    assert Condition.W_SC_MIN.is_scalarized and Condition.W_SC_MIN.is_weak
    assert not Condition.MIN.is_weak


def test_witness_search_parsing(orthant2):
    assert WitnessSearch.parse("grid:3", orthant2).label == "grid:3"
    assert WitnessSearch.parse("regions", orthant2).complete
    assert not WitnessSearch.parse("vertices", orthant2).complete
    with pytest.raises(StructuralError):
        WitnessSearch.parse("mstar:file.txt", orthant2)
    loaded = WitnessSearch.parse("mstar:any", orthant2, lambda _: [vec([-2, -2])])
    assert loaded.strategy == Strategy.MSTAR
    assert loaded.functionals == ((-H, -H),)
    with pytest.raises(StructuralError):
        WitnessSearch.parse("simplex", orthant2)


def test_grid_functionals_cover_the_base(orthant2):
    assert grid_functionals(orthant2, 2) == [(-1, 0), (-H, -H), (0, -1)]


def test_default_search_switches_to_grid_in_high_dimension():
    cone = OrderingCone.orthant(5)
    assert WitnessSearch.default(cone).strategy == Strategy.GRID
    assert WitnessSearch.default(OrderingCone.orthant(2)).strategy == Strategy.REGIONS


def test_points_outside_the_domain_are_skipped():
    cone = OrderingCone.orthant(1)
    f = HFamilyMap.constant("box", cone, 1, UpperSet.translate(cone, (0,)), Polyhedron.box([0], [1]))
    verdict = certify(f, (0,), TestSet.of([(2,)]), Condition.MVI_M)
    assert verdict.check_at((2,)).skipped


extra_points = st.lists(
    st.tuples(st.integers(-6, 6), st.integers(-6, 6)).map(lambda p: (Fraction(p[0], 2), Fraction(p[1], 2))),
    min_size=1, max_size=3,
)


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000), extra_points)
def test_larger_test_sets_never_undo_a_failure(seed, extra):
    inst = random_instance(seed, max_dim=2)
    n = inst.f.xdim
    wider = TestSet.of(list(inst.testset) + [p[:n] for p in extra])
    narrow = {v.condition: v for v in certify_all(inst.f, inst.x0, inst.testset)}
    for v in certify_all(inst.f, inst.x0, wider):
        before = narrow[v.condition]
        if before.verdict == Verdict.FAILS:
            assert v.verdict == Verdict.FAILS, v.condition.value
        for c in before.checks:
            assert v.check_at(c.x).ok == c.ok


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10_000))
def test_reported_witnesses_check_out_again(seed):
    inst = random_instance(seed, max_dim=2)
    search = WitnessSearch.default(inst.f.cone)
    for v in certify_all(inst.f, inst.x0, inst.testset, search=search):
        for c in v.checks:
            if c.zstar is not None:
                alone = WitnessSearch.mstar(inst.f.cone, [c.zstar])
                assert check_condition_at(inst.f, inst.x0, c.x, v.condition, alone).ok, v.condition.value
        for c in v.failures:
            again = check_condition_at(inst.f, inst.x0, c.x, v.condition, search)
            assert not again.ok, v.condition.value
            if c.exact and v.condition.is_scalarized:
                vertices = check_condition_at(inst.f, inst.x0, c.x, v.condition, WitnessSearch.vertices())
                assert not vertices.ok, v.condition.value

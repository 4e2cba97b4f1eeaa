from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from classes.errors_class import StructuralError
from classes.lp_class import (
    LpStatus,
    as_rational,
    canonical_rows,
    feasible_point,
    maximize,
    minimize,
    strictly_feasible,
)


@pytest.mark.parametrize("literal", ["0.5", "1e3", "abc", "1/2/3", ""])
def test_inexact_literals_are_refused(literal):
    with pytest.raises(StructuralError):
        as_rational(literal)


def test_floats_and_bools_are_refused():
    with pytest.raises(StructuralError):
        as_rational(0.5)
    with pytest.raises(StructuralError):
        as_rational(True)


def test_rational_literals():
    assert as_rational("-3/4") == Fraction(-3, 4)
    assert as_rational(" 7 ") == Fraction(7)
    assert as_rational(Fraction(1, 3)) == Fraction(1, 3)


def test_optimal_unbounded_and_infeasible():
    box = [((1, 0), Fraction(2)), ((0, 1), Fraction(3))]
    out = maximize((Fraction(1), Fraction(1)), box)
    assert out.status == LpStatus.OPTIMAL
    assert out.value == 5
    assert maximize((Fraction(1), Fraction(0)), [((0, 1), Fraction(1))]).status == LpStatus.UNBOUNDED
    clash = [((1,), Fraction(-1)), ((-1,), Fraction(-1))]
    assert minimize((Fraction(1),), clash).status == LpStatus.INFEASIBLE
    assert feasible_point(clash, 1) is None


def test_equality_rows():
    out = minimize((Fraction(1), Fraction(2)), [((-1, 0), Fraction(0)), ((0, -1), Fraction(0))],
                   [((1, 1), Fraction(4))])
    assert out.optimal
    assert out.value == 4
    assert out.point == (Fraction(4), Fraction(0))


def test_strict_feasibility():
    ok, point = strictly_feasible([((-1, 0), Fraction(0)), ((0, -1), Fraction(0))], 2)
    assert ok and all(x > 0 for x in point)
    ok, _ = strictly_feasible([((1,), Fraction(0)), ((-1,), Fraction(0))], 1)
    assert not ok


def test_canonical_rows_normalize_and_keep_tightest():
    rows = canonical_rows([((Fraction(2), Fraction(0)), Fraction(4)), ((Fraction(1), Fraction(0)), Fraction(3))])
    assert rows == [((Fraction(1), Fraction(0)), Fraction(2))]


def test_canonical_rows_drop_redundant():
    rows = [
        ((Fraction(-1), Fraction(0)), Fraction(-1)),
        ((Fraction(0), Fraction(-1)), Fraction(-1)),
        ((Fraction(-1), Fraction(-1)), Fraction(0)),  # implied by the two above
    ]
    assert len(canonical_rows(rows)) == 2


@settings(max_examples=40, deadline=None)
@given(
    st.lists(st.integers(-4, 4), min_size=2, max_size=3),
    st.integers(1, 5),
)
def test_box_maximum_matches_closed_form(c, k):
    n = len(c)
    rows = []
    for i in range(n):
        e = tuple(Fraction(1) if j == i else Fraction(0) for j in range(n))
        rows.append((e, Fraction(k)))
        rows.append((tuple(-x for x in e), Fraction(k)))
    out = maximize(tuple(Fraction(x) for x in c), rows)
    assert out.optimal
    assert out.value == k * sum(abs(x) for x in c)


small_rows = st.lists(
    st.tuples(st.lists(st.integers(-3, 3), min_size=2, max_size=2), st.integers(-4, 4)),
    min_size=1, max_size=3,
)


def _boxed(rows):
    box = [((Fraction(1), Fraction(0)), Fraction(3)), ((Fraction(-1), Fraction(0)), Fraction(3)),
           ((Fraction(0), Fraction(1)), Fraction(3)), ((Fraction(0), Fraction(-1)), Fraction(3))]
    return box + [(tuple(Fraction(v) for v in a), Fraction(c)) for a, c in rows]


def assert_farkas_certificate(rows, w):
    assert len(w) == len(rows)
    assert all(x <= 0 for x in w)
    for k in range(len(rows[0][0])):
        assert sum(wi * a[k] for wi, (a, _) in zip(w, rows)) == 0
    assert sum(wi * c for wi, (_, c) in zip(w, rows)) > 0


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=2, max_size=2), small_rows)
def test_strong_duality_or_farkas_on_small_programs(c, extra):
    rows = _boxed(extra)
    obj = tuple(Fraction(v) for v in c)
    primal = maximize(obj, rows)
    if primal.status == LpStatus.INFEASIBLE:
        assert_farkas_certificate(rows, primal.farkas)
        return
    assert primal.optimal
    # min b·y over y >= 0 with Aᵀy = c
    k = len(rows)
    signs = [(tuple(-Fraction(int(i == j)) for j in range(k)), Fraction(0)) for i in range(k)]
    columns = [(tuple(a[d] for a, _ in rows), obj[d]) for d in range(2)]
    dual = minimize(tuple(cc for _, cc in rows), signs, columns)
    assert dual.optimal
    assert dual.value == primal.value


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(-3, 3), min_size=2, max_size=2).filter(any), st.integers(-4, 4), small_rows)
def test_contradictory_rows_yield_a_farkas_certificate(a, c, extra):
    a = tuple(Fraction(v) for v in a)
    rows = _boxed(extra) + [(a, Fraction(c)), (tuple(-v for v in a), Fraction(-c - 1))]
    out = maximize((Fraction(0), Fraction(0)), rows)
    assert out.status == LpStatus.INFEASIBLE
    assert_farkas_certificate(rows, out.farkas)

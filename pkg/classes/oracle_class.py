from __future__ import annotations

from typing import Dict, Sequence

from classes.certifier_class import ALL_CONDITIONS, Condition, TestSet, Verdict
from classes.conlinear_class import OrderingCone, UpperSet
from classes.errors_class import StructuralError
from classes.extreal_class import MINUS_INF, PLUS_INF, ExtReal
from classes.lp_class import Vector, vec, vsub
from classes.setmap_class import HFamilyMap

# m = 1, C = R₊: [a, ∞) ↔ a, Z ↔ -∞, ∅ ↔ +∞.
# Lattice sup ↔ max, inf ↔ min, ⊕ ↔ inf_add, −̇ ↔ residual, t·A ↔ ext_scale.


def _require_line(cone: OrderingCone) -> None:
    if cone.dim != 1 or not cone.is_orthant:
        raise StructuralError("extended-real identification needs m = 1 with C = R₊")


def to_extreal(a: UpperSet) -> ExtReal:
    _require_line(a.cone)
    if a.empty:
        return PLUS_INF
    if not a.rows:
        return MINUS_INF
    return ExtReal.of(max(c / n[0] for n, c in a.rows))


def from_extreal(r: ExtReal, cone: OrderingCone) -> UpperSet:
    _require_line(cone)
    if r.is_plus_inf:
        return UpperSet.empty_set(cone)
    if r.is_minus_inf:
        return UpperSet.whole(cone)
    return UpperSet.from_rows(cone, [((-1,), -r.value)])


class ScalarProfile:
    """g(x) = min f(x) for an m = 1 H-family map, read off the offsets without LPs."""

    def __init__(self, f: HFamilyMap):
        _require_line(f.cone)
        self.f = f

    def __call__(self, x: Sequence) -> ExtReal:
        x = vec(x)
        if not self.f.in_domain(x):
            return PLUS_INF
        # a z <= b(x) with a < 0 reads z >= b(x)/a
        return ExtReal.of(max(b(x) / a[0] for a, b in zip(self.f.normals, self.f.offsets)))

    def slope(self, x: Sequence, u: Sequence) -> ExtReal:
        x, u = vec(x), vec(u)
        if not self.f.in_domain(x):
            return MINUS_INF
        if not self.f.ray_enters_domain(x, u):
            return PLUS_INF
        values = [b(x) / a[0] for a, b in zip(self.f.normals, self.f.offsets)]
        top = max(values)
        return ExtReal.of(max(
            b.right_slope(x, u) / a[0]
            for a, b, v in zip(self.f.normals, self.f.offsets, values) if v == top
        ))


def _point_ok(g: ScalarProfile, x0: Vector, x: Vector, cond: Condition) -> bool:
    zero = ExtReal.of(0)
    gx0, gx = g(x0), g(x)
    in_dom = g.f.in_domain(x)
    if cond in (Condition.MIN, Condition.W_L_MIN, Condition.W_SC_MIN, Condition.W_MIN):
        return not gx < gx0
    if cond in (Condition.SVI_M, Condition.SVI_M_SCALAR, Condition.MVI_M, Condition.MVI_M_SCALAR):
        if not in_dom or gx == gx0:
            return True
    if cond in (Condition.SVI_M, Condition.SVI_M_SCALAR):
        return g.slope(x0, vsub(x, x0)) > zero
    if cond in (Condition.SVI_W, Condition.SVI_W_SCALAR):
        return g.slope(x0, vsub(x, x0)) >= zero
    if cond in (Condition.MVI_M, Condition.MVI_M_SCALAR):
        return g.slope(x, vsub(x0, x)) < zero
    # MVI_W, mvi_W
    if not in_dom:
        return True
    return g.slope(x, vsub(x0, x)) <= zero


def oracle_verdicts(f: HFamilyMap, x0: Sequence, T: TestSet) -> Dict[Condition, Verdict]:
    """All twelve verdicts through the extended-real profile of an m = 1 map."""
    g = ScalarProfile(f)
    x0 = vec(x0)
    out = {}
    for cond in ALL_CONDITIONS:
        ok = all(_point_ok(g, x0, x, cond) for x in T)
        out[cond] = Verdict.HOLDS if ok else Verdict.FAILS
    return out


__all__ = ["ScalarProfile", "from_extreal", "oracle_verdicts", "to_extreal"]

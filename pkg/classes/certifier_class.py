from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from itertools import combinations_with_replacement, product
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from classes.conlinear_class import (
    OrderingCone,
    UpperSet,
    contained_in,
    in_interior,
    margin,
    recession_cone,
    set_equal,
    subset_of_interior,
    support,
)
from classes.dini_class import RegularityVerdict, check_SR, check_WR, regularity_functionals, scalar_dini, set_dini
from classes.errors_class import StructuralError, ValidationError
from classes.extreal_class import ExtReal
from classes.lp_class import Vector, as_rational, fmt_vector, vec, vsub, zeros
from classes.settings_class import Settings
from classes.setmap_class import HFamilyMap, scalarize

logger = logging.getLogger(__name__)

EXT_ZERO = ExtReal.of(0)

# ---------- Conditions ----------

class Condition(str, Enum):
    MIN = "Min"
    W_L_MIN = "w-l-Min"
    W_SC_MIN = "w-sc-Min"
    W_MIN = "w-Min"
    SVI_M = "SVI_M"
    SVI_M_SCALAR = "svi_M"
    MVI_M = "MVI_M"
    MVI_M_SCALAR = "mvi_M"
    SVI_W = "SVI_W"
    SVI_W_SCALAR = "svi_W"
    MVI_W = "MVI_W"
    MVI_W_SCALAR = "mvi_W"

    @classmethod
    def parse(cls, text: str) -> "Condition":
        try:
            return cls(text.strip())
        except ValueError:
            known = ", ".join(c.value for c in cls)
            raise StructuralError(f"unknown condition {text!r}; expected one of {known}") from None

    @property
    def is_scalarized(self) -> bool:
        return self in _SCALARIZED

    @property
    def is_weak(self) -> bool:
        return self in _WEAK


ALL_CONDITIONS: Tuple[Condition, ...] = tuple(Condition)

_SCALARIZED = frozenset({
    Condition.W_SC_MIN, Condition.SVI_M_SCALAR, Condition.MVI_M_SCALAR,
    Condition.SVI_W_SCALAR, Condition.MVI_W_SCALAR,
})
_WEAK = frozenset({
    Condition.W_L_MIN, Condition.W_SC_MIN, Condition.W_MIN,
    Condition.SVI_W, Condition.SVI_W_SCALAR, Condition.MVI_W, Condition.MVI_W_SCALAR,
})
# quantified over x ∈ dom f with f(x) ≠ f(x0)
_STRONG_VI = frozenset({Condition.SVI_M, Condition.SVI_M_SCALAR, Condition.MVI_M, Condition.MVI_M_SCALAR})
# carry the "f(x0) = Z ∨ ..." disjunct
_Z_SHORT = _WEAK | {Condition.SVI_M, Condition.SVI_M_SCALAR}


def parse_conditions(text: Optional[str]) -> Tuple[Condition, ...]:
    if not text:
        return ALL_CONDITIONS
    picked = {Condition.parse(part) for part in text.split(",") if part.strip()}
    return tuple(c for c in ALL_CONDITIONS if c in picked)


class Verdict(str, Enum):
    HOLDS = "HOLDS"
    FAILS = "FAILS"


# ---------- Test sets ----------

@dataclass(frozen=True)
class TestSet:
    """Finite rational points standing in for ∀x ∈ X."""
    __test__ = False

    points: Tuple[Vector, ...]

    def __post_init__(self):
        if not self.points:
            raise ValidationError("test set is empty")
        dims = {len(p) for p in self.points}
        if len(dims) != 1:
            raise StructuralError(f"test set mixes dimensions {sorted(dims)}")

    @classmethod
    def of(cls, points: Iterable[Sequence]) -> "TestSet":
        out: List[Vector] = []
        for p in points:
            v = vec(p)
            if v not in out:
                out.append(v)
        return cls(tuple(out))

    @classmethod
    def grid(cls, lo: Sequence, hi: Sequence, k: int) -> "TestSet":
        """k equally spaced values per axis on the box [lo, hi]."""
        lo, hi = vec(lo), vec(hi)
        if len(lo) != len(hi):
            raise StructuralError("grid corners of different dimensions")
        if k < 1:
            raise StructuralError("grid needs at least one point per axis")
        axes = []
        for a, b in zip(lo, hi):
            if k == 1 or a == b:
                axes.append((a,))
            else:
                axes.append(tuple(a + (b - a) * Fraction(i, k - 1) for i in range(k)))
        return cls.of(product(*axes))

    @property
    def dim(self) -> int:
        return len(self.points[0])

    def __len__(self) -> int:
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def union(self, other: "TestSet") -> "TestSet":
        return TestSet.of(list(self.points) + list(other.points))

    def with_point(self, x: Sequence) -> "TestSet":
        return TestSet.of(list(self.points) + [vec(x)])


# ---------- Witness search ----------

class Strategy(str, Enum):
    VERTICES = "vertices"
    MSTAR = "mstar"
    GRID = "grid"
    REGIONS = "regions"


@dataclass(frozen=True)
class WitnessSearch:
    """Where the ∃z* ∈ B* quantifier looks.

    REGIONS enumerates the rows touching f at the base point, which is a
    complete candidate set for H-family data; the other strategies are
    exact on the functionals they try and say nothing about the rest of B*.
    """
    strategy: Strategy
    functionals: Tuple[Vector, ...] = ()
    grid: int = 0

    @classmethod
    def vertices(cls) -> "WitnessSearch":
        return cls(Strategy.VERTICES)

    @classmethod
    def regions(cls) -> "WitnessSearch":
        return cls(Strategy.REGIONS)

    @classmethod
    def grid_of(cls, k: int) -> "WitnessSearch":
        if k < 1:
            raise StructuralError("witness grid resolution must be positive")
        return cls(Strategy.GRID, grid=k)

    @classmethod
    def mstar(cls, cone: OrderingCone, functionals: Iterable[Sequence]) -> "WitnessSearch":
        picked: List[Vector] = []
        for z in functionals:
            v = cone.normalize(z)
            if v not in picked:
                picked.append(v)
        if not picked:
            raise ValidationError("M* is empty")
        return cls(Strategy.MSTAR, tuple(picked))

    @classmethod
    def default(cls, cone: OrderingCone, settings: Optional[Settings] = None) -> "WitnessSearch":
        st = settings or Settings()
        if cone.dim <= st.regions_max_dim:
            return cls.regions()
        return cls.grid_of(st.witness_grid)

    @classmethod
    def parse(cls, text: str, cone: OrderingCone, loader: Optional[Callable[[str], List[Vector]]] = None) -> "WitnessSearch":
        """vertices | regions | grid:K | mstar:FILE (FILE read through ``loader``)."""
        head, _, arg = text.strip().partition(":")
        if head == Strategy.VERTICES.value and not arg:
            return cls.vertices()
        if head == Strategy.REGIONS.value and not arg:
            return cls.regions()
        if head == Strategy.GRID.value and arg:
            try:
                return cls.grid_of(int(arg))
            except ValueError:
                raise StructuralError(f"grid resolution {arg!r} is not an integer") from None
        if head == Strategy.MSTAR.value and arg:
            if loader is None:
                raise StructuralError("mstar strategy needs a functional file")
            return cls.mstar(cone, loader(arg))
        raise StructuralError(f"unknown witness search {text!r}")

    @property
    def complete(self) -> bool:
        return self.strategy == Strategy.REGIONS

    @property
    def label(self) -> str:
        if self.strategy == Strategy.GRID:
            return f"grid:{self.grid}"
        if self.strategy == Strategy.MSTAR:
            return f"mstar({len(self.functionals)})"
        return self.strategy.value

    def explicit_functionals(self, cone: OrderingCone) -> List[Vector]:
        """The base-point independent part of the candidate list."""
        if self.strategy == Strategy.MSTAR:
            return list(self.functionals)
        if self.strategy == Strategy.GRID:
            return grid_functionals(cone, self.grid)
        return list(cone.base_vertices)


def grid_functionals(cone: OrderingCone, k: int) -> List[Vector]:
    """Barycentric grid of resolution k over the vertices of B*."""
    verts = list(cone.base_vertices)
    out = set()
    for combo in combinations_with_replacement(range(len(verts)), k):
        point = zeros(cone.dim)
        for i in combo:
            point = tuple(p + v / k for p, v in zip(point, verts[i]))
        out.add(point)
    return sorted(out)


def touching_normals(f: HFamilyMap, x: Vector) -> List[Vector]:
    """B*-normalized normals whose row touches f(x)."""
    fx = f.evaluate(x)
    if fx.empty:
        return []
    out: List[Vector] = []
    for a, b in zip(f.normals, f.offsets_at(x)):
        if support(a, fx) == ExtReal.of(b):
            v = f.cone.normalize(a)
            if v not in out:
                out.append(v)
    return out


def candidate_functionals(f: HFamilyMap, base: Vector, search: WitnessSearch) -> Tuple[List[Vector], bool]:
    if search.complete:
        out = touching_normals(f, base)
        for v in f.cone.base_vertices:
            if v not in out:
                out.append(v)
        return out, True
    return search.explicit_functionals(f.cone), False


# ---------- Verdicts ----------

@dataclass(frozen=True)
class PointCheck:
    x: Vector
    ok: bool
    exact: bool = True    # False only for a failure left by an incomplete witness search
    skipped: bool = False  # excluded by the quantifier
    zstar: Optional[Vector] = None
    detail: str = ""


@dataclass(frozen=True)
class ConditionVerdict:
    condition: Condition
    verdict: Verdict
    x0: Vector
    checks: Tuple[PointCheck, ...]
    strategy: str = ""
    caveats: Tuple[str, ...] = ()

    @property
    def holds(self) -> bool:
        return self.verdict == Verdict.HOLDS

    @property
    def failures(self) -> List[PointCheck]:
        return [c for c in self.checks if not c.ok]

    @property
    def witness(self) -> Optional[PointCheck]:
        fails = self.failures
        exact = [c for c in fails if c.exact]
        return (exact or fails or [None])[0]

    @property
    def certified(self) -> bool:
        """HOLDS on the test set, or FAILS with an exact witness."""
        return self.holds or any(c.exact for c in self.failures)

    def check_at(self, x: Sequence) -> Optional[PointCheck]:
        x = vec(x)
        return next((c for c in self.checks if c.x == x), None)


# ---------- Per-point predicates ----------

@dataclass(frozen=True)
class _Point:
    f: HFamilyMap
    x0: Vector
    x: Vector
    fx0: UpperSet
    fx: UpperSet
    search: WitnessSearch

    @property
    def to_x(self) -> Vector:
        return vsub(self.x, self.x0)

    @property
    def to_x0(self) -> Vector:
        return vsub(self.x0, self.x)


def _phi(f: HFamilyMap, z: Vector, x: Vector) -> ExtReal:
    return scalarize(f, z)(x)


def _dphi(f: HFamilyMap, z: Vector, x: Vector, u: Vector) -> ExtReal:
    return scalar_dini(scalarize(f, z), x, u)


def _search(p: _Point, base: Vector, accept: Callable[[Vector], bool], what: str) -> PointCheck:
    cands, complete = candidate_functionals(p.f, base, p.search)
    for z in cands:
        if accept(z):
            return PointCheck(p.x, True, zstar=z)
    return PointCheck(p.x, False, exact=complete,
                      detail=f"no functional among {len(cands)} candidates gives {what}")


def _min(p: _Point) -> PointCheck:
    strict = contained_in(p.fx0, p.fx) and not set_equal(p.fx0, p.fx)
    return PointCheck(p.x, not strict, detail="f(x0) ⊊ f(x)" if strict else "")


def _weak_l(p: _Point) -> PointCheck:
    inside = subset_of_interior(p.fx0, p.fx)
    return PointCheck(p.x, not inside, detail="f(x0) ⊆ int f(x)" if inside else "")


def _weak_plain(p: _Point) -> PointCheck:
    eps = margin(p.fx0, p.fx)
    ok = eps <= EXT_ZERO
    return PointCheck(p.x, ok, detail="" if ok else f"f(x0) + {eps}·B∞ ⊆ f(x)")


def _weak_sc(p: _Point) -> PointCheck:
    def accept(z: Vector) -> bool:
        at_x = -support(z, p.fx)
        return -support(z, p.fx0) <= at_x and not at_x.is_minus_inf
    return _search(p, p.x, accept, "φ(x0) <= φ(x) ≠ -∞")


def _svi_set(strict: bool):
    def check(p: _Point) -> PointCheck:
        d = set_dini(p.f, p.x0, p.to_x).value
        origin = zeros(p.f.cone.dim)
        hit = in_interior(origin, d) if not strict else d.contains(origin)
        where = "f′(x0, x - x0)" if strict else "int f′(x0, x - x0)"
        return PointCheck(p.x, not hit, detail=f"0 ∈ {where}" if hit else "")
    return check


def _svi_scalar(strict: bool):
    def check(p: _Point) -> PointCheck:
        u = p.to_x
        if strict:
            return _search(p, p.x0, lambda z: _dphi(p.f, z, p.x0, u) > EXT_ZERO, "φ′(x0, x - x0) > 0")
        return _search(p, p.x0, lambda z: _dphi(p.f, z, p.x0, u) >= EXT_ZERO, "φ′(x0, x - x0) >= 0")
    return check


def _mvi_set(strict: bool):
    def check(p: _Point) -> PointCheck:
        d = set_dini(p.f, p.x, p.to_x0).value
        rec = recession_cone(p.fx)
        inside = contained_in(d, rec) if strict else subset_of_interior(d, rec)
        where = "0⁺f(x)" if strict else "int 0⁺f(x)"
        return PointCheck(p.x, not inside, detail=f"f′(x, x0 - x) ⊆ {where}" if inside else "")
    return check


def _mvi_scalar(strict: bool):
    def check(p: _Point) -> PointCheck:
        u = p.to_x0

        def accept(z: Vector) -> bool:
            if _phi(p.f, z, p.x).is_minus_inf:
                return False
            d = _dphi(p.f, z, p.x, u)
            return d < EXT_ZERO if strict else d <= EXT_ZERO
        return _search(p, p.x, accept, "φ′(x, x0 - x) < 0" if strict else "φ′(x, x0 - x) <= 0")
    return check


_PREDICATES: Dict[Condition, Callable[[_Point], PointCheck]] = {
    Condition.MIN: _min,
    Condition.W_L_MIN: _weak_l,
    Condition.W_SC_MIN: _weak_sc,
    Condition.W_MIN: _weak_plain,
    Condition.SVI_M: _svi_set(True),
    Condition.SVI_M_SCALAR: _svi_scalar(True),
    Condition.MVI_M: _mvi_set(True),
    Condition.MVI_M_SCALAR: _mvi_scalar(True),
    Condition.SVI_W: _svi_set(False),
    Condition.SVI_W_SCALAR: _svi_scalar(False),
    Condition.MVI_W: _mvi_set(False),
    Condition.MVI_W_SCALAR: _mvi_scalar(False),
}


def check_condition_at(f: HFamilyMap, x0: Sequence, x: Sequence, condition: Condition,
                       search: Optional[WitnessSearch] = None) -> PointCheck:
    """The defining inequality of ``condition`` at one comparison point x."""
    x0, x = vec(x0), vec(x)
    search = search or WitnessSearch.default(f.cone)
    fx0 = f.evaluate(x0)
    if condition in _Z_SHORT and fx0.is_whole:
        return PointCheck(x, True, skipped=True, detail="f(x0) = Z")
    fx = f.evaluate(x)
    if condition in _STRONG_VI:
        if fx.empty:
            return PointCheck(x, True, skipped=True, detail="x ∉ dom f")
        if set_equal(fx, fx0):
            return PointCheck(x, True, skipped=True, detail="f(x) = f(x0)")
    return _PREDICATES[condition](_Point(f, x0, x, fx0, fx, search))


# ---------- Certifiers ----------

def _require_domain(f: HFamilyMap, x0: Vector) -> None:
    if not f.in_domain(x0):
        raise ValidationError(f"candidate {fmt_vector(x0)} lies outside dom {f.name}", {"x0": x0})


def certify(f: HFamilyMap, x0: Sequence, T: TestSet, condition: Condition,
            search: Optional[WitnessSearch] = None) -> ConditionVerdict:
    x0 = vec(x0)
    _require_domain(f, x0)
    if T.dim != f.xdim:
        raise StructuralError(f"test set lives in dimension {T.dim}, {f.name} in {f.xdim}")
    search = search or WitnessSearch.default(f.cone)
    checks = tuple(check_condition_at(f, x0, x, condition, search) for x in T)
    fails = [c for c in checks if not c.ok]
    verdict = Verdict.FAILS if fails else Verdict.HOLDS
    caveats: List[str] = []
    if verdict == Verdict.HOLDS:
        caveats.append("on-testset")
    elif not any(c.exact for c in fails):
        caveats.append("witness-search-incomplete")
    if condition in _Z_SHORT and f.evaluate(x0).is_whole:
        caveats.append("f(x0) = Z")
    logger.debug("%s at %s on %d points: %s", condition.value, fmt_vector(x0), len(T), verdict.value)
    label = search.label if condition.is_scalarized else ""
    return ConditionVerdict(condition, verdict, x0, checks, label, tuple(caveats))


def certify_min(f: HFamilyMap, x0: Sequence, T: TestSet) -> ConditionVerdict:
    return certify(f, x0, T, Condition.MIN)


_WEAK_VARIANTS = {"l": Condition.W_L_MIN, "sc": Condition.W_SC_MIN, "plain": Condition.W_MIN}


def certify_weak_min(f: HFamilyMap, x0: Sequence, T: TestSet, variant: str = "plain",
                     search: Optional[WitnessSearch] = None) -> ConditionVerdict:
    if variant not in _WEAK_VARIANTS:
        raise StructuralError(f"unknown weak-minimizer variant {variant!r}")
    return certify(f, x0, T, _WEAK_VARIANTS[variant], search)


def certify_svi(f: HFamilyMap, x0: Sequence, T: TestSet, strong: bool = True, scalarized: bool = False,
                search: Optional[WitnessSearch] = None) -> ConditionVerdict:
    cond = {
        (True, False): Condition.SVI_M, (True, True): Condition.SVI_M_SCALAR,
        (False, False): Condition.SVI_W, (False, True): Condition.SVI_W_SCALAR,
    }[(strong, scalarized)]
    return certify(f, x0, T, cond, search)


def certify_mvi(f: HFamilyMap, x0: Sequence, T: TestSet, strong: bool = True, scalarized: bool = False,
                search: Optional[WitnessSearch] = None) -> ConditionVerdict:
    cond = {
        (True, False): Condition.MVI_M, (True, True): Condition.MVI_M_SCALAR,
        (False, False): Condition.MVI_W, (False, True): Condition.MVI_W_SCALAR,
    }[(strong, scalarized)]
    return certify(f, x0, T, cond, search)


def certify_all(f: HFamilyMap, x0: Sequence, T: TestSet, conditions: Sequence[Condition] = ALL_CONDITIONS,
                search: Optional[WitnessSearch] = None) -> Tuple[ConditionVerdict, ...]:
    picked = set(conditions)
    return tuple(certify(f, x0, T, c, search) for c in ALL_CONDITIONS if c in picked)


# ---------- Regularity over a test set ----------

@dataclass(frozen=True)
class RegularitySweep:
    kind: str
    points: Tuple[Vector, ...]
    at_x0: Tuple[RegularityVerdict, ...]     # (x0, x - x0)
    at_points: Tuple[RegularityVerdict, ...]  # (x, x0 - x)

    @property
    def holds(self) -> bool:
        return all(v.holds for v in self.at_x0 + self.at_points)

    @property
    def inequality_ok(self) -> bool:
        return all(v.inequality_ok for v in self.at_x0 + self.at_points)

    def stampacchia_at(self, x: Sequence) -> Optional[RegularityVerdict]:
        x = vec(x)
        return self.at_x0[self.points.index(x)] if x in self.points else None

    def minty_at(self, x: Sequence) -> Optional[RegularityVerdict]:
        x = vec(x)
        return self.at_points[self.points.index(x)] if x in self.points else None


def regularity_sweep(f: HFamilyMap, x0: Sequence, T: TestSet, kind: str = "SR",
                     extra: Sequence[Vector] = ()) -> RegularitySweep:
    """SR or WR at every tested pair (x0, x - x0) and (x, x0 - x), x ∈ T ∩ dom f, x ≠ x0."""
    if kind not in ("SR", "WR"):
        raise StructuralError(f"unknown regularity kind {kind!r}")
    x0 = vec(x0)
    check = check_SR if kind == "SR" else check_WR
    functionals = regularity_functionals(f)
    for z in extra:
        if z not in functionals:
            functionals.append(z)
    points, at_x0, at_points = [], [], []
    for x in T:
        if x == x0 or not f.in_domain(x):
            continue
        points.append(x)
        at_x0.append(check(f, x0, vsub(x, x0), functionals))
        at_points.append(check(f, x, vsub(x0, x), functionals))
    return RegularitySweep(kind, tuple(points), tuple(at_x0), tuple(at_points))


def parse_point(text: str) -> Vector:
    """'2/3' or '0,2' into an exact point."""
    parts = [p for p in text.replace(" ", "").split(",") if p]
    if not parts:
        raise StructuralError(f"empty point {text!r}")
    return tuple(as_rational(p) for p in parts)


def parse_testset(text: str) -> TestSet:
    """'grid:LO:HI:K' with comma-separated corners, or points separated by ';'."""
    text = text.strip()
    if text.startswith("grid:"):
        parts = text[len("grid:"):].split(":")
        if len(parts) != 3:
            raise StructuralError(f"grid test set {text!r} needs LO:HI:K")
        try:
            k = int(parts[2])
        except ValueError:
            raise StructuralError(f"grid resolution {parts[2]!r} is not an integer") from None
        return TestSet.grid(parse_point(parts[0]), parse_point(parts[1]), k)
    return TestSet.of(parse_point(p) for p in text.split(";") if p.strip())


__all__ = [
    "ALL_CONDITIONS", "Condition", "ConditionVerdict", "PointCheck", "RegularitySweep", "Strategy",
    "TestSet", "Verdict", "WitnessSearch", "candidate_functionals", "certify", "certify_all",
    "certify_min", "certify_mvi", "certify_svi", "certify_weak_min", "check_condition_at",
    "grid_functionals", "parse_conditions", "parse_point", "parse_testset", "regularity_sweep", "touching_normals",
]

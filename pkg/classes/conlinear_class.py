from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence, Tuple

from classes.errors_class import ConeMismatchError, StructuralError, ValidationError
from classes.extreal_class import MINUS_INF, PLUS_INF, ExtReal, residual
from classes.lp_class import (
    ONE,
    ZERO,
    LpStatus,
    Row,
    Vector,
    as_rational,
    canonical_rows,
    dot,
    is_zero,
    l1_norm,
    maximize,
    minimize,
    strictly_feasible,
    unit,
    vadd,
    vec,
    zeros,
)
from classes.polyhedron_class import VRep, cone_generators, h_to_v, v_to_h

logger = logging.getLogger(__name__)

# ---------- Ordering cone ----------

@dataclass(frozen=True)
class OrderingCone:
    """Polyhedral C with interior point e and the vertex set of B* = {v ∈ C⁻ | v·e = −1}."""
    dim: int
    generators: Tuple[Vector, ...]
    interior: Vector
    dual_generators: Tuple[Vector, ...]
    base_vertices: Tuple[Vector, ...]

    @classmethod
    def from_generators(cls, generators: Iterable[Sequence], interior: Sequence) -> "OrderingCone":
        e = vec(interior)
        m = len(e)
        gens = tuple(vec(g) for g in generators)
        for g in gens:
            if len(g) != m:
                raise StructuralError(f"cone generator {g} has dimension {len(g)}, expected {m}")
        if not gens:
            raise ValidationError("ordering cone without generators has empty interior")
        rays, lines = cone_generators(m, gens)
        if lines:
            raise ValidationError("ordering cone has empty interior (its dual contains a line)")
        if not rays:
            raise ValidationError("ordering cone is the whole space")
        ok, _ = strictly_feasible([(v, ZERO) for v in rays], m)
        if not ok:
            raise ValidationError("ordering cone has empty interior")
        for v in rays:
            if dot(v, e) >= 0:
                raise ValidationError(f"point {tuple(map(str, e))} is not interior to the ordering cone")
        base = sorted(tuple(x / -dot(v, e) for x in v) for v in rays)
        return cls(m, gens, e, tuple(rays), tuple(base))

    @classmethod
    def orthant(cls, m: int) -> "OrderingCone":
        if m < 1:
            raise StructuralError("orthant dimension must be positive")
        return cls.from_generators([unit(m, i) for i in range(m)], [ONE] * m)

    @property
    def is_orthant(self) -> bool:
        return self.same_as(OrderingCone.orthant(self.dim)) and self.interior == tuple([ONE] * self.dim)

    def contains(self, z: Vector) -> bool:
        return all(dot(v, z) <= 0 for v in self.dual_generators)

    def interior_contains(self, z: Vector) -> bool:
        return all(dot(v, z) < 0 for v in self.dual_generators)

    def in_dual(self, zstar: Vector) -> bool:
        return all(dot(zstar, g) <= 0 for g in self.generators)

    def normalize(self, zstar: Sequence) -> Vector:
        """Scale z* ∈ C⁻\\{0} into B*."""
        zstar = vec(zstar)
        if len(zstar) != self.dim:
            raise StructuralError(f"functional of dimension {len(zstar)}, expected {self.dim}")
        if is_zero(zstar) or not self.in_dual(zstar):
            raise ValidationError(f"functional {tuple(map(str, zstar))} is not in C⁻\\{{0}}")
        s = -dot(zstar, self.interior)
        return tuple(x / s for x in zstar)

    def same_as(self, other: "OrderingCone") -> bool:
        return self.dim == other.dim and self.dual_generators == other.dual_generators


# ---------- Upper sets ----------

@dataclass(frozen=True, eq=False)
class UpperSet:
    """Element of G(Z,C): {z | a_j·z <= c_j} with every a_j ∈ C⁻\\{0}.

    No rows encodes Z, ``empty`` encodes ∅. A row system with normals in
    C⁻ is never infeasible (z = t·e for t large), so emptiness only comes
    from an explicit ∅ or from an infeasible zero row.
    """
    cone: OrderingCone
    rows: Tuple[Row, ...] = ()
    empty: bool = False

    @classmethod
    def from_rows(cls, cone: OrderingCone, rows: Iterable[Tuple[Sequence, object]], prune: bool = True) -> "UpperSet":
        checked: List[Row] = []
        for a, c in rows:
            a = vec(a)
            c = as_rational(c)
            if len(a) != cone.dim:
                raise StructuralError(f"row normal of dimension {len(a)}, expected {cone.dim}")
            if is_zero(a):
                if c < 0:
                    return cls.empty_set(cone)
                continue
            if not cone.in_dual(a):
                raise StructuralError(f"normal {tuple(map(str, a))} is not in C⁻")
            checked.append((a, c))
        return cls(cone, tuple(canonical_rows(checked, prune)))

    @classmethod
    def whole(cls, cone: OrderingCone) -> "UpperSet":
        return cls(cone, ())

    @classmethod
    def empty_set(cls, cone: OrderingCone) -> "UpperSet":
        return cls(cone, (), True)

    @classmethod
    def cone_set(cls, cone: OrderingCone) -> "UpperSet":
        return cls.from_rows(cone, [(v, ZERO) for v in cone.dual_generators])

    @classmethod
    def translate(cls, cone: OrderingCone, point: Sequence) -> "UpperSet":
        p = vec(point)
        return cls.from_rows(cone, [(v, dot(v, p)) for v in cone.dual_generators])

    @property
    def is_whole(self) -> bool:
        return not self.empty and not self.rows

    def contains(self, z: Sequence) -> bool:
        z = vec(z)
        return not self.empty and all(dot(a, z) <= c for a, c in self.rows)

    def witness_point(self) -> Optional[Vector]:
        if self.empty:
            return None
        e = self.cone.interior
        t = ZERO
        for a, c in self.rows:
            t = max(t, c / dot(a, e))
        return tuple(t * x for x in e)

    def vrep(self) -> Optional[VRep]:
        if self.empty:
            return None
        return h_to_v(self.cone.dim, self.rows)

    def dump(self) -> str:
        if self.empty:
            return " ".join(["0"] * self.cone.dim) + " <= -1"
        return "\n".join(" ".join(str(x) for x in a) + f" <= {c}" for a, c in self.rows)

    @classmethod
    def parse_dump(cls, cone: OrderingCone, text: str) -> "UpperSet":
        rows = []
        for line in text.splitlines():
            line = line.strip()
            if not line:
                continue
            lhs, _, rhs = line.partition("<=")
            rows.append((vec(lhs.split()), as_rational(rhs)))
        return cls.from_rows(cone, rows)

    def __repr__(self) -> str:
        if self.empty:
            return "UpperSet(∅)"
        if not self.rows:
            return "UpperSet(Z)"
        return "UpperSet(" + "; ".join(f"{tuple(map(str, a))}<={c}" for a, c in self.rows) + ")"


def _check(a: UpperSet, b: UpperSet) -> None:
    if not a.cone.same_as(b.cone):
        raise ConeMismatchError("upper sets over different ordering cones")


# ---------- Support and order ----------

def support(zstar: Sequence, a: UpperSet) -> ExtReal:
    """σ(z*|A): −∞ on ∅, +∞ when z* leaves the barrier cone."""
    if a.empty:
        return MINUS_INF
    out = maximize(vec(zstar), a.rows)
    if out.status == LpStatus.UNBOUNDED:
        return PLUS_INF
    if out.status == LpStatus.INFEASIBLE:
        return MINUS_INF
    return ExtReal.of(out.value)


def contained_in(b: UpperSet, a: UpperSet) -> bool:
    """B ⊆ A, one LP per row of A not already implied by a row of B."""
    _check(a, b)
    if b.empty:
        return True
    if a.empty:
        return False
    own = dict(b.rows)
    return all((n in own and own[n] <= c) or support(n, b) <= ExtReal.of(c) for n, c in a.rows)


def order_leq(a: UpperSet, b: UpperSet) -> bool:
    """A ≼ B iff B ⊆ A."""
    return contained_in(b, a)


def set_equal(a: UpperSet, b: UpperSet) -> bool:
    return contained_in(a, b) and contained_in(b, a)


# ---------- Lattice operations ----------

def lattice_sup(sets: Sequence[UpperSet], cone: Optional[OrderingCone] = None) -> UpperSet:
    """Intersection; sup of the empty collection is Z."""
    sets = list(sets)
    if not sets:
        if cone is None:
            raise StructuralError("empty collection needs an explicit cone")
        return UpperSet.whole(cone)
    cone = sets[0].cone
    for s in sets[1:]:
        _check(sets[0], s)
    if any(s.empty for s in sets):
        return UpperSet.empty_set(cone)
    return UpperSet.from_rows(cone, [r for s in sets for r in s.rows])


def lattice_inf(sets: Sequence[UpperSet], cone: Optional[OrderingCone] = None) -> UpperSet:
    """Closed convex hull of the union; inf of the empty collection is ∅."""
    sets = list(sets)
    if sets:
        cone = sets[0].cone
        for s in sets[1:]:
            _check(sets[0], s)
    elif cone is None:
        raise StructuralError("empty collection needs an explicit cone")
    members = [s for s in sets if not s.empty]
    if not members:
        return UpperSet.empty_set(cone)
    if any(s.is_whole for s in members):
        return UpperSet.whole(cone)
    if len(members) == 1:
        return members[0]
    points, rays, lines = set(), set(), set()
    for s in members:
        v = s.vrep()
        points.update(v.points)
        rays.update(v.rays)
        lines.update(v.lines)
    hull = VRep(cone.dim, tuple(sorted(points)), tuple(sorted(rays)), tuple(sorted(lines)))
    return UpperSet.from_rows(cone, v_to_h(hull))


def oplus(a: UpperSet, b: UpperSet) -> UpperSet:
    """Closed Minkowski sum; ∅ dominates."""
    _check(a, b)
    if a.empty or b.empty:
        return UpperSet.empty_set(a.cone)
    if a.is_whole or b.is_whole:
        return UpperSet.whole(a.cone)
    va, vb = a.vrep(), b.vrep()
    points = sorted({vadd(p, q) for p in va.points for q in vb.points})
    rays = sorted(set(va.rays) | set(vb.rays))
    lines = sorted(set(va.lines) | set(vb.lines))
    return UpperSet.from_rows(a.cone, v_to_h(VRep(a.cone.dim, tuple(points), tuple(rays), tuple(lines))))


def scale(t, a: UpperSet) -> UpperSet:
    """t·A for t >= 0; 0·A = C for every A, including ∅ and Z."""
    t = as_rational(t)
    if t < 0:
        raise StructuralError(f"negative scale factor {t}")
    if t == 0:
        return UpperSet.cone_set(a.cone)
    if a.empty:
        return a
    return UpperSet(a.cone, tuple((n, t * c) for n, c in a.rows))


def inf_residual(a: UpperSet, b: UpperSet) -> UpperSet:
    """A −̇ B = {z | B + z ⊆ A}."""
    _check(a, b)
    if b.empty:
        return UpperSet.whole(a.cone)
    if a.empty:
        return UpperSet.empty_set(a.cone)
    rows = []
    for n, c in a.rows:
        off = residual(ExtReal.of(c), support(n, b))
        if off.is_minus_inf:
            return UpperSet.empty_set(a.cone)
        if off.is_finite:
            rows.append((n, off.value))
    return UpperSet.from_rows(a.cone, rows)


def recession_cone(a: UpperSet) -> UpperSet:
    if a.empty:
        return a
    return UpperSet.from_rows(a.cone, [(n, ZERO) for n, _ in a.rows])


# ---------- Interior tests and margins ----------

def in_interior(z: Sequence, a: UpperSet) -> bool:
    z = vec(z)
    return not a.empty and all(dot(n, z) < c for n, c in a.rows)


def has_interior_point(a: UpperSet) -> bool:
    if a.empty:
        return False
    return strictly_feasible(a.rows, a.cone.dim)[0]


def subset_of_interior(a: UpperSet, b: UpperSet) -> bool:
    """A ⊆ int B by strict support comparisons over the rows of B."""
    _check(a, b)
    if a.empty:
        return True
    if b.empty:
        return False
    return all(support(n, a) < ExtReal.of(c) for n, c in b.rows)


def margin(inner: UpperSet, outer: UpperSet) -> ExtReal:
    """Largest ε with inner + ε·B∞ ⊆ outer: min_j (c_j − σ(a_j|inner))/‖a_j‖₁."""
    _check(inner, outer)
    if outer.empty:
        return MINUS_INF if not inner.empty else PLUS_INF
    if inner.empty or outer.is_whole:
        return PLUS_INF
    best = PLUS_INF
    for n, c in outer.rows:
        s = support(n, inner)
        if s.is_plus_inf:
            return MINUS_INF
        best = min(best, ExtReal.of((c - s.value) / l1_norm(n)))
    return best


def scalar_representation(a: UpperSet) -> UpperSet:
    """⋂_{v ∈ B*} {z | −σ(v|A) <= −v·z} over the base vertices."""
    if a.empty:
        return a
    rows = []
    for v in a.cone.base_vertices:
        s = support(v, a)
        if s.is_finite:
            rows.append((v, s.value))
    return UpperSet.from_rows(a.cone, rows)


def distance_linf(p: Sequence, a: UpperSet) -> ExtReal:
    """ℓ∞ distance from a point to A, exact by LP over (w, ε)."""
    p = vec(p)
    if a.empty:
        return PLUS_INF
    m = a.cone.dim
    rows: List[Row] = [(tuple(n) + (ZERO,), c) for n, c in a.rows]
    for i in range(m):
        e = unit(m, i)
        rows.append((tuple(-x for x in e) + (-ONE,), -p[i]))
        rows.append((e + (-ONE,), p[i]))
    out = minimize(zeros(m) + (ONE,), rows)
    return ExtReal.of(out.value)


def excess_linf(a: UpperSet, b: UpperSet) -> ExtReal:
    """sup_{z ∈ A} dist∞(z, B); the upper-Hausdorff defect of A over B."""
    _check(a, b)
    if a.empty:
        return MINUS_INF
    if b.empty:
        return PLUS_INF
    if b.is_whole:
        return ExtReal.of(ZERO)
    va = a.vrep()
    directions = list(va.rays) + list(va.lines) + [tuple(-x for x in l) for l in va.lines]
    for d in directions:
        if any(dot(n, d) > 0 for n, _ in b.rows):
            return PLUS_INF
    return max(distance_linf(p, b) for p in va.points)

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Dict, List, Optional, Protocol, Sequence, Tuple, Union

import numpy as np

from classes.conlinear_class import OrderingCone, UpperSet, set_equal, support
from classes.errors_class import StructuralError, ValidationError
from classes.extreal_class import ExtReal, ext_scale, inf_add
from classes.lp_class import (
    ONE,
    ZERO,
    Row,
    Vector,
    as_rational,
    canonical_rows,
    dot,
    is_zero,
    vec,
    vsub,
    zeros,
)
from classes.polyhedron_class import Polyhedron, VRep, v_to_h

logger = logging.getLogger(__name__)

HALF = Fraction(1, 2)

# ---------- Scalar building blocks ----------

@dataclass(frozen=True)
class AffineFunction:
    coeffs: Vector
    const: Fraction

    @classmethod
    def of(cls, coeffs: Sequence, const) -> "AffineFunction":
        return cls(vec(coeffs), as_rational(const))

    def __call__(self, x: Vector) -> Fraction:
        return dot(self.coeffs, x) + self.const

    def slope(self, u: Vector) -> Fraction:
        return dot(self.coeffs, u)

    def along(self, x0: Vector, d: Vector) -> "AffineFunction":
        """t ↦ self(x0 + t d)."""
        return AffineFunction((dot(self.coeffs, d),), self(x0))

    def scaled(self, t: Fraction) -> "AffineFunction":
        return AffineFunction(tuple(t * g for g in self.coeffs), t * self.const)

    def __add__(self, other: "AffineFunction") -> "AffineFunction":
        return AffineFunction(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)), self.const + other.const)


@dataclass(frozen=True)
class ConcavePWL:
    """min_i (g_i·x + h_i)."""
    pieces: Tuple[AffineFunction, ...]

    def __post_init__(self):
        if not self.pieces:
            raise StructuralError("piecewise-linear function needs at least one piece")
        n = len(self.pieces[0].coeffs)
        if any(len(p.coeffs) != n for p in self.pieces):
            raise StructuralError("pieces of different dimensions")

    @classmethod
    def affine(cls, coeffs: Sequence, const) -> "ConcavePWL":
        return cls((AffineFunction.of(coeffs, const),))

    @classmethod
    def constant(cls, n: int, c) -> "ConcavePWL":
        return cls((AffineFunction(zeros(n), as_rational(c)),))

    @property
    def xdim(self) -> int:
        return len(self.pieces[0].coeffs)

    def __call__(self, x: Vector) -> Fraction:
        return min(p(x) for p in self.pieces)

    def active(self, x: Vector) -> List[int]:
        vals = [p(x) for p in self.pieces]
        low = min(vals)
        return [i for i, v in enumerate(vals) if v == low]

    def right_slope(self, x: Vector, u: Vector) -> Fraction:
        """One-sided slope at t = 0⁺ of t ↦ b(x + t u): min over the active pieces."""
        return min(self.pieces[i].slope(u) for i in self.active(x))

    def along(self, x0: Vector, d: Vector) -> "ConcavePWL":
        return ConcavePWL(tuple(p.along(x0, d) for p in self.pieces))

    def scaled(self, t: Fraction) -> "ConcavePWL":
        if t < 0:
            raise StructuralError("concave functions scale by nonnegative factors only")
        return ConcavePWL(tuple(p.scaled(t) for p in self.pieces))

    def __add__(self, other: "ConcavePWL") -> "ConcavePWL":
        sums = []
        for p in self.pieces:
            for q in other.pieces:
                s = p + q
                if s not in sums:
                    sums.append(s)
        return ConcavePWL(tuple(sums))

    def breakpoint_after(self, x0: Vector, d: Vector) -> Optional[Fraction]:
        """First t > 0 where the active piece along x0 + t d changes; None if never."""
        line = self.along(x0, d)
        b0 = line((ZERO,))
        s = line.right_slope((ZERO,), (ONE,))
        first = None
        for p in line.pieces:
            alpha, beta = p.coeffs[0], p.const
            if alpha < s and beta > b0:
                t = (beta - b0) / (s - alpha)
                first = t if first is None else min(first, t)
        return first


@dataclass(frozen=True)
class ConvexPWL:
    """max_i (g_i·x + h_i)."""
    pieces: Tuple[AffineFunction, ...]

    def __post_init__(self):
        if not self.pieces:
            raise StructuralError("piecewise-linear function needs at least one piece")

    def __call__(self, x: Vector) -> Fraction:
        return max(p(x) for p in self.pieces)


Component = Union[AffineFunction, ConcavePWL, ConvexPWL]


def weighted_concave(comp: Component, weight: Fraction) -> Optional[ConcavePWL]:
    """weight·comp as a ConcavePWL, or None when that product is not concave."""
    if weight == 0:
        n = len(comp.coeffs) if isinstance(comp, AffineFunction) else len(comp.pieces[0].coeffs)
        return ConcavePWL.constant(n, ZERO)
    if isinstance(comp, AffineFunction):
        return ConcavePWL((comp.scaled(weight),))
    if len(comp.pieces) == 1:
        return ConcavePWL((comp.pieces[0].scaled(weight),))
    if isinstance(comp, ConvexPWL):
        return ConcavePWL(tuple(p.scaled(weight) for p in comp.pieces)) if weight < 0 else None
    return comp.scaled(weight) if weight > 0 else None


# ---------- Certificates ----------

@dataclass(frozen=True)
class ConvexityCertificate:
    certified: bool
    method: str  # 'structural' | 'sampled'
    detail: str = ""
    counterexample: Optional[Dict[str, Vector]] = None


# ---------- Set-valued maps ----------

class SetMap(Protocol):
    name: str
    cone: OrderingCone
    xdim: int

    def evaluate(self, x: Vector) -> UpperSet: ...


@dataclass(frozen=True)
class HFamilyMap:
    """x ↦ {z | a_j·z <= b_j(x)} on D, ∅ off D."""
    name: str
    cone: OrderingCone
    xdim: int
    domain: Polyhedron
    normals: Tuple[Vector, ...]
    offsets: Tuple[ConcavePWL, ...]
    source: Optional["VectorMap"] = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        if not self.normals:
            raise StructuralError(f"map {self.name!r} needs at least one row")
        if len(self.normals) != len(self.offsets):
            raise StructuralError(f"map {self.name!r}: {len(self.normals)} normals, {len(self.offsets)} offsets")
        if self.domain.dim != self.xdim:
            raise StructuralError(f"map {self.name!r}: domain dimension {self.domain.dim}, expected {self.xdim}")
        for a, b in zip(self.normals, self.offsets):
            if len(a) != self.cone.dim:
                raise StructuralError(f"map {self.name!r}: normal of dimension {len(a)}")
            if is_zero(a) or not self.cone.in_dual(a):
                raise StructuralError(f"map {self.name!r}: normal {tuple(map(str, a))} is not in C⁻\\{{0}}")
            if b.xdim != self.xdim:
                raise StructuralError(f"map {self.name!r}: offset over dimension {b.xdim}")

    @classmethod
    def constant(cls, name: str, cone: OrderingCone, xdim: int, value: UpperSet, domain: Optional[Polyhedron] = None) -> "HFamilyMap":
        if value.empty or value.is_whole:
            raise StructuralError("constant maps need a proper upper set value")
        return cls(
            name, cone, xdim, domain or Polyhedron.whole(xdim),
            tuple(a for a, _ in value.rows),
            tuple(ConcavePWL.constant(xdim, c) for _, c in value.rows),
        )

    def _point(self, x: Sequence) -> Vector:
        x = vec(x)
        if len(x) != self.xdim:
            raise StructuralError(f"point of dimension {len(x)}, map {self.name!r} lives in dimension {self.xdim}")
        return x

    def in_domain(self, x: Sequence) -> bool:
        return self.domain.contains(self._point(x))

    def offsets_at(self, x: Sequence) -> Tuple[Fraction, ...]:
        x = self._point(x)
        return tuple(b(x) for b in self.offsets)

    def rows_at(self, x: Sequence) -> List[Row]:
        return list(zip(self.normals, self.offsets_at(x)))

    def slopes_at(self, x: Sequence, u: Sequence) -> Tuple[Fraction, ...]:
        x, u = self._point(x), self._point(u)
        return tuple(b.right_slope(x, u) for b in self.offsets)

    def evaluate(self, x: Sequence) -> UpperSet:
        return _evaluate_cached(self, self._point(x))

    def ray_enters_domain(self, x: Sequence, u: Sequence) -> bool:
        """x + t u ∈ D for all small t > 0, given x ∈ D."""
        x, u = self._point(x), self._point(u)
        if not self.domain.contains(x):
            return False
        return all(dot(g, u) <= 0 for g, _ in self.domain.tight_rows(x))

    @property
    def is_vector_extension(self) -> bool:
        return self.source is not None


@lru_cache(maxsize=8192)
def _evaluate_cached(f: HFamilyMap, x: Vector) -> UpperSet:
    if not f.domain.contains(x):
        return UpperSet.empty_set(f.cone)
    return UpperSet.from_rows(f.cone, f.rows_at(x))


@dataclass(frozen=True)
class VectorMap:
    """ψ: S → R^m, each coordinate affine or piecewise-linear."""
    name: str
    cone: OrderingCone
    xdim: int
    domain: Polyhedron
    components: Tuple[Component, ...]

    def __post_init__(self):
        if len(self.components) != self.cone.dim:
            raise StructuralError(f"vector map {self.name!r}: {len(self.components)} components for dimension {self.cone.dim}")

    def __call__(self, x: Sequence) -> Vector:
        x = vec(x)
        return tuple(c(x) for c in self.components)

    def weighted(self, v: Vector) -> Optional[ConcavePWL]:
        """v·ψ as a ConcavePWL when every term is concave."""
        total: Optional[ConcavePWL] = None
        for comp, w in zip(self.components, v):
            term = weighted_concave(comp, w)
            if term is None:
                return None
            total = term if total is None else total + term
        return total

    def c_convexity(self) -> ConvexityCertificate:
        for v in self.cone.base_vertices:
            if self.weighted(v) is None:
                cex = _midpoint_search(
                    lambda x, v=v: ExtReal.of(-dot(v, self(x))) if self.domain.contains(x) else None,
                    self.domain.sample_points(), v,
                )
                return ConvexityCertificate(False, "sampled", f"x ↦ -v·ψ(x) is not structurally convex for v={tuple(map(str, v))}", cex)
        return ConvexityCertificate(True, "structural", "every -v·ψ is a max of affine functions")


# ---------- Constructions ----------

def epigraphical_extension(psi: VectorMap) -> HFamilyMap:
    """ψ^C(x) = ψ(x) + C on S: normals are the vertices of B*, offsets v·ψ(x)."""
    cert = psi.c_convexity()
    if not cert.certified:
        raise ValidationError(f"{psi.name}: C-convexity not certified: {cert.detail}", cert.counterexample)
    normals = tuple(psi.cone.base_vertices)
    offsets = tuple(psi.weighted(v) for v in normals)
    return HFamilyMap(psi.name, psi.cone, psi.xdim, psi.domain, normals, offsets, source=psi)


@dataclass(frozen=True)
class AffinePoint:
    """x ↦ W x + q in Z."""
    matrix: Tuple[Vector, ...]
    offset: Vector

    def __call__(self, x: Vector) -> Vector:
        return tuple(dot(row, x) + q for row, q in zip(self.matrix, self.offset))

    def functional(self, a: Vector) -> AffineFunction:
        n = len(self.matrix[0]) if self.matrix else 0
        coeffs = tuple(sum((a[i] * self.matrix[i][k] for i in range(len(a))), ZERO) for k in range(n))
        return AffineFunction(coeffs, dot(a, self.offset))


@dataclass(frozen=True)
class Region:
    domain: Polyhedron
    points: Tuple[AffinePoint, ...]
    rays: Tuple[Vector, ...] = ()


@dataclass(frozen=True)
class SetValuedData:
    """F(x) = conv{w_i(x)} + cone(rays) on each (bounded) region, ∅ elsewhere."""
    name: str
    cone: OrderingCone
    xdim: int
    regions: Tuple[Region, ...]


def _region_hull(F: SetValuedData, reg: Region, x: Vector) -> List[Row]:
    hull = VRep(F.cone.dim, tuple(sorted({w(x) for w in reg.points})),
                tuple(sorted(set(reg.rays) | set(F.cone.generators))))
    return canonical_rows(v_to_h(hull))


def set_extension(F: SetValuedData) -> HFamilyMap:
    """F^C as an H-family; rejects data whose extension needs x-dependent normals or is not convex."""
    if not F.regions:
        raise ValidationError(f"{F.name}: no regions")
    samples: List[List[Vector]] = []
    for idx, reg in enumerate(F.regions):
        v = reg.domain.vrep()
        if v is None:
            raise ValidationError(f"{F.name}: region {idx} is empty")
        if v.rays or v.lines:
            raise ValidationError(f"{F.name}: region {idx} is unbounded")
        if not reg.points:
            raise ValidationError(f"{F.name}: region {idx} has no point generators")
        pts = list(v.points)
        centroid = tuple(sum((p[k] for p in pts), ZERO) / len(pts) for k in range(F.xdim))
        samples.append(sorted(set(pts + [centroid])))

    normals = set()
    for reg, pts in zip(F.regions, samples):
        for x in pts:
            normals.update(a for a, _ in _region_hull(F, reg, x))
    normals = sorted(normals)

    offsets = []
    for a in normals:
        chosen: List[AffineFunction] = []
        for idx, (reg, pts) in enumerate(zip(F.regions, samples)):
            if any(dot(a, r) > 0 for r in reg.rays):
                raise ValidationError(f"{F.name}: normal {tuple(map(str, a))} is unbounded on region {idx}",
                                      {"normal": a})
            cands = [w.functional(a) for w in reg.points]
            dominant = next((p for p in cands if all(p(x) >= q(x) for q in cands for x in pts)), None)
            if dominant is None:
                raise ValidationError(
                    f"{F.name}: support along {tuple(map(str, a))} is not affine on region {idx}; "
                    "the extension would need x-dependent normals", {"normal": a})
            chosen.append(dominant)
        b = ConcavePWL(tuple(dict.fromkeys(chosen)))
        for piece, pts in zip(chosen, samples):
            for x in pts:
                if b(x) != piece(x):
                    raise ValidationError(f"{F.name}: extension is not convex near x={tuple(map(str, x))}",
                                          {"x": x, "normal": a})
        offsets.append(b)

    all_pts = sorted({x for pts in samples for x in pts})
    domain_rows = canonical_rows(v_to_h(VRep(F.xdim, tuple(all_pts))))
    f = HFamilyMap(F.name, F.cone, F.xdim, Polyhedron(F.xdim, tuple(domain_rows)), tuple(normals), tuple(offsets))

    for p, q in combinations(all_pts, 2):
        mid = tuple((s + t) * HALF for s, t in zip(p, q))
        if not any(reg.domain.contains(mid) for reg in F.regions):
            raise ValidationError(f"{F.name}: regions do not cover their hull at {tuple(map(str, mid))}", {"x": mid})
    for reg, pts in zip(F.regions, samples):
        for x in pts:
            expected = UpperSet.from_rows(F.cone, _region_hull(F, reg, x))
            if not set_equal(f.evaluate(x), expected):
                raise ValidationError(f"{F.name}: extension disagrees with the data at x={tuple(map(str, x))}", {"x": x})
    logger.info("set extension %s: %d normals over %d regions", F.name, len(normals), len(F.regions))
    return f


# ---------- Scalarization and restriction ----------

@dataclass(frozen=True)
class Scalarization:
    map: HFamilyMap
    zstar: Vector

    def __call__(self, x: Sequence) -> ExtReal:
        return -support(self.zstar, self.map.evaluate(x))


def scalarize(f: HFamilyMap, zstar: Sequence) -> Scalarization:
    zstar = vec(zstar)
    if len(zstar) != f.cone.dim:
        raise StructuralError(f"functional of dimension {len(zstar)}, expected {f.cone.dim}")
    if is_zero(zstar) or not f.cone.in_dual(zstar):
        raise ValidationError(f"functional {tuple(map(str, zstar))} is not in C⁻\\{{0}}")
    return Scalarization(f, zstar)


def restrict(f: HFamilyMap, x0: Sequence, x: Sequence) -> HFamilyMap:
    """t ↦ f(x0 + t(x − x0)) on [0,1], ∅ elsewhere."""
    x0, x = vec(x0), vec(x)
    d = vsub(x, x0)
    rows: List[Row] = [((ONE,), ONE), ((-ONE,), ZERO)]
    rows += [((dot(g, d),), h - dot(g, x0)) for g, h in f.domain.rows]
    return HFamilyMap(
        f"{f.name}|[{','.join(map(str, x0))};{','.join(map(str, x))}]",
        f.cone, 1, Polyhedron(1, tuple(rows)), f.normals,
        tuple(b.along(x0, d) for b in f.offsets),
    )


# ---------- Convexity validation ----------

def _midpoint_search(value, points: Sequence[Vector], zstar: Vector, pairs: Optional[Sequence] = None) -> Optional[Dict[str, Vector]]:
    for p, q in pairs if pairs is not None else combinations(points, 2):
        mid = tuple((s + t) * HALF for s, t in zip(p, q))
        vm, vp, vq = value(mid), value(p), value(q)
        if vp is None or vq is None:
            continue
        if vm is None:
            return {"x1": p, "x2": q, "zstar": zstar}
        if vm > inf_add(ext_scale(HALF, vp), ext_scale(HALF, vq)):
            return {"x1": p, "x2": q, "zstar": zstar}
    return None


def validate_convexity(f: SetMap, points: Optional[Sequence[Sequence]] = None, seed: int = 0, trials: int = 64) -> ConvexityCertificate:
    """Convexity of every φ_{f,v}, v a vertex of B*.

    H-family maps are certified structurally: on each critical region the
    support value is a nonnegative combination of concave offsets, so every
    φ_{f,v} is a max of convex functions. The randomized midpoint test then
    runs as a cross-check, and is the only test for other maps.
    """
    pts = [vec(p) for p in (points or [])]
    structural = isinstance(f, HFamilyMap)
    if structural:
        pts = sorted(set(pts) | set(f.domain.sample_points()))
    pts = sorted(set(pts))
    rng = np.random.default_rng(seed)
    all_pairs = list(combinations(pts, 2))
    if len(all_pairs) > trials:
        picks = rng.choice(len(all_pairs), size=trials, replace=False)
        all_pairs = [all_pairs[int(i)] for i in sorted(picks)]
    for v in f.cone.base_vertices:
        def value(x, v=v):
            return -support(v, f.evaluate(x))
        cex = _midpoint_search(value, pts, v, all_pairs)
        if cex is not None:
            logger.warning("convexity counterexample for %s at %s", f.name, cex)
            return ConvexityCertificate(False, "sampled", "midpoint inequality violated", cex)
    if structural:
        return ConvexityCertificate(True, "structural", "concave piecewise-linear offsets with fixed normals")
    return ConvexityCertificate(False, "sampled", f"no midpoint violation among {len(all_pairs)} pairs")

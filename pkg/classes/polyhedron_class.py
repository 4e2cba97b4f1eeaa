from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import FrozenSet, List, Optional, Sequence, Tuple

from classes.errors_class import StructuralError
from classes.lp_class import (
    ONE,
    ZERO,
    Row,
    Vector,
    dot,
    feasible_point,
    is_zero,
    vadd,
    vec,
    zeros,
)

logger = logging.getLogger(__name__)

# ---------- Data models ----------

@dataclass(frozen=True)
class VRep:
    """conv(points) + cone(rays) + lin(lines); points are minimal-face representatives."""
    dim: int
    points: Tuple[Vector, ...]
    rays: Tuple[Vector, ...] = ()
    lines: Tuple[Vector, ...] = ()


# ---------- Exact linear algebra ----------

def primitive(v: Sequence[Fraction]) -> Vector:
    """Positive multiple of v with coprime integer entries."""
    if all(x == 0 for x in v):
        return tuple(ZERO for _ in v)
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for k in ints:
        g = gcd(g, abs(k))
    return tuple(Fraction(k // g) for k in ints)


def _neg(v: Vector) -> Vector:
    return tuple(-x for x in v)


def rref(matrix: Sequence[Sequence[Fraction]], ncols: int) -> Tuple[List[List[Fraction]], List[int]]:
    rows = [list(r) for r in matrix]
    pivots: List[int] = []
    r = 0
    for c in range(ncols):
        pr = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if pr is None:
            continue
        rows[r], rows[pr] = rows[pr], rows[r]
        p = rows[r][c]
        rows[r] = [x / p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r], pivots


def rank(matrix: Sequence[Sequence[Fraction]], ncols: int) -> int:
    return len(rref(matrix, ncols)[1]) if matrix else 0


def null_space(matrix: Sequence[Sequence[Fraction]], ncols: int) -> List[Vector]:
    if not matrix:
        return [tuple(ONE if k == i else ZERO for k in range(ncols)) for i in range(ncols)]
    rows, pivots = rref(matrix, ncols)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for i, p in enumerate(pivots):
            v[p] = -rows[i][f]
        basis.append(primitive(v))
    return basis


def inverse(matrix: Sequence[Sequence[Fraction]]) -> List[List[Fraction]]:
    n = len(matrix)
    aug = [list(matrix[i]) + [ONE if j == i else ZERO for j in range(n)] for i in range(n)]
    rows, pivots = rref(aug, n)
    if pivots[:n] != list(range(n)) or len(rows) < n:
        raise StructuralError("singular matrix")
    return [r[n:] for r in rows]


# ---------- Double description ----------

def cone_generators(dim: int, normals: Sequence[Vector]) -> Tuple[List[Vector], List[Vector]]:
    """Extreme rays and lineality basis of {x | h·x <= 0 for every h}."""
    rays, lines = _cone_generators(dim, tuple(tuple(h) for h in normals if not is_zero(h)))
    return list(rays), list(lines)


@lru_cache(maxsize=1 << 14)
def _cone_generators(dim: int, normals: Tuple[Vector, ...]) -> Tuple[Tuple[Vector, ...], Tuple[Vector, ...]]:
    lines = null_space(normals, dim)
    if not normals:
        return (), tuple(lines)
    normals = list(normals)
    ineqs: List[Vector] = normals + lines + [_neg(l) for l in lines]

    chosen: List[int] = []
    basis_rows: List[Vector] = []
    for idx, h in enumerate(ineqs):
        if rank(basis_rows + [h], dim) > len(basis_rows):
            basis_rows.append(h)
            chosen.append(idx)
            if len(chosen) == dim:
                break
    inv = inverse(basis_rows)
    rays = [primitive([-inv[r][i] for r in range(dim)]) for i in range(dim)]

    chosen_set = set(chosen)
    processed = list(chosen)
    for idx, h in enumerate(ineqs):
        if idx in chosen_set:
            continue
        vals = [dot(h, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        if not pos:
            processed.append(idx)
            continue
        neg = [i for i, v in enumerate(vals) if v < 0]
        zsets: List[FrozenSet[int]] = [
            frozenset(k for k in processed if dot(ineqs[k], r) == 0) for r in rays
        ]
        new = [rays[i] for i, v in enumerate(vals) if v <= 0]
        for p in pos:
            for q in neg:
                common = zsets[p] & zsets[q]
                if len(common) < dim - 2:
                    continue
                if any(k != p and k != q and common <= zsets[k] for k in range(len(rays))):
                    continue
                combo = tuple(vals[p] * a - vals[q] * b for a, b in zip(rays[q], rays[p]))
                new.append(primitive(combo))
        rays = sorted(set(new))
        processed.append(idx)
    logger.debug("double description: %d rays, %d lines in dim %d", len(rays), len(lines), dim)
    return tuple(sorted(set(rays))), tuple(lines)


def h_to_v(dim: int, rows: Sequence[Row]) -> Optional[VRep]:
    """Vertices/rays/lines of {z | a·z <= c}; None when the system is infeasible."""
    normals = [tuple(a) + (-c,) for a, c in rows] + [zeros(dim) + (-ONE,)]
    rays, lines = cone_generators(dim + 1, normals)
    points = sorted({tuple(x / r[-1] for x in r[:-1]) for r in rays if r[-1] > 0})
    if not points:
        return None
    directions = sorted({r[:-1] for r in rays if r[-1] == 0})
    return VRep(dim, tuple(points), tuple(directions), tuple(l[:-1] for l in lines))


def v_to_h(v: VRep) -> List[Row]:
    """Inequalities of conv(points) + cone(rays) + lin(lines) via the polar cone."""
    if not v.points:
        raise StructuralError("V-representation without points")
    gens: List[Vector] = [tuple(p) + (ONE,) for p in v.points]
    gens += [tuple(r) + (ZERO,) for r in v.rays]
    gens += [tuple(l) + (ZERO,) for l in v.lines]
    gens += [_neg(tuple(l)) + (ZERO,) for l in v.lines]
    rays, lines = cone_generators(v.dim + 1, gens)
    out: List[Row] = []
    for y in rays:
        a, beta = y[:-1], y[-1]
        if not is_zero(a):
            out.append((a, -beta))
    for y in lines:
        a, beta = y[:-1], y[-1]
        if not is_zero(a):
            out.append((a, -beta))
            out.append((_neg(a), beta))
    return out


# ---------- Domains in X ----------

@dataclass(frozen=True)
class Polyhedron:
    dim: int
    rows: Tuple[Row, ...] = ()

    def __post_init__(self):
        for g, _ in self.rows:
            if len(g) != self.dim:
                raise StructuralError(f"domain row of length {len(g)} in dimension {self.dim}")

    @classmethod
    def whole(cls, dim: int) -> "Polyhedron":
        return cls(dim, ())

    @classmethod
    def box(cls, lo: Sequence, hi: Sequence) -> "Polyhedron":
        lo, hi = vec(lo), vec(hi)
        n = len(lo)
        rows = []
        for i in range(n):
            e = tuple(ONE if k == i else ZERO for k in range(n))
            rows.append((_neg(e), -lo[i]))
            rows.append((e, hi[i]))
        return cls(n, tuple(rows))

    def contains(self, x: Vector) -> bool:
        if len(x) != self.dim:
            raise StructuralError(f"point of length {len(x)} in dimension {self.dim}")
        return all(dot(g, x) <= h for g, h in self.rows)

    def tight_rows(self, x: Vector) -> List[Row]:
        return [(g, h) for g, h in self.rows if dot(g, x) == h]

    def is_empty(self) -> bool:
        return feasible_point(self.rows, self.dim) is None

    def vrep(self) -> Optional[VRep]:
        return h_to_v(self.dim, self.rows)

    def sample_points(self) -> List[Vector]:
        """Vertices plus one step along every ray and line direction."""
        v = self.vrep()
        if v is None:
            return []
        out = list(v.points)
        base = v.points[0]
        for d in v.rays:
            out.append(vadd(base, d))
        for d in v.lines:
            out.append(vadd(base, d))
            out.append(vadd(base, _neg(d)))
        return sorted(set(out))

    def segment_range(self, x0: Vector, d: Vector) -> Optional[Tuple[Optional[Fraction], Optional[Fraction]]]:
        """{t | x0 + t d ∈ P} as (lo, hi) with None for an infinite end; None if empty."""
        lo: Optional[Fraction] = None
        hi: Optional[Fraction] = None
        for g, h in self.rows:
            slope = dot(g, d)
            room = h - dot(g, x0)
            if slope == 0:
                if room < 0:
                    return None
            elif slope > 0:
                t = room / slope
                hi = t if hi is None else min(hi, t)
            else:
                t = room / slope
                lo = t if lo is None else max(lo, t)
        if lo is not None and hi is not None and lo > hi:
            return None
        return lo, hi

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from classes.errors_class import StructuralError

logger = logging.getLogger(__name__)

# ---------- Vectors ----------

Vector = Tuple[Fraction, ...]
Row = Tuple[Vector, Fraction]  # a·z <= c

_RATIONAL_RE = re.compile(r"^[+-]?\d+(/\d+)?$")
ZERO = Fraction(0)
ONE = Fraction(1)


def as_rational(value: Union[int, str, Fraction]) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings; floats are refused."""
    if isinstance(value, bool):
        raise StructuralError(f"not a rational: {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        s = value.strip()
        if not _RATIONAL_RE.match(s):
            raise StructuralError(f"not an exact rational literal: {value!r}")
        q = Fraction(s)
        return q
    raise StructuralError(f"not an exact rational: {value!r}")


def vec(values: Iterable[Union[int, str, Fraction]]) -> Vector:
    return tuple(as_rational(v) for v in values)


def zeros(n: int) -> Vector:
    return tuple(ZERO for _ in range(n))


def unit(n: int, i: int, value: Fraction = ONE) -> Vector:
    return tuple(value if k == i else ZERO for k in range(n))


def dot(a: Sequence[Fraction], b: Sequence[Fraction]) -> Fraction:
    if len(a) != len(b):
        raise StructuralError(f"dimension mismatch: {len(a)} vs {len(b)}")
    return sum((x * y for x, y in zip(a, b)), ZERO)


def vadd(a: Vector, b: Vector) -> Vector:
    return tuple(x + y for x, y in zip(a, b))


def vsub(a: Vector, b: Vector) -> Vector:
    return tuple(x - y for x, y in zip(a, b))


def vscale(t: Fraction, a: Vector) -> Vector:
    return tuple(t * x for x in a)


def l1_norm(a: Vector) -> Fraction:
    return sum((abs(x) for x in a), ZERO)


def is_zero(a: Vector) -> bool:
    return all(x == 0 for x in a)


def fmt_vector(a: Sequence[Fraction]) -> str:
    return "(" + ", ".join(str(x) for x in a) + ")"


# ---------- Linear programs ----------

class Sense(str, Enum):
    LE = "<="
    GE = ">="
    EQ = "="


class Goal(str, Enum):
    MIN = "min"
    MAX = "max"


class LpStatus(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class Constraint:
    coeffs: Vector
    sense: Sense
    rhs: Fraction


@dataclass(frozen=True)
class LinearProgram:
    objective: Vector
    constraints: Tuple[Constraint, ...] = ()
    goal: Goal = Goal.MIN

    def __post_init__(self):
        n = len(self.objective)
        for i, c in enumerate(self.constraints):
            if len(c.coeffs) != n:
                raise StructuralError(
                    f"constraint {i} has {len(c.coeffs)} coefficients, objective has {n}"
                )

    @property
    def dim(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class LpOutcome:
    status: LpStatus
    value: Optional[Fraction] = None
    point: Optional[Vector] = None
    ray: Optional[Vector] = None
    # Multipliers w per constraint with w·A = 0, w·b > 0,
    # w <= 0 on <= rows, w >= 0 on >= rows, free on = rows.
    farkas: Optional[Vector] = None

    @property
    def optimal(self) -> bool:
        return self.status == LpStatus.OPTIMAL


class _Tableau:
    def __init__(self, rows: List[List[Fraction]], rhs: List[Fraction], basis: List[int]):
        self.rows = rows
        self.rhs = rhs
        self.basis = basis
        self.costs: List[Fraction] = []
        self.reduced: List[Fraction] = []
        self.unbounded_column: Optional[int] = None
        self.pivots = 0

    def set_costs(self, costs: List[Fraction]) -> None:
        self.costs = costs
        reduced = list(costs)
        for i, row in enumerate(self.rows):
            cb = costs[self.basis[i]]
            if cb:
                reduced = [d - cb * v for d, v in zip(reduced, row)]
        self.reduced = reduced

    def value(self) -> Fraction:
        return sum((self.costs[b] * r for b, r in zip(self.basis, self.rhs)), ZERO)

    def pivot(self, r: int, c: int) -> None:
        row = self.rows[r]
        p = row[c]
        if p != 1:
            row = [v / p for v in row]
            self.rows[r] = row
            self.rhs[r] = self.rhs[r] / p
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[c]
            if f:
                self.rows[i] = [o - f * v for o, v in zip(other, row)]
                self.rhs[i] = self.rhs[i] - f * self.rhs[r]
        f = self.reduced[c]
        if f:
            self.reduced = [d - f * v for d, v in zip(self.reduced, row)]
        self.basis[r] = c
        self.pivots += 1

    def drop_row(self, i: int) -> None:
        del self.rows[i]
        del self.rhs[i]
        del self.basis[i]

    def run(self, allowed: Sequence[int]) -> bool:
        """Bland's rule primal simplex. False means unbounded."""
        while True:
            enter = next((j for j in allowed if self.reduced[j] < 0), None)
            if enter is None:
                return True
            best: Optional[Tuple[Fraction, int]] = None
            for i, row in enumerate(self.rows):
                a = row[enter]
                if a > 0:
                    ratio = self.rhs[i] / a
                    if (
                        best is None
                        or ratio < best[0]
                        or (ratio == best[0] and self.basis[i] < self.basis[best[1]])
                    ):
                        best = (ratio, i)
            if best is None:
                self.unbounded_column = enter
                return False
            self.pivot(best[1], enter)


@lru_cache(maxsize=1 << 16)
def solve_lp(lp: LinearProgram) -> LpOutcome:
    """Two-phase exact simplex over free variables (x = x⁺ − x⁻); memoised per program."""
    n = lp.dim
    cons = lp.constraints
    m = len(cons)

    slack_col = {}
    col = 2 * n
    for i, c in enumerate(cons):
        if c.sense != Sense.EQ:
            slack_col[i] = col
            col += 1
    art_start = col
    total = col + m

    rows: List[List[Fraction]] = []
    rhs: List[Fraction] = []
    signs: List[int] = []
    for i, c in enumerate(cons):
        row = [ZERO] * total
        for k, a in enumerate(c.coeffs):
            row[2 * k] = a
            row[2 * k + 1] = -a
        if c.sense == Sense.LE:
            row[slack_col[i]] = ONE
        elif c.sense == Sense.GE:
            row[slack_col[i]] = -ONE
        b = c.rhs
        sign = 1
        if b < 0:
            row = [-v for v in row]
            b = -b
            sign = -1
        row[art_start + i] = ONE
        rows.append(row)
        rhs.append(b)
        signs.append(sign)

    tab = _Tableau(rows, rhs, [art_start + i for i in range(m)])
    tab.set_costs([ZERO] * art_start + [ONE] * m)
    tab.run(range(total))
    if tab.value() > 0:
        pi = [ONE - tab.reduced[art_start + i] for i in range(m)]
        farkas = tuple(pi[i] * signs[i] for i in range(m))
        logger.debug("lp infeasible after %d pivots", tab.pivots)
        return LpOutcome(LpStatus.INFEASIBLE, farkas=farkas)

    # Artificials at zero level leave the basis; rows that cannot be pivoted are redundant.
    i = 0
    while i < len(tab.basis):
        if tab.basis[i] >= art_start:
            j = next((j for j in range(art_start) if tab.rows[i][j] != 0), None)
            if j is None:
                tab.drop_row(i)
                continue
            tab.pivot(i, j)
        i += 1

    sign = ONE if lp.goal == Goal.MIN else -ONE
    costs = [ZERO] * total
    for k, c in enumerate(lp.objective):
        costs[2 * k] = sign * c
        costs[2 * k + 1] = -sign * c
    tab.set_costs(costs)
    if not tab.run(range(art_start)):
        enter = tab.unbounded_column
        delta = [ZERO] * total
        delta[enter] = ONE
        for r, b in enumerate(tab.basis):
            delta[b] = -tab.rows[r][enter]
        ray = tuple(delta[2 * k] - delta[2 * k + 1] for k in range(n))
        logger.debug("lp unbounded after %d pivots", tab.pivots)
        return LpOutcome(LpStatus.UNBOUNDED, ray=ray)

    values = [ZERO] * total
    for r, b in enumerate(tab.basis):
        values[b] = tab.rhs[r]
    point = tuple(values[2 * k] - values[2 * k + 1] for k in range(n))
    return LpOutcome(LpStatus.OPTIMAL, value=dot(lp.objective, point), point=point)


# ---------- Convenience layer over inequality rows ----------

def _le_constraints(rows: Sequence[Row], extra: int = 0) -> List[Constraint]:
    out = []
    for a, c in rows:
        out.append(Constraint(tuple(a) + zeros(extra), Sense.LE, c))
    return out


def maximize(objective: Vector, rows: Sequence[Row], equalities: Sequence[Row] = ()) -> LpOutcome:
    cons = _le_constraints(rows) + [Constraint(tuple(a), Sense.EQ, c) for a, c in equalities]
    return solve_lp(LinearProgram(tuple(objective), tuple(cons), Goal.MAX))


def minimize(objective: Vector, rows: Sequence[Row], equalities: Sequence[Row] = ()) -> LpOutcome:
    cons = _le_constraints(rows) + [Constraint(tuple(a), Sense.EQ, c) for a, c in equalities]
    return solve_lp(LinearProgram(tuple(objective), tuple(cons), Goal.MIN))


def feasible_point(rows: Sequence[Row], dim: int) -> Optional[Vector]:
    out = maximize(zeros(dim), rows)
    return out.point if out.optimal else None


def strictly_feasible(rows: Sequence[Row], dim: int) -> Tuple[bool, Optional[Vector]]:
    """Maximize a shared slack s (capped at 1) in a·z + s <= c."""
    cons = [Constraint(tuple(a) + (ONE,), Sense.LE, c) for a, c in rows]
    cons.append(Constraint(zeros(dim) + (ONE,), Sense.LE, ONE))
    out = solve_lp(LinearProgram(zeros(dim) + (ONE,), tuple(cons), Goal.MAX))
    if out.optimal and out.value > 0:
        return True, out.point[:dim]
    return False, None


def normalize_row(a: Vector, c: Fraction) -> Row:
    norm = l1_norm(a)
    if norm == 0:
        return a, c
    return vscale(ONE / norm, a), c / norm


def remove_redundant(rows: Sequence[Row]) -> List[Row]:
    """Drop row k when max a_k·z over the remaining rows stays within c_k."""
    kept = list(rows)
    i = 0
    while i < len(kept):
        a, c = kept[i]
        others = kept[:i] + kept[i + 1:]
        out = maximize(a, others)
        if out.status == LpStatus.INFEASIBLE or (out.optimal and out.value <= c):
            del kept[i]
        else:
            i += 1
    return kept


def canonical_rows(rows: Sequence[Row], prune: bool = True) -> List[Row]:
    """ℓ1-normalized, deduplicated (tightest offset wins), sorted and irredundant."""
    best = {}
    for a, c in rows:
        na, nc = normalize_row(tuple(a), c)
        if na not in best or nc < best[na]:
            best[na] = nc
    out = sorted(best.items())
    if prune:
        return list(_irredundant(tuple(out)))
    return out


@lru_cache(maxsize=1 << 14)
def _irredundant(rows: Tuple[Row, ...]) -> Tuple[Row, ...]:
    return tuple(remove_redundant(rows))

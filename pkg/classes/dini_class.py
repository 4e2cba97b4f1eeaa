from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Optional, Sequence, Tuple

from classes.conlinear_class import (
    UpperSet,
    inf_residual,
    lattice_inf,
    lattice_sup,
    scale,
    set_equal,
    support,
)
from classes.errors_class import StructuralError
from classes.extreal_class import MINUS_INF, PLUS_INF, ExtReal, ext_scale, residual
from classes.lp_class import (
    ONE,
    ZERO,
    Vector,
    fmt_vector,
    minimize,
    unit,
    vadd,
    vec,
    vscale,
)
from classes.settings_class import Settings
from classes.setmap_class import HFamilyMap, Scalarization, scalarize

logger = logging.getLogger(__name__)

# ---------- Result types ----------

@dataclass(frozen=True)
class SetDerivative:
    value: UpperSet
    in_domain: bool = True
    diagnostic: str = ""


@dataclass(frozen=True)
class SampledDerivative:
    """Monotone upper bound of φ′ from the quotient sequence; never a certificate."""
    bound: ExtReal
    gap: ExtReal
    converged: bool
    steps: int


@dataclass(frozen=True)
class DiniBracket:
    upper: UpperSet
    lower: UpperSet
    gap: bool
    grid: Tuple[Fraction, ...]

    @property
    def window(self) -> Tuple[Fraction, ...]:
        return self.grid


@dataclass(frozen=True)
class RegularityEntry:
    zstar: Vector
    set_side: ExtReal      # −σ(z*|f′(x,u))
    scalar_side: ExtReal   # φ′_{f,z*}(x,u)
    equal: bool
    inequality_ok: bool    # φ′ <= −σ


@dataclass(frozen=True)
class RegularityVerdict:
    kind: str  # 'SR' | 'WR'
    x: Vector
    u: Vector
    holds: bool
    entries: Tuple[RegularityEntry, ...] = ()
    detail: str = ""

    @property
    def inequality_ok(self) -> bool:
        return all(e.inequality_ok for e in self.entries)

    def failing_entry(self) -> Optional[RegularityEntry]:
        return next((e for e in self.entries if not e.equal), None)


# ---------- Scalar derivatives ----------

def scalar_dini(phi: Scalarization, x: Sequence, u: Sequence) -> ExtReal:
    """Exact φ′_{f,z*}(x,u) for an H-family map.

    Along the ray the support value is min{λ·b(x+tu) | λ >= 0, Σλ_j a_j = z*},
    affine in t near 0 per dual vertex; its right derivative is the least
    slope λ·s over the optimal dual face.
    """
    return _scalar_dini(phi, vec(x), vec(u))


@lru_cache(maxsize=1 << 14)
def _scalar_dini(phi: Scalarization, x: Vector, u: Vector) -> ExtReal:
    f = phi.map
    if not f.in_domain(x):
        return MINUS_INF
    enters = f.ray_enters_domain(x, u)
    sigma = support(phi.zstar, f.evaluate(x))
    if sigma.is_plus_inf:
        return MINUS_INF if enters else PLUS_INF
    if not enters:
        return PLUS_INF
    b = f.offsets_at(x)
    s = f.slopes_at(x, u)
    k = len(f.normals)
    rows = [(unit(k, j, -ONE), ZERO) for j in range(k)]
    eqs = [(tuple(a[i] for a in f.normals), phi.zstar[i]) for i in range(f.cone.dim)]
    eqs.append((b, sigma.value))
    out = minimize(s, rows, eqs)
    if not out.optimal:
        raise StructuralError(f"derivative LP for {f.name} ended {out.status.value}")
    return ExtReal.of(-out.value)


def scalar_dini_sampled(phi: Scalarization, x: Sequence, u: Sequence, settings: Optional[Settings] = None) -> SampledDerivative:
    """Quotients on t_k = t0·ρ^k; stops when two consecutive quotients agree."""
    st = settings or Settings()
    x, u = vec(x), vec(u)
    base = phi(x)
    prev: Optional[ExtReal] = None
    gap = PLUS_INF
    k = 0
    for k in range(st.sampled_kmax + 1):
        t = st.sampled_t0 * st.sampled_rho ** k
        q = ext_scale(1 / t, residual(phi(vadd(x, vscale(t, u))), base))
        if prev is not None:
            if q == prev:
                return SampledDerivative(q, ExtReal.of(ZERO), True, k)
            gap = residual(prev, q)
        prev = q
    logger.warning("sampled derivative of %s at %s along %s did not settle after %d steps",
                   phi.map.name, fmt_vector(x), fmt_vector(u), k)
    return SampledDerivative(prev, gap, False, k)


# ---------- Set-valued derivatives ----------

def set_dini(f: HFamilyMap, x: Sequence, u: Sequence) -> SetDerivative:
    """f′(x,u): touching rows keep their one-sided offset slope, slack rows drop out."""
    return _set_dini(f, vec(x), vec(u))


@lru_cache(maxsize=1 << 14)
def _set_dini(f: HFamilyMap, x: Vector, u: Vector) -> SetDerivative:
    if not f.in_domain(x):
        return SetDerivative(UpperSet.whole(f.cone), False, "base point outside dom f; f(x) = ∅ makes every quotient Z")
    if not f.ray_enters_domain(x, u):
        return SetDerivative(UpperSet.empty_set(f.cone), True, "ray leaves dom f immediately")
    fx = f.evaluate(x)
    rows = []
    for a, b, s in zip(f.normals, f.offsets_at(x), f.slopes_at(x, u)):
        if support(a, fx) == ExtReal.of(b):
            rows.append((a, s))
    return SetDerivative(UpperSet.from_rows(f.cone, rows))


def difference_quotient(f: HFamilyMap, x: Sequence, u: Sequence, t: Fraction) -> UpperSet:
    """(1/t)·(f(x+tu) −̇ f(x))."""
    x, u = vec(x), vec(u)
    return scale(1 / t, inf_residual(f.evaluate(vadd(x, vscale(t, u))), f.evaluate(x)))


def affine_step(f: HFamilyMap, x: Vector, d: Vector) -> Fraction:
    """Largest t <= 1 up to which the domain and every offset stay affine along x + t d."""
    t_star = ONE
    span = f.domain.segment_range(x, d)
    if span is not None and span[1] is not None and span[1] > 0:
        t_star = min(t_star, span[1])
    for b in f.offsets:
        kink = b.breakpoint_after(x, d)
        if kink is not None:
            t_star = min(t_star, kink)
    return t_star


def exact_step(f: HFamilyMap, x: Sequence, u: Sequence) -> Optional[Fraction]:
    """Largest t <= 1 with every quotient at s <= t equal to f′(x,u); None if no step reaches f′.

    Touching rows scale exactly below the affine step. A slack row a_j
    drops out of the quotient once t·(σ(a_j|f′) − s_j) <= b_j − σ(a_j|f(x)).
    """
    x, u = vec(x), vec(u)
    if not f.in_domain(x) or not f.ray_enters_domain(x, u):
        return ONE
    t_star = affine_step(f, x, u)
    fx = f.evaluate(x)
    fp = set_dini(f, x, u).value
    for a, b, s in zip(f.normals, f.offsets_at(x), f.slopes_at(x, u)):
        sigma = support(a, fx)
        if sigma == ExtReal.of(b):
            continue
        reach = support(a, fp)
        if reach.is_plus_inf:
            return None
        if reach.value > s:
            t_star = min(t_star, (b - sigma.value) / (reach.value - s))
    return t_star


def set_dini_upper_lower(f: HFamilyMap, x: Sequence, u: Sequence, settings: Optional[Settings] = None) -> DiniBracket:
    """Sampled bracket over the finest window of t_k = t0·ρ^k.

    upper = sup of the window quotients, lower = inf. The window is shifted
    so that its largest step is at most exact_step, where both sides equal
    f′. When no exact step exists the bracket stays a sampled proxy and may
    report a gap.
    """
    st = settings or Settings()
    grid = tuple(st.sampled_t0 * st.sampled_rho ** k for k in range(st.bracket_depth + 1))
    window = grid[-st.bracket_window:]
    step = exact_step(f, x, u)
    if step is not None and window[0] > step:
        window = tuple(t * step / window[0] for t in window)
    quotients = [difference_quotient(f, x, u, t) for t in window]
    upper = lattice_sup(quotients)
    lower = lattice_inf(quotients)
    gap = not set_equal(upper, lower)
    if gap:
        logger.info("derivative bracket gap for %s at %s", f.name, fmt_vector(vec(x)))
    return DiniBracket(upper, lower, gap, window)


# ---------- Regularity ----------

def regularity_functionals(f: HFamilyMap) -> List[Vector]:
    """Vertices of B* followed by the B*-normalized normals of f."""
    out = list(f.cone.base_vertices)
    for a in f.normals:
        v = f.cone.normalize(a)
        if v not in out:
            out.append(v)
    return out


def check_SR(f: HFamilyMap, x: Sequence, u: Sequence, functionals: Optional[Sequence[Vector]] = None) -> RegularityVerdict:
    """−σ(z*|f′(x,u)) = φ′_{f,z*}(x,u) on every tested functional."""
    x, u = vec(x), vec(u)
    fp = set_dini(f, x, u).value
    entries = []
    for z in functionals or regularity_functionals(f):
        lhs = -support(z, fp)
        rhs = scalar_dini(scalarize(f, z), x, u)
        entries.append(RegularityEntry(tuple(z), lhs, rhs, lhs == rhs, rhs <= lhs))
    holds = all(e.equal for e in entries)
    return RegularityVerdict("SR", x, u, holds, tuple(entries))


def check_WR(f: HFamilyMap, x: Sequence, u: Sequence, functionals: Optional[Sequence[Vector]] = None) -> RegularityVerdict:
    """f′(x,u) equals ⋂_{z*} {z | z*·z <= −φ′_{f,z*}(x,u)}."""
    x, u = vec(x), vec(u)
    fp = set_dini(f, x, u).value
    rows = []
    entries = []
    empty = False
    for z in functionals or regularity_functionals(f):
        d = scalar_dini(scalarize(f, z), x, u)
        lhs = -support(z, fp)
        entries.append(RegularityEntry(tuple(z), lhs, d, lhs == d, d <= lhs))
        if d.is_plus_inf:
            empty = True
        elif d.is_finite:
            rows.append((z, -d.value))
    rebuilt = UpperSet.empty_set(f.cone) if empty else UpperSet.from_rows(f.cone, rows)
    holds = set_equal(rebuilt, fp)
    detail = "" if holds else f"reconstruction {rebuilt!r} differs from f′ = {fp!r}"
    return RegularityVerdict("WR", x, u, holds, tuple(entries), detail)

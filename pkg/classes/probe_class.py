from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, List, Optional, Sequence, Tuple

from classes.conlinear_class import UpperSet, distance_linf, excess_linf, support
from classes.errors_class import StructuralError
from classes.extreal_class import MINUS_INF, ExtReal, residual
from classes.lp_class import Vector, fmt_vector, unit, vadd, vec, vscale, vsub
from classes.settings_class import Settings
from classes.setmap_class import SetMap

logger = logging.getLogger(__name__)


class ProbeVariant(str, Enum):
    BSTAR_LSC = "bstar-lsc"
    UPPER_HAUSDORFF = "upper-hausdorff"
    LATTICE_LSC = "lattice-lsc"
    C_CONTINUITY = "c-continuity"


class ProbeStatus(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"
    INCONCLUSIVE = "INCONCLUSIVE"
    SKIPPED = "SKIPPED"


@dataclass(frozen=True)
class ProbeResult:
    variant: ProbeVariant
    status: ProbeStatus
    samples: Tuple[Tuple[Fraction, ExtReal], ...] = ()
    detail: str = ""

    @property
    def passed(self) -> bool:
        return self.status == ProbeStatus.PASS


def _max(values: Sequence[ExtReal]) -> ExtReal:
    return max(values, default=MINUS_INF)


# ---------- Defects ----------
# Each defect maps a nearby point to an extended real that tends to a
# value <= 0 exactly when the probed semicontinuity holds at x0.

def _bstar_lsc(f: SetMap, fx0: UpperSet) -> Callable[[Vector], Optional[ExtReal]]:
    verts = f.cone.base_vertices
    at_x0 = [-support(v, fx0) for v in verts]

    def defect(x: Vector) -> Optional[ExtReal]:
        fx = f.evaluate(x)
        return _max([residual(p0, -support(v, fx)) for v, p0 in zip(verts, at_x0)])
    return defect


def _upper_hausdorff(f: SetMap, fx0: UpperSet) -> Callable[[Vector], Optional[ExtReal]]:
    def defect(x: Vector) -> Optional[ExtReal]:
        return excess_linf(f.evaluate(x), fx0)
    return defect


def _lattice_lsc(f: SetMap, fx0: UpperSet) -> Callable[[Vector], Optional[ExtReal]]:
    rows = fx0.rows

    def defect(x: Vector) -> Optional[ExtReal]:
        fx = f.evaluate(x)
        return _max([residual(support(a, fx), ExtReal.of(c)) for a, c in rows])
    return defect


# ---------- Tail analysis ----------

def _extrapolate(tail: Sequence[Tuple[Fraction, ExtReal]]) -> Tuple[ProbeStatus, str]:
    values = [d for _, d in tail]
    if any(d.is_plus_inf for d in values):
        return ProbeStatus.FAIL, "defect is +∞ near x0"
    if all(d.is_minus_inf for d in values[-2:]):
        return ProbeStatus.PASS, "defect is -∞ near x0"
    finite = [(r, d.value) for r, d in tail if d.is_finite]
    if len(finite) < 3:
        return ProbeStatus.INCONCLUSIVE, "too few finite defects in the tail"
    (r0, d0), (r1, d1), (r2, d2) = finite[-3:]
    slope = (d2 - d1) / (r2 - r1)
    limit = d2 - slope * r2
    if d0 != limit + slope * r0:
        return ProbeStatus.INCONCLUSIVE, "tail defects are not collinear in r"
    if limit <= 0:
        return ProbeStatus.PASS, f"extrapolated defect {limit} at r = 0"
    return ProbeStatus.FAIL, f"extrapolated defect {limit} at r = 0"


_DEFECTS = {
    ProbeVariant.BSTAR_LSC: _bstar_lsc,
    ProbeVariant.UPPER_HAUSDORFF: _upper_hausdorff,
    ProbeVariant.LATTICE_LSC: _lattice_lsc,
}


def continuity_probe(f: SetMap, x0: Sequence, variant: ProbeVariant = ProbeVariant.BSTAR_LSC,
                     settings: Optional[Settings] = None) -> ProbeResult:
    """Radial semicontinuity probe at x0 along ±e_i on r_k = r0·ρ^k.

    A heuristic: PASS and FAIL come from a linear extrapolation of the last
    defects to r = 0, which is exact for piecewise-linear data once the
    radii lie inside one linearity region.
    """
    st = settings or Settings()
    x0 = vec(x0)
    if len(x0) != f.xdim:
        raise StructuralError(f"probe point of dimension {len(x0)}, map {f.name!r} lives in dimension {f.xdim}")
    fx0 = f.evaluate(x0)
    if fx0.empty:
        return ProbeResult(variant, ProbeStatus.SKIPPED, detail="x0 ∉ dom f")

    if variant == ProbeVariant.C_CONTINUITY:
        psi = getattr(f, "source", None)
        if psi is None:
            return ProbeResult(variant, ProbeStatus.SKIPPED, detail="map is not a vector extension")
        base = psi(x0)
        cone = UpperSet.cone_set(f.cone)

        def defect(x: Vector) -> Optional[ExtReal]:
            if not psi.domain.contains(x):
                return None
            return distance_linf(vsub(psi(x), base), cone)
    else:
        defect = _DEFECTS[variant](f, fx0)

    directions: List[Vector] = []
    for i in range(f.xdim):
        directions.append(unit(f.xdim, i))
        directions.append(vscale(Fraction(-1), unit(f.xdim, i)))

    samples: List[Tuple[Fraction, ExtReal]] = []
    for k in range(st.probe_depth):
        r = st.probe_radius0 * st.probe_rho ** k
        seen = [defect(vadd(x0, vscale(r, d))) for d in directions]
        seen = [d for d in seen if d is not None]
        samples.append((r, _max(seen)))
    status, detail = _extrapolate(samples[-3:])
    logger.debug("%s probe of %s at %s: %s (%s)", variant.value, f.name, fmt_vector(x0), status.value, detail)
    return ProbeResult(variant, status, tuple(samples), detail)


__all__ = ["ProbeResult", "ProbeStatus", "ProbeVariant", "continuity_probe"]

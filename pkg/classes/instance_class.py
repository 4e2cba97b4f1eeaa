from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from classes.certifier_class import Condition, TestSet, Verdict, WitnessSearch
from classes.conlinear_class import OrderingCone
from classes.errors_class import StructuralError
from classes.lp_class import ONE, ZERO, Vector, is_zero, unit, vec, vsub, zeros
from classes.polyhedron_class import Polyhedron
from classes.settings_class import Settings
from classes.setmap_class import (
    AffineFunction,
    ConcavePWL,
    ConvexPWL,
    HFamilyMap,
    VectorMap,
    epigraphical_extension,
)
from data.instance_data import (
    EXTREALS_EXPECTED,
    EXTREALS_TESTSET,
    EXTREALS_X0,
    INSTANCE_CATALOG,
    LINF_EXPECTED,
    LINF_MIN_N,
    LINF_X0,
    PARETO_EXPECTED,
    PARETO_GRID,
    PARETO_X0,
    R2_EXPECTED,
    R2_TESTSET,
    R2_X0,
    linf_slopes,
    linf_threshold,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Instance:
    """A map together with its candidate point, test set and expected verdicts."""
    name: str
    f: HFamilyMap
    x0: Vector
    testset: TestSet
    expected: Dict[Condition, Verdict] = field(default_factory=dict)
    provenance: Dict[Condition, str] = field(default_factory=dict)
    search: Optional[WitnessSearch] = None
    notes: Tuple[str, ...] = ()

    @property
    def vector(self) -> Optional[VectorMap]:
        return self.f.source


def _expected(table: Dict[str, Tuple[str, str]]) -> Tuple[Dict[Condition, Verdict], Dict[Condition, str]]:
    verdicts = {Condition.parse(k): Verdict(v) for k, (v, _) in table.items()}
    provenance = {Condition.parse(k): p for k, (_, p) in table.items()}
    return verdicts, provenance


def _affine(coeffs: Sequence, const) -> AffineFunction:
    return AffineFunction.of(coeffs, const)


# ---------- Built-ins ----------

def build_r2_minty_gap() -> Instance:
    cone = OrderingCone.orthant(2)
    f = HFamilyMap(
        "r2-minty-gap", cone, 1, Polyhedron.box([0], [Fraction(2, 3)]),
        (vec([-1, -1]), vec([-1, 0]), vec([0, -1])),
        (
            ConcavePWL.affine([Fraction(1, 2)], -1),   # z1 + z2 >= 1 - x/2
            ConcavePWL.affine([-1], 0),                 # z1 >= x
            ConcavePWL.affine([-1], 0),                 # z2 >= x
        ),
    )
    expected, provenance = _expected(R2_EXPECTED)
    return Instance(f.name, f, R2_X0, TestSet.of(R2_TESTSET), expected, provenance,
                    notes=("mvi_M fails exactly on [2/5, 2/3); the default test set stays below 2/5",))


def linf_vector_map(n: int) -> VectorMap:
    if n < LINF_MIN_N:
        raise StructuralError(f"linf-truncated needs N >= {LINF_MIN_N}, got {n}")
    components = []
    for k in range(1, n + 1):
        alpha, beta = linf_slopes(k)
        components.append(ConvexPWL((_affine([alpha], alpha), _affine([beta], -beta))))
    return VectorMap(f"linf-truncated:{n}", OrderingCone.orthant(n), 1,
                     Polyhedron.box([-1], [1]), tuple(components))


def build_linf_truncated(n: Optional[int] = None, settings: Optional[Settings] = None) -> Instance:
    st = settings or Settings()
    n = st.linf_default_n if n is None else n
    f = epigraphical_extension(linf_vector_map(n))
    tau = linf_threshold(n)
    points = [(ZERO,), (Fraction(-1, 2),), (-ONE,), (Fraction(1, 2),), ((tau + 1) / 2,), (ONE,)]
    expected, provenance = _expected(LINF_EXPECTED)
    note = f"mvi_M fails exactly on [{tau}, 1); rationalized slopes (-1/(2n), 2n) for n >= 2"
    return Instance(f.name, f, LINF_X0, TestSet.of(points), expected, provenance, notes=(note,))


def pareto_vector_map() -> VectorMap:
    domain = Polyhedron(2, (
        (vec([-1, 0]), ZERO),
        (vec([0, -1]), ZERO),
        (vec([-1, -1]), -ONE),
    ))
    return VectorMap("pareto-identity", OrderingCone.orthant(2), 2, domain,
                     (_affine([1, 0], 0), _affine([0, 1], 0)))


def build_pareto_identity() -> Instance:
    f = epigraphical_extension(pareto_vector_map())
    lo, hi, k = PARETO_GRID
    expected, provenance = _expected(PARETO_EXPECTED)
    return Instance(f.name, f, PARETO_X0, TestSet.grid(lo, hi, k), expected, provenance,
                    notes=("grid points with x1 + x2 < 1 lie outside dom f",))


def build_extreals_oracle() -> Instance:
    f = HFamilyMap(
        "extreals-oracle", OrderingCone.orthant(1), 1, Polyhedron.box([-2], [3]),
        (vec([-1]),),
        (ConcavePWL((_affine([1], 0), _affine([Fraction(-1, 2)], 0))),),  # z >= max(-x, x/2)
    )
    expected, provenance = _expected(EXTREALS_EXPECTED)
    return Instance(f.name, f, EXTREALS_X0, TestSet.of(EXTREALS_TESTSET), expected, provenance)


def builtin_names() -> List[str]:
    return sorted(INSTANCE_CATALOG)


def load_builtin(spec: str, settings: Optional[Settings] = None) -> Instance:
    """'r2-minty-gap', 'linf-truncated[:N]', 'pareto-identity', 'extreals-oracle' or 'random[:SEED]'."""
    name, _, arg = spec.partition(":")
    try:
        if name == "r2-minty-gap" and not arg:
            return build_r2_minty_gap()
        if name == "linf-truncated":
            return build_linf_truncated(int(arg) if arg else None, settings)
        if name == "pareto-identity" and not arg:
            return build_pareto_identity()
        if name == "extreals-oracle" and not arg:
            return build_extreals_oracle()
        if name == "random":
            return random_instance(int(arg) if arg else 0, settings=settings)
    except ValueError as e:
        if isinstance(e, StructuralError):
            raise
        raise StructuralError(f"bad argument in instance spec {spec!r}") from None
    raise StructuralError(f"unknown instance {spec!r}; built-ins: {', '.join(builtin_names())}, random[:SEED]")


# ---------- Random generator ----------

def _half(rng: np.random.Generator, lo: int, hi: int) -> Fraction:
    return Fraction(int(rng.integers(2 * lo, 2 * hi + 1)), 2)


def _random_cone(rng: np.random.Generator, m: int) -> OrderingCone:
    if m == 1 or rng.random() < 0.5:
        return OrderingCone.orthant(m)
    gens = []
    for i in range(m):
        g = list(unit(m, i))
        for j in range(i):
            g[j] = Fraction(int(rng.integers(0, 2)))
        gens.append(tuple(g))
    interior = tuple(sum((g[k] for g in gens), ZERO) for k in range(m))
    return OrderingCone.from_generators(gens, interior)


def _random_domain(rng: np.random.Generator, n: int) -> Polyhedron:
    box = Polyhedron.box([-2] * n, [2] * n)
    g = tuple(Fraction(int(v)) for v in rng.integers(-2, 3, size=n))
    if is_zero(g):
        return box
    return Polyhedron(n, box.rows + ((g, Fraction(int(rng.integers(1, 4)))),))


def _random_affine(rng: np.random.Generator, n: int) -> AffineFunction:
    return AffineFunction(tuple(_half(rng, -2, 2) for _ in range(n)), _half(rng, -2, 2))


def _check_caps(n: int, m: int, k: int, pieces: int, st: Settings) -> None:
    for label, value, cap in (("n", n, st.max_n), ("m", m, st.max_m), ("k", k, st.max_k), ("pieces", pieces, st.max_pieces)):
        if not 1 <= value <= cap:
            raise StructuralError(f"{label} = {value} outside [1, {cap}]")


def generate_random(seed: int, n: int, m: int, k: int, pieces: int,
                    settings: Optional[Settings] = None) -> HFamilyMap:
    """Seeded H-family map: convex by construction since every offset is a min of affine pieces."""
    st = settings or Settings()
    _check_caps(n, m, k, pieces, st)
    rng = np.random.default_rng(seed)
    cone = _random_cone(rng, m)
    normals: List[Vector] = list(cone.dual_generators[:k])
    while len(normals) < k:
        weights = rng.integers(0, 3, size=len(cone.dual_generators))
        a = zeros(m)
        for w, d in zip(weights, cone.dual_generators):
            a = tuple(x + int(w) * y for x, y in zip(a, d))
        if not is_zero(a):
            normals.append(a)
    offsets = tuple(
        ConcavePWL(tuple(_random_affine(rng, n) for _ in range(int(rng.integers(1, pieces + 1)))))
        for _ in normals
    )
    return HFamilyMap(f"random:{seed}", cone, n, _random_domain(rng, n), tuple(normals), offsets)


def generate_random_vector(seed: int, n: int, m: int, pieces: int,
                           settings: Optional[Settings] = None) -> HFamilyMap:
    """Seeded ψ^C with convex piecewise-linear components over the orthant."""
    st = settings or Settings()
    _check_caps(n, m, 1, pieces, st)
    rng = np.random.default_rng(seed)
    components = []
    for _ in range(m):
        count = int(rng.integers(1, pieces + 1))
        affine = [_random_affine(rng, n) for _ in range(count)]
        components.append(affine[0] if count == 1 else ConvexPWL(tuple(affine)))
    psi = VectorMap(f"random-vector:{seed}", OrderingCone.orthant(m), n, _random_domain(rng, n), tuple(components))
    return epigraphical_extension(psi)


def random_instance(seed: int, max_dim: int = 3, vector: Optional[bool] = None,
                    settings: Optional[Settings] = None) -> Instance:
    """Map, candidate and a 9-point half-grid test set from one seed."""
    st = settings or Settings()
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, min(max_dim, st.max_n) + 1))
    m = int(rng.integers(1, min(max_dim, st.max_m) + 1))
    pieces = int(rng.integers(1, st.max_pieces + 1))
    sub_seed = int(rng.integers(0, 2 ** 31))
    if vector is None:
        vector = bool(rng.random() < 0.25)
    if vector:
        f = generate_random_vector(sub_seed, n, m, pieces, st)
    else:
        k = int(rng.integers(m, st.max_k + 1))
        f = generate_random(sub_seed, n, m, k, pieces, st)
    f = HFamilyMap(f"random:{seed}", f.cone, f.xdim, f.domain, f.normals, f.offsets, f.source)

    x0 = zeros(n)
    for _ in range(20):
        cand = tuple(_half(rng, -2, 2) for _ in range(n))
        if f.in_domain(cand):
            x0 = cand
            break
    points = [tuple(_half(rng, -3, 3) for _ in range(n)) for _ in range(9)]
    return Instance(f.name, f, x0, TestSet.of(points))


# ---------- Pareto oracle ----------

@dataclass(frozen=True)
class ParetoFront:
    efficient: Tuple[Vector, ...]
    weakly_efficient: Tuple[Vector, ...]


def brute_force_pareto(psi: VectorMap, T: TestSet) -> ParetoFront:
    """Pairwise ≤_C dominance over T ∩ S."""
    feasible = [x for x in T if psi.domain.contains(x)]
    values = {x: psi(x) for x in feasible}
    efficient, weak = [], []
    for x in feasible:
        dominated = weakly = False
        for y in feasible:
            gap = vsub(values[x], values[y])
            if psi.cone.contains(gap) and values[y] != values[x]:
                dominated = True
            if psi.cone.interior_contains(gap):
                weakly = True
        if not dominated:
            efficient.append(x)
        if not weakly:
            weak.append(x)
    logger.info("Pareto front size: %d / %d", len(efficient), len(feasible))
    return ParetoFront(tuple(efficient), tuple(weak))


__all__ = [
    "Instance", "ParetoFront", "brute_force_pareto", "build_extreals_oracle", "build_linf_truncated",
    "build_pareto_identity", "build_r2_minty_gap", "builtin_names", "generate_random",
    "generate_random_vector", "linf_vector_map", "load_builtin", "pareto_vector_map", "random_instance",
]

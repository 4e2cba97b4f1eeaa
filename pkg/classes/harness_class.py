from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from classes.certifier_class import (
    ALL_CONDITIONS,
    Condition,
    ConditionVerdict,
    RegularitySweep,
    TestSet,
    Verdict,
    WitnessSearch,
    Strategy,
    certify_all,
    check_condition_at,
    regularity_sweep,
)
from classes.conlinear_class import UpperSet, recession_cone, set_equal, support
from classes.dini_class import affine_step
from classes.lp_class import Vector, fmt_vector, vadd, vec, vscale, vsub
from classes.probe_class import ProbeResult, ProbeStatus, ProbeVariant, continuity_probe
from classes.settings_class import Settings
from classes.setmap_class import HFamilyMap
from data.condition_data import (
    COMPACT_VALUE,
    CONSTANCY_ANTECEDENTS,
    CONTINUOUS_VECTOR,
    IMPLICATION_EDGES,
    LSC_PROBE,
    MSTAR_SEARCH,
    NO_HYPOTHESIS,
    POINTWISE,
    RADIAL_EXACT,
    SPLIT,
    SR_AT_X,
    SR_AT_X0,
    WR_AT_X0,
)

logger = logging.getLogger(__name__)


class EdgeStatus(str, Enum):
    PASS = "PASS"
    VIOLATION = "VIOLATION"
    INCONCLUSIVE = "INCONCLUSIVE"
    SKIPPED = "SKIPPED"


@dataclass(frozen=True)
class EdgeResult:
    antecedent: str
    consequent: str
    hypothesis: str
    mode: str
    status: EdgeStatus
    detail: str = ""
    chain: Tuple[str, ...] = ()

    @property
    def label(self) -> str:
        edge = f"{self.antecedent} => {self.consequent}"
        return f"{edge} [{self.hypothesis}]" if self.hypothesis else edge


@dataclass(frozen=True)
class HarnessReport:
    name: str
    x0: Vector
    testset: TestSet
    strategy: str
    verdicts: Tuple[ConditionVerdict, ...]
    sr: RegularitySweep
    wr: RegularitySweep
    probes: Tuple[ProbeResult, ...]
    edges: Tuple[EdgeResult, ...]
    notes: Tuple[str, ...] = ()

    @property
    def violations(self) -> List[EdgeResult]:
        return [e for e in self.edges if e.status == EdgeStatus.VIOLATION]

    @property
    def interesting(self) -> bool:
        return any(n.startswith("interesting") for n in self.notes)

    def verdict(self, condition: Condition) -> ConditionVerdict:
        return next(v for v in self.verdicts if v.condition == condition)

    def probe(self, variant: ProbeVariant) -> ProbeResult:
        return next(p for p in self.probes if p.variant == variant)


@dataclass
class _Run:
    f: HFamilyMap
    x0: Vector
    T: TestSet
    search: WitnessSearch
    settings: Settings
    verdicts: Dict[Condition, ConditionVerdict]
    sr: RegularitySweep
    wr: RegularitySweep
    probes: Dict[ProbeVariant, ProbeResult]
    notes: List[str] = field(default_factory=list)

    def is_tie(self, x: Vector) -> bool:
        return self.f.in_domain(x) and set_equal(self.f.evaluate(x), self.f.evaluate(self.x0))


# ---------- Auxiliary radial points ----------

def first_kink(f: HFamilyMap, x0: Vector, x: Vector) -> Fraction:
    """Largest t <= 1 up to which every quantity along x0 + t(x - x0) stays affine in t."""
    d = vsub(x, x0)
    t_star = affine_step(f, x0, d)
    fx0 = f.evaluate(x0)
    for a, b, s in zip(f.normals, f.offsets_at(x0), f.slopes_at(x0, d)):
        sigma = support(a, fx0)
        if sigma.is_finite and sigma.value < b and s < 0:
            t_star = min(t_star, (b - sigma.value) / -s)
    return t_star


def aux_parameters(f: HFamilyMap, x0: Vector, x: Vector, settings: Settings) -> List[Fraction]:
    """Dyadic steps plus fractions of the first kink, largest first, all in (0, 1)."""
    t_star = first_kink(f, x0, x)
    ts = {Fraction(1, 2 ** k) for k in range(1, settings.aux_search_depth + 1)}
    ts |= {t_star, t_star / 2, t_star / 4}
    return sorted((t for t in ts if 0 < t < 1), reverse=True)


def _on_segment(x0: Vector, x: Vector, t: Fraction) -> Vector:
    return vadd(x0, vscale(t, vsub(x, x0)))


def _search_failing_aux(run: _Run, antecedent: Condition, x: Vector) -> Tuple[Optional[Tuple[str, ...]], bool]:
    """(chain, exact) for the first aux point where the antecedent fails."""
    any_inexact = False
    for t in aux_parameters(run.f, run.x0, x, run.settings):
        xt = _on_segment(run.x0, x, t)
        check = check_condition_at(run.f, run.x0, xt, antecedent, run.search)
        if check.ok:
            continue
        if check.exact:
            chain = (f"x = {fmt_vector(x)}", f"t = {t}", f"x_t = {fmt_vector(xt)}",
                     f"{antecedent.value} fails at x_t" + (f": {check.detail}" if check.detail else ""))
            return chain, True
        any_inexact = True
    return None, not any_inexact


# ---------- Hypotheses ----------

def _hypothesis(run: _Run, name: str) -> Callable[[Vector], bool]:
    if name == NO_HYPOTHESIS:
        return lambda x: True
    if name in (WR_AT_X0, SR_AT_X0, SR_AT_X):
        sweep = run.wr if name == WR_AT_X0 else run.sr
        pick = sweep.minty_at if name == SR_AT_X else sweep.stampacchia_at

        def regular(x: Vector) -> bool:
            entry = pick(x)
            return entry is not None and entry.holds
        return regular
    if name == MSTAR_SEARCH:
        flag = run.search.strategy == Strategy.MSTAR
    elif name == COMPACT_VALUE:
        flag = set_equal(recession_cone(run.f.evaluate(run.x0)), UpperSet.cone_set(run.f.cone))
    elif name == LSC_PROBE:
        flag = run.probes[ProbeVariant.BSTAR_LSC].passed
    elif name == CONTINUOUS_VECTOR:
        flag = run.f.is_vector_extension and run.probes[ProbeVariant.C_CONTINUITY].passed
    else:
        raise KeyError(name)
    return lambda x: flag


# ---------- Edge evaluation ----------

def _pointwise(run: _Run, a: Condition, b: Condition, hyp: Callable[[Vector], bool],
               points: Optional[Callable[[Vector], bool]] = None) -> Tuple[List[str], bool]:
    """(violations, inexact) over T."""
    bad: List[str] = []
    inexact = False
    for x in run.T:
        if points is not None and not points(x):
            continue
        if not hyp(x):
            continue
        ca, cb = run.verdicts[a].check_at(x), run.verdicts[b].check_at(x)
        if not ca.ok or cb.ok:
            continue
        if cb.exact:
            bad.append(fmt_vector(x))
        else:
            inexact = True
    return bad, inexact


def _radial(run: _Run, a: Condition, b: Condition, hyp: Callable[[Vector], bool], exact_mode: bool,
            points: Optional[Callable[[Vector], bool]] = None) -> Tuple[List[str], bool, Tuple[str, ...]]:
    """(violations, inexact, first chain) over the exact failures of the consequent."""
    bad: List[str] = []
    inexact = False
    chain: Tuple[str, ...] = ()
    for cb in run.verdicts[b].checks:
        if cb.ok or (points is not None and not points(cb.x)) or not hyp(cb.x):
            continue
        if not cb.exact:
            inexact = True
            continue
        found, exact = _search_failing_aux(run, a, cb.x)
        if found is not None:
            chain = chain or found
        elif exact_mode and exact:
            bad.append(fmt_vector(cb.x))
        else:
            inexact = True
    return bad, inexact, chain


def _status(bad: List[str], inexact: bool) -> Tuple[EdgeStatus, str]:
    if bad:
        return EdgeStatus.VIOLATION, "consequent fails at " + ", ".join(bad)
    if inexact:
        return EdgeStatus.INCONCLUSIVE, "witness search left a failure unresolved"
    return EdgeStatus.PASS, ""


def evaluate_edge(run: _Run, antecedent: str, consequent: str, hypothesis: str, mode: str) -> EdgeResult:
    a, b = Condition.parse(antecedent), Condition.parse(consequent)
    hyp = _hypothesis(run, hypothesis)
    chain: Tuple[str, ...] = ()
    tested = sum(1 for x in run.T if hyp(x))
    if tested == 0:
        return EdgeResult(antecedent, consequent, hypothesis, mode, EdgeStatus.SKIPPED,
                          "hypothesis holds nowhere on the test set")

    if mode == POINTWISE:
        bad, inexact = _pointwise(run, a, b, hyp)
    elif mode == SPLIT:
        plain = lambda x: run.f.in_domain(x) and not run.is_tie(x)
        bad, inexact = _pointwise(run, a, b, hyp, plain)
        if run.verdicts[a].holds:
            rbad, rinexact, chain = _radial(run, a, b, hyp, True, lambda x: not plain(x))
            bad, inexact = bad + rbad, inexact or rinexact
    elif not run.verdicts[a].holds:
        return EdgeResult(antecedent, consequent, hypothesis, mode, EdgeStatus.PASS,
                          "antecedent fails on the test set")
    else:
        bad, inexact, chain = _radial(run, a, b, hyp, mode == RADIAL_EXACT)
    status, detail = _status(bad, inexact)
    if status == EdgeStatus.PASS and chain:
        detail = "consequent fails on T; antecedent refuted off T"
    return EdgeResult(antecedent, consequent, hypothesis, mode, status, detail, chain)


def constancy_check(run: _Run, antecedent: Condition) -> Optional[EdgeResult]:
    """Where the antecedent holds on T, f must be constant between x0 and every tie,
    or the antecedent must visibly fail in between."""
    if not run.verdicts[antecedent].holds:
        return None
    g = run.settings.constancy_grid
    bad: List[str] = []
    chain: Tuple[str, ...] = ()
    fx0 = run.f.evaluate(run.x0)
    for x in run.T:
        if x == run.x0 or not run.is_tie(x):
            continue
        for i in range(1, g + 1):
            t = Fraction(i, g + 1)
            xt = _on_segment(run.x0, x, t)
            if set_equal(run.f.evaluate(xt), fx0):
                continue
            check = check_condition_at(run.f, run.x0, xt, antecedent, run.search)
            if check.ok:
                bad.append(fmt_vector(xt))
            elif not chain:
                chain = (f"x = {fmt_vector(x)}", f"t = {t}", f"x_t = {fmt_vector(xt)}",
                         f"{antecedent.value} fails at x_t")
                run.notes.append(f"{antecedent.value} holds on T but fails at {fmt_vector(xt)}")
    if bad:
        return EdgeResult(antecedent.value, "constancy", NO_HYPOTHESIS, "constancy", EdgeStatus.VIOLATION,
                          "f varies on a tie segment yet the antecedent holds at " + ", ".join(bad))
    return EdgeResult(antecedent.value, "constancy", NO_HYPOTHESIS, "constancy", EdgeStatus.PASS, "", chain)


def _self_checks(run: _Run, expected: Dict[Condition, Verdict]) -> List[EdgeResult]:
    out: List[EdgeResult] = []
    if run.f.is_vector_extension:
        status = EdgeStatus.PASS if run.sr.holds else EdgeStatus.VIOLATION
        out.append(EdgeResult("vector extension", "SR", NO_HYPOTHESIS, POINTWISE, status,
                              "" if run.sr.holds else "SR fails for an extension of a vector map"))
    for sweep in (run.sr, run.wr):
        if not sweep.inequality_ok:
            out.append(EdgeResult("convexity", "φ′ <= -σ(z*|f′)", NO_HYPOTHESIS, POINTWISE,
                                  EdgeStatus.VIOLATION, f"{sweep.kind} sweep found φ′ > -σ"))
    for cond, want in expected.items():
        got = run.verdicts.get(cond)
        if got is not None and got.verdict != want:
            out.append(EdgeResult("expect", cond.value, NO_HYPOTHESIS, POINTWISE, EdgeStatus.VIOLATION,
                                  f"expected {want.value}, certified {got.verdict.value}"))
    return out


def run_implication_harness(f: HFamilyMap, x0: Sequence, T: TestSet, search: Optional[WitnessSearch] = None,
                            settings: Optional[Settings] = None,
                            expected: Optional[Dict[Condition, Verdict]] = None) -> HarnessReport:
    """Certify every condition, then check every implication edge against the verdicts."""
    st = settings or Settings()
    x0 = vec(x0)
    search = search or WitnessSearch.default(f.cone, st)
    verdicts = {v.condition: v for v in certify_all(f, x0, T, ALL_CONDITIONS, search)}
    run = _Run(
        f, x0, T, search, st, verdicts,
        regularity_sweep(f, x0, T, "SR", search.functionals),
        regularity_sweep(f, x0, T, "WR", search.functionals),
        {v: continuity_probe(f, x0, v, st) for v in ProbeVariant},
    )

    edges = [evaluate_edge(run, *row) for row in IMPLICATION_EDGES]
    for name in CONSTANCY_ANTECEDENTS:
        row = constancy_check(run, Condition.parse(name))
        if row is not None:
            edges.append(row)
    edges += _self_checks(run, expected or {})

    if verdicts[Condition.MVI_M_SCALAR].holds and not verdicts[Condition.MIN].holds:
        run.notes.append("interesting: mvi_M HOLDS while Min FAILS")
    if run.probes[ProbeVariant.BSTAR_LSC].status == ProbeStatus.INCONCLUSIVE:
        run.notes.append("lsc probe inconclusive; lsc-conditioned edges skipped")

    report = HarnessReport(
        f.name, x0, T, search.label, tuple(verdicts[c] for c in ALL_CONDITIONS),
        run.sr, run.wr, tuple(run.probes.values()), tuple(edges), tuple(run.notes),
    )
    if report.violations:
        logger.warning("%s: %d implication violation(s)", f.name, len(report.violations))
    else:
        logger.info("%s: %d edges checked, no violations", f.name, len(edges))
    return report


__all__ = [
    "EdgeResult", "EdgeStatus", "HarnessReport", "aux_parameters", "constancy_check",
    "evaluate_edge", "first_kink", "run_implication_harness",
]

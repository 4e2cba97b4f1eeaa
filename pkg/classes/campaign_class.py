from __future__ import annotations

import logging
import time
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from classes.certifier_class import ALL_CONDITIONS
from classes.harness_class import EdgeStatus, run_implication_harness
from classes.instance_class import random_instance
from classes.oracle_class import oracle_verdicts
from classes.settings_class import Settings

logger = logging.getLogger(__name__)


@dataclass
class CampaignSummary:
    seed: int
    count: int = 0
    vector_instances: int = 0
    oracle_checked: int = 0
    statuses: Counter = field(default_factory=Counter)
    violations: List[Tuple[int, str, str]] = field(default_factory=list)  # (instance seed, edge, detail)
    interesting: List[int] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


def campaign_seeds(seed: int, count: int) -> List[int]:
    rng = np.random.default_rng(seed)
    return [int(s) for s in rng.integers(0, 2 ** 31, size=count)]


def run_campaign(seed: int, count: int, max_dim: int = 3, settings: Optional[Settings] = None) -> CampaignSummary:
    """Harness over ``count`` seeded random instances; m = 1 draws are also checked against the extended-real oracle."""
    st = settings or Settings()
    summary = CampaignSummary(seed)
    start = time.perf_counter()
    for s in campaign_seeds(seed, count):
        inst = random_instance(s, max_dim, settings=st)
        report = run_implication_harness(inst.f, inst.x0, inst.testset, settings=st)
        summary.count += 1
        summary.vector_instances += inst.f.is_vector_extension
        summary.statuses.update(e.status.value for e in report.edges)
        for e in report.violations:
            summary.violations.append((s, e.label, e.detail))
        if report.interesting:
            summary.interesting.append(s)
        if inst.f.cone.dim == 1:
            summary.oracle_checked += 1
            expected = oracle_verdicts(inst.f, inst.x0, inst.testset)
            for cond in ALL_CONDITIONS:
                got = report.verdict(cond).verdict
                if got != expected[cond]:
                    summary.violations.append((s, f"oracle {cond.value}", f"certified {got.value}, oracle {expected[cond].value}"))
        logger.debug("campaign instance %d: %d edges, %d violations", s, len(report.edges), len(report.violations))
    logger.info("campaign seed %d: %d instances, %d violations, %d interesting in %.1f s",
                seed, summary.count, len(summary.violations), len(summary.interesting),
                time.perf_counter() - start)
    return summary


def campaign_payload(summary: CampaignSummary) -> Dict[str, Any]:
    return {
        "instance": f"random campaign seed {summary.seed}",
        "count": summary.count,
        "vector_instances": summary.vector_instances,
        "oracle_checked": summary.oracle_checked,
        "edge_statuses": {status.value: summary.statuses.get(status.value, 0) for status in EdgeStatus},
        "violations": [{"seed": s, "edge": e, "detail": d} for s, e, d in summary.violations],
        "interesting": list(summary.interesting),
    }


__all__ = ["CampaignSummary", "campaign_payload", "campaign_seeds", "run_campaign"]

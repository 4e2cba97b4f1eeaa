from __future__ import annotations

from dataclasses import replace
from typing import Any, Dict, Optional

from mcp.server.fastmcp import Context, FastMCP

from app.context import AppCtx
from classes.campaign_class import campaign_payload, run_campaign
from classes.certifier_class import (
    WitnessSearch,
    certify_all,
    parse_conditions,
    parse_point,
    parse_testset,
    regularity_sweep,
)
from classes.harness_class import run_implication_harness
from classes.instance_class import Instance, builtin_names
from classes.instance_file_class import load_functionals
from classes.report_class import certify_payload, harness_payload
from data.instance_data import INSTANCE_CATALOG

# ---------- helpers ----------

def _get_app_ctx(ctx: Context) -> AppCtx:
    lc = getattr(ctx.request_context, "lifespan_context", None)
    if isinstance(lc, dict) and isinstance(lc.get("app"), AppCtx):
        return lc["app"]
    if isinstance(lc, AppCtx):
        return lc
    raise RuntimeError("lifespan_context carries no AppCtx; check the lifespan yield")


def prepare_instance(app: AppCtx, spec: str, point: Optional[str] = None, testset: Optional[str] = None,
                     witness_search: Optional[str] = None) -> Instance:
    """Instance with the point, test set and witness search overrides applied."""
    inst = app.instance(spec)
    if point:
        inst = replace(inst, x0=parse_point(point))
    if testset:
        inst = replace(inst, testset=parse_testset(testset))
    if witness_search:
        inst = replace(inst, search=WitnessSearch.parse(witness_search, inst.f.cone, load_functionals))
    return inst


def certify_instance(app: AppCtx, inst: Instance, conditions: Optional[str] = None,
                     regularity: bool = True) -> Dict[str, Any]:
    search = inst.search or WitnessSearch.default(inst.f.cone, app.settings)
    verdicts = certify_all(inst.f, inst.x0, inst.testset, parse_conditions(conditions), search)
    sr = wr = None
    if regularity:
        sr = regularity_sweep(inst.f, inst.x0, inst.testset, "SR", search.functionals)
        wr = regularity_sweep(inst.f, inst.x0, inst.testset, "WR", search.functionals)
    return certify_payload(inst, verdicts, sr, wr)


def implications_for(app: AppCtx, inst: Instance) -> Dict[str, Any]:
    report = run_implication_harness(inst.f, inst.x0, inst.testset, inst.search, app.settings, inst.expected)
    return harness_payload(inst, report)


# ---------- registration ----------

def register(mcp: FastMCP) -> None:
    """
    Certification tools: list-instances, certify-conditions, run-implications, run-campaign.
    Instances are built-in names (r2-minty-gap, linf-truncated:N, pareto-identity,
    extreals-oracle, random:SEED) or instance file paths.
    """

    @mcp.tool(
        name="list-instances",
        description="""
            Lists the built-in instances with a one-line summary each.
            """
    )
    def list_instances() -> Dict[str, Any]:
        return {"instances": [{"name": n, "summary": INSTANCE_CATALOG[n]} for n in builtin_names()]}

    @mcp.tool(
        name="certify-conditions",
        description="""
            Certifies minimality and variational-inequality conditions at a candidate point
            over a finite test set. Points are comma-separated rationals ("0,2", "2/3");
            test sets are ';'-separated points or grid:LO:HI:K.
            """
    )
    async def certify_conditions(
            ctx: Context,
            instance: str,
            point: Optional[str] = None,
            conditions: Optional[str] = None,
            testset: Optional[str] = None,
            witness_search: Optional[str] = None,
    ) -> Dict[str, Any]:
        app = _get_app_ctx(ctx)
        try:
            inst = prepare_instance(app, instance, point, testset, witness_search)
            return certify_instance(app, inst, conditions)
        except (ValueError, OSError) as e:
            return {"error": f"certification failed: {e}"}

    @mcp.tool(
        name="run-implications",
        description="""
            Evaluates all twelve conditions and checks every implication edge between them.
            VIOLATION rows mean the certifiers disagree with a proven implication.
            """
    )
    async def run_implications(
            ctx: Context,
            instance: str,
            point: Optional[str] = None,
            testset: Optional[str] = None,
            witness_search: Optional[str] = None,
    ) -> Dict[str, Any]:
        app = _get_app_ctx(ctx)
        try:
            inst = prepare_instance(app, instance, point, testset, witness_search)
            return implications_for(app, inst)
        except (ValueError, OSError) as e:
            return {"error": f"implication harness failed: {e}"}

    @mcp.tool(
        name="run-campaign",
        description="""
            Runs the implication harness over seeded random convex instances.
            """
    )
    async def run_random_campaign(ctx: Context, seed: int = 7, count: int = 20) -> Dict[str, Any]:
        app = _get_app_ctx(ctx)
        try:
            return campaign_payload(run_campaign(seed, count, settings=app.settings))
        except ValueError as e:
            return {"error": f"campaign failed: {e}"}

from __future__ import annotations

from typing import Any, Dict

from mcp.server.fastmcp import Context, FastMCP

from app.context import AppCtx
from app.tools.certify_tools import _get_app_ctx
from classes.certifier_class import parse_point
from classes.dini_class import check_SR, check_WR, regularity_functionals, scalar_dini, set_dini
from classes.instance_class import Instance
from classes.instance_file_class import dump_instance
from classes.report_class import derive_payload
from classes.setmap_class import scalarize


def derive_at(app: AppCtx, inst: Instance, x: str, u: str) -> Dict[str, Any]:
    """f′(x,u), φ′ per tested functional, and both regularity verdicts."""
    xv, uv = parse_point(x), parse_point(u)
    f = inst.f
    functionals = regularity_functionals(f)
    table = [(z, scalar_dini(scalarize(f, z), xv, uv)) for z in functionals]
    return derive_payload(inst, xv, uv, set_dini(f, xv, uv), table,
                          check_SR(f, xv, uv, functionals), check_WR(f, xv, uv, functionals))


def register(mcp: FastMCP) -> None:
    @mcp.tool(
        name="dini-derivative",
        description="""
            Computes the set-valued Dini derivative f′(x, u) as rows a·z <= c,
            the scalarized derivatives φ′ for the vertices of B* and the map's normals,
            and the SR / WR regularity verdicts at (x, u).
            """
    )
    async def dini_derivative(ctx: Context, instance: str, x: str, u: str) -> Dict[str, Any]:
        app = _get_app_ctx(ctx)
        try:
            return derive_at(app, app.instance(instance), x, u)
        except (ValueError, OSError) as e:
            return {"error": f"derivative failed: {e}"}

    @mcp.tool(
        name="export-instance",
        description="""
            Returns the instance in the sectioned text format read by the CLI.
            """
    )
    async def export_instance(ctx: Context, instance: str) -> Dict[str, Any]:
        app = _get_app_ctx(ctx)
        try:
            return {"text": dump_instance(app.instance(instance))}
        except (ValueError, OSError) as e:
            return {"error": f"export failed: {e}"}

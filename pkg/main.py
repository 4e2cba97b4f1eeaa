
from __future__ import annotations

import argparse
import logging
import sys
from contextlib import asynccontextmanager
from pathlib import Path
from typing import List, Optional

from app.context import AppCtx
try:
    from mcp.server.fastmcp import FastMCP
except Exception:  # pragma: no cover
    FastMCP = None  # type: ignore

from classes.campaign_class import campaign_payload, run_campaign
from classes.errors_class import InstanceParseError, StructuralError, ValidationError
from classes.instance_class import Instance, builtin_names
from classes.instance_file_class import dump_instance
from classes.report_class import FORMATS, render
from classes.settings_class import Settings
from data.instance_data import INSTANCE_CATALOG

logger = logging.getLogger("conlinear")

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_PARSE = 2
EXIT_VALIDATION = 3


def make_lifespan(settings: Settings):
    @asynccontextmanager
    async def lifespan(_server: FastMCP):
        app = AppCtx(settings=settings)
        try:
            # tools read ctx.request_context.lifespan_context['app']
            yield {"app": app}
        finally:
            logger.debug("server shutdown: %d cached instances", len(app.instances))
            app.instances.clear()

    return lifespan


def create_server(settings: Optional[Settings] = None):
    if FastMCP is None:
        raise RuntimeError("FastMCP not available. Install `mcp` package to run the server.")
    mcp = FastMCP("ConlinearCertifier", lifespan=make_lifespan(settings or Settings()))

    from app.tools.certify_tools import register as register_certify_tools
    from app.tools.derive_tools import register as register_derive_tools

    register_certify_tools(mcp)
    register_derive_tools(mcp)
    return mcp


# ---------- CLI ----------

def _prepare(app: AppCtx, args: argparse.Namespace) -> Instance:
    from app.tools.certify_tools import prepare_instance
    return prepare_instance(app, args.instance, getattr(args, "point", None),
                            getattr(args, "testset", None), getattr(args, "witness_search", None))


def _cmd_certify(app: AppCtx, args: argparse.Namespace) -> int:
    from app.tools.certify_tools import certify_instance
    payload = certify_instance(app, _prepare(app, args), args.conditions)
    sys.stdout.write(render(payload, args.format))
    return EXIT_OK


def _cmd_implications(app: AppCtx, args: argparse.Namespace) -> int:
    from app.tools.certify_tools import implications_for
    if args.instance == "random":
        summary = run_campaign(args.seed, args.count, settings=app.settings)
        payload = campaign_payload(summary)
        violations = len(summary.violations)
    else:
        payload = implications_for(app, _prepare(app, args))
        violations = payload["violations"]
    sys.stdout.write(render(payload, args.format))
    if violations and args.strict_edges:
        logger.error("%d implication violations", violations)
        return EXIT_VIOLATION
    return EXIT_OK


def _cmd_derive(app: AppCtx, args: argparse.Namespace) -> int:
    from app.tools.derive_tools import derive_at
    payload = derive_at(app, app.instance(args.instance), args.x, args.u)
    sys.stdout.write(render(payload, args.format))
    return EXIT_OK


def _cmd_export(app: AppCtx, args: argparse.Namespace) -> int:
    text = dump_instance(app.instance(args.instance))
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
        logger.info("wrote %s", args.output)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _cmd_list(_app: AppCtx, _args: argparse.Namespace) -> int:
    for name in builtin_names():
        sys.stdout.write(f"{name:<18} {INSTANCE_CATALOG[name]}\n")
    return EXIT_OK


def _cmd_serve(app: AppCtx, _args: argparse.Namespace) -> int:
    create_server(app.settings).run()
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="conlinear", description="Exact certifiers for set optimization conditions")
    parser.add_argument("--log-level", default="WARNING", help="logging level (DEBUG, INFO, WARNING, ...)")
    sub = parser.add_subparsers(dest="command", required=True)

    def instance_args(p: argparse.ArgumentParser, with_search: bool = True) -> None:
        p.add_argument("instance", help="instance file or built-in name (r2-minty-gap, linf-truncated:N, ...)")
        p.add_argument("--format", choices=FORMATS, default="human")
        if with_search:
            p.add_argument("--point", help="candidate point x0, e.g. 2/3 or 0,2")
            p.add_argument("--testset", help="points separated by ';' or grid:LO:HI:K")
            p.add_argument("--witness-search", help="vertices | regions | grid:K | mstar:FILE")

    p = sub.add_parser("certify", help="certify conditions at a candidate point")
    instance_args(p)
    p.add_argument("--conditions", help="comma-separated condition names; all twelve by default")
    p.set_defaults(handler=_cmd_certify)

    p = sub.add_parser("implications", help="check the implication diagram; 'random' runs a seeded campaign")
    instance_args(p)
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--count", type=int, default=100)
    p.add_argument("--strict-edges", action="store_true", help="exit 1 when any proven implication is violated")
    p.set_defaults(handler=_cmd_implications)

    p = sub.add_parser("derive", help="print f'(x,u), the scalar derivative table and SR/WR verdicts")
    instance_args(p, with_search=False)
    p.add_argument("--x", required=True)
    p.add_argument("--u", required=True)
    p.set_defaults(handler=_cmd_derive)

    p = sub.add_parser("export", help="write an instance in the instance file format")
    p.add_argument("instance")
    p.add_argument("-o", "--output")
    p.set_defaults(handler=_cmd_export)

    p = sub.add_parser("list", help="list built-in instances")
    p.set_defaults(handler=_cmd_list)

    p = sub.add_parser("serve", help="run the MCP server over stdio")
    p.set_defaults(handler=_cmd_serve)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=args.log_level.upper(), format="%(levelname)s %(name)s: %(message)s")
    app = AppCtx(settings=Settings())
    try:
        return args.handler(app, args)
    except InstanceParseError as e:
        logger.error("parse error: %s", e)
        return EXIT_PARSE
    except ValidationError as e:
        logger.error("validation failed: %s", e)
        for key, value in sorted(e.counterexample.items()):
            sys.stderr.write(f"counterexample.{key} = {value}\n")
        return EXIT_VALIDATION
    except StructuralError as e:
        logger.error("structural error: %s", e)
        return EXIT_PARSE


if __name__ == "__main__":
    sys.exit(main())

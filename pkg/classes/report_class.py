from __future__ import annotations

import hashlib
from typing import Any, Dict, Iterable, List, Optional, Sequence

from classes.certifier_class import ConditionVerdict, RegularitySweep
from classes.dini_class import RegularityVerdict, SetDerivative
from classes.harness_class import HarnessReport
from classes.instance_class import Instance
from classes.instance_file_class import dump_instance
from classes.lp_class import Vector, fmt_vector
from classes.probe_class import ProbeResult

FORMATS = ("human", "kv")


def instance_hash(inst: Instance) -> str:
    return hashlib.sha256(dump_instance(inst).encode("utf-8")).hexdigest()


def _rows(d: SetDerivative) -> List[str]:
    if d.value.empty:
        return ["∅"]
    if d.value.is_whole:
        return ["Z"]
    return d.value.dump().splitlines()


# ---------- Payloads (plain dicts, shared with the MCP tools) ----------

def verdict_payload(v: ConditionVerdict) -> Dict[str, Any]:
    out: Dict[str, Any] = {"condition": v.condition.value, "verdict": v.verdict.value}
    w = v.witness
    if w is not None:
        out["witness"] = fmt_vector(w.x)
        out["exact"] = w.exact
        if w.detail:
            out["detail"] = w.detail
    if v.strategy:
        out["strategy"] = v.strategy
    if v.caveats:
        out["caveats"] = list(v.caveats)
    return out


def regularity_payload(r: RegularityVerdict) -> Dict[str, Any]:
    out: Dict[str, Any] = {"kind": r.kind, "x": fmt_vector(r.x), "u": fmt_vector(r.u), "holds": r.holds}
    bad = r.failing_entry()
    if bad is not None:
        out["zstar"] = fmt_vector(bad.zstar)
        out["set_side"] = str(bad.set_side)
        out["scalar_side"] = str(bad.scalar_side)
    return out


def sweep_payload(sweep: RegularitySweep) -> List[Dict[str, Any]]:
    rows = []
    for a, b in zip(sweep.at_x0, sweep.at_points):
        rows.append(regularity_payload(a))
        rows.append(regularity_payload(b))
    return rows


def probe_payload(p: ProbeResult) -> Dict[str, Any]:
    return {"variant": p.variant.value, "status": p.status.value, "detail": p.detail}


def certify_payload(inst: Instance, verdicts: Sequence[ConditionVerdict],
                    sr: Optional[RegularitySweep] = None, wr: Optional[RegularitySweep] = None) -> Dict[str, Any]:
    out: Dict[str, Any] = {
        "instance": inst.name,
        "hash": instance_hash(inst),
        "x0": fmt_vector(inst.x0),
        "testset": len(inst.testset),
        "verdicts": [verdict_payload(v) for v in verdicts],
    }
    regularity = []
    for sweep in (sr, wr):
        if sweep is not None:
            regularity += sweep_payload(sweep)
    if regularity:
        out["regularity"] = regularity
    if inst.notes:
        out["notes"] = list(inst.notes)
    return out


def harness_payload(inst: Instance, report: HarnessReport) -> Dict[str, Any]:
    out = certify_payload(inst, report.verdicts, report.sr, report.wr)
    out["strategy"] = report.strategy
    out["probes"] = [probe_payload(p) for p in report.probes]
    out["edges"] = [
        {"edge": e.label, "mode": e.mode, "status": e.status.value, "detail": e.detail, "chain": list(e.chain)}
        for e in report.edges
    ]
    out["violations"] = len(report.violations)
    out["notes"] = list(inst.notes) + list(report.notes)
    return out


def derive_payload(inst: Instance, x: Vector, u: Vector, d: SetDerivative, scalar: Iterable,
                   sr: RegularityVerdict, wr: RegularityVerdict) -> Dict[str, Any]:
    out: Dict[str, Any] = {
        "instance": inst.name,
        "x": fmt_vector(x),
        "u": fmt_vector(u),
        "derivative": _rows(d),
        "scalar": [{"zstar": fmt_vector(z), "phi_prime": str(v)} for z, v in scalar],
        "SR": sr.holds,
        "WR": wr.holds,
    }
    if d.diagnostic:
        out["diagnostic"] = d.diagnostic
    return out


# ---------- Rendering ----------

def _kv_lines(prefix: str, value: Any) -> List[str]:
    if isinstance(value, dict):
        lines = []
        for k, v in value.items():
            lines += _kv_lines(f"{prefix}.{k}" if prefix else str(k), v)
        return lines
    if isinstance(value, list):
        lines = [f"{prefix}.count={len(value)}"]
        for i, v in enumerate(value):
            lines += _kv_lines(f"{prefix}.{i}", v)
        return lines
    if isinstance(value, bool):
        value = "true" if value else "false"
    return [f"{prefix}={value}"]


def render_kv(payload: Dict[str, Any]) -> str:
    return "\n".join(_kv_lines("", payload)) + "\n"


def _table(rows: List[List[str]]) -> List[str]:
    widths = [max(len(r[i]) for r in rows) for i in range(len(rows[0]))]
    return ["  ".join(c.ljust(w) for c, w in zip(r, widths)).rstrip() for r in rows]


def render_human(payload: Dict[str, Any]) -> str:
    lines: List[str] = []
    head = payload.get("instance", "?")
    if "hash" in payload:
        lines.append(f"instance {head}  sha256 {payload['hash'][:16]}")
        lines.append(f"x0 = {payload['x0']}  |T| = {payload['testset']}" +
                     (f"  witness search {payload['strategy']}" if "strategy" in payload else ""))
    elif "count" in payload:
        lines.append(f"{head}: {payload['count']} instances, {payload['vector_instances']} vector extensions, "
                     f"{payload['oracle_checked']} checked against the extended-real oracle")
        lines.append("edges: " + ", ".join(f"{k} {v}" for k, v in payload["edge_statuses"].items()))
        for v in payload["violations"]:
            lines.append(f"VIOLATION seed {v['seed']}: {v['edge']}: {v['detail']}")
        lines.append(f"violations: {len(payload['violations'])}")
        if payload["interesting"]:
            lines.append("interesting seeds: " + ", ".join(map(str, payload["interesting"])))
    else:
        lines.append(f"instance {head}  x = {payload['x']}  u = {payload['u']}")

    if "verdicts" in payload:
        rows = [["condition", "verdict", "witness", "caveats"]]
        for v in payload["verdicts"]:
            witness = v.get("witness", "")
            if witness and not v.get("exact", True):
                witness += " (search)"
            rows.append([v["condition"], v["verdict"], witness, ", ".join(v.get("caveats", []))])
        lines += ["", *_table(rows)]
        details = [f"  {v['condition']}: {v['detail']}" for v in payload["verdicts"] if v.get("detail")]
        lines += details

    if "derivative" in payload:
        lines += ["", "f′(x, u):", *[f"  {r}" for r in payload["derivative"]]]
        if payload.get("diagnostic"):
            lines.append(f"  ({payload['diagnostic']})")
        rows = [["z*", "φ′(x, u)"]] + [[s["zstar"], s["phi_prime"]] for s in payload["scalar"]]
        lines += ["", *_table(rows), "", f"SR {'PASS' if payload['SR'] else 'FAIL'}   WR {'PASS' if payload['WR'] else 'FAIL'}"]

    if payload.get("regularity"):
        rows = [["kind", "x", "u", "status", "z*", "-σ(z*|f′)", "φ′"]]
        for r in payload["regularity"]:
            rows.append([r["kind"], r["x"], r["u"], "PASS" if r["holds"] else "FAIL",
                         r.get("zstar", ""), r.get("set_side", ""), r.get("scalar_side", "")])
        lines += ["", *_table(rows)]

    if payload.get("probes"):
        rows = [["probe", "status", "detail"]] + [[p["variant"], p["status"], p["detail"]] for p in payload["probes"]]
        lines += ["", *_table(rows)]

    if payload.get("edges"):
        rows = [["edge", "mode", "status", "detail"]]
        for e in payload["edges"]:
            rows.append([e["edge"], e["mode"], e["status"], e["detail"]])
        lines += ["", *_table(rows)]
        for e in payload["edges"]:
            if e["chain"]:
                lines.append(f"  {e['edge']}: " + "; ".join(e["chain"]))
        lines.append(f"violations: {payload['violations']}")

    if payload.get("notes"):
        lines += ["", *[f"note: {n}" for n in payload["notes"]]]
    return "\n".join(lines) + "\n"


def render(payload: Dict[str, Any], fmt: str = "human") -> str:
    if fmt == "kv":
        return render_kv(payload)
    return render_human(payload)


__all__ = [
    "FORMATS", "certify_payload", "derive_payload", "harness_payload", "instance_hash",
    "render", "render_human", "render_kv",
]

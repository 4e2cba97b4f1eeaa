from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Tuple, Union

from classes.certifier_class import Condition, TestSet, Verdict, WitnessSearch
from classes.conlinear_class import OrderingCone
from classes.errors_class import InstanceParseError, StructuralError, ValidationError
from classes.instance_class import Instance, load_builtin
from classes.lp_class import Row, Vector, as_rational
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

logger = logging.getLogger(__name__)

# section -> allowed keys; keys marked repeatable may occur several times
_SCHEMA: Dict[str, Dict[str, bool]] = {
    "space": {"dim": False, "cone": False, "generator": True, "interior": False},
    "map": {"name": False, "xdim": False, "row": True, "domain": True},
    "vector": {"name": False, "xdim": False, "component": True, "domain": True},
    "points": {"x0": False},
    "testset": {"point": True, "grid": True},
    "witness": {"strategy": False, "functional": True, "grid": False},
    "expect": {c.value: False for c in Condition},
}


@dataclass
class _Entry:
    key: str
    value: str
    line: int
    column: int  # 1-based column where the value starts


@dataclass
class _Document:
    sections: Dict[str, List[_Entry]] = field(default_factory=dict)
    starts: Dict[str, int] = field(default_factory=dict)

    def entries(self, section: str, key: str) -> List[_Entry]:
        return [e for e in self.sections.get(section, []) if e.key == key]

    def one(self, section: str, key: str, required: bool = True) -> Optional[_Entry]:
        found = self.entries(section, key)
        if not found:
            if required:
                raise InstanceParseError(f"[{section}] needs '{key}'", self.starts.get(section, 0), 1)
            return None
        return found[0]


# ---------- Tokenizing ----------

def _tokenize(text: str) -> _Document:
    doc = _Document()
    current: Optional[str] = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        stripped = line.strip()
        indent = len(line) - len(line.lstrip()) + 1
        if stripped.startswith("["):
            if not stripped.endswith("]"):
                raise InstanceParseError("unterminated section header", lineno, indent)
            current = stripped[1:-1].strip()
            if current not in _SCHEMA:
                raise InstanceParseError(f"unknown section [{current}]", lineno, indent + 1)
            if current in doc.sections:
                raise InstanceParseError(f"duplicate section [{current}]", lineno, indent + 1)
            doc.sections[current] = []
            doc.starts[current] = lineno
            continue
        if current is None:
            raise InstanceParseError("entry outside of any section", lineno, indent)
        key, eq, value = stripped.partition("=")
        key = key.strip()
        if not eq:
            raise InstanceParseError("expected 'key = value'", lineno, indent)
        allowed = _SCHEMA[current]
        if key not in allowed:
            raise InstanceParseError(f"unknown key '{key}' in [{current}]", lineno, indent)
        if not allowed[key] and any(e.key == key for e in doc.sections[current]):
            raise InstanceParseError(f"key '{key}' repeated in [{current}]", lineno, indent)
        column = line.index("=") + 2
        while column <= len(line) and line[column - 1] == " ":
            column += 1
        doc.sections[current].append(_Entry(key, value.strip(), lineno, column))
    return doc


def _numbers(entry: _Entry, text: Optional[str] = None, offset: int = 0) -> Vector:
    """Whitespace-separated rationals of ``text`` (default: the entry value)."""
    source = entry.value if text is None else text
    out = []
    pos = 0
    for token in source.split():
        pos = source.index(token, pos)
        try:
            out.append(as_rational(token))
        except StructuralError:
            raise InstanceParseError(f"not an exact rational: {token!r}", entry.line, entry.column + offset + pos) from None
        pos += len(token)
    return tuple(out)


def _integer(entry: _Entry) -> int:
    value = _numbers(entry)
    if len(value) != 1 or value[0].denominator != 1:
        raise InstanceParseError(f"'{entry.key}' must be one integer", entry.line, entry.column)
    return int(value[0])


def _sized(entry: _Entry, values: Vector, size: int, what: str) -> Vector:
    if len(values) != size:
        raise InstanceParseError(f"{what} has {len(values)} entries, expected {size}", entry.line, entry.column)
    return values


def _pieces(entry: _Entry, text: str, offset: int, xdim: int) -> Tuple[AffineFunction, ...]:
    """'g1 .. gn : h ; g1 .. gn : h' into affine pieces."""
    pieces = []
    start = 0
    for chunk in text.split(";"):
        at = offset + start
        coeffs, colon, const = chunk.partition(":")
        if not colon:
            raise InstanceParseError("affine piece needs 'coefficients : constant'", entry.line, entry.column + at)
        g = _sized(entry, _numbers(entry, coeffs, at), xdim, "affine piece")
        h = _numbers(entry, const, at + len(coeffs) + 1)
        if len(h) != 1:
            raise InstanceParseError("affine piece needs exactly one constant", entry.line, entry.column + at)
        pieces.append(AffineFunction(g, h[0]))
        start += len(chunk) + 1
    return tuple(pieces)


# ---------- Sections ----------

def _space(doc: _Document) -> OrderingCone:
    if "space" not in doc.sections:
        raise InstanceParseError("missing [space] section", 0, 0)
    dim_entry = doc.one("space", "dim")
    m = _integer(dim_entry)
    cone = doc.one("space", "cone", required=False)
    gens = doc.entries("space", "generator")
    try:
        if cone is not None:
            if cone.value != "orthant":
                raise InstanceParseError(f"unknown cone {cone.value!r}", cone.line, cone.column)
            if gens:
                raise InstanceParseError("give either 'cone = orthant' or generators", gens[0].line, 1)
            return OrderingCone.orthant(m)
        if not gens:
            raise InstanceParseError("[space] needs 'cone = orthant' or generators", dim_entry.line, 1)
        interior = doc.one("space", "interior")
        return OrderingCone.from_generators(
            [_sized(g, _numbers(g), m, "generator") for g in gens],
            _sized(interior, _numbers(interior), m, "interior point"),
        )
    except StructuralError as e:
        raise InstanceParseError(str(e), dim_entry.line, 1) from None


def _domain(doc: _Document, section: str, xdim: int) -> Polyhedron:
    rows: List[Row] = []
    for e in doc.entries(section, "domain"):
        lhs, le, rhs = e.value.partition("<=")
        if not le:
            raise InstanceParseError("domain rows read 'g1 .. gn <= h'", e.line, e.column)
        g = _sized(e, _numbers(e, lhs), xdim, "domain row")
        h = _numbers(e, rhs, len(lhs) + 2)
        if len(h) != 1:
            raise InstanceParseError("domain row needs one right-hand side", e.line, e.column)
        rows.append((g, h[0]))
    return Polyhedron(xdim, tuple(rows))


def _hfamily(doc: _Document, cone: OrderingCone) -> HFamilyMap:
    name = doc.one("map", "name").value
    xdim = _integer(doc.one("map", "xdim"))
    normals, offsets = [], []
    for e in doc.entries("map", "row"):
        normal, bar, rest = e.value.partition("|")
        if not bar:
            raise InstanceParseError("rows read 'a1 .. am | pieces'", e.line, e.column)
        normals.append(_sized(e, _numbers(e, normal), cone.dim, "row normal"))
        offsets.append(ConcavePWL(_pieces(e, rest, len(normal) + 1, xdim)))
    return HFamilyMap(name, cone, xdim, _domain(doc, "map", xdim), tuple(normals), tuple(offsets))


def _vector(doc: _Document, cone: OrderingCone) -> HFamilyMap:
    name = doc.one("vector", "name").value
    xdim = _integer(doc.one("vector", "xdim"))
    components = []
    for e in doc.entries("vector", "component"):
        kind, _, rest = e.value.partition(" ")
        pieces = _pieces(e, rest, len(kind) + 1, xdim)
        if kind == "affine" and len(pieces) == 1:
            components.append(pieces[0])
        elif kind == "max":
            components.append(ConvexPWL(pieces))
        elif kind == "min":
            components.append(ConcavePWL(pieces))
        else:
            raise InstanceParseError("components read 'affine|max|min pieces'", e.line, e.column)
    psi = VectorMap(name, cone, xdim, _domain(doc, "vector", xdim), tuple(components))
    return epigraphical_extension(psi)


def _point(doc: _Document, e: _Entry, xdim: int) -> Vector:
    return _sized(e, _numbers(e), xdim, "point")


def _testset(doc: _Document, xdim: int) -> Optional[TestSet]:
    if "testset" not in doc.sections:
        return None
    points: List[Vector] = [_point(doc, e, xdim) for e in doc.entries("testset", "point")]
    for e in doc.entries("testset", "grid"):
        parts = e.value.split(";")
        if len(parts) != 3:
            raise InstanceParseError("grids read 'lo .. ; hi .. ; k'", e.line, e.column)
        lo = _sized(e, _numbers(e, parts[0]), xdim, "grid corner")
        hi = _sized(e, _numbers(e, parts[1]), xdim, "grid corner")
        k = _numbers(e, parts[2], len(parts[0]) + len(parts[1]) + 2)
        if len(k) != 1 or k[0].denominator != 1 or k[0] < 1:
            raise InstanceParseError("grid resolution must be a positive integer", e.line, e.column)
        points.extend(TestSet.grid(lo, hi, int(k[0])).points)
    if not points:
        raise InstanceParseError("[testset] is empty", doc.starts["testset"], 1)
    return TestSet.of(points)


def _witness(doc: _Document, cone: OrderingCone) -> Optional[WitnessSearch]:
    if "witness" not in doc.sections:
        return None
    e = doc.one("witness", "strategy")
    try:
        if e.value == "mstar":
            functionals = [_sized(f, _numbers(f), cone.dim, "functional") for f in doc.entries("witness", "functional")]
            return WitnessSearch.mstar(cone, functionals)
        if e.value == "grid":
            return WitnessSearch.grid_of(_integer(doc.one("witness", "grid")))
        return WitnessSearch.parse(e.value, cone)
    except (StructuralError, ValidationError) as err:
        raise InstanceParseError(str(err), e.line, e.column) from None


def _expect(doc: _Document) -> Dict[Condition, Verdict]:
    out = {}
    for e in doc.sections.get("expect", []):
        try:
            out[Condition.parse(e.key)] = Verdict(e.value)
        except ValueError:
            raise InstanceParseError(f"expected HOLDS or FAILS, got {e.value!r}", e.line, e.column) from None
    return out


# ---------- Public API ----------

def parse_instance(text: str) -> Instance:
    """Strict reader for the sectioned instance format.

    Every numeric literal must be an integer or p/q; unknown sections and
    keys are errors. Map construction errors surface as ValidationError.
    """
    doc = _tokenize(text)
    cone = _space(doc)
    has_map, has_vector = "map" in doc.sections, "vector" in doc.sections
    if has_map == has_vector:
        raise InstanceParseError("give exactly one of [map] or [vector]", 0, 0)
    try:
        f = _hfamily(doc, cone) if has_map else _vector(doc, cone)
    except StructuralError as e:
        section = "map" if has_map else "vector"
        raise InstanceParseError(str(e), doc.starts[section], 1) from None
    if "points" not in doc.sections:
        raise InstanceParseError("missing [points] section", 0, 0)
    x0 = _point(doc, doc.one("points", "x0"), f.xdim)
    T = _testset(doc, f.xdim)
    if T is None:
        T = TestSet.of(f.domain.sample_points() + [x0])
    return Instance(f.name, f, x0, T, _expect(doc), search=_witness(doc, cone))


def load_instance(path: Union[str, Path]) -> Instance:
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as e:
        raise InstanceParseError(f"cannot read {p}: {e.strerror}", 0, 0) from None
    inst = parse_instance(text)
    logger.info("loaded %s from %s", inst.name, p)
    return inst


def resolve_instance(spec: str, settings: Optional[Settings] = None) -> Instance:
    """An instance file path, or a built-in name such as 'linf-truncated:7'."""
    if Path(spec).is_file():
        return load_instance(spec)
    return load_builtin(spec, settings)


def load_functionals(path: Union[str, Path]) -> List[Vector]:
    """One functional per line, '#' comments allowed."""
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise InstanceParseError(f"cannot read {path}: {e.strerror}", 0, 0) from None
    out = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        entry = _Entry("functional", line, lineno, 1)
        out.append(_numbers(entry))
    return out


# ---------- Export ----------

def _fmt(values) -> str:
    return " ".join(str(v) for v in values)


def _fmt_pieces(pieces) -> str:
    return " ; ".join(f"{_fmt(p.coeffs)} : {p.const}" for p in pieces)


def dump_instance(inst: Instance) -> str:
    """Canonical text form; parse_instance(dump_instance(i)) rebuilds an equal map."""
    f = inst.f
    lines = ["[space]", f"dim = {f.cone.dim}"]
    if f.cone.is_orthant:
        lines.append("cone = orthant")
    else:
        lines += [f"generator = {_fmt(g)}" for g in f.cone.generators]
        lines.append(f"interior = {_fmt(f.cone.interior)}")
    psi = f.source
    if psi is not None:
        lines += ["", "[vector]", f"name = {f.name}", f"xdim = {f.xdim}"]
        for c in psi.components:
            if isinstance(c, AffineFunction):
                lines.append(f"component = affine {_fmt_pieces([c])}")
            elif isinstance(c, ConvexPWL):
                lines.append(f"component = max {_fmt_pieces(c.pieces)}")
            else:
                lines.append(f"component = min {_fmt_pieces(c.pieces)}")
        domain = psi.domain
    else:
        lines += ["", "[map]", f"name = {f.name}", f"xdim = {f.xdim}"]
        for a, b in zip(f.normals, f.offsets):
            lines.append(f"row = {_fmt(a)} | {_fmt_pieces(b.pieces)}")
        domain = f.domain
    lines += [f"domain = {_fmt(g)} <= {h}" for g, h in domain.rows]
    lines += ["", "[points]", f"x0 = {_fmt(inst.x0)}", "", "[testset]"]
    lines += [f"point = {_fmt(x)}" for x in inst.testset]
    if inst.search is not None:
        lines += ["", "[witness]", f"strategy = {inst.search.strategy.value}"]
        if inst.search.grid:
            lines.append(f"grid = {inst.search.grid}")
        lines += [f"functional = {_fmt(z)}" for z in inst.search.functionals]
    if inst.expected:
        lines += ["", "[expect]"]
        lines += [f"{c.value} = {v.value}" for c, v in sorted(inst.expected.items(), key=lambda kv: list(Condition).index(kv[0]))]
    return "\n".join(lines) + "\n"


__all__ = ["dump_instance", "load_functionals", "load_instance", "parse_instance", "resolve_instance"]

"""Line-oriented text formats for posets, modules, monoids, acts and
graded algebras, plus canonical serializers.

A file holds one or more blocks.  A block starts with its kind keyword and
an optional name and consumes directive lines until the next block:

    poset P              module M over P field 101
    elem a               space a 1
    rel a b              map a b [1 0 ; 2 3]

    monoid G             act A over G          algebra S over G field 101
    elem 1               point x               basis u deg 1
    mul 1 1 1            apply g x y           mul u u = u

'#' starts a comment.  Matrices are row-major bracketed integers with ';'
between rows; a flat list is accepted when the shape is known.  Unnamed
blocks are named after the file stem.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

import numpy as np

from .errors import ParseError, UnknownElement, ValidationError
from .graded import GAct, GradedAlgebra, Monoid
from .linalg import FieldSpec, NoSolution, solve, zeros
from .modules import PersModule
from .posets import Poset, build_poset

BLOCK_KINDS = ("poset", "module", "monoid", "act", "algebra")


@dataclass
class Workspace:
    posets: dict = dc_field(default_factory=dict)
    modules: dict = dc_field(default_factory=dict)
    monoids: dict = dc_field(default_factory=dict)
    acts: dict = dc_field(default_factory=dict)
    algebras: dict = dc_field(default_factory=dict)

    def single(self, kind: str, requested: str | None = None):
        table = getattr(self, kind + "s")
        if requested is not None:
            if requested not in table:
                raise UnknownElement(f"no {kind} named {requested!r} loaded")
            return table[requested]
        if len(table) != 1:
            raise UnknownElement(
                f"{len(table)} {kind}s loaded; pick one of {sorted(table)}")
        return next(iter(table.values()))


def _strip(line: str) -> str:
    if "#" in line:
        line = line[: line.index("#")]
    return line.strip()


def _parse_matrix_tokens(tokens: list[str], line_no: int) -> list[list[int]]:
    text = " ".join(tokens)
    if not (text.startswith("[") and text.endswith("]")):
        raise ParseError(line_no, "matrix literal must be bracketed")
    body = text[1:-1].strip()
    rows = []
    for chunk in body.split(";"):
        chunk = chunk.strip()
        entries = []
        for tok in chunk.split():
            try:
                entries.append(int(tok))
            except ValueError:
                raise ParseError(line_no, f"bad matrix entry {tok!r}") from None
        rows.append(entries)
    if rows == [[]]:
        rows = [[]]
    return rows


def _shape_matrix(rows, shape, line_no, had_semicolon):
    r, c = shape
    if not had_semicolon:
        flat = rows[0] if rows else []
        if len(flat) != r * c:
            raise ParseError(line_no, f"expected {r * c} entries for shape {shape}, "
                                      f"got {len(flat)}")
        return np.array(flat, dtype=np.int64).reshape(r, c) if r * c else zeros(r, c)
    if len(rows) != r or any(len(row) != c for row in rows):
        raise ParseError(line_no, f"expected shape {shape}")
    return np.array(rows, dtype=np.int64).reshape(r, c) if r * c else zeros(r, c)


def _parse_lin_combo(text: str, syms: dict, dim: int, line_no: int) -> np.ndarray:
    out = np.zeros(dim, dtype=np.int64)
    text = text.strip()
    if text == "0":
        return out
    for term in text.split("+"):
        parts = term.split()
        if len(parts) == 1:
            coeff, sym = 1, parts[0]
        elif len(parts) == 2:
            try:
                coeff = int(parts[0])
            except ValueError:
                raise ParseError(line_no, f"bad coefficient {parts[0]!r}") from None
            sym = parts[1]
        else:
            raise ParseError(line_no, f"bad term {term.strip()!r}")
        if sym not in syms:
            raise ParseError(line_no, f"unknown basis symbol {sym!r}")
        out[syms[sym]] += coeff
    return out


class _Block:
    def __init__(self, kind, name, line_no, header):
        self.kind = kind
        self.name = name
        self.line_no = line_no
        self.header = header
        self.lines = []  # (line_no, tokens, raw)


def _split_blocks(text: str, stem: str):
    blocks = []
    anon_counts = {}
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        tokens = line.split()
        if tokens[0] in BLOCK_KINDS:
            kind = tokens[0]
            name = None
            rest = tokens[1:]
            if rest and rest[0] not in ("over", "field"):
                name = rest[0]
                rest = rest[1:]
            if name is None:
                k = anon_counts.get(kind, 0)
                anon_counts[kind] = k + 1
                name = stem if k == 0 else f"{stem}.{k}"
            blocks.append(_Block(kind, name, line_no, rest))
        else:
            if not blocks:
                raise ParseError(line_no, f"directive {tokens[0]!r} outside a block")
            blocks[-1].lines.append((line_no, tokens, line))
    return blocks


def _header_option(header, key, line_no):
    if key in header:
        i = header.index(key)
        if i + 1 >= len(header):
            raise ParseError(line_no, f"missing value after {key!r}")
        return header[i + 1]
    return None


def _parse_poset(block) -> Poset:
    elements, relations = [], []
    for line_no, tokens, _ in block.lines:
        if tokens[0] == "elem" and len(tokens) == 2:
            elements.append(tokens[1])
        elif tokens[0] == "rel" and len(tokens) == 3:
            relations.append((tokens[1], tokens[2]))
        else:
            raise ParseError(line_no, f"bad poset directive {tokens[0]!r}")
    try:
        return build_poset(elements, relations, name=block.name)
    except ValidationError as exc:
        raise ParseError(block.line_no, str(exc)) from exc


def _parse_module(block, ws: Workspace, default_field: int) -> PersModule:
    poset_name = _header_option(block.header, "over", block.line_no)
    if poset_name is None:
        raise ParseError(block.line_no, "module needs 'over <poset>'")
    if poset_name not in ws.posets:
        raise ValidationError(f"module references unknown poset {poset_name!r}")
    poset = ws.posets[poset_name]
    field_text = _header_option(block.header, "field", block.line_no)
    field = FieldSpec(int(field_text) if field_text else default_field)
    dims = {}
    raw_maps = []
    for line_no, tokens, _ in block.lines:
        if tokens[0] == "space" and len(tokens) == 3:
            if tokens[1] not in poset._index:
                raise ParseError(line_no, f"unknown element {tokens[1]!r}")
            dims[tokens[1]] = int(tokens[2])
        elif tokens[0] == "map" and len(tokens) >= 4:
            raw_maps.append((line_no, tokens[1], tokens[2], tokens[3:]))
        else:
            raise ParseError(line_no, f"bad module directive {tokens[0]!r}")
    cover_set = set(poset.covers)
    maps = {}
    for line_no, a, b, mtokens in raw_maps:
        if a not in poset._index or b not in poset._index:
            raise ParseError(line_no, f"unknown element in map {a!r} {b!r}")
        if (a, b) not in cover_set:
            raise ParseError(line_no, f"{(a, b)!r} is not a cover")
        rows = _parse_matrix_tokens(mtokens, line_no)
        shape = (dims.get(b, 0), dims.get(a, 0))
        maps[(a, b)] = _shape_matrix(rows, shape, line_no,
                                     ";" in " ".join(mtokens))
    return PersModule(poset, field, dims, maps, name=block.name)


def _parse_monoid(block) -> Monoid:
    names = []
    products = []
    for line_no, tokens, _ in block.lines:
        if tokens[0] == "elem" and len(tokens) == 2:
            names.append(tokens[1])
        elif tokens[0] == "mul" and len(tokens) == 4:
            products.append((line_no, tokens[1], tokens[2], tokens[3]))
        else:
            raise ParseError(line_no, f"bad monoid directive {tokens[0]!r}")
    index = {e: i for i, e in enumerate(names)}
    n = len(names)
    table = -np.ones((n, n), dtype=np.int64)
    for line_no, a, b, c in products:
        for x in (a, b, c):
            if x not in index:
                raise ParseError(line_no, f"unknown monoid element {x!r}")
        table[index[a], index[b]] = index[c]
    missing = np.argwhere(table < 0)
    if missing.size:
        i, j = missing[0]
        raise ParseError(block.line_no,
                         f"product {names[i]!r}*{names[j]!r} undefined")
    return Monoid(names, table, name=block.name)


def _parse_act(block, ws: Workspace) -> GAct:
    mon_name = _header_option(block.header, "over", block.line_no)
    if mon_name is None or mon_name not in ws.monoids:
        raise ValidationError(f"act references unknown monoid {mon_name!r}")
    mon = ws.monoids[mon_name]
    points = []
    applications = []
    for line_no, tokens, _ in block.lines:
        if tokens[0] == "point" and len(tokens) == 2:
            points.append(tokens[1])
        elif tokens[0] == "apply" and len(tokens) == 4:
            applications.append((line_no, tokens[1], tokens[2], tokens[3]))
        else:
            raise ParseError(line_no, f"bad act directive {tokens[0]!r}")
    p_index = {a: i for i, a in enumerate(points)}
    g_index = {g: i for i, g in enumerate(mon.names)}
    table = -np.ones((len(mon), len(points)), dtype=np.int64)
    table[mon.unit] = np.arange(len(points))
    for line_no, g, a, b in applications:
        if g not in g_index:
            raise ParseError(line_no, f"unknown monoid element {g!r}")
        if a not in p_index or b not in p_index:
            raise ParseError(line_no, f"unknown point in apply")
        table[g_index[g], p_index[a]] = p_index[b]
    missing = np.argwhere(table < 0)
    if missing.size:
        g, a = missing[0]
        raise ParseError(block.line_no,
                         f"action of {mon.names[g]!r} on {points[a]!r} undefined")
    return GAct(mon, points, table, name=block.name)


def _parse_algebra(block, ws: Workspace, default_field: int) -> GradedAlgebra:
    mon_name = _header_option(block.header, "over", block.line_no)
    if mon_name is None or mon_name not in ws.monoids:
        raise ValidationError(f"algebra references unknown monoid {mon_name!r}")
    mon = ws.monoids[mon_name]
    field_text = _header_option(block.header, "field", block.line_no)
    field = FieldSpec(int(field_text) if field_text else default_field)
    syms, degs = [], []
    mul_lines = []
    g_index = {g: i for i, g in enumerate(mon.names)}
    for line_no, tokens, raw in block.lines:
        if tokens[0] == "basis" and len(tokens) == 4 and tokens[2] == "deg":
            if tokens[3] not in g_index:
                raise ParseError(line_no, f"unknown degree {tokens[3]!r}")
            syms.append(tokens[1])
            degs.append(g_index[tokens[3]])
        elif tokens[0] == "mul" and "=" in raw:
            mul_lines.append((line_no, tokens, raw))
        else:
            raise ParseError(line_no, f"bad algebra directive {tokens[0]!r}")
    s_index = {s: i for i, s in enumerate(syms)}
    d = len(syms)
    mult = np.zeros((d, d, d), dtype=np.int64)
    for line_no, tokens, raw in mul_lines:
        head, _, combo = raw.partition("=")
        parts = head.split()
        if len(parts) != 3:
            raise ParseError(line_no, "mul needs two basis symbols")
        _, a, b = parts
        if a not in s_index or b not in s_index:
            raise ParseError(line_no, f"unknown basis symbol in mul")
        mult[s_index[a], s_index[b]] = _parse_lin_combo(combo, s_index, d, line_no)
    unit = _solve_unit(mult, d, field.p, block.line_no)
    return GradedAlgebra(field, mon, syms, degs, mult, unit, name=block.name)


def _solve_unit(mult: np.ndarray, d: int, p: int, line_no: int) -> np.ndarray:
    """Find the two-sided unit vector from the structure constants."""
    rows = []
    rhs = []
    for j in range(d):
        for k in range(d):
            rows.append(mult[:, j, k])
            rhs.append(1 if j == k else 0)
            rows.append(mult[j, :, k])
            rhs.append(1 if j == k else 0)
    if not rows:
        raise ParseError(line_no, "algebra needs at least one basis element")
    a = np.mod(np.array(rows, dtype=np.int64), p)
    b = np.mod(np.array(rhs, dtype=np.int64).reshape(-1, 1), p)
    try:
        return solve(a, b, p)[:, 0]
    except NoSolution:
        raise ParseError(line_no, "algebra has no two-sided unit") from None


def parse_text(text: str, stem: str = "ws", workspace: Workspace | None = None,
               default_field: int = 101) -> Workspace:
    ws = workspace if workspace is not None else Workspace()
    for block in _split_blocks(text, stem):
        if block.kind == "poset":
            ws.posets[block.name] = _parse_poset(block)
        elif block.kind == "module":
            ws.modules[block.name] = _parse_module(block, ws, default_field)
        elif block.kind == "monoid":
            ws.monoids[block.name] = _parse_monoid(block)
        elif block.kind == "act":
            ws.acts[block.name] = _parse_act(block, ws)
        elif block.kind == "algebra":
            ws.algebras[block.name] = _parse_algebra(block, ws, default_field)
    return ws


def parse_path(path, workspace: Workspace | None = None,
               default_field: int = 101) -> Workspace:
    import pathlib

    path = pathlib.Path(path)
    return parse_text(path.read_text(), stem=path.stem, workspace=workspace,
                      default_field=default_field)


# ---------------------------------------------------------------------------
# canonical serializers


def matrix_literal(m: np.ndarray) -> str:
    rows = [" ".join(str(int(x)) for x in row) for row in m]
    return "[" + " ; ".join(rows) + "]"


def serialize_poset(p: Poset, name: str | None = None) -> str:
    out = [f"poset {name or p.name}"]
    out += [f"elem {e}" for e in p.elements]
    out += [f"rel {a} {b}" for a, b in p.covers]
    return "\n".join(out) + "\n"


def serialize_module(m: PersModule, name: str | None = None,
                     poset_name: str | None = None) -> str:
    out = [f"module {name or m.name} over {poset_name or m.poset.name} "
           f"field {m.field.p}"]
    for e in m.poset.elements:
        if m.dims[e]:
            out.append(f"space {e} {m.dims[e]}")
    for (a, b) in m.poset.covers:
        mat = m.cover_maps[(a, b)]
        if mat.size and np.any(mat):
            out.append(f"map {a} {b} {matrix_literal(mat)}")
    return "\n".join(out) + "\n"


def serialize_monoid(mon: Monoid, name: str | None = None) -> str:
    out = [f"monoid {name or mon.name}"]
    out += [f"elem {e}" for e in mon.names]
    for i, a in enumerate(mon.names):
        for j, b in enumerate(mon.names):
            out.append(f"mul {a} {b} {mon.names[mon.mul(i, j)]}")
    return "\n".join(out) + "\n"


def serialize_act(act: GAct, name: str | None = None,
                  monoid_name: str | None = None) -> str:
    out = [f"act {name or act.name} over {monoid_name or act.monoid.name}"]
    out += [f"point {a}" for a in act.points]
    for g, gname in enumerate(act.monoid.names):
        for a, aname in enumerate(act.points):
            out.append(f"apply {gname} {aname} {act.points[act.act(g, a)]}")
    return "\n".join(out) + "\n"


def serialize_algebra(alg: GradedAlgebra, name: str | None = None,
                      monoid_name: str | None = None) -> str:
    out = [f"algebra {name or alg.name} over {monoid_name or alg.monoid.name} "
           f"field {alg.field.p}"]
    for s, d in zip(alg.syms, alg.degs):
        out.append(f"basis {s} deg {alg.monoid.names[d]}")
    for i, a in enumerate(alg.syms):
        for j, b in enumerate(alg.syms):
            vec = alg.mult[i, j]
            if np.any(vec):
                combo = " + ".join(
                    (f"{int(c)} {alg.syms[k]}" if c != 1 else alg.syms[k])
                    for k, c in enumerate(vec) if c)
                out.append(f"mul {a} {b} = {combo}")
    return "\n".join(out) + "\n"


def to_json(obj) -> str:
    """Canonical JSON rendering: sorted keys, stable separators, newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":")) + "\n"

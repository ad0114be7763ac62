"""JSON and DOT encodings of orbit graphs and reports."""

from __future__ import annotations

import json
from typing import Any, Literal, Optional

from pydantic import BaseModel, ConfigDict, ValidationError

from .graph import EdgeType, OrbitEdge, OrbitGraph, OrbitVertex, StructureError
from .weyl import CartanError, parse_cartan


class SchemaError(ValueError):
    """Input that does not match the graph schema; ``pointer`` is a JSON pointer."""

    def __init__(self, message: str, pointer: str = ""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer
        self.detail = message


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", strict=True)


class VertexModel(_Strict):
    id: str
    dim: int
    rank: Optional[int] = None


class EdgeModel(_Strict):
    src: str
    dst: str
    label: int
    type: Literal["U", "T", "N"]


class GraphModel(_Strict):
    cartan: str
    rank_of_top: Optional[int] = None
    vertices: list[VertexModel]
    edges: list[EdgeModel]


def _pointer(loc: tuple[Any, ...]) -> str:
    return "".join("/" + str(p).replace("~", "~0").replace("/", "~1") for p in loc)


def parse_graph_json(data: bytes | str) -> OrbitGraph:
    try:
        raw = json.loads(data)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg}") from exc
    try:
        m = GraphModel.model_validate(raw)
    except ValidationError as exc:
        err = exc.errors()[0]
        raise SchemaError(err["msg"], _pointer(err["loc"])) from exc
    for i, v in enumerate(m.vertices):
        if v.dim < 0:
            raise SchemaError("dimension must be non-negative", f"/vertices/{i}/dim")
        if v.rank is not None and v.rank < 0:
            raise SchemaError("rank must be non-negative", f"/vertices/{i}/rank")
    if m.rank_of_top is not None and m.rank_of_top < 0:
        raise SchemaError("rank must be non-negative", "/rank_of_top")
    try:
        cartan = parse_cartan(m.cartan)
    except (CartanError, ValueError) as exc:
        raise SchemaError(str(exc), "/cartan") from exc
    try:
        return OrbitGraph(
            cartan,
            tuple(OrbitVertex(v.id, v.dim, v.rank) for v in m.vertices),
            tuple(OrbitEdge(e.src, e.dst, e.label, EdgeType(e.type)) for e in m.edges),
            m.rank_of_top,
        )
    except StructureError as exc:
        raise SchemaError(str(exc), "/edges") from exc


def graph_to_dict(g: OrbitGraph) -> dict[str, Any]:
    try:
        named = parse_cartan(g.cartan.label)
    except (CartanError, ValueError):
        named = None
    if named is None or named.cartan_matrix != g.cartan.cartan_matrix:
        raise ValueError(f"Cartan label {g.cartan.label!r} does not name the graph's Cartan matrix")
    rot = g.rank_of_top
    if isinstance(rot, dict):
        vals = set(rot.values())
        if len(vals) > 1:
            raise ValueError("per-component top ranks cannot be written in this format")
        rot = vals.pop() if vals else None
    return {
        "cartan": g.cartan.label,
        "rank_of_top": rot,
        "vertices": [{"id": v.id, "dim": v.dim, "rank": v.rank} for v in g.vertices],
        "edges": [{"src": e.src, "dst": e.dst, "label": e.label, "type": e.type.value} for e in g.edges],
    }


def dumps(obj: Any) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def write_graph_json(g: OrbitGraph) -> bytes:
    return dumps(graph_to_dict(g)).encode("utf-8")


def _dot_id(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(g: OrbitGraph, name: str = "weak_order") -> str:
    """Bottom-to-top DOT drawing; one ``rank=same`` group per dimension."""
    lines = [f"digraph {_dot_id(name)} {{", "  rankdir=BT;", "  node [shape=circle, label=\"\"];"]
    by_dim: dict[int, list[str]] = {}
    for v in g.vertices:
        by_dim.setdefault(v.dim, []).append(v.id)
    for d in sorted(by_dim):
        lines.append(f"  {{ rank=same; {' '.join(_dot_id(i) + ';' for i in by_dim[d])} }}")
    for v in g.vertices:
        lines.append(f"  {_dot_id(v.id)} [tooltip={_dot_id(f'{v.id} dim={v.dim} rank={v.rank}')}];")
    for e in g.edges:
        attrs = [f'label="α{e.label}"', f'type="{e.type.value}"']
        if e.type.is_double:
            attrs += ["penwidth=2", 'color="black:black"']
        lines.append(f"  {_dot_id(e.src)} -> {_dot_id(e.dst)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = [
    "SchemaError",
    "dumps",
    "export_dot",
    "graph_to_dict",
    "parse_graph_json",
    "write_graph_json",
]

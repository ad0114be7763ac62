"""Weak-order graphs: labeled DAGs of orbit closures with U/T/N edge types."""

from __future__ import annotations

from collections import defaultdict, deque
from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property
from typing import Any, Iterable, Mapping

from .weyl import CartanDatum, WeylGroup, build_weyl, parse_cartan


class EdgeType(str, Enum):
    U = "U"
    T = "T"
    N = "N"

    @property
    def raises_rank(self) -> bool:
        return self is not EdgeType.U

    @property
    def is_double(self) -> bool:
        return self is EdgeType.N


class StructureError(ValueError):
    """The graph data cannot even be indexed (dangling ids, duplicates...)."""


class RankError(ValueError):
    def __init__(self, message: str, witness: dict[str, Any]):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class OrbitVertex:
    id: str
    dim: int
    rank: int | None = None


@dataclass(frozen=True)
class OrbitEdge:
    src: str
    dst: str
    label: int
    type: EdgeType

    def __post_init__(self) -> None:
        object.__setattr__(self, "type", EdgeType(self.type))

    @property
    def key(self) -> tuple[str, str, int]:
        return (self.src, self.dst, self.label)


@dataclass
class Failure:
    rule: str
    message: str
    witness: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {"rule": self.rule, "message": self.message, "witness": self.witness}


@dataclass
class CertificationReport:
    failures: list[Failure] = field(default_factory=list)
    warnings: list[Failure] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def __bool__(self) -> bool:
        return self.passed

    def fail(self, rule: str, message: str, **witness: Any) -> None:
        self.failures.append(Failure(rule, message, witness))

    def warn(self, rule: str, message: str, **witness: Any) -> None:
        self.warnings.append(Failure(rule, message, witness))

    def rules_failed(self) -> set[str]:
        return {f.rule for f in self.failures}

    def to_dict(self) -> dict[str, Any]:
        return {
            "passed": self.passed,
            "failures": [f.to_dict() for f in self.failures],
            "warnings": [w.to_dict() for w in self.warnings],
        }


def _vertex_key(v: OrbitVertex) -> tuple[int, str]:
    return (v.dim, v.id)


@dataclass(frozen=True)
class OrbitGraph:
    """Immutable weak-order graph.

    Vertices are kept sorted by ``(dim, id)`` and edges by ``(src, dst, label)``
    so that equality is structural and exports are stable.  ``rank_of_top`` is
    either one integer applied to every component or a mapping from top-vertex
    id to integer.  ``truncated`` downgrades single-source T edges to warnings.
    """

    cartan: CartanDatum
    vertices: tuple[OrbitVertex, ...]
    edges: tuple[OrbitEdge, ...]
    rank_of_top: int | Mapping[str, int] | None = None
    truncated: bool = field(default=False, compare=False)

    def __post_init__(self) -> None:
        if isinstance(self.cartan, str):
            object.__setattr__(self, "cartan", parse_cartan(self.cartan))
        verts = tuple(sorted(self.vertices, key=_vertex_key))
        ids = [v.id for v in verts]
        if len(set(ids)) != len(ids):
            dup = sorted({i for i in ids if ids.count(i) > 1})
            raise StructureError(f"duplicate vertex ids: {dup}")
        edges = tuple(sorted((OrbitEdge(e.src, e.dst, e.label, e.type) for e in self.edges), key=lambda e: e.key))
        known = set(ids)
        seen: set[tuple[str, str, int]] = set()
        for e in edges:
            for end in (e.src, e.dst):
                if end not in known:
                    raise StructureError(f"edge {e.key} refers to unknown vertex {end!r}")
            if not 0 <= e.label < self.cartan.rank:
                raise StructureError(f"edge {e.key} has label outside 0..{self.cartan.rank - 1}")
            if e.key in seen:
                raise StructureError(f"duplicate edge {e.key}")
            seen.add(e.key)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)
        if isinstance(self.rank_of_top, Mapping):
            object.__setattr__(self, "rank_of_top", dict(sorted(self.rank_of_top.items())))

    # ---------------------------------------------------------------- indices

    @cached_property
    def vertex(self) -> dict[str, OrbitVertex]:
        return {v.id: v for v in self.vertices}

    @cached_property
    def out_edges(self) -> dict[str, list[OrbitEdge]]:
        out: dict[str, list[OrbitEdge]] = {v.id: [] for v in self.vertices}
        for e in self.edges:
            out[e.src].append(e)
        return out

    @cached_property
    def in_edges(self) -> dict[str, list[OrbitEdge]]:
        out: dict[str, list[OrbitEdge]] = {v.id: [] for v in self.vertices}
        for e in self.edges:
            out[e.dst].append(e)
        return out

    @cached_property
    def weyl(self) -> WeylGroup:
        return build_weyl(self.cartan)

    def ids(self) -> list[str]:
        return [v.id for v in self.vertices]

    def require(self, vid: str) -> OrbitVertex:
        try:
            return self.vertex[vid]
        except KeyError:
            raise KeyError(f"unknown vertex id {vid!r}") from None

    def incoming(self, vid: str, label: int) -> list[OrbitEdge]:
        return [e for e in self.in_edges[vid] if e.label == label]

    def outgoing(self, vid: str, label: int) -> list[OrbitEdge]:
        return [e for e in self.out_edges[vid] if e.label == label]

    @cached_property
    def components(self) -> list[list[str]]:
        adj: dict[str, set[str]] = defaultdict(set)
        for e in self.edges:
            adj[e.src].add(e.dst)
            adj[e.dst].add(e.src)
        seen: set[str] = set()
        comps = []
        for v in self.ids():
            if v in seen:
                continue
            comp, queue = [], deque([v])
            seen.add(v)
            while queue:
                x = queue.popleft()
                comp.append(x)
                for y in sorted(adj[x]):
                    if y not in seen:
                        seen.add(y)
                        queue.append(y)
            comps.append(sorted(comp, key=lambda i: _vertex_key(self.vertex[i])))
        return comps

    @cached_property
    def component_of(self) -> dict[str, int]:
        return {v: k for k, comp in enumerate(self.components) for v in comp}

    @cached_property
    def tops(self) -> list[str]:
        """The maximal vertex of each component (first sink if several)."""
        return [next(v for v in reversed(comp) if not self.out_edges[v]) for comp in self.components]

    def top_of(self, vid: str) -> str:
        return self.tops[self.component_of[self.require(vid).id]]

    @cached_property
    def topological_order(self) -> list[str]:
        indeg = {v: len(self.in_edges[v]) for v in self.ids()}
        queue = deque(v for v in self.ids() if indeg[v] == 0)
        order = []
        while queue:
            v = queue.popleft()
            order.append(v)
            for e in self.out_edges[v]:
                indeg[e.dst] -= 1
                if indeg[e.dst] == 0:
                    queue.append(e.dst)
        return order

    def is_acyclic(self) -> bool:
        return len(self.topological_order) == len(self.vertices)

    def reachable_from(self, vid: str) -> set[str]:
        seen = {vid}
        stack = [vid]
        while stack:
            for e in self.out_edges[stack.pop()]:
                if e.dst not in seen:
                    seen.add(e.dst)
                    stack.append(e.dst)
        return seen

    def precedes(self, a: str, b: str) -> bool:
        """The weak order: ``a`` below ``b`` via an oriented path."""
        return b in self.reachable_from(a)

    def has_ranks(self) -> bool:
        return all(v.rank is not None for v in self.vertices)

    def with_ranks(self, ranks: Mapping[str, int]) -> OrbitGraph:
        verts = tuple(replace(v, rank=ranks[v.id]) for v in self.vertices)
        return replace(self, vertices=verts)

    def top_rank(self, top: str) -> int | None:
        if isinstance(self.rank_of_top, Mapping):
            return self.rank_of_top.get(top)
        if self.rank_of_top is not None:
            return self.rank_of_top
        return self.vertex[top].rank


def delta_of(g: OrbitGraph, vid: str) -> frozenset[int]:
    """Simple roots of a vertex: labels not carried by any incident edge."""
    g.require(vid)
    used = {e.label for e in g.out_edges[vid]} | {e.label for e in g.in_edges[vid]}
    return frozenset(range(g.cartan.rank)) - used


@dataclass(frozen=True)
class EdgeStatus:
    kind: str  # "stabilizes" | "raises" | "lowered_by"
    type: EdgeType | None = None
    vertices: tuple[str, ...] = ()


def edge_status(g: OrbitGraph, vid: str, alpha: int) -> EdgeStatus:
    g.require(vid)
    out = g.outgoing(vid, alpha)
    if out:
        return EdgeStatus("raises", out[0].type, tuple(e.dst for e in out))
    inc = g.incoming(vid, alpha)
    if inc:
        return EdgeStatus("lowered_by", inc[0].type, tuple(e.src for e in inc))
    return EdgeStatus("stabilizes")


def monoid_raise(g: OrbitGraph, vid: str, alpha: int) -> str:
    """P_alpha applied to a vertex: the target of its alpha-edge, else itself."""
    g.require(vid)
    out = g.outgoing(vid, alpha)
    return out[0].dst if out else vid


def validate_structure(g: OrbitGraph, allow_truncated: bool | None = None) -> CertificationReport:
    """Check the axioms a weak-order graph must satisfy.

    Rules: (a) dimension goes up by one along every edge; (b) per target and
    label there are at most two incoming edges, two only if both are T, and a
    lone T edge is flagged; (c) parallel edges are all T, or all U with
    pairwise orthogonal labels; (d) per vertex and label at most one outgoing
    edge, and no vertex is both raised and reached by the same label;
    (e) one maximal vertex per component; (f) rank rules when ranks exist.
    """
    if allow_truncated is None:
        allow_truncated = g.truncated
    rep = CertificationReport()
    datum = g.cartan

    if not g.is_acyclic():
        stuck = sorted(set(g.ids()) - set(g.topological_order))
        rep.fail("acyclic", "graph has an oriented cycle", vertices=stuck)

    for e in g.edges:
        d0, d1 = g.vertex[e.src].dim, g.vertex[e.dst].dim
        if d1 != d0 + 1:
            rep.fail("a", f"dimension jumps by {d1 - d0} along edge", edge=list(e.key))

    for z in g.ids():
        by_label: dict[int, list[OrbitEdge]] = defaultdict(list)
        for e in g.in_edges[z]:
            by_label[e.label].append(e)
        for label, es in sorted(by_label.items()):
            if len(es) > 2:
                rep.fail("b", "more than two edges with one label into a vertex", vertex=z, label=label,
                         sources=[e.src for e in es])
            elif len(es) == 2 and any(e.type is not EdgeType.T for e in es):
                rep.fail("b", "two edges with one label into a vertex must both be type T", vertex=z,
                         label=label, sources=[e.src for e in es])
            elif len(es) == 1 and es[0].type is EdgeType.T:
                msg = "type T edge without a second source"
                if allow_truncated:
                    rep.warn("b", msg, edge=list(es[0].key))
                else:
                    rep.fail("b", msg, edge=list(es[0].key))

    parallel: dict[tuple[str, str], list[OrbitEdge]] = defaultdict(list)
    for e in g.edges:
        parallel[(e.src, e.dst)].append(e)
    for (src, dst), es in sorted(parallel.items()):
        if len(es) < 2:
            continue
        types = {e.type for e in es}
        if types == {EdgeType.T}:
            continue
        labels = [e.label for e in es]
        if types == {EdgeType.U} and all(
            datum.orthogonal(a, b) for i, a in enumerate(labels) for b in labels[i + 1 :]
        ):
            continue
        rep.fail("c", "parallel edges must be all T, or all U with orthogonal labels", src=src, dst=dst,
                 labels=labels, types=[e.type.value for e in es])

    for y in g.ids():
        out_labels = [e.label for e in g.out_edges[y]]
        for label in sorted(set(out_labels)):
            if out_labels.count(label) > 1:
                rep.fail("d", "a label raises a vertex to more than one target", vertex=y, label=label,
                         targets=[e.dst for e in g.outgoing(y, label)])
            if g.incoming(y, label):
                rep.fail("d", "a vertex is both raised by a label and reached by it", vertex=y, label=label)

    for comp in g.components:
        sinks = [v for v in comp if not g.out_edges[v]]
        if len(sinks) != 1:
            rep.fail("e", "a component must have exactly one maximal vertex", maximal=sinks)

    for e in g.edges:
        r0, r1 = g.vertex[e.src].rank, g.vertex[e.dst].rank
        if r0 is None or r1 is None:
            continue
        want = r0 + (1 if e.type.raises_rank else 0)
        if r1 != want:
            rep.fail("f", f"type {e.type.value} edge needs rank {want} at its target, found {r1}",
                     edge=list(e.key))
    return rep


def infer_ranks(g: OrbitGraph, rank_of_top: int | Mapping[str, int] | None = None) -> OrbitGraph:
    """Fill in every rank from the ranks of the maximal vertices.

    ``rank(Y) = rank(top) - #(T and N edges on a path Y -> top)``; disagreement
    between two paths raises :class:`RankError` carrying both paths.  When no
    top rank is known, the smallest one keeping all ranks nonnegative is used.
    """
    if rank_of_top is not None:
        g = replace(g, rank_of_top=rank_of_top)
    drop: dict[str, int] = {}
    path: dict[str, list[str]] = {}
    for v in reversed(g.topological_order):
        outs = g.out_edges[v]
        if not outs:
            drop[v], path[v] = 0, [v]
            continue
        first = outs[0]
        drop[v] = drop[first.dst] + first.type.raises_rank
        path[v] = [v] + path[first.dst]
        for e in outs[1:]:
            d = drop[e.dst] + e.type.raises_rank
            if d != drop[v]:
                raise RankError(
                    f"rank drop from {v!r} to its top differs along two paths ({drop[v]} vs {d})",
                    {"path_a": path[v], "path_b": [v] + path[e.dst]},
                )
    ranks: dict[str, int] = {}
    for comp, top in zip(g.components, g.tops):
        r = g.top_rank(top)
        if r is None:
            r = max(drop[v] for v in comp)
        for v in comp:
            ranks[v] = r - drop[v]
            if ranks[v] < 0:
                raise RankError(f"inferred rank of {v!r} is negative", {"vertex": v, "top": top})
            given = g.vertex[v].rank
            if given is not None and given != ranks[v]:
                raise RankError(
                    f"stored rank {given} of {v!r} disagrees with inferred rank {ranks[v]}",
                    {"vertex": v, "path": path[v]},
                )
    return g.with_ranks(ranks)


def resolve_ranks(g: OrbitGraph) -> OrbitGraph:
    return g if g.has_ranks() else infer_ranks(g)


__all__ = [
    "CertificationReport",
    "EdgeStatus",
    "EdgeType",
    "Failure",
    "OrbitEdge",
    "OrbitGraph",
    "OrbitVertex",
    "RankError",
    "StructureError",
    "delta_of",
    "edge_status",
    "infer_ranks",
    "monoid_raise",
    "resolve_ranks",
    "validate_structure",
]

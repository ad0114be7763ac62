"""Oriented paths in a weak-order graph and the invariants read off them."""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Any, Iterable, Sequence

from .graph import CertificationReport, EdgeType, OrbitEdge, OrbitGraph, StructureError, delta_of, resolve_ranks
from .weyl import CartanDatum, Weight, WeylElement, WeylGroup, alternating_word, pairing


class PathCertificationError(ValueError):
    def __init__(self, message: str, witness: dict[str, Any]):
        super().__init__(message)
        self.witness = witness


@dataclass(frozen=True)
class PathSummary:
    """One oriented path, listed bottom to top."""

    vertices: tuple[str, ...]
    labels: tuple[int, ...]
    types: tuple[EdgeType, ...]
    w: WeylElement

    @property
    def source(self) -> str:
        return self.vertices[0]

    @property
    def target(self) -> str:
        return self.vertices[-1]

    def __len__(self) -> int:
        return len(self.labels)

    def count(self, t: EdgeType | str) -> int:
        return sum(1 for x in self.types if x is EdgeType(t))

    @property
    def n_u(self) -> int:
        return self.count(EdgeType.U)

    @property
    def n_t(self) -> int:
        return self.count(EdgeType.T)

    @property
    def n_n(self) -> int:
        return self.count(EdgeType.N)

    def to_dict(self) -> dict[str, Any]:
        return {
            "vertices": list(self.vertices),
            "labels": list(self.labels),
            "types": [t.value for t in self.types],
            "w": list(self.w.word),
        }


def _summary(g: OrbitGraph, start: str, edges: Sequence[OrbitEdge]) -> PathSummary:
    W = g.weyl
    w = W.identity
    for e in edges:
        w = W.s(e.label) * w
    return PathSummary(
        (start,) + tuple(e.dst for e in edges),
        tuple(e.label for e in edges),
        tuple(e.type for e in edges),
        w,
    )


def _require_acyclic(g: OrbitGraph) -> None:
    if not g.is_acyclic():
        raise StructureError("path analysis needs an acyclic graph")


def _edge_paths(g: OrbitGraph, src: str, dst: str) -> list[tuple[OrbitEdge, ...]]:
    _require_acyclic(g)
    # Memoized over the DAG: paths from v to dst, as edge tuples.
    reach_dst = {v for v in g.ids() if dst in g.reachable_from(v)}

    @lru_cache(maxsize=None)
    def from_(v: str) -> tuple[tuple[OrbitEdge, ...], ...]:
        if v == dst:
            return ((),)
        out = []
        for e in g.out_edges[v]:
            if e.dst in reach_dst:
                out.extend((e,) + rest for rest in from_(e.dst))
        return tuple(out)

    return list(from_(src)) if src in reach_dst else []


def enumerate_paths(g: OrbitGraph, src: str, dst: str) -> list[PathSummary]:
    """All oriented paths from ``src`` to ``dst`` (the empty path if equal)."""
    g.require(src)
    g.require(dst)
    return [_summary(g, src, p) for p in _edge_paths(g, src, dst)]


def all_paths_from(g: OrbitGraph, src: str) -> list[PathSummary]:
    """Every oriented path starting at ``src``, including the empty one."""
    _require_acyclic(g)
    out: list[PathSummary] = []
    stack: list[tuple[str, tuple[OrbitEdge, ...]]] = [(src, ())]
    while stack:
        v, edges = stack.pop()
        out.append(_summary(g, src, edges))
        for e in g.out_edges[v]:
            stack.append((e.dst, edges + (e,)))
    return out


def weyl_exponents(g: OrbitGraph, vid: str) -> dict[WeylElement, int]:
    """Map each w in W(Y) to the exponent l_N, so d(Y, w) = 2**l_N."""
    out: dict[WeylElement, int] = {}
    witness: dict[WeylElement, PathSummary] = {}
    for p in enumerate_paths(g, vid, g.top_of(vid)):
        if p.w in out and out[p.w] != p.n_n:
            raise PathCertificationError(
                "two paths with the same Weyl element have different numbers of double edges",
                {"path_a": witness[p.w].to_dict(), "path_b": p.to_dict()},
            )
        out.setdefault(p.w, p.n_n)
        witness.setdefault(p.w, p)
    return out


def weyl_set(g: OrbitGraph, vid: str) -> dict[WeylElement, int]:
    """Map each w in W(Y) to its degree d(Y, w)."""
    return {w: 2**k for w, k in weyl_exponents(g, vid).items()}


def log2_degree(d: int) -> int:
    if d < 1 or d & (d - 1):
        raise ValueError(f"{d} is not a power of two")
    return d.bit_length() - 1


def is_multiplicity_free(g: OrbitGraph, vid: str) -> bool:
    """True iff every edge on every oriented path out of the vertex is simple."""
    return all(not e.type.is_double for v in g.reachable_from(vid) for e in g.out_edges[v])


def certify_paths(g: OrbitGraph) -> CertificationReport:
    """Exhaustive path checks: reduced words, rank bookkeeping, and
    per (source, target, w) constancy of the T and N counts, plus the
    coset conditions w in W^Delta(source), w^-1 in W^Delta(target)."""
    rep = CertificationReport()
    if not g.is_acyclic():
        rep.fail("acyclic", "graph has an oriented cycle")
        return rep
    try:
        g = resolve_ranks(g)
    except ValueError as exc:
        rep.fail("ranks", str(exc), **getattr(exc, "witness", {}))
        return rep
    W = g.weyl
    npos = W.n_positive
    deltas = {v: delta_of(g, v) for v in g.ids()}
    for src in g.ids():
        seen: dict[tuple[str, WeylElement], PathSummary] = {}
        for p in all_paths_from(g, src):
            if not p.labels:
                continue
            if p.w.length != len(p):
                rep.fail("reduced", "label word of a path is not reduced", path=p.to_dict())
            r0, r1 = g.vertex[src].rank, g.vertex[p.target].rank
            if p.n_t + p.n_n != r1 - r0:
                rep.fail("rank", f"T+N count {p.n_t + p.n_n} differs from rank difference {r1 - r0}",
                         path=p.to_dict())
            if any(p.w.perm[i] >= npos for i in deltas[src]):
                rep.fail("coset_source", "w is not a minimal representative for the source's simple roots",
                         path=p.to_dict())
            winv = p.w.inverse()
            if any(winv.perm[i] >= npos for i in deltas[p.target]):
                rep.fail("coset_target", "w^-1 is not a minimal representative for the target's simple roots",
                         path=p.to_dict())
            key = (p.target, p.w)
            other = seen.setdefault(key, p)
            if (other.n_t, other.n_n) != (p.n_t, p.n_n):
                rep.fail("constant_w", "T/N counts differ for two paths with equal endpoints and w",
                         path_a=other.to_dict(), path_b=p.to_dict())
    return rep


# ------------------------------------------------------------ Schubert classes


@dataclass
class ExpansionReport:
    vertex: str
    weyl_set: dict[WeylElement, int]
    multiplicity_free: bool
    schubert_terms: dict[WeylElement, int]
    v0_connected_in_codim1: bool

    def to_dict(self) -> dict[str, Any]:
        terms = sorted(self.schubert_terms.items(), key=lambda kv: (kv[0].length, kv[0].word))
        return {
            "vertex": self.vertex,
            "terms": [{"word": list(w.word), "coeff_log2": log2_degree(d)} for w, d in terms],
            "multiplicity_free": self.multiplicity_free,
            "v0_codim1_connected": self.v0_connected_in_codim1,
        }


def schubert_expansion(g: OrbitGraph, vid: str, w0: WeylElement | None = None) -> ExpansionReport:
    """[V] = sum over W(Y) of d(Y, w) [Schubert class of w0*w]."""
    ws = weyl_set(g, vid)
    W = g.weyl
    w0 = W.longest if w0 is None else w0
    terms = {w0 * w: k for w, k in ws.items()}
    conn = codim1_connected(ws, delta_of(g, g.top_of(vid)), W)
    return ExpansionReport(vid, ws, all(d == 1 for d in ws.values()), terms, conn.connected)


@dataclass
class Connectivity:
    connected: bool
    links: list[tuple[WeylElement, WeylElement, Any]] = field(default_factory=list)
    components: list[list[WeylElement]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.connected


def _connect(nodes: list[WeylElement], link) -> Connectivity:
    parent = {x: x for x in nodes}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    links = []
    for u, v in combinations(nodes, 2):
        if find(u) == find(v):
            continue
        why = link(u, v)
        if why is not None:
            parent[find(u)] = find(v)
            links.append((u, v, why))
    groups: dict[WeylElement, list[WeylElement]] = defaultdict(list)
    for x in nodes:
        groups[find(x)].append(x)
    comps = sorted((sorted(c) for c in groups.values()), key=lambda c: (c[0].length, c[0].word))
    return Connectivity(len(comps) <= 1, links, comps)


def dominating_element(
    u: WeylElement, v: WeylElement, delta_x: Iterable[int], W: WeylGroup
) -> WeylElement | None:
    """Some w one longer than u and v, above both in Bruhat order, with w^-1 in W^Delta(X)."""
    idx = list(delta_x)
    npos = W.n_positive
    for w in W.by_length.get(u.length + 1, []):
        winv = w.inverse()
        if any(winv.perm[i] >= npos for i in idx):
            continue
        if W.bruhat_leq(u, w) and W.bruhat_leq(v, w):
            return w
    return None


def codim1_connected(ws: Iterable[WeylElement], delta_x: Iterable[int], W: WeylGroup) -> Connectivity:
    nodes = sorted(set(ws))
    if len({x.length for x in nodes}) > 1:
        raise ValueError("codim1_connected needs elements of a single length")
    delta_x = list(delta_x)
    return _connect(nodes, lambda u, v: dominating_element(u, v, delta_x, W))


# ------------------------------------------------------------------ neighbors


@dataclass(frozen=True)
class NeighborWitness:
    x: WeylElement
    alpha: int
    beta: int
    m: int
    y: WeylElement


def neighbor_witness(u: WeylElement, v: WeylElement) -> NeighborWitness | None:
    """Brute-force search for u = x (s_a s_b)^(m) y, v = x (s_b s_a)^(m) y."""
    W = u.group
    if u == v or u.length != v.length:
        return None
    n = W.rank
    for a in range(n):
        for b in range(n):
            if a == b:
                continue
            for m in range(1, W.braid_order(a, b)):
                p = W.from_word(alternating_word(a, b, m))
                q = W.from_word(alternating_word(b, a, m))
                pinv = p.inverse()
                for k in range(u.length - m + 1):
                    for x in W.by_length.get(k, []):
                        y = pinv * x.inverse() * u
                        if y.length != u.length - k - m:
                            continue
                        if x * q * y == v:
                            return NeighborWitness(x, a, b, m, y)
    return None


def is_neighbor(u: WeylElement, v: WeylElement) -> bool:
    return neighbor_witness(u, v) is not None


def neighbor_graph(ws: Iterable[WeylElement]) -> dict[WeylElement, set[WeylElement]]:
    nodes = sorted(set(ws))
    adj: dict[WeylElement, set[WeylElement]] = {x: set() for x in nodes}
    for u, v in combinations(nodes, 2):
        if is_neighbor(u, v):
            adj[u].add(v)
            adj[v].add(u)
    return adj


def neighbor_connectivity(g: OrbitGraph, vid: str) -> Connectivity:
    return _connect(sorted(weyl_set(g, vid)), neighbor_witness)


def orthogonal_neighbor_form(u: WeylElement, v: WeylElement) -> tuple[WeylElement, int, int, WeylElement] | None:
    """Find u = x s_a y, v = x s_b y with a, b orthogonal and l(u) = l(x)+l(y)+1."""
    W = u.group
    if u.length != v.length:
        return None
    n = W.rank
    for a in range(n):
        for b in range(n):
            if a == b or not W.datum.orthogonal(a, b):
                continue
            for k in range(u.length):
                for x in W.by_length.get(k, []):
                    y = W.s(a) * x.inverse() * u
                    if y.length == u.length - k - 1 and x * W.s(b) * y == v:
                        return x, a, b, y
    return None


# ------------------------------------------------------- simply-laced checks


@dataclass
class Verdict:
    """``holds`` is None when the check does not apply."""

    holds: bool | None
    witness: Any = None
    reason: str = ""

    @property
    def applicable(self) -> bool:
        return self.holds is not None

    def __bool__(self) -> bool:
        return bool(self.holds)


def constancy_check(g: OrbitGraph) -> CertificationReport:
    """For each ordered vertex pair, every connecting path has the same l_N."""
    rep = CertificationReport()
    for src in g.ids():
        first: dict[str, PathSummary] = {}
        for p in all_paths_from(g, src):
            if not p.labels:
                continue
            q = first.setdefault(p.target, p)
            if q.n_n != p.n_n:
                rep.fail("constant", "paths with the same endpoints differ in double edges",
                         path_a=q.to_dict(), path_b=p.to_dict())
                break
    if not rep.passed and g.cartan.is_simply_laced():
        rep.warn("non_certifiable", "simply-laced type: inconstant double-edge counts cannot occur geometrically")
    return rep


def simple_then_double_exists(g: OrbitGraph, vid: str) -> Verdict:
    if not g.cartan.is_simply_laced():
        return Verdict(None, reason="not simply-laced")
    for p in enumerate_paths(g, vid, g.top_of(vid)):
        doubles = [t.is_double for t in p.types]
        if doubles == sorted(doubles):
            return Verdict(True, p)
    return Verdict(False)


def color_simplicity(weights: Iterable[Weight], datum: CartanDatum) -> Verdict:
    """All-simple-edge criterion: every color weight pairs to at most 1 with every simple coroot."""
    if not datum.is_simply_laced():
        return Verdict(None, reason="not simply-laced")
    for wt in weights:
        for a in range(datum.rank):
            if pairing(wt, a, datum) > 1:
                return Verdict(False, (wt, a))
    return Verdict(True)


__all__ = [
    "Connectivity",
    "ExpansionReport",
    "NeighborWitness",
    "PathCertificationError",
    "PathSummary",
    "Verdict",
    "all_paths_from",
    "certify_paths",
    "codim1_connected",
    "color_simplicity",
    "constancy_check",
    "log2_degree",
    "dominating_element",
    "enumerate_paths",
    "is_multiplicity_free",
    "is_neighbor",
    "neighbor_connectivity",
    "neighbor_graph",
    "neighbor_witness",
    "orthogonal_neighbor_form",
    "schubert_expansion",
    "simple_then_double_exists",
    "weyl_exponents",
    "weyl_set",
]

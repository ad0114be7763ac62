"""Graph builders: rank-one atoms, flag varieties, group case, parabolic
induction, shipped fixtures, and isomorphism testing."""

from __future__ import annotations

import json
import os
from collections import Counter
from enum import Enum
from itertools import permutations
from pathlib import Path
from typing import Iterable, Mapping

from .graph import EdgeType, OrbitEdge, OrbitGraph, OrbitVertex, resolve_ranks, validate_structure
from .serialize import parse_graph_json
from .weyl import CartanDatum, WeylElement, WeylGroup, build_weyl, parse_cartan, word_label

FIXTURE_ENV = "ORBITWEAVE_FIXTURES"
PROVENANCE_FILE = "provenance.json"


class AtomKind(str, Enum):
    U = "U"
    T = "T"
    N = "N"


def _datum(d: CartanDatum | str) -> CartanDatum:
    return parse_cartan(d) if isinstance(d, str) else d


def sl2_atom(kind: AtomKind | str) -> OrbitGraph:
    """Weak-order graph of G/B, G/T or G/N(T) for G of rank one."""
    kind = AtomKind(kind)
    if kind is AtomKind.U:
        verts = [OrbitVertex("Y", 0, 0), OrbitVertex("X", 1, 0)]
        edges = [OrbitEdge("Y", "X", 0, EdgeType.U)]
        top = 0
    elif kind is AtomKind.T:
        verts = [OrbitVertex("Y+", 1, 0), OrbitVertex("Y-", 1, 0), OrbitVertex("X", 2, 1)]
        edges = [OrbitEdge("Y+", "X", 0, EdgeType.T), OrbitEdge("Y-", "X", 0, EdgeType.T)]
        top = 1
    else:
        verts = [OrbitVertex("Y", 1, 0), OrbitVertex("X", 2, 1)]
        edges = [OrbitEdge("Y", "X", 0, EdgeType.N)]
        top = 1
    return OrbitGraph(parse_cartan("A1"), tuple(verts), tuple(edges), top)


def point(datum: CartanDatum | str = "") -> OrbitGraph:
    """A single vertex of rank 0 (the graph of a point)."""
    return OrbitGraph(_datum(datum), (OrbitVertex("pt", 0, 0),), (), 0)


def flag_case(datum: CartanDatum | str, subset: Iterable[int] = ()) -> OrbitGraph:
    """G/P_I: vertices W^I, edges w -> s_a w of type U."""
    datum = _datum(datum)
    W = build_weyl(datum)
    reps = W.min_coset_reps(subset)
    rep_set = set(reps)
    verts = tuple(OrbitVertex(word_label(w.word), w.length, 0) for w in reps)
    edges = []
    for w in reps:
        for a in range(W.rank):
            x = W.s(a) * w
            if x.length == w.length + 1 and x in rep_set:
                edges.append(OrbitEdge(word_label(w.word), word_label(x.word), a, EdgeType.U))
    return OrbitGraph(datum, verts, tuple(edges), 0)


# ---------------------------------------------------------------- group case


def doubled(datum: CartanDatum | str) -> CartanDatum:
    datum = _datum(datum)
    return datum + datum


def group_case(datum: CartanDatum | str) -> OrbitGraph:
    """G x G acting on G: vertices are W, dim l(w0) - l(w), constant rank."""
    datum = _datum(datum)
    W = build_weyl(datum)
    n = W.rank
    top_len = W.longest.length
    verts = tuple(OrbitVertex(word_label(w.word), top_len - w.length, n) for w in W.elements)
    edges = []
    for w in W.elements:
        for a in range(n):
            x = W.s(a) * w
            if x.length < w.length:
                edges.append(OrbitEdge(word_label(w.word), word_label(x.word), a, EdgeType.U))
            y = w * W.s(a)
            if y.length < w.length:
                edges.append(OrbitEdge(word_label(w.word), word_label(y.word), n + a, EdgeType.U))
    return OrbitGraph(doubled(datum), verts, tuple(edges), n)


def split_pair(x: WeylElement, n: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Words of (u, v) for an element of the doubled group; first copy is 0..n-1."""
    word = x.word
    return tuple(i for i in word if i < n), tuple(i - n for i in word if i >= n)


def pair_element(Wd: WeylGroup, u: WeylElement, v: WeylElement) -> WeylElement:
    n = u.group.rank
    return Wd.from_word(tuple(u.word) + tuple(n + i for i in v.word))


def two_sided_action(datum: CartanDatum | str) -> dict[WeylElement, dict[str, str]]:
    """(u, v).w = u w v^-1 on vertex ids, for every element of the doubled group."""
    datum = _datum(datum)
    W = build_weyl(datum)
    Wd = build_weyl(doubled(datum))
    n = W.rank
    out: dict[WeylElement, dict[str, str]] = {}
    for x in Wd.elements:
        uw, vw = split_pair(x, n)
        u, v = W.from_word(uw), W.from_word(vw)
        out[x] = {word_label(w.word): word_label((u * w * v.inverse()).word) for w in W.elements}
    return out


# ---------------------------------------------------------------- induction


def parabolic_induction(datum: CartanDatum | str, subset: Iterable[int], base: OrbitGraph) -> OrbitGraph:
    """Graph of G x^{P_I} X' built on W^I x B(X')."""
    datum = _datum(datum)
    idx = sorted(set(subset))
    sub = datum.restrict(idx)
    if base.cartan.cartan_matrix != sub.cartan_matrix:
        raise ValueError(
            f"base graph has Cartan type {base.cartan.label}, expected the restriction to {idx}"
        )
    base = resolve_ranks(base)
    W = build_weyl(datum)
    reps = W.min_coset_reps(idx)
    npos = W.n_positive

    def vid(w: WeylElement, y: str) -> str:
        return f"{word_label(w.word)}|{y}"

    verts = tuple(OrbitVertex(vid(w, y.id), w.length + y.dim, y.rank) for w in reps for y in base.vertices)
    edges = []
    for w in reps:
        winv = w.inverse()
        for a in range(W.rank):
            k = winv.perm[a]
            if k >= npos:
                continue
            beta = W.roots[k]
            in_sub = all(c == 0 or i in idx for i, c in enumerate(beta))
            if not in_sub:
                x = W.s(a) * w
                for y in base.vertices:
                    edges.append(OrbitEdge(vid(w, y.id), vid(x, y.id), a, EdgeType.U))
                continue
            if sum(beta) != 1:
                raise AssertionError("minimal coset representative maps a simple root to a non-simple root of the Levi")
            j = idx.index(beta.index(1))
            for e in base.edges:
                if e.label == j:
                    edges.append(OrbitEdge(vid(w, e.src), vid(w, e.dst), a, e.type))
    rot = base.rank_of_top
    if isinstance(rot, Mapping):
        rot = {vid(reps[-1], t): r for t, r in rot.items()}
    g = OrbitGraph(datum, verts, tuple(edges), rot)
    rep = validate_structure(g)
    if not rep.passed:
        raise ValueError(f"induced graph failed validation: {rep.failures[0].message}")
    return g


# ---------------------------------------------------------------- fixtures


def fixture_dir() -> Path:
    env = os.environ.get(FIXTURE_ENV)
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "fixtures"


def fixture_names() -> list[str]:
    return sorted(p.stem for p in fixture_dir().glob("*.json") if p.name != PROVENANCE_FILE)


def fixture_path(name: str) -> Path:
    p = fixture_dir() / f"{name}.json"
    if name == Path(PROVENANCE_FILE).stem or not p.is_file():
        raise KeyError(f"unknown fixture {name!r}; known: {', '.join(fixture_names())}")
    return p


def fixture(name: str) -> OrbitGraph:
    return parse_graph_json(fixture_path(name).read_bytes())


def fixture_provenance() -> dict:
    p = fixture_dir() / PROVENANCE_FILE
    return json.loads(p.read_text()) if p.is_file() else {}


def load_graph(name_or_path: str | Path) -> OrbitGraph:
    """A fixture name, or a path to a graph JSON file."""
    p = Path(name_or_path)
    if p.is_file():
        return parse_graph_json(p.read_bytes())
    return fixture(str(name_or_path))


# ---------------------------------------------------------------- isomorphism


def dynkin_automorphisms(datum: CartanDatum) -> list[tuple[int, ...]]:
    n = datum.rank
    m = datum.cartan_matrix
    return [
        p for p in permutations(range(n))
        if all(m[p[i]][p[j]] == m[i][j] for i in range(n) for j in range(n))
    ]


def _signature(g: OrbitGraph, v: str, base_dim: int) -> tuple:
    ins = Counter(e.type.value for e in g.in_edges[v])
    outs = Counter(e.type.value for e in g.out_edges[v])
    return (g.vertex[v].dim - base_dim, tuple(sorted(ins.items())), tuple(sorted(outs.items())))


def find_isomorphism(
    g: OrbitGraph, h: OrbitGraph, use_automorphisms: bool = True
) -> tuple[dict[str, str], tuple[int, ...]] | None:
    """Vertex bijection and label permutation carrying g onto h, if any."""
    if g.cartan.cartan_matrix != h.cartan.cartan_matrix:
        return None
    if len(g.vertices) != len(h.vertices) or len(g.edges) != len(h.edges):
        return None
    gd = min((v.dim for v in g.vertices), default=0)
    hd = min((v.dim for v in h.vertices), default=0)
    gsig = {v: _signature(g, v, gd) for v in g.ids()}
    hsig = {v: _signature(h, v, hd) for v in h.ids()}
    if Counter(gsig.values()) != Counter(hsig.values()):
        return None
    sigmas = dynkin_automorphisms(g.cartan) if use_automorphisms else [tuple(range(g.cartan.rank))]
    h_edges = {(e.src, e.dst, e.label): e.type for e in h.edges}
    order = g.ids()
    for sigma in sigmas:
        mapping: dict[str, str] = {}
        used: set[str] = set()

        def consistent(v: str) -> bool:
            for e in g.out_edges[v] + g.in_edges[v]:
                if e.src in mapping and e.dst in mapping:
                    key = (mapping[e.src], mapping[e.dst], sigma[e.label])
                    if h_edges.get(key) is not e.type:
                        return False
            return True

        def extend(k: int) -> bool:
            if k == len(order):
                return True
            v = order[k]
            for cand in h.ids():
                if cand in used or hsig[cand] != gsig[v]:
                    continue
                mapping[v] = cand
                used.add(cand)
                if consistent(v) and extend(k + 1):
                    return True
                del mapping[v]
                used.discard(cand)
            return False

        if extend(0):
            return dict(mapping), sigma
    return None


def is_isomorphic(g: OrbitGraph, h: OrbitGraph, use_automorphisms: bool = True) -> bool:
    return find_isomorphism(g, h, use_automorphisms) is not None


__all__ = [
    "AtomKind",
    "FIXTURE_ENV",
    "doubled",
    "dynkin_automorphisms",
    "find_isomorphism",
    "fixture",
    "fixture_dir",
    "fixture_names",
    "fixture_path",
    "fixture_provenance",
    "flag_case",
    "group_case",
    "is_isomorphic",
    "load_graph",
    "pair_element",
    "parabolic_induction",
    "point",
    "sl2_atom",
    "split_pair",
    "two_sided_action",
]

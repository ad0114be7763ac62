"""The W-action on orbit closures induced by edge types, and its stabilizer."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

from .graph import CertificationReport, EdgeType, OrbitGraph, delta_of, resolve_ranks
from .paths import weyl_set
from .weyl import Weight, WeylElement, WeylGroup, fundamental_coordinates, generated_subgroup


class ActionError(ValueError):
    def __init__(self, message: str, witness: dict[str, Any] | None = None):
        super().__init__(message)
        self.witness = witness or {}


@dataclass(frozen=True)
class ActionTable:
    """One involution of the vertex set per simple root."""

    weyl: WeylGroup
    vertices: tuple[str, ...]
    maps: tuple[dict[str, str], ...]
    notes: tuple[str, ...] = ()

    def apply_generator(self, i: int, vid: str) -> str:
        return self.maps[i][vid]

    def act_word(self, word: Sequence[int], vid: str) -> str:
        """s_{i1}...s_{ik} . Y, applying the rightmost letter first."""
        for i in reversed(word):
            vid = self.maps[i][vid]
        return vid

    def act(self, w: WeylElement, vid: str) -> str:
        return self.act_word(w.word, vid)

    def permutation(self, w: WeylElement) -> dict[str, str]:
        return {v: self.act(w, v) for v in self.vertices}

    def orbit(self, vid: str) -> set[str]:
        seen = {vid}
        stack = [vid]
        while stack:
            v = stack.pop()
            for m in self.maps:
                x = m[v]
                if x not in seen:
                    seen.add(x)
                    stack.append(x)
        return seen


def build_action(g: OrbitGraph, strict: bool = True) -> ActionTable:
    """U edges swap their endpoints; the two sources of a T pair swap; the rest is fixed.

    With ``strict=False`` a lone T source or a clashing assignment leaves
    the vertex fixed instead of raising, so a broken graph still yields a
    table whose braid relations can be tested.
    """
    W = g.weyl
    ids = tuple(g.ids())
    maps: list[dict[str, str]] = []
    notes: list[str] = []
    for a in range(W.rank):
        m = {v: v for v in ids}
        assigned: dict[str, str] = {}

        def swap(x: str, y: str) -> None:
            for v, other in ((x, y), (y, x)):
                if v in assigned and assigned[v] != other:
                    msg = f"label {a}: vertex {v} is moved to both {assigned[v]} and {other}"
                    if strict:
                        raise ActionError(msg, {"label": a, "vertex": v})
                    notes.append(msg)
                    return
            assigned[x], assigned[y] = y, x

        t_sources: dict[str, list[str]] = {}
        for e in g.edges:
            if e.label != a:
                continue
            if e.type is EdgeType.U:
                swap(e.src, e.dst)
            elif e.type is EdgeType.T:
                t_sources.setdefault(e.dst, []).append(e.src)
        for dst, srcs in sorted(t_sources.items()):
            if len(srcs) == 2:
                swap(*srcs)
            else:
                msg = f"label {a}: vertex {dst} has {len(srcs)} T sources"
                if strict:
                    raise ActionError(msg, {"label": a, "vertex": dst, "sources": srcs})
                notes.append(msg)
        m.update(assigned)
        maps.append(m)
    return ActionTable(W, ids, tuple(maps), tuple(notes))


def certify_action(t: ActionTable) -> CertificationReport:
    """Involutivity and every braid relation, checked by composition."""
    rep = CertificationReport()
    W = t.weyl
    for i, m in enumerate(t.maps):
        for v in t.vertices:
            if m[m[v]] != v:
                rep.fail("involution", f"s{i} is not an involution", label=i, vertex=v)
                break
    for i in range(W.rank):
        for j in range(i + 1, W.rank):
            k = W.braid_order(i, j)
            for v in t.vertices:
                x = v
                for _ in range(k):
                    x = t.maps[i][t.maps[j][x]]
                if x != v:
                    rep.fail("braid", f"(s{i} s{j})^{k} moves {v} to {x}",
                             labels=[i, j], order=k, vertex=v, image=x)
                    break
    for note in t.notes:
        rep.warn("construction", note)
    return rep


def act(t: ActionTable, w: WeylElement, vid: str) -> str:
    return t.act(w, vid)


def _top(g: OrbitGraph, top: str | None) -> str:
    if top is not None:
        g.require(top)
        return g.top_of(top)
    if len(g.tops) != 1:
        raise ValueError("graph has several components; pass the top vertex explicitly")
    return g.tops[0]


def max_rank_orbit(t: ActionTable, g: OrbitGraph, top: str | None = None) -> set[str]:
    """The W-orbit of the top vertex, checked against the rank-maximal set."""
    top = _top(g, top)
    orbit = t.orbit(top)
    g = resolve_ranks(g)
    r = g.vertex[top].rank
    comp = g.components[g.component_of[top]]
    by_rank = {v for v in comp if g.vertex[v].rank == r}
    if orbit != by_rank:
        raise ActionError(
            "orbit of the top vertex differs from the set of rank-maximal vertices",
            {"orbit": sorted(orbit), "max_rank": sorted(by_rank)},
        )
    return orbit


# -------------------------------------------------------------- stabilizer


@dataclass
class StabilizerReport:
    top: str
    weyl: WeylGroup
    stabilizer: set[WeylElement]
    delta: frozenset[int]
    w_delta: set[WeylElement]
    w_x: set[WeylElement]
    minimal: set[WeylElement]
    certification: CertificationReport = field(default_factory=CertificationReport)
    generator_classification: list[GeneratorInfo] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        def words(s: Iterable[WeylElement]) -> list[list[int]]:
            return [list(w.word) for w in sorted(s)]

        return {
            "top": self.top,
            "stabilizer": words(self.stabilizer),
            "delta": sorted(self.delta),
            "w_x": words(self.w_x),
            "minimal_representatives": words(self.minimal),
            "decomposition_ok": self.certification.passed,
            "generators": [gi.to_dict() for gi in self.generator_classification],
        }


def minimal_representatives(W: WeylGroup, h: set[WeylElement]) -> set[WeylElement]:
    """Elements w with l(wu) >= l(w) for every u in h."""
    return {w for w in W.elements if all((w * u).length >= w.length for u in h)}


def stabilizer(t: ActionTable, g: OrbitGraph, top: str | None = None) -> StabilizerReport:
    W = t.weyl
    top = _top(g, top)
    stab = {w for w in W.elements if t.act(w, top) == top}
    delta = delta_of(g, top)
    delta_set = set(delta)

    def keeps_delta(w: WeylElement) -> bool:
        return {w.perm[i] for i in delta} == delta_set

    w_x = {w for w in stab if keeps_delta(w)}
    w_delta = W.parabolic_subgroup(sorted(delta))
    rep = CertificationReport()
    if not w_delta <= stab:
        rep.fail("parabolic", "the parabolic subgroup of Delta(X) is not in the stabilizer")
    if w_delta & w_x != {W.identity}:
        rep.fail("intersection", "W_Delta and W_X meet non-trivially",
                 common=[list(w.word) for w in sorted(w_delta & w_x)])
    prod = {a * b for a in w_delta for b in w_x}
    if prod != stab or len(w_delta) * len(w_x) != len(stab):
        rep.fail("product", "stabilizer is not the product W_Delta * W_X")
    for w in w_x:
        for d in w_delta:
            if w * d * w.inverse() not in w_delta:
                rep.fail("normal", "W_X does not normalize W_Delta", w=list(w.word))
                break
    return StabilizerReport(top, W, stab, delta, w_delta, w_x, minimal_representatives(W, stab), rep)


def prop_minimal_check(t: ActionTable, g: OrbitGraph, report: StabilizerReport) -> CertificationReport:
    """W(w.top) against {v : v^-1 minimal, v^-1 in w W_(X)} for every w, plus the
    characterisation of the minimal set through W^Delta(X) and W_X."""
    W = t.weyl
    rep = CertificationReport()
    stab = report.stabilizer
    minimal = report.minimal
    cache: dict[str, set[WeylElement]] = {}
    for w in W.elements:
        y = t.act(w, report.top)
        if y not in cache:
            cache[y] = set(weyl_set(g, y))
        coset = {w * u for u in stab}
        coset_min = minimal & coset
        expected = {m.inverse() for m in coset_min}
        if cache[y] != expected:
            rep.fail("weyl_set", f"W({y}) disagrees with the coset description for w={w!r}",
                     vertex=y, w=list(w.word),
                     paths=[list(v.word) for v in sorted(cache[y])],
                     coset=[list(v.word) for v in sorted(expected)])
        if len({m.length for m in coset_min}) > 1:
            rep.fail("length", "minimal elements of a coset have different lengths", w=list(w.word))
    npos = W.n_positive
    alt = {
        w for w in W.elements
        if all(w.perm[i] < npos for i in report.delta)
        and all((w * u).length >= w.length for u in report.w_x)
    }
    if alt != minimal:
        rep.fail("characterisation", "minimal set differs from the W^Delta / W_X description")
    return rep


# ------------------------------------------------------------- generators

CLAUSE_DELTA = "α ∈ Φ_Δ(X)"
CLAUSE_DOUBLE = "2α ∈ X(X)"
CLAUSE_SUM = "α+β ∈ X(X)"


@dataclass
class GeneratorInfo:
    element: WeylElement
    kind: str  # "reflection" | "product"
    roots: tuple[tuple[int, ...], ...]
    tags: list[str]

    def to_dict(self) -> dict[str, Any]:
        return {
            "word": list(self.element.word),
            "kind": self.kind,
            "roots": [list(r) for r in self.roots],
            "tags": list(self.tags),
        }


@dataclass
class Classification:
    ok: bool
    generators: list[GeneratorInfo]
    untagged: list[GeneratorInfo]
    lattice_given: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "generators": [g.to_dict() for g in self.generators],
            "untagged": [list(g.element.word) for g in self.untagged] if self.lattice_given else None,
        }


def _hermite_rows(vectors: Iterable[Sequence[int]], n: int) -> list[list[int]]:
    """Echelon basis (integer row operations only) of the span of the vectors."""
    rows = [list(v) for v in vectors if any(v)]
    basis: list[list[int]] = []
    for col in range(n):
        pivots = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        while len(pivots) > 1:
            pivots.sort(key=lambda r: abs(r[col]))
            p = pivots[0]
            reduced = [p]
            for r in pivots[1:]:
                q = r[col] // p[col]
                r = [a - q * b for a, b in zip(r, p)]
                (reduced if r[col] != 0 else rest).append(r)
            pivots = reduced
        if pivots:
            basis.append(pivots[0])
        rows = [r for r in rest if any(r)]
    return basis


def in_lattice(v: Sequence[int], basis: list[list[int]]) -> bool:
    v = list(v)
    for row in basis:
        col = next(i for i, x in enumerate(row) if x)
        if v[col] % row[col]:
            return False
        q = v[col] // row[col]
        v = [a - q * b for a, b in zip(v, row)]
    return not any(v)


def _root_weight(root: Sequence[int]) -> Weight:
    return Weight(tuple(root))


def classify_generators(
    report: StabilizerReport, lattice: Iterable[Weight] | None = None
) -> Classification:
    """Greedy generating set of W_(X) by reflections and commuting reflection products."""
    W = report.weyl
    stab = report.stabilizer
    datum = W.datum
    n = W.rank
    basis = None
    if lattice is not None:
        basis = _hermite_rows((fundamental_coordinates(w, datum) for w in lattice), n)

    def member(root_vec: Sequence[int]) -> bool:
        return basis is not None and in_lattice(fundamental_coordinates(_root_weight(root_vec), datum), basis)

    def in_delta(root: Sequence[int]) -> bool:
        return all(c == 0 or i in report.delta for i, c in enumerate(root))

    refl = {root: W.reflection(root) for root in W.positive_roots}
    candidates: dict[WeylElement, GeneratorInfo] = {}
    for root, s in refl.items():
        if s not in stab:
            continue
        tags = []
        if in_delta(root):
            tags.append(CLAUSE_DELTA)
        if member([2 * c for c in root]):
            tags.append(CLAUSE_DOUBLE)
        candidates[s] = GeneratorInfo(s, "reflection", (root,), tags)
    for a, b in W.orthogonal_root_pairs():
        x = refl[a] * refl[b]
        if x not in stab:
            continue
        info = candidates.get(x)
        if info is not None and info.kind == "reflection":
            continue
        if info is None:
            info = GeneratorInfo(x, "product", (a, b), [])
        if basis is not None and CLAUSE_SUM not in info.tags:
            sums = ([p + q for p, q in zip(a, b)], [p - q for p, q in zip(a, b)])
            if any(member(s) for s in sums):
                info.tags.append(CLAUSE_SUM)
                info.roots = (a, b)
        candidates[x] = info
    ordered = sorted(candidates.values(), key=lambda gi: (not gi.tags, gi.element.length, gi.element.word))
    chosen: list[GeneratorInfo] = []
    span = {W.identity}
    for gi in ordered:
        if span == stab:
            break
        if gi.element in span:
            continue
        chosen.append(gi)
        span = generated_subgroup([c.element for c in chosen], W.identity)
    ok = span == stab
    untagged = [gi for gi in chosen if not gi.tags]
    report.generator_classification = chosen
    return Classification(ok, chosen, untagged, basis is not None)


__all__ = [
    "ActionError",
    "ActionTable",
    "CLAUSE_DELTA",
    "CLAUSE_DOUBLE",
    "CLAUSE_SUM",
    "Classification",
    "GeneratorInfo",
    "StabilizerReport",
    "act",
    "build_action",
    "certify_action",
    "classify_generators",
    "in_lattice",
    "max_rank_orbit",
    "minimal_representatives",
    "prop_minimal_check",
    "stabilizer",
]

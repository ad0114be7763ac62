from __future__ import annotations

from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orbitweave.graph import (
    EdgeType,
    OrbitEdge,
    OrbitGraph,
    OrbitVertex,
    RankError,
    StructureError,
    delta_of,
    edge_status,
    infer_ranks,
    monoid_raise,
    validate_structure,
)
from orbitweave.models import fixture, fixture_names, flag_case, group_case, sl2_atom


def _graph(cartan, verts, edges, rank_of_top=None, **kw):
    return OrbitGraph(
        cartan,
        tuple(OrbitVertex(*v) for v in verts),
        tuple(OrbitEdge(*e) for e in edges),
        rank_of_top,
        **kw,
    )


def _strip_ranks(g):
    return replace(g, vertices=tuple(replace(v, rank=None) for v in g.vertices))


def suite():
    out = {name: fixture(name) for name in fixture_names()}
    for t in ["A2", "B2", "A1+A1"]:
        out[f"flag {t}"] = flag_case(t)
        out[f"group {t}"] = group_case(t)
    for k in "UTN":
        out[f"atom {k}"] = sl2_atom(k)
    return out


SUITE = suite()


@pytest.mark.parametrize("name", sorted(SUITE))
def test_suite_graphs_validate(name):
    rep = validate_structure(SUITE[name])
    assert rep.passed, rep.to_dict()


def test_example1_shape():
    g = fixture("example1")
    dims = sorted(v.dim for v in g.vertices)
    assert [dims.count(d) for d in sorted(set(dims))] == [1, 2, 2, 1]
    assert sum(e.type is EdgeType.N for e in g.edges) == 2


def test_dimension_jump_fails_rule_a():
    g = _graph("A1", [("y", 0), ("x", 2)], [("y", "x", 0, "U")])
    assert "a" in validate_structure(g).rules_failed()


def test_u_and_t_sharing_endpoints_fails_rule_c():
    g = _graph("A1+A1", [("y", 0), ("y2", 0), ("x", 1)],
               [("y", "x", 0, "U"), ("y", "x", 1, "T"), ("y2", "x", 1, "T")])
    assert "c" in validate_structure(g).rules_failed()


def test_parallel_u_edges_need_orthogonal_labels():
    g = _graph("A2", [("y", 0), ("x", 1)], [("y", "x", 0, "U"), ("y", "x", 1, "U")])
    assert "c" in validate_structure(g).rules_failed()
    h = _graph("A1+A1", [("y", 0), ("x", 1)], [("y", "x", 0, "U"), ("y", "x", 1, "U")])
    assert validate_structure(h).passed


def test_lone_t_edge_is_error_unless_truncated():
    g = _graph("A1", [("y", 1, 0), ("x", 2, 1)], [("y", "x", 0, "T")])
    assert "b" in validate_structure(g).rules_failed()
    rep = validate_structure(g, allow_truncated=True)
    assert rep.passed and rep.warnings
    assert validate_structure(replace(g, truncated=True)).passed


def test_three_sources_or_mixed_pair_fail_rule_b():
    g = _graph("A1", [("a", 0), ("b", 0), ("c", 0), ("x", 1)],
               [("a", "x", 0, "T"), ("b", "x", 0, "T"), ("c", "x", 0, "T")])
    assert "b" in validate_structure(g).rules_failed()
    h = _graph("A1", [("a", 0), ("b", 0), ("x", 1)], [("a", "x", 0, "T"), ("b", "x", 0, "U")])
    assert "b" in validate_structure(h).rules_failed()


def test_two_targets_for_one_label_fail_rule_d():
    g = _graph("A1", [("y", 0), ("x1", 1), ("x2", 1)], [("y", "x1", 0, "U"), ("y", "x2", 0, "U")])
    assert "d" in validate_structure(g).rules_failed()


def test_two_maximal_vertices_fail_rule_e():
    g = _graph("A1+A1", [("y", 0), ("x1", 1), ("x2", 1)], [("y", "x1", 0, "U"), ("y", "x2", 1, "U")])
    assert "e" in validate_structure(g).rules_failed()


def test_rank_rule_f():
    g = _graph("A1", [("y", 1, 0), ("x", 2, 0)], [("y", "x", 0, "N")])
    rep = validate_structure(g)
    assert rep.rules_failed() == {"f"}
    assert rep.failures[0].witness["edge"] == ["y", "x", 0]


def test_cycle_is_reported():
    g = _graph("A1+A1", [("a", 0), ("b", 0)], [("a", "b", 0, "U"), ("b", "a", 1, "U")])
    assert "acyclic" in validate_structure(g).rules_failed()


def test_structural_errors_before_checks():
    with pytest.raises(StructureError):
        _graph("A1", [("y", 0)], [("y", "nowhere", 0, "U")])
    with pytest.raises(StructureError):
        _graph("A1", [("y", 0), ("y", 1)], [])
    with pytest.raises(StructureError):
        _graph("A1", [("y", 0), ("x", 1)], [("y", "x", 0, "U"), ("y", "x", 0, "T")])
    with pytest.raises(StructureError):
        _graph("A1", [("y", 0), ("x", 1)], [("y", "x", 3, "U")])


def test_delta_of():
    assert delta_of(fixture("example1"), "bottom") == frozenset()
    assert delta_of(flag_case("A2", [0]), "e") == {0}
    flag = flag_case("A2")
    assert delta_of(flag, flag.tops[0]) == frozenset()
    assert delta_of(flag, "s0") == frozenset()
    with pytest.raises(KeyError):
        delta_of(flag, "nope")


def test_edge_status():
    g = fixture("example1")
    assert edge_status(g, "bottom", 0).kind == "raises"
    assert edge_status(g, "bottom", 0).type is EdgeType.U
    assert edge_status(g, "bottom", 1).type is EdgeType.N
    assert edge_status(g, "top", 0).kind == "lowered_by"
    t = sl2_atom("T")
    assert edge_status(t, "Y+", 0) == edge_status(t, "Y-", 0)
    assert edge_status(t, "Y+", 0).type is EdgeType.T
    assert edge_status(flag_case("A2", [0]), "e", 0).kind == "stabilizes"


def test_monoid_raise():
    g = fixture("example1")
    assert monoid_raise(g, "bottom", 0) == "L1"
    assert monoid_raise(sl2_atom("T"), "Y-", 0) == "X"
    assert all(monoid_raise(g, "top", a) == "top" for a in range(2))


@pytest.mark.parametrize("name", sorted(SUITE))
def test_monoid_raise_idempotent_and_top_reachable(name):
    g = SUITE[name]
    for v in g.ids():
        assert g.precedes(v, g.top_of(v))
        assert not (delta_of(g, v) & {e.label for e in g.out_edges[v] + g.in_edges[v]})
        for a in range(g.cartan.rank):
            once = monoid_raise(g, v, a)
            assert monoid_raise(g, once, a) == once


@pytest.mark.parametrize("name", sorted(SUITE))
def test_infer_ranks_recovers_stored_ranks(name):
    g = SUITE[name]
    top_rank = g.vertex[g.tops[0]].rank
    inferred = infer_ranks(_strip_ranks(g), top_rank)
    assert [v.rank for v in inferred.vertices] == [v.rank for v in g.vertices]
    for e in inferred.edges:
        assert inferred.vertex[e.dst].rank == inferred.vertex[e.src].rank + e.type.raises_rank


def test_infer_ranks_examples():
    g = infer_ranks(_strip_ranks(fixture("example1")), 1)
    assert g.vertex["bottom"].rank == 0
    t = infer_ranks(_strip_ranks(sl2_atom("T")), 1)
    assert t.vertex["Y+"].rank == t.vertex["Y-"].rank == 0
    f = infer_ranks(_strip_ranks(flag_case("B2")), 0)
    assert {v.rank for v in f.vertices} == {0}


def test_infer_ranks_inconsistent_paths():
    g = _graph("A1+A1", [("y", 0), ("a", 1), ("b", 1), ("x", 2)],
               [("y", "a", 0, "U"), ("a", "x", 1, "N"), ("y", "b", 1, "U"), ("b", "x", 0, "U")])
    with pytest.raises(RankError) as err:
        infer_ranks(g, 1)
    assert {"path_a", "path_b"} <= set(err.value.witness)


def test_infer_ranks_negative_and_mismatch():
    with pytest.raises(RankError):
        infer_ranks(_strip_ranks(sl2_atom("N")), 0)
    with pytest.raises(RankError):
        infer_ranks(sl2_atom("N"), 3)


# --- property tests on random labeled DAGs ---------------------------------

@st.composite
def random_graphs(draw):
    n = draw(st.integers(1, 7))
    dims = [draw(st.integers(0, 3)) for _ in range(n)]
    verts = [(f"v{i}", d, draw(st.one_of(st.none(), st.integers(0, 2)))) for i, d in enumerate(dims)]
    edges = {}
    for _ in range(draw(st.integers(0, 10))):
        i = draw(st.integers(0, n - 1))
        j = draw(st.integers(0, n - 1))
        if i >= j:
            continue
        label = draw(st.integers(0, 1))
        edges[(f"v{i}", f"v{j}", label)] = draw(st.sampled_from(["U", "T", "N"]))
    return _graph("A2", verts, [k + (t,) for k, t in edges.items()])


@settings(max_examples=200, deadline=None)
@given(random_graphs())
def test_validation_is_total_and_idempotent(g):
    a = validate_structure(g)
    b = validate_structure(g)
    assert a.to_dict() == b.to_dict()
    for f in a.failures:
        assert f.rule in {"acyclic", "a", "b", "c", "d", "e", "f"}


@settings(max_examples=200, deadline=None)
@given(random_graphs())
def test_rank_inference_on_valid_random_graphs(g):
    if not validate_structure(_strip_ranks(g)).passed:
        return
    try:
        h = infer_ranks(_strip_ranks(g))
    except RankError as err:
        assert {"path_a", "path_b"} <= set(err.witness)
        return
    for e in h.edges:
        assert h.vertex[e.dst].rank == h.vertex[e.src].rank + e.type.raises_rank
    assert min(v.rank for v in h.vertices) >= 0

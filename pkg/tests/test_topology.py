import dataclasses
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thln import (
    DEFAULT_BASE_EDGES,
    DimensionMismatch,
    MalformedBase,
    MalformedGraph,
    NoDecomposition,
    NotABijection,
    UnsupportedDimension,
    VariantSpec,
    check_shape,
    cross_partner,
    graph_from_json,
    graph_to_dot,
    graph_to_json,
    join,
    make_base,
    make_preset,
)

Q3_EDGES = [(u, u ^ (1 << b)) for u in range(8) for b in range(3) if u < u ^ (1 << b)]


def test_default_base_counts():
    g = make_base(VariantSpec.base3_default())
    assert g.num_nodes == 8
    assert g.num_edges == 12
    assert all(g.degree(v) == 3 for v in g.nodes)
    assert g.decomposition is None


def test_default_base_is_not_bipartite():
    # the default base is genuinely twisted: it contains an odd cycle
    g = make_base(VariantSpec.base3_default())
    color = {0: 0}
    stack = [0]
    odd_cycle = False
    while stack:
        v = stack.pop()
        for w in g.neighbors(v):
            if w not in color:
                color[w] = color[v] ^ 1
                stack.append(w)
            elif color[w] == color[v]:
                odd_cycle = True
    assert odd_cycle


def test_custom_base_degree_violation():
    bad = list(DEFAULT_BASE_EDGES[:11]) + [(0, 3)]  # node 7 drops to degree 2
    with pytest.raises(MalformedBase):
        make_base(VariantSpec.base3_custom(bad))


def test_custom_base_accepts_binary_cube():
    g = make_base(VariantSpec.base3_custom(Q3_EDGES))
    assert g.num_nodes == 8
    assert all(g.degree(v) == 3 for v in g.nodes)


@pytest.mark.parametrize(
    "bad,exc",
    [
        ([(0, 0)] + Q3_EDGES[:11], MalformedBase),          # self loop
        (Q3_EDGES[:11] + [(0, 9)], MalformedBase),           # out of range
        (Q3_EDGES[:11], MalformedBase),                      # wrong count
    ],
)
def test_custom_base_rejections(bad, exc):
    with pytest.raises(exc):
        make_base(VariantSpec.base3_custom(bad))


def test_join_identity_matching():
    b = make_base(VariantSpec.base3_default())
    g = join(b, b, {u: u for u in range(8)})
    assert g.num_nodes == 16
    assert all(g.degree(v) == 4 for v in g.nodes)
    assert len(g.decomposition.matching) == 8
    assert cross_partner(g, 3) == 3 + 8


def test_join_dimension_mismatch():
    b = make_base(VariantSpec.base3_default())
    g4 = join(b, b, {u: u for u in range(8)})
    with pytest.raises(DimensionMismatch):
        join(b, g4, {})


def test_join_rejects_non_bijection():
    b = make_base(VariantSpec.base3_default())
    phi = {u: 0 for u in range(8)}
    with pytest.raises(NotABijection):
        join(b, b, phi)


def test_random_preset_counts_and_determinism():
    g = make_preset(VariantSpec.random(1), 7)
    assert g.num_nodes == 128
    assert g.num_edges == 448
    assert all(g.degree(v) == 7 for v in g.nodes)
    again = make_preset(VariantSpec.random(1), 7)
    assert graph_to_json(g) == graph_to_json(again)


def test_locally_twisted_4_decomposes():
    g = make_preset(VariantSpec.locally_twisted(), 4)
    assert g.num_nodes == 16
    assert all(g.degree(v) == 4 for v in g.nodes)
    d = g.decomposition
    assert len(d.half1) == len(d.half2) == 8
    assert d.child1 is None and d.child2 is None
    assert check_shape(g).ok


@pytest.mark.parametrize("kind", ["crossed", "mobius0", "mobius1", "locally-twisted"])
@pytest.mark.parametrize("n", [3, 4, 5, 6])
def test_named_variants_pass_shape_checks(kind, n):
    g = make_preset(VariantSpec(kind), n)
    rep = check_shape(g)
    assert rep.ok, rep.summary()
    assert g.num_nodes == 2 ** n
    assert g.num_edges == n * 2 ** (n - 1)


def test_base_kinds_only_at_dimension_3():
    with pytest.raises(UnsupportedDimension):
        make_preset(VariantSpec.base3_default(), 4)
    with pytest.raises(UnsupportedDimension):
        make_preset(VariantSpec.random(0), 2)


def test_cross_partner_involution_and_errors():
    g = make_preset(VariantSpec.random(4), 5)
    for v in g.nodes:
        assert cross_partner(g, cross_partner(g, v)) == v
    base = make_base(VariantSpec.base3_default())
    with pytest.raises(NoDecomposition):
        cross_partner(base, 0)


def test_check_shape_flags_missing_edge():
    g = make_preset(VariantSpec.random(9), 5)
    u, v = g.edges[0]
    rows = [list(r) for r in g.adjacency]
    rows[u].remove(v)
    rows[v].remove(u)
    broken = dataclasses.replace(g, adjacency=tuple(tuple(r) for r in rows))
    rep = check_shape(broken)
    assert not rep.ok
    assert any("regularity" in c.name for c in rep.failures)


def test_check_shape_flags_short_matching():
    g = make_preset(VariantSpec.random(9), 5)
    d = g.decomposition
    clipped = dataclasses.replace(d, matching=d.matching[:-1])
    broken = dataclasses.replace(g, decomposition=clipped)
    rep = check_shape(broken)
    assert not rep.ok
    assert any("matching-size" in c.name for c in rep.failures)


def test_json_roundtrip_is_byte_identical():
    g = make_preset(VariantSpec.random(6), 6)
    text = graph_to_json(g)
    assert graph_to_json(graph_from_json(text)) == text


def _half_as_graph(g, half, child, offset):
    from thln.topology import ThlnGraph, _offset_decomposition

    half_set = set(half)
    rows = tuple(
        tuple(w - offset for w in g.adjacency[v] if w in half_set) for v in half
    )
    return ThlnGraph(g.dimension - 1, rows, _offset_decomposition(child, -offset))


def test_decompose_then_join_rebuilds_identical_graph():
    g = make_preset(VariantSpec.random(13), 6)
    d = g.decomposition
    half = 1 << (g.dimension - 1)
    g1 = _half_as_graph(g, d.half1, d.child1, 0)
    g2 = _half_as_graph(g, d.half2, d.child2, half)
    matching = {u: v - half for u, v in d.matching}
    rebuilt = join(g1, g2, matching)
    assert graph_to_json(rebuilt) == graph_to_json(g)


def test_json_rejects_malformed_documents():
    with pytest.raises(MalformedGraph):
        graph_from_json("not json at all [")
    with pytest.raises(MalformedGraph):
        graph_from_json(json.dumps({"dimension": 4, "edges": [[0, 99]]}))
    with pytest.raises(MalformedGraph):
        graph_from_json(json.dumps({"dimension": 4, "edges": [], "decomposition": None}))


def test_dot_export_labels_nodes_in_binary():
    g = make_preset(VariantSpec.random(0), 3)
    dot = graph_to_dot(g)
    assert 'label="000"' in dot and 'label="111"' in dot
    assert dot.count(" -- ") == g.num_edges


@given(seed=st.integers(0, 10 ** 6), n=st.integers(3, 6))
@settings(max_examples=25, deadline=None)
def test_random_presets_satisfy_count_invariants(seed, n):
    g = make_preset(VariantSpec.random(seed), n)
    assert g.num_nodes == 2 ** n
    assert g.num_edges == n * 2 ** (n - 1)
    if n > 3:
        assert len(g.decomposition.matching) == 2 ** (n - 1)
        for v in g.nodes:
            assert cross_partner(g, cross_partner(g, v)) == v

import random

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wlrad.coloring import (
    COLORINGS,
    HIERARCHY,
    InfeasibleColoringError,
    _attribute_colors,
    _refine_round_numpy,
    _Union,
    degree_coloring,
    exact_iso_coloring,
    get_coloring,
    is_finer,
    trivial_coloring,
    wl_refine,
)
from wlrad.graph_core import AttributedGraph, GraphSample, RandomSampleSpec, generate_sample, permute_nodes
from wlrad.partition import SamplePartition, partition_sample

from conftest import c3, c6, p3, star3, two_triangles


def to_nx(g: AttributedGraph) -> nx.Graph:
    h = nx.Graph()
    for v in range(g.node_count):
        label = "" if g.attributes is None else repr(g.attributes[v])
        h.add_node(v, a=label)
    h.add_edges_from(g.edges)
    return h


def set_partition(labels):
    groups = {}
    for i, key in enumerate(labels):
        groups.setdefault(key, []).append(i)
    return sorted(groups.values())


def random_graph(rng, max_n, prob=None, attrs=None):
    n = int(rng.integers(0, max_n + 1))
    prob = float(rng.uniform(0.1, 0.7)) if prob is None else prob
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < prob]
    a = None if attrs is None else [(float(rng.integers(0, attrs)),) for _ in range(n)]
    return AttributedGraph(n, tuple(edges), a)


def random_sample(rng, m, max_n, attrs=None):
    return GraphSample(tuple(random_graph(rng, max_n, attrs=attrs) for _ in range(m)))


# -- 1-WL -------------------------------------------------------------------------


def test_wl_blind_spot_pair(wl_blind_pair):
    coloring, hists = wl_refine(wl_blind_pair)
    assert hists[0] == hists[1]
    assert len(hists[0]) == 1 and hists[0][0][1] == 6
    # the two graphs are not isomorphic, so WL equivalence is strictly coarser here
    assert not nx.is_isomorphic(to_nx(c6()), to_nx(two_triangles()))
    iso = exact_iso_coloring(wl_blind_pair)
    assert iso[0] != iso[1]


def test_wl_p3_c3_split_after_one_round(path_vs_triangle):
    # round 1 by hand: (0, [0]) -> 0 (leaf), (0, [0, 0]) -> 1 (degree two)
    coloring, hists = wl_refine(path_vs_triangle, max_rounds=1)
    assert coloring.iteration_count == 1
    assert coloring.colors == ((0, 1, 0), (1, 1, 1))
    assert hists == [((0, 2), (1, 1)), ((1, 3),)]


def test_wl_p3_c3_converged(path_vs_triangle):
    coloring, hists = wl_refine(path_vs_triangle)
    # round 2 separates the P3 centre from the triangle nodes, round 3 is stable
    assert coloring.iteration_count == 3
    assert hists[0] != hists[1]


def test_wl_ids_dense_from_zero():
    rng = np.random.default_rng(3)
    coloring, _ = wl_refine(random_sample(rng, 12, 9))
    used = sorted({c for cols in coloring.colors for c in cols})
    assert used == list(range(len(used)))


def test_wl_deterministic():
    rng = np.random.default_rng(11)
    s = random_sample(rng, 25, 10, attrs=3)
    assert wl_refine(s) == wl_refine(s)


def test_wl_empty_graphs():
    s = GraphSample((AttributedGraph(0), AttributedGraph(0)))
    coloring, hists = wl_refine(s)
    assert coloring.iteration_count == 0 and hists == [(), ()]
    s = GraphSample((AttributedGraph(0), p3()))
    assert wl_refine(s)[1][0] == ()


@pytest.mark.parametrize("seed", range(40))
def test_wl_partition_matches_networkx_hash(seed):
    rng = np.random.default_rng(seed)
    attrs = None if seed % 2 else 3
    s = random_sample(rng, 15, 9, attrs=attrs)
    ours = set_partition(wl_refine(s)[1])
    rounds = max(g.node_count for g in s.graphs) + 1
    ref = [
        nx.weisfeiler_lehman_graph_hash(to_nx(g), node_attr="a", iterations=rounds) for g in s.graphs
    ]
    assert ours == set_partition(ref)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_numpy_and_python_engines_agree(seed):
    rng = np.random.default_rng(seed)
    s = random_sample(rng, int(rng.integers(1, 12)), 12, attrs=None if seed % 3 else 4)
    assert wl_refine(s, engine="numpy") == wl_refine(s, engine="python")


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_wl_isomorphism_invariance(seed):
    rng = np.random.default_rng(seed)
    g = random_graph(rng, 10, attrs=3 if seed % 2 else None)
    perm = rng.permutation(g.node_count).tolist()
    hists = wl_refine(GraphSample((g, permute_nodes(g, perm))))[1]
    assert hists[0] == hists[1]


@pytest.mark.parametrize("seed", range(10))
def test_wl_extra_round_keeps_partition(seed):
    rng = np.random.default_rng(100 + seed)
    s = random_sample(rng, 10, 10)
    coloring, _ = wl_refine(s)
    union = _Union(s)
    colors = np.array([c for cols in coloring.colors for c in cols], dtype=np.int64)
    again = _refine_round_numpy(colors, union)
    assert set_partition(again.tolist()) == set_partition(colors.tolist())
    assert coloring.iteration_count <= union.n


def test_initial_colors_by_exact_bytes():
    g = AttributedGraph(4, (), ((0.0,), (-0.0,), (1.5,), (0.0,)))
    s = GraphSample((g,))
    colors = _attribute_colors(s, _Union(s)).tolist()
    assert colors[0] == colors[3]
    assert len({colors[0], colors[1], colors[2]}) == 3


def test_attributes_separate_otherwise_equal_graphs():
    a = AttributedGraph(2, ((0, 1),), ((0.0,), (0.0,)))
    b = AttributedGraph(2, ((0, 1),), ((0.0,), (1.0,)))
    hists = wl_refine(GraphSample((a, b)))[1]
    assert hists[0] != hists[1]


# -- coarser colorings ------------------------------------------------------------------


def test_trivial_examples(wl_blind_pair):
    assert partition_sample(trivial_coloring(wl_blind_pair)).p == 1
    hists = trivial_coloring(GraphSample((p3(), c6())))
    assert hists == [((0, 3),), ((0, 6),)]
    assert partition_sample(hists).p == 2
    assert partition_sample(trivial_coloring(GraphSample((star3(),)))).p == 1


def test_degree_examples(wl_blind_pair, path_vs_triangle):
    assert partition_sample(degree_coloring(path_vs_triangle)).p == 2
    assert partition_sample(degree_coloring(wl_blind_pair)).p == 1
    (h,) = degree_coloring(GraphSample((star3(),)))
    assert sorted(k for _, k in h) == [1, 3]


@pytest.mark.parametrize("seed", range(20))
def test_degree_partition_matches_degree_sequences(seed):
    rng = np.random.default_rng(seed)
    s = random_sample(rng, 20, 7)
    ref = [tuple(sorted(g.degrees())) for g in s.graphs]
    assert set_partition(degree_coloring(s)) == set_partition(ref)


# -- exact isomorphism ----------------------------------------------------------------------


def test_exact_iso_examples(wl_blind_pair):
    assert partition_sample(exact_iso_coloring(wl_blind_pair)).p == 2
    g = two_triangles()
    assert len(set(exact_iso_coloring(GraphSample((g, permute_nodes(g, (5, 3, 1, 0, 2, 4))))))) == 1


def test_exact_iso_infeasible_names_graph():
    big = generate_sample(RandomSampleSpec("cycle", n=9)).graphs[0]
    with pytest.raises(InfeasibleColoringError, match="graph 1") as info:
        exact_iso_coloring(GraphSample((p3(), big)))
    assert info.value.graph_index == 1


@pytest.mark.parametrize("seed", range(25))
def test_exact_iso_matches_networkx(seed):
    rng = np.random.default_rng(seed)
    attrs = 2 if seed % 2 else None
    # few nodes and a narrow order range so isomorphic pairs actually occur
    graphs = [random_graph(rng, 5, attrs=attrs) for _ in range(14)]
    graphs += [permute_nodes(g, rng.permutation(g.node_count).tolist()) for g in graphs[:4]]
    s = GraphSample(tuple(graphs))
    hists = exact_iso_coloring(s)
    match = nx.algorithms.isomorphism.categorical_node_match("a", "")
    for i in range(len(graphs)):
        for j in range(i + 1, len(graphs)):
            same = nx.is_isomorphic(to_nx(graphs[i]), to_nx(graphs[j]), node_match=match)
            assert (hists[i] == hists[j]) == same, (i, j)


# -- expressivity order ----------------------------------------------------------------------


def test_is_finer_examples():
    singles = SamplePartition(((0,), (1,)), (((0, 1),), ((1, 1),)), 2)
    whole = SamplePartition(((0, 1),), (((0, 1),),), 2)
    assert is_finer(singles, whole)
    assert not is_finer(whole, singles)
    assert is_finer(singles, singles) and is_finer(whole, whole)


def test_is_finer_size_mismatch():
    with pytest.raises(ValueError, match="different sample sizes"):
        is_finer(SamplePartition.from_multiplicities([2]), SamplePartition.from_multiplicities([3]))


@pytest.mark.parametrize("seed", range(30))
def test_refinement_chain(seed):
    rng = np.random.default_rng(1000 + seed)
    s = random_sample(rng, int(rng.integers(1, 25)), 7)
    parts = [partition_sample(get_coloring(name)(s)) for name in HIERARCHY]
    for coarse, fine in zip(parts, parts[1:]):
        assert is_finer(fine, coarse)
        assert fine.p >= coarse.p


@pytest.mark.parametrize("seed", range(10))
def test_iso_equivalence_implies_wl_equivalence(seed):
    rng = np.random.default_rng(seed)
    graphs = [random_graph(rng, 6, prob=0.4) for _ in range(20)]
    graphs += [permute_nodes(g, rng.permutation(g.node_count).tolist()) for g in graphs]
    s = GraphSample(tuple(graphs))
    iso, wl = exact_iso_coloring(s), wl_refine(s)[1]
    for i in range(len(graphs)):
        for j in range(len(graphs)):
            if iso[i] == iso[j]:
                assert wl[i] == wl[j]


def test_registry():
    assert set(HIERARCHY) <= set(COLORINGS)
    assert COLORINGS["order"](GraphSample((p3(),))) == trivial_coloring(GraphSample((p3(),)))
    with pytest.raises(ValueError, match="unknown coloring"):
        get_coloring("3-wl")


def test_wide_signatures_fall_back_to_python(monkeypatch):
    import wlrad.coloring as mod

    monkeypatch.setattr(mod, "_MAX_SIGNATURE_CELLS", 1)
    s = GraphSample((p3(), c3(), star3()))
    monkeypatch.setattr(mod, "_refine_round_numpy", None)
    assert wl_refine(s) == wl_refine(s, engine="python")


def test_random_module_unused_for_colors():
    # ids depend only on the sample
    s = GraphSample((star3(), p3()))
    random.seed(1)
    a = wl_refine(s)
    random.seed(2)
    assert wl_refine(s) == a

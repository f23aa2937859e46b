import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from degencolor import ParameterError, ResourceLimitError
from degencolor.gadgets import blow_up, join_graph, query_gadget
from degencolor.generators import complete_graph, cycle_graph, gnp_graph, path_graph, star_graph
from degencolor.graph import (Coloring, Graph, Ordering, degeneracy_ordering, exact_chromatic_number,
                              exact_degeneracy, greedy_color, list_coloring_solve, ordered_degrees,
                              verify_proper)


@st.composite
def graphs(draw, max_n=12):
    n = draw(st.integers(0, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [e for e, keep in zip(pairs, mask) if keep])


def test_graph_rejects_bad_edges():
    with pytest.raises(ParameterError):
        Graph(3, [(0, 0)])
    with pytest.raises(ParameterError):
        Graph(3, [(0, 3)])


def test_duplicates_merge_and_adjacency_is_symmetric():
    g = Graph(4, [(0, 1), (1, 0), (2, 1), (1, 2), (3, 0)])
    assert g.m == 3
    for u in range(4):
        for v in g.neighbors(u):
            assert u in g.neighbors(int(v))
    assert list(g.neighbors(1)) == [0, 2]


def test_ordering_inverse():
    o = Ordering.from_order([2, 0, 1])
    assert [o.position[v] for v in o.order] == [0, 1, 2]


@pytest.mark.parametrize("g, kappa", [
    (path_graph(4), 1), (complete_graph(5), 4), (cycle_graph(5), 2), (Graph(0), 0),
])
def test_degeneracy_examples(g, kappa):
    assert degeneracy_ordering(g).kappa == kappa


def test_degeneracy_ties_smallest_id():
    assert list(degeneracy_ordering(Graph(3)).ordering.order) == [0, 1, 2]


@pytest.mark.parametrize("g, most", [(star_graph(10), 2), (complete_graph(5), 5), (cycle_graph(5), 3)])
def test_greedy_examples(g, most):
    c = greedy_color(g, degeneracy_ordering(g))
    assert verify_proper(g, c)
    assert c.palette_size <= most
    if g.m == 10:
        assert c.palette_size == 5


def test_greedy_rejects_foreign_certificate():
    with pytest.raises(ParameterError):
        greedy_color(path_graph(4), degeneracy_ordering(path_graph(5)))


def test_verify_proper_examples():
    k2 = Graph(2, [(0, 1)])
    assert not verify_proper(k2, Coloring([1, 1]))
    assert verify_proper(k2, Coloring([1, 2]))
    assert verify_proper(Graph(3), Coloring([0, 0, 0]))
    # same color number under different palette tags is not a clash
    assert verify_proper(k2, Coloring([0, 0], [0, 1]))


def test_exact_degeneracy_examples():
    g, _ = query_gadget(4, (1, 2))
    assert exact_degeneracy(g) == 3
    assert exact_degeneracy(join_graph(10, 3)) == 3
    assert exact_degeneracy(blow_up(complete_graph(3), 2)) == 5


def test_exact_chromatic_examples():
    assert exact_chromatic_number(cycle_graph(5)) == 3
    assert exact_chromatic_number(query_gadget(4, "H")[0]) == 5
    assert exact_chromatic_number(complete_graph(4)) == 4
    assert exact_chromatic_number(Graph(0)) == 0
    assert exact_chromatic_number(Graph(3)) == 1
    with pytest.raises(ParameterError):
        exact_chromatic_number(Graph(21))


def test_list_coloring_examples():
    k2 = Graph(2, [(0, 1)])
    assert list_coloring_solve(k2, [{1}, {1}]) is None
    c = list_coloring_solve(k2, [{1}, {1, 2}])
    assert list(c.colors) == [1, 2]
    assert list_coloring_solve(complete_graph(3), [{1, 2}] * 3) is None


def test_list_coloring_budget():
    g = complete_graph(12)
    with pytest.raises(ResourceLimitError):
        list_coloring_solve(g, [set(range(11))] * 12, node_budget=50)


@settings(max_examples=300, deadline=None)
@given(graphs())
def test_degeneracy_matches_oracle(g):
    cert = degeneracy_ordering(g)
    assert cert.kappa == exact_degeneracy(g)
    odeg = ordered_degrees(g, cert.ordering)
    assert int(odeg.max(initial=0)) == cert.kappa == cert.max_odeg
    assert g.m <= cert.kappa * g.n


@settings(max_examples=300, deadline=None)
@given(graphs())
def test_greedy_is_proper_within_kappa_plus_one(g):
    cert = degeneracy_ordering(g)
    c = greedy_color(g, cert)
    assert verify_proper(g, c)
    assert c.palette_size <= cert.kappa + 1


@settings(max_examples=200, deadline=None)
@given(graphs(max_n=10), st.data())
def test_verify_proper_flips_on_recolor(g, data):
    if g.m == 0:
        return
    c = greedy_color(g, degeneracy_ordering(g))
    u, v = g.edges[data.draw(st.integers(0, g.m - 1))]
    colors = c.colors.copy()
    colors[u] = colors[v]
    assert not verify_proper(g, Coloring(colors, c.tags))


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=8))
def test_chromatic_number_is_sandwiched(g):
    chi = exact_chromatic_number(g)
    kappa = exact_degeneracy(g)
    assert chi <= kappa + 1
    if g.n:
        lists = [set(range(chi))] * g.n
        assert list_coloring_solve(g, lists) is not None
        if chi > 1:
            assert list_coloring_solve(g, [set(range(chi - 1))] * g.n) is None


def test_induced_and_relabel():
    g = gnp_graph(30, 0.3, 1)
    sub, verts = g.induced([3, 7, 9, 20])
    for a in range(sub.n):
        for b in range(sub.n):
            if a != b:
                assert sub.has_edge(a, b) == g.has_edge(int(verts[a]), int(verts[b]))
    perm = np.random.default_rng(0).permutation(30)
    h = g.relabel(perm, 30)
    assert h.m == g.m and exact_degeneracy(h) == exact_degeneracy(g)

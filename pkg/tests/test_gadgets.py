import itertools
import warnings
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from degencolor import ParameterError
from degencolor.gadgets import (BitMatrix, bipartite_gadget, blow_up, dist_instance, join_graph,
                                known_kappa_instance, multipass_instance, query_gadget,
                                rlc_bound, rlc_experiment, sample_lists)
from degencolor.generators import complete_graph, gnp_graph, insertion_tokens, star_graph
from degencolor.graph import (Graph, degeneracy_ordering, exact_chromatic_number,
                              exact_degeneracy, greedy_color, list_coloring_solve, verify_proper)
from degencolor.query import oracle_from_graph, query_color
from degencolor.streaming import StreamSource, stream_color_insertion_only


def _bits(p, value):
    return BitMatrix(np.full((p, p), value, dtype=bool))


def test_bit_matrix():
    x = BitMatrix(np.eye(3, dtype=bool))
    assert x.p == 3 and x[2, 2] and not x[1, 2]
    assert not x.complement()[2, 2]
    with pytest.raises(ParameterError):
        BitMatrix(np.zeros((2, 3)))
    assert np.array_equal(BitMatrix.random(5, 1).bits, BitMatrix.random(5, 1).bits)


def test_blow_up_examples():
    g = gnp_graph(7, 0.4, 0)
    assert blow_up(g, 1) == g
    assert blow_up(complete_graph(2), 2) == complete_graph(4)
    assert exact_degeneracy(blow_up(complete_graph(3), 2)) == 5


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 10), st.floats(0, 1), st.integers(1, 3), st.integers(0, 10 ** 6))
def test_blow_up_degeneracy_bound(n, p, lam, seed):
    g = gnp_graph(n, p, seed)
    h = blow_up(g, lam)
    assert h.n == n * lam
    assert exact_degeneracy(h) <= (exact_degeneracy(g) + 1) * lam - 1


def test_bipartite_gadget():
    L, R = [0, 1, 2], [3, 4, 5]
    assert bipartite_gadget(_bits(3, False), L, R) == []
    assert len(bipartite_gadget(_bits(3, True), L, R)) == 9
    assert bipartite_gadget(BitMatrix(np.eye(3, dtype=bool)), L, R) == [(0, 3), (1, 4), (2, 5)]
    with pytest.raises(ParameterError):
        bipartite_gadget(_bits(3, True), L, [2, 3, 4])


def test_dist_instance_examples():
    g, cert = dist_instance(4, 1, _bits(4, True), 2, 3)
    assert g.n == 12 and exact_chromatic_number(g) >= 6 and all(cert.check(g).values())
    g, cert = dist_instance(4, 1, _bits(4, False), 2, 3)
    assert exact_degeneracy(g) <= 4 and all(cert.check(g).values())
    g, cert = dist_instance(4, 2, _bits(4, False), 1, 1)
    assert g.n == 24 and exact_degeneracy(g) <= 9


def test_known_kappa_examples():
    for bit in (False, True):
        g, cert = known_kappa_instance(4, 1, _bits(4, bit), 2, 3)
        assert g.n == 20 and exact_degeneracy(g) == 6 and all(cert.check(g).values())
    g, _ = known_kappa_instance(3, 2, BitMatrix.random(3, 4), 1, 2)
    assert exact_degeneracy(g) == 11


def test_known_kappa_repeat_localizes():
    x = BitMatrix.random(4, 0)
    y, z = next((i, j) for i in range(1, 5) for j in range(1, 5) if not x[i, j])
    g, cert = known_kappa_instance(4, 1, x, y, z)
    col = list_coloring_solve(g, [range(7)] * g.n)
    assert col is not None and verify_proper(g, col)
    S = cert.fields["S"]
    keys = col.labels()
    same = [(a, b) for a, b in itertools.combinations(S, 2) if keys[a] == keys[b]]
    (l,), (r,) = cert.fields["repeat_pair"]
    assert same == [(l, r)]


def test_multipass_examples():
    assert exact_degeneracy(multipass_instance(5, 1, 3)) == 3
    assert multipass_instance(3, 0, 1) == Graph(3, [(0, 2), (1, 2)])
    g = multipass_instance(12, 4, 9)
    col = greedy_color(g, degeneracy_ordering(g))
    assert col.palette_size == 11
    keys = col.labels()
    assert [(a, b) for a, b in itertools.combinations(range(12), 2) if keys[a] == keys[b]] == [(4, 9)]
    with pytest.raises(ParameterError):
        multipass_instance(4, 2, 2)


def test_query_gadget_examples():
    g, cert = query_gadget(5, "H")
    assert exact_chromatic_number(g) == 6 and all(cert.check(g).values())
    g, cert = query_gadget(5, (1, 3))
    assert exact_degeneracy(g) == 4 and all(cert.check(g).values())
    for ij in [(1, 2), (2, 4), (3, 4)]:
        g, _ = query_gadget(4, ij)
        top = 4
        assert set(g.neighbors(top).tolist()) == {0, 1, 2, 3}
        assert exact_degeneracy(g) == 3
    with pytest.raises(ParameterError):
        query_gadget(4, (3, 3))


def test_join_examples():
    g = join_graph(10, 3)
    assert exact_degeneracy(g) == 3 and g.m == 24
    assert join_graph(8, 1) == star_graph(8)
    assert join_graph(6, 5) == complete_graph(6)


def test_rlc_bound_oracle():
    # frozen values of r^n / (r+1)^(n-t)
    assert rlc_bound(15, 4, 2) == Fraction(32768, 177147)
    assert float(rlc_bound(15, 4, 2)) == pytest.approx(0.184976, abs=1e-6)
    assert float(rlc_bound(20, 6, 2)) == pytest.approx(0.219231, abs=1e-6)


def test_rlc_examples():
    g = gnp_graph(8, 0.5, 1)
    chi = exact_chromatic_number(g)
    assert rlc_experiment(g, chi, chi, 20, 0).success_rate == 1
    res = rlc_experiment(complete_graph(2), 2, 1, 4000, 3)
    assert abs(res.success_rate - 0.5) <= 3 * res.sigma
    with pytest.raises(ParameterError):
        rlc_experiment(g, 2, 3, 1, 0)


def test_rlc_budget_exhaustion_is_counted():
    with warnings.catch_warnings(record=True) as w:
        warnings.simplefilter("always")
        res = rlc_experiment(join_graph(20, 6), 9, 2, 5, 0, node_budget=1)
    assert res.exhausted > 0 and w


def test_sample_lists_are_distinct():
    lists = sample_lists(200, 6, 3, np.random.default_rng(0))
    assert all(len(set(row)) == 3 for row in lists.tolist())
    assert lists.min() >= 0 and lists.max() < 6
    counts = np.bincount(lists.ravel(), minlength=6)
    assert counts.min() > 60


def test_algorithms_color_gadgets_properly():
    g, _ = known_kappa_instance(5, 2, BitMatrix.random(5, 2), 3, 4)
    res = stream_color_insertion_only(StreamSource.from_arrays(*insertion_tokens(g, 0)), g.n, 0.5, 0)
    assert verify_proper(g, res.coloring)
    q, _ = query_gadget(6, (2, 5))
    col, rep = query_color(oracle_from_graph(q, 1), q.n)
    assert verify_proper(q, col) and rep.total > 0

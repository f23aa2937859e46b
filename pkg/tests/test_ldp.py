import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from degencolor import ParameterError
from degencolor.generators import generate_planted, gnp_graph
from degencolor.graph import Graph, degeneracy_ordering, greedy_color, verify_proper
from degencolor.ldp import (LdpParams, VertexPartition, blocks, color_via_ldp, lambda_bound,
                            ldp_params, partition_from_seed, random_partition, sparsity_for,
                            verify_ldp)


@pytest.mark.parametrize("n, k, s, ell", [(16, 4, 2048, 1), (1000, 100, 20000, 10),
                                          (1000, 100, 19999, 11), (10, 10, 1, 10)])
def test_ldp_params_examples(n, k, s, ell):
    assert ldp_params(n, k, s).ell == ell


def test_ldp_params_rejects():
    with pytest.raises(ParameterError):
        ldp_params(10, 0, 5)
    with pytest.raises(ParameterError):
        ldp_params(10, 11, 5)
    assert not ldp_params(1000, 100, 20000).claims_guarantees
    assert ldp_params(1000, 100, sparsity_for(1000)).claims_guarantees


def test_lambda_uses_log2():
    assert lambda_bound(100, 10, 1000) == pytest.approx(3 * math.sqrt(1000 * math.log2(1000)))
    assert lambda_bound(100, 10, 1000) == pytest.approx(299.5, abs=0.05)


def test_partition_examples():
    p = ldp_params(100, 1, 10 ** 6)
    assert np.all(random_partition(p, 5).psi == 0)
    q = LdpParams(10 ** 4, 10, 1, 10)
    a, b = random_partition(q, 3), random_partition(q, 3)
    assert np.array_equal(a.psi, b.psi)
    assert a.sizes().max() <= 2 * 10 ** 4 / 10


def test_blocks_examples():
    k2 = Graph(2, [(0, 1)])
    bl = blocks(k2, VertexPartition(np.array([0, 1]), 2, 0))
    assert [b.graph.n for b in bl] == [1, 1] and sum(b.graph.m for b in bl) == 0
    bl = blocks(k2, VertexPartition(np.array([0, 0]), 2, 0))
    assert bl[0].graph == k2 and bl[1].graph.n == 0
    g = gnp_graph(40, 0.2, 1)
    assert blocks(g, partition_from_seed(40, 1, 0))[0].graph == g


def test_verify_ldp_trivial_partition():
    g = generate_planted(200, 5, 1)
    part = partition_from_seed(200, 1, 0)
    rep = verify_ldp(g, part, ldp_params(200, 5, g.m))
    assert rep.holds_i and rep.holds_ii and rep.holds_iii
    rep = verify_ldp(g, part, ldp_params(200, 5, g.m - 1))
    assert not rep.holds_iii


def test_color_via_ldp_examples():
    g = gnp_graph(60, 0.2, 2)
    single = color_via_ldp(g, partition_from_seed(60, 1, 0))
    assert single.palette_size == greedy_color(g, degeneracy_ordering(g)).palette_size
    k2 = Graph(2, [(0, 1)])
    c = color_via_ldp(k2, VertexPartition(np.array([0, 1]), 2, 0))
    assert verify_proper(k2, c) and c.palette_size == 2 and c.tags[0] != c.tags[1]


def test_planted_accurate_guess_bound():
    n, kappa = 4096, 8
    g = generate_planted(n, kappa, 0)
    params = ldp_params(n, kappa, sparsity_for(n))
    part = random_partition(params, 1)
    rep = verify_ldp(g, part, params, kappa=kappa)
    c = color_via_ldp(g, part)
    assert rep.holds and verify_proper(g, c) and c.palette_size <= rep.color_bound


@settings(max_examples=50, deadline=None)
@given(st.integers(2, 40), st.integers(1, 8), st.integers(0, 10 ** 6))
def test_any_partition_gives_proper_coloring(n, ell, seed):
    g = gnp_graph(n, 0.3, seed)
    part = partition_from_seed(n, ell, seed)
    c = color_via_ldp(g, part)
    assert verify_proper(g, c)
    rep = verify_ldp(g, part, LdpParams(n, 1, max(g.m, 1), ell))
    assert c.palette_size <= sum(k + 1 for k, sz in zip(rep.per_block_kappa, rep.per_block_size) if sz)
    again = color_via_ldp(g, partition_from_seed(n, ell, seed))
    assert np.array_equal(again.colors, c.colors) and np.array_equal(again.tags, c.tags)


@settings(max_examples=30, deadline=None)
@given(st.integers(50, 400), st.integers(2, 12), st.integers(0, 10 ** 6))
def test_block_degeneracy_bound_implies_color_bound(n, ell, seed):
    g = gnp_graph(n, 0.1, seed)
    kappa = degeneracy_ordering(g).kappa
    part = partition_from_seed(n, ell, seed)
    rep = verify_ldp(g, part, LdpParams(n, kappa or 1, 10 ** 9, ell), kappa=kappa)
    if rep.holds_i:
        assert color_via_ldp(g, part).palette_size <= rep.color_bound

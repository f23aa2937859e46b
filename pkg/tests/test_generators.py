import numpy as np
import pytest

from degencolor.generators import (generate_planted, gnm_graph, insertion_tokens,
                                   planted_edge_count, random_tree, turnstile_tokens)
from degencolor.graph import Graph, exact_degeneracy


@pytest.mark.parametrize("n, k, seed", [(50, 1, 0), (60, 4, 1), (120, 9, 2), (200, 20, 3), (30, 29, 4)])
def test_planted_degeneracy_and_edge_count(n, k, seed):
    g = generate_planted(n, k, seed)
    assert exact_degeneracy(g) == k
    assert g.m == planted_edge_count(n, k) == k * (k + 1) // 2 + k * (n - k - 1)


def test_planted_is_deterministic():
    assert generate_planted(300, 7, 11) == generate_planted(300, 7, 11)
    assert generate_planted(300, 7, 11) != generate_planted(300, 7, 12)


def test_random_tree():
    t = random_tree(100, 5)
    assert t.m == 99 and exact_degeneracy(t) == 1


def _final(u, v, c, n):
    x = {}
    for a, b, s in zip(u.tolist(), v.tolist(), c.tolist()):
        key = (min(a, b), max(a, b))
        x[key] = x.get(key, 0) + s
        assert 0 <= x[key] <= 1  # deletions only after insertions
    return Graph(n, [k for k, val in x.items() if val])


def test_turnstile_tokens_reproduce_graph():
    g = gnm_graph(80, 300, 3)
    u, v, c = turnstile_tokens(g, 9)
    assert _final(u, v, c, 80) == g
    assert int((c < 0).sum()) == round(0.1 * g.m)
    assert np.any(u > v)  # endpoints are shuffled


def test_insertion_tokens():
    g = gnm_graph(40, 100, 2)
    u, v, c = insertion_tokens(g, 1)
    assert np.all(c == 1) and _final(u, v, c, 40) == g

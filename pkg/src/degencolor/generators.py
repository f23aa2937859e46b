"""Synthetic graphs and update streams."""

from __future__ import annotations

import numpy as np

from . import _kernels as K
from .errors import ParameterError
from .graph import Graph
from .rng import derive


def empty_graph(n: int) -> Graph:
    return Graph(n)


def complete_graph(n: int) -> Graph:
    u, v = np.triu_indices(n, 1)
    return Graph._from_canonical(n, u.astype(np.int64), v.astype(np.int64))


def path_graph(n: int) -> Graph:
    a = np.arange(max(n - 1, 0), dtype=np.int64)
    return Graph._from_canonical(n, a, a + 1)


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ParameterError("a cycle needs at least 3 vertices")
    a = np.arange(n, dtype=np.int64)
    return Graph(n, np.stack([a, (a + 1) % n], axis=1))


def star_graph(n: int) -> Graph:
    """K_{1,n-1} with center 0."""
    leaves = np.arange(1, n, dtype=np.int64)
    return Graph._from_canonical(n, np.zeros_like(leaves), leaves)


def gnp_graph(n: int, p: float, seed: int) -> Graph:
    rng = derive(seed)
    u, v = np.triu_indices(n, 1)
    keep = rng.random(u.shape[0]) < p
    return Graph._from_canonical(n, u[keep].astype(np.int64), v[keep].astype(np.int64))


def gnm_graph(n: int, m: int, seed: int) -> Graph:
    total = n * (n - 1) // 2
    if m > total:
        raise ParameterError("too many edges requested")
    rng = derive(seed)
    flat = np.sort(rng.choice(total, size=m, replace=False)) if m else np.zeros(0, np.int64)
    u, v = unflatten_pairs(flat, n)
    return Graph._from_canonical(n, u, v)


def unflatten_pairs(flat: np.ndarray, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of the row-major upper-triangle index used by the sketches."""
    flat = np.asarray(flat, dtype=np.int64)
    # row starts: start(u) = u*n - u*(u+1)/2
    b = 2 * n - 1
    u = np.floor((b - np.sqrt(b * b - 8.0 * flat)) / 2).astype(np.int64)
    start = u * n - u * (u + 1) // 2
    # float rounding can be off by one either way
    over = start > flat
    u[over] -= 1
    start = u * n - u * (u + 1) // 2
    nxt = (u + 1) * n - (u + 1) * (u + 2) // 2
    under = flat >= nxt
    u[under] += 1
    start = u * n - u * (u + 1) // 2
    v = flat - start + u + 1
    return u, v


def generate_planted(n: int, kappa_target: int, seed: int) -> Graph:
    """Random graph with degeneracy exactly ``kappa_target``.

    Vertex i joins ``min(i, kappa_target)`` distinct earlier vertices chosen
    uniformly, so vertices ``0..kappa_target`` form a clique and every later
    vertex has exactly ``kappa_target`` earlier neighbors.
    """
    k = int(kappa_target)
    if not 1 <= k < n:
        raise ParameterError("need 1 <= kappa_target < n")
    rng = derive(seed)
    kk = np.minimum(np.arange(n, dtype=np.int64), k)
    total = int(kk.sum())
    owner = np.repeat(np.arange(n, dtype=np.int64), kk)
    starts = np.zeros(n, dtype=np.int64)
    np.cumsum(kk[:-1], out=starts[1:])
    highs = owner - kk[owner] + (np.arange(total, dtype=np.int64) - starts[owner])
    draws = rng.integers(0, highs + 1)
    src, dst = K.floyd_parents(n, k, draws)
    return Graph(n, np.stack([src, dst], axis=1))


def planted_edge_count(n: int, k: int) -> int:
    return k * (k + 1) // 2 + k * (n - k - 1)


def random_tree(n: int, seed: int) -> Graph:
    return generate_planted(n, 1, seed) if n > 1 else Graph(n)


def sample_non_edges(g: Graph, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` distinct vertex pairs that are not edges of ``g``."""
    n = g.n
    total = n * (n - 1) // 2
    if count > total - g.m:
        raise ParameterError("not enough non-edges")
    u, v = g.edges[:, 0], g.edges[:, 1]
    present = np.sort(u * n - u * (u + 1) // 2 + (v - u - 1))
    chosen = np.zeros(0, dtype=np.int64)
    while chosen.shape[0] < count:
        need = count - chosen.shape[0]
        cand = rng.integers(0, total, size=2 * need + 16)
        pos = np.searchsorted(present, cand)
        pos[pos == present.shape[0]] = 0
        cand = cand[present[pos] != cand] if present.shape[0] else cand
        merged = np.concatenate([chosen, cand])
        _, first = np.unique(merged, return_index=True)
        chosen = merged[np.sort(first)][:count]
    a, b = unflatten_pairs(chosen, n)
    return np.stack([a, b], axis=1)


def turnstile_tokens(g: Graph, seed: int, noise: float = 0.1):
    """Random-order turnstile stream whose final graph is ``g``.

    Besides one insertion per edge, ``round(noise * m)`` non-edges are
    inserted and later deleted.  Endpoint order within each token is
    randomized too.  Returns parallel arrays ``(u, v, c)``.
    """
    rng = derive(seed)
    extra = sample_non_edges(g, int(round(noise * g.m)), rng)
    pairs = np.concatenate([g.edges, extra, extra])
    signs = np.concatenate([np.ones(g.m + extra.shape[0], dtype=np.int64),
                            -np.ones(extra.shape[0], dtype=np.int64)])
    perm = rng.permutation(pairs.shape[0])
    # slot of each token in the output
    slot = np.empty_like(perm)
    slot[perm] = np.arange(perm.shape[0])
    ins = slot[g.m:g.m + extra.shape[0]]
    dele = slot[g.m + extra.shape[0]:]
    # every deletion must follow its insertion: give the earlier slot to the insert
    first = np.minimum(ins, dele)
    second = np.maximum(ins, dele)
    slot[g.m:g.m + extra.shape[0]] = first
    slot[g.m + extra.shape[0]:] = second
    out = np.empty_like(pairs)
    out[slot] = pairs
    c = np.empty_like(signs)
    c[slot] = signs
    flip = rng.random(out.shape[0]) < 0.5
    u = np.where(flip, out[:, 1], out[:, 0])
    v = np.where(flip, out[:, 0], out[:, 1])
    return u, v, c


def insertion_tokens(g: Graph, seed: int):
    """Random-order insertion-only stream of the edges of ``g``."""
    rng = derive(seed)
    perm = rng.permutation(g.m)
    e = g.edges[perm]
    return e[:, 0].copy(), e[:, 1].copy(), np.ones(g.m, dtype=np.int64)

"""Graphs, degeneracy orderings, greedy coloring, and exact oracles.

Vertices are the integers ``0..n-1``.  A :class:`Graph` is stored as a
CSR adjacency with sorted rows and is immutable once built.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _kernels as K
from .errors import ParameterError, ResourceLimitError


def _frozen(a: np.ndarray) -> np.ndarray:
    a.flags.writeable = False
    return a


class Graph:
    """Simple undirected graph on ``0..n-1``.

    ``edges`` may be any iterable of pairs or an ``(m, 2)`` integer array.
    Repeated pairs are merged; self-loops and out-of-range endpoints are
    rejected.
    """

    __slots__ = ("n", "indptr", "indices", "_edges")

    def __init__(self, n: int, edges=()):
        n = int(n)
        if n < 0:
            raise ParameterError("vertex count must be non-negative")
        arr = np.asarray(list(edges) if not isinstance(edges, np.ndarray) else edges,
                         dtype=np.int64)
        if arr.size == 0:
            arr = np.empty((0, 2), dtype=np.int64)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise ParameterError("edges must be pairs")
        if arr.shape[0] and (arr.min() < 0 or arr.max() >= n):
            raise ParameterError("edge endpoint out of range")
        u = np.minimum(arr[:, 0], arr[:, 1])
        v = np.maximum(arr[:, 0], arr[:, 1])
        if np.any(u == v):
            raise ParameterError("self-loops are not allowed")
        keys = np.unique(u * n + v)
        u = keys // n if n else keys
        v = keys - u * n if n else keys
        self._edges = _frozen(np.stack([u, v], axis=1))
        self.indptr, self.indices = self._build_csr(n, u, v)
        self.n = n

    @staticmethod
    def _build_csr(n, u, v):
        indptr, indices = K.csr_from_sorted(n, np.ascontiguousarray(u, dtype=np.int64),
                                            np.ascontiguousarray(v, dtype=np.int64))
        return _frozen(indptr), _frozen(indices)

    @classmethod
    def _from_canonical(cls, n: int, u: np.ndarray, v: np.ndarray) -> "Graph":
        # u < v, sorted and unique already
        g = cls.__new__(cls)
        g.n = int(n)
        g._edges = _frozen(np.stack([u, v], axis=1).astype(np.int64, copy=False))
        g.indptr, g.indices = cls._build_csr(g.n, g._edges[:, 0], g._edges[:, 1])
        return g

    @property
    def m(self) -> int:
        return int(self._edges.shape[0])

    @property
    def edges(self) -> np.ndarray:
        """``(m, 2)`` array of edges with ``u < v`` in lexicographic order."""
        return self._edges

    def degrees(self) -> np.ndarray:
        return np.diff(self.indptr)

    def degree(self, v: int) -> int:
        return int(self.indptr[v + 1] - self.indptr[v])

    def neighbors(self, v: int) -> np.ndarray:
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    def has_edge(self, u: int, v: int) -> bool:
        row = self.neighbors(u)
        i = np.searchsorted(row, v)
        return bool(i < row.shape[0] and row[i] == v)

    def max_degree(self) -> int:
        return int(self.degrees().max()) if self.n else 0

    def induced(self, vertices: Sequence[int]) -> tuple["Graph", np.ndarray]:
        """Subgraph induced by ``vertices``.

        Returns the subgraph (relabelled ``0..len-1`` in the given order)
        and the array mapping new ids back to ids of ``self``.
        """
        verts = np.asarray(vertices, dtype=np.int64)
        local = np.full(self.n, -1, dtype=np.int64)
        local[verts] = np.arange(verts.shape[0])
        e = self._edges
        lu = local[e[:, 0]]
        lv = local[e[:, 1]]
        keep = (lu >= 0) & (lv >= 0)
        return Graph(verts.shape[0], np.stack([lu[keep], lv[keep]], axis=1)), verts

    def relabel(self, mapping: np.ndarray, n: int) -> "Graph":
        """Image of this graph under the injective vertex map ``mapping``."""
        mapping = np.asarray(mapping, dtype=np.int64)
        return Graph(n, mapping[self._edges])

    def adjacency_sets(self) -> list[set[int]]:
        return [set(self.neighbors(v).tolist()) for v in range(self.n)]

    def __eq__(self, other) -> bool:
        return (isinstance(other, Graph) and self.n == other.n
                and np.array_equal(self._edges, other._edges))

    def __hash__(self):
        return hash((self.n, self._edges.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class Ordering:
    order: np.ndarray
    position: np.ndarray

    @classmethod
    def from_order(cls, order: Sequence[int]) -> "Ordering":
        order = np.asarray(order, dtype=np.int64)
        position = np.empty_like(order)
        position[order] = np.arange(order.shape[0])
        return cls(_frozen(order), _frozen(position))

    def __len__(self) -> int:
        return int(self.order.shape[0])


@dataclass(frozen=True)
class DegeneracyCertificate:
    kappa: int
    ordering: Ordering
    max_odeg: int


@dataclass(frozen=True)
class Coloring:
    """A color per vertex, optionally qualified by a palette tag.

    Two vertices share a color only when both ``colors`` and ``tags``
    agree, so blocks colored with distinct tags never clash.
    """

    colors: np.ndarray
    tags: np.ndarray

    def __init__(self, colors, tags=None):
        colors = np.asarray(colors, dtype=np.int64)
        tags = np.zeros_like(colors) if tags is None else np.asarray(tags, dtype=np.int64)
        if tags.shape != colors.shape:
            raise ParameterError("tags and colors must align")
        object.__setattr__(self, "colors", _frozen(colors))
        object.__setattr__(self, "tags", _frozen(tags))

    def __len__(self) -> int:
        return int(self.colors.shape[0])

    def keys(self) -> np.ndarray:
        if len(self) == 0:
            return self.colors.copy()
        width = int(self.colors.max()) + 1
        return self.tags * width + self.colors

    @property
    def palette_size(self) -> int:
        return int(np.unique(self.keys()).shape[0])

    def labels(self) -> np.ndarray:
        """Dense relabelling of the (tag, color) pairs to ``0..palette_size-1``."""
        _, inv = np.unique(self.keys(), return_inverse=True)
        return inv.astype(np.int64)

    @classmethod
    def assemble(cls, n: int, parts: Iterable[tuple[np.ndarray, "Coloring"]]) -> "Coloring":
        """Glue block colorings whose vertex maps partition ``0..n-1``."""
        colors = np.full(n, -1, dtype=np.int64)
        tags = np.full(n, -1, dtype=np.int64)
        for verts, col in parts:
            colors[verts] = col.colors
            tags[verts] = col.tags
        if np.any(colors < 0):
            raise ParameterError("block colorings do not cover every vertex")
        return cls(colors, tags)


def degeneracy_ordering(g: Graph) -> DegeneracyCertificate:
    """Degeneracy ordering by repeated min-degree removal.

    Ties go to the smallest vertex id, so the result is a function of the
    graph alone.  The returned ordering has maximum ordered degree equal to
    the degeneracy.
    """
    if g.n == 0:
        return DegeneracyCertificate(0, Ordering.from_order([]), 0)
    order, kappa = K.degeneracy_order(g.indptr, g.indices, g.n)
    return DegeneracyCertificate(int(kappa), Ordering.from_order(order), int(kappa))


def ordered_degrees(g: Graph, ordering: Ordering) -> np.ndarray:
    """Number of neighbors of each vertex that come later in ``ordering``."""
    if g.n == 0:
        return np.zeros(0, dtype=np.int64)
    return K.ordered_degrees(g.indptr, g.indices, ordering.position)


def greedy_color(g: Graph, cert: DegeneracyCertificate, palette_tag: int = 0) -> Coloring:
    """Proper ``(kappa + 1)``-coloring from a degeneracy certificate.

    Vertices are visited in reverse degeneracy order and take the smallest
    color not used by an already-colored neighbor.  Every color carries
    ``palette_tag``.
    """
    if len(cert.ordering) != g.n:
        raise ParameterError("certificate does not match the graph size")
    if g.n == 0:
        return Coloring(np.zeros(0, dtype=np.int64))
    odeg = ordered_degrees(g, cert.ordering)
    if int(odeg.max()) > cert.kappa or cert.max_odeg != cert.kappa:
        raise ParameterError("certificate is inconsistent with the graph")
    colors = K.greedy_reverse(g.indptr, g.indices, cert.ordering.order)
    return Coloring(colors, np.full(g.n, palette_tag, dtype=np.int64))


def verify_proper(g: Graph, c: Coloring) -> bool:
    if len(c) != g.n:
        raise ParameterError("coloring does not cover the graph")
    if g.m == 0:
        return True
    u, v = g.edges[:, 0], g.edges[:, 1]
    same = (c.colors[u] == c.colors[v]) & (c.tags[u] == c.tags[v])
    return not bool(same.any())


def exact_degeneracy(g: Graph) -> int:
    # Deliberately naive: quadratic min-degree peeling on Python sets.
    adj = g.adjacency_sets()
    alive = set(range(g.n))
    best = 0
    while alive:
        v = min(alive, key=lambda x: len(adj[x]))
        best = max(best, len(adj[v]))
        for w in adj[v]:
            adj[w].discard(v)
        alive.remove(v)
    return best


def _max_clique_size(adj: list[int], n: int) -> int:
    best = 0

    def expand(size, cand):
        nonlocal best
        if cand == 0:
            best = max(best, size)
            return
        if size + bin(cand).count("1") <= best:
            return
        while cand:
            if size + bin(cand).count("1") <= best:
                return
            v = cand.bit_length() - 1
            cand &= ~(1 << v)
            expand(size + 1, cand & adj[v])

    expand(0, (1 << n) - 1)
    return best


def _k_colorable(adj: list[int], n: int, k: int) -> bool:
    colors = [-1] * n
    # neighbor color masks give DSATUR ordering
    sat = [0] * n

    def pick():
        best, key = -1, None
        for v in range(n):
            if colors[v] < 0:
                kk = (bin(sat[v]).count("1"), bin(adj[v]).count("1"))
                if key is None or kk > key:
                    best, key = v, kk
        return best

    def solve(done, used):
        if done == n:
            return True
        v = pick()
        for c in range(min(k, used + 1)):
            if sat[v] >> c & 1:
                continue
            colors[v] = c
            saved = []
            nb = adj[v]
            while nb:
                w = (nb & -nb).bit_length() - 1
                nb &= nb - 1
                saved.append((w, sat[w]))
                sat[w] |= 1 << c
            if solve(done + 1, max(used, c + 1)):
                return True
            for w, s in saved:
                sat[w] = s
            colors[v] = -1
        return False

    return solve(0, 0)


def exact_chromatic_number(g: Graph, limit_n: int = 20) -> int:
    """Exact chromatic number by branch and bound.

    The search climbs from a clique lower bound to the greedy upper bound.
    Exponential; refuses graphs with more than ``limit_n`` vertices.
    """
    if g.n > limit_n:
        raise ParameterError(f"exact chromatic number limited to n <= {limit_n}")
    if g.n == 0:
        return 0
    if g.m == 0:
        return 1
    adj = [0] * g.n
    for u, v in g.edges.tolist():
        adj[u] |= 1 << v
        adj[v] |= 1 << u
    lower = _max_clique_size(adj, g.n)
    upper = greedy_color(g, degeneracy_ordering(g)).palette_size
    for k in range(lower, upper):
        if _k_colorable(adj, g.n, k):
            return k
    return upper


def list_coloring_solve(g: Graph, lists: Sequence[Iterable[int]] | Mapping[int, Iterable[int]],
                        node_budget: int = 1_000_000, limit_n: int = 64) -> Coloring | None:
    """Find a proper coloring with each vertex colored from its own list.

    Backtracking on the most constrained vertex with forward checking.
    Returns ``None`` when no list coloring exists; raises
    :class:`ResourceLimitError` once ``node_budget`` search nodes are spent.
    """
    if g.n > limit_n:
        raise ParameterError(f"list coloring limited to n <= {limit_n}")
    domains = [set(lists[v]) for v in range(g.n)]
    adj = g.adjacency_sets()
    colors = [None] * g.n
    nodes = 0

    def solve(remaining):
        nonlocal nodes
        if not remaining:
            return True
        v = min(remaining, key=lambda x: (len(domains[x]), -len(adj[x])))
        for c in sorted(domains[v]):
            nodes += 1
            if nodes > node_budget:
                raise ResourceLimitError(f"list coloring exceeded {node_budget} nodes")
            pruned = []
            dead = False
            for w in adj[v]:
                if colors[w] is None and c in domains[w]:
                    domains[w].discard(c)
                    pruned.append(w)
                    if not domains[w]:
                        dead = True
            if not dead:
                colors[v] = c
                remaining.discard(v)
                if solve(remaining):
                    return True
                remaining.add(v)
                colors[v] = None
            for w in pruned:
                domains[w].add(c)
        return False

    if any(not d for d in domains):
        return None
    if not solve(set(range(g.n))):
        return None
    return Coloring(np.asarray(colors, dtype=np.int64))

"""Coloring in the general graph query model.

The algorithm sees the graph only through a :class:`QueryOracle`:

* ``pair(u, v)`` tells whether ``{u, v}`` is an edge;
* ``nbr(u, j)`` returns the ``j``-th neighbor of ``u`` (1-indexed) in a
  fixed adjacency order, or ``None`` when ``deg(u) < j``.

Stage one scans every adjacency list with neighbor queries and gives up
after ``floor(3 n^1.5)`` queries.  If it finishes, the whole graph is known
and greedy coloring uses ``kappa + 1`` colors.  Otherwise the degeneracy
must exceed ``sqrt(n)``, and stage two partitions the vertices with the
guess ``k = ceil(sqrt(n))``, asks every same-block pair, and colors the
blocks with disjoint palettes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError, QueryBudgetExceeded
from .graph import Coloring, Graph, degeneracy_ordering, greedy_color
from .ldp import Block, _ell, color_blocks, log2n, partition_from_seed
from .rng import ORACLE, PARTITION, derive, derive_int


class QueryOracle:
    """Counting front end shared by every oracle.

    Subclasses implement ``_pair``, ``_nbr`` and optionally the batched
    ``_pair_row`` and ``_nbr_scan``; every answered query bumps a counter,
    including batched ones.
    """

    def __init__(self, n: int):
        self.n = int(n)
        self.pair_count = 0
        self.nbr_count = 0

    @property
    def total(self) -> int:
        return self.pair_count + self.nbr_count

    def reset_counters(self) -> None:
        self.pair_count = 0
        self.nbr_count = 0

    def pair(self, u: int, v: int) -> bool:
        self.pair_count += 1
        if u == v:
            return False
        return bool(self._pair(int(u), int(v)))

    def nbr(self, u: int, j: int) -> int | None:
        """j-th neighbor of ``u`` (1-indexed), or ``None`` for bottom."""
        self.nbr_count += 1
        if j < 1:
            raise ParameterError("neighbor index starts at 1")
        return self._nbr(int(u), int(j))

    def pair_row(self, u: int, vs: np.ndarray) -> np.ndarray:
        """Answers to ``pair(u, v)`` for every ``v`` in ``vs``, counted one each."""
        vs = np.asarray(vs, dtype=np.int64)
        self.pair_count += int(vs.shape[0])
        return self._pair_row(int(u), vs)

    def nbr_scan(self, u: int, limit: int) -> tuple[np.ndarray, bool, int]:
        """Issue ``nbr(u, 1), nbr(u, 2), ...`` until bottom or ``limit`` queries.

        Returns the neighbors seen, whether bottom was reached, and the
        number of queries spent (bottom included).
        """
        found, hit, used = self._nbr_scan(int(u), int(limit))
        self.nbr_count += used
        return found, hit, used

    # defaults built from the single-query primitives
    def _pair_row(self, u, vs):
        return np.array([u != v and self._pair(u, int(v)) for v in vs.tolist()], dtype=bool)

    def _nbr_scan(self, u, limit):
        out = []
        used = 0
        while used < limit:
            used += 1
            w = self._nbr(u, used)
            if w is None:
                return np.asarray(out, dtype=np.int64), True, used
            out.append(w)
        return np.asarray(out, dtype=np.int64), False, used

    def _pair(self, u, v):
        raise NotImplementedError

    def _nbr(self, u, j):
        raise NotImplementedError


class GraphOracle(QueryOracle):
    """Oracle backed by a materialized graph.

    Each adjacency list is stored in a fixed order: a seeded random
    permutation per vertex, or explicit ``adjacency`` rows.
    """

    def __init__(self, g: Graph, seed: int | None = 0, adjacency=None):
        super().__init__(g.n)
        self._g = g
        if adjacency is not None:
            rows = [np.asarray(r, dtype=np.int64) for r in adjacency]
            for v, r in enumerate(rows):
                if not np.array_equal(np.sort(r), g.neighbors(v)):
                    raise ParameterError(f"adjacency row {v} is not a permutation of N({v})")
            self._order = np.concatenate(rows) if rows else np.zeros(0, np.int64)
        else:
            rng = derive(0 if seed is None else seed, ORACLE)
            deg = g.degrees()
            owner = np.repeat(np.arange(g.n), deg)
            keys = rng.random(owner.shape[0])
            perm = np.lexsort((keys, owner))
            self._order = g.indices[perm]
        self._mark = np.zeros(g.n, dtype=bool)

    def _pair(self, u, v):
        return self._g.has_edge(u, v)

    def _nbr(self, u, j):
        lo, hi = self._g.indptr[u], self._g.indptr[u + 1]
        if j > hi - lo:
            return None
        return int(self._order[lo + j - 1])

    def _pair_row(self, u, vs):
        nb = self._g.neighbors(u)
        self._mark[nb] = True
        out = self._mark[vs].copy()
        self._mark[nb] = False
        return out

    def _nbr_scan(self, u, limit):
        lo, hi = self._g.indptr[u], self._g.indptr[u + 1]
        deg = int(hi - lo)
        if limit >= deg + 1:
            return self._order[lo:hi].copy(), True, deg + 1
        return self._order[lo:lo + limit].copy(), False, limit


def oracle_from_graph(g: Graph, seed: int = 0) -> GraphOracle:
    return GraphOracle(g, seed)


@dataclass
class QueryBudgetReport:
    stage1_queries: int
    stage2_queries: int
    stage1_completed: bool
    stage1_budget: int
    stage2_cap: int | None = None
    ell: int | None = None
    s: int | None = None
    k: int | None = None
    epsilon: float | None = None

    @property
    def total(self) -> int:
        return self.stage1_queries + self.stage2_queries

    def as_dict(self) -> dict:
        return {"stage1_queries": self.stage1_queries, "stage2_queries": self.stage2_queries,
                "total": self.total, "stage1_completed": self.stage1_completed,
                "stage1_budget": self.stage1_budget, "stage2_cap": self.stage2_cap,
                "ell": self.ell, "s": self.s, "k": self.k, "epsilon": self.epsilon}


def stage1_budget(n: int) -> int:
    return math.isqrt(9 * n ** 3)  # floor(3 n^1.5) without floating point


def stage2_cap(n: int, s: int, k: int, factor: int = 4) -> int:
    # factor times the w.h.p. bound n s / (2k)
    return factor * (n * s) // (2 * k)


def query_color(oracle: QueryOracle, n: int, epsilon: float | None = None, seed: int = 0,
                cap_factor: int = 4) -> tuple[Coloring, QueryBudgetReport]:
    """Two-stage coloring through ``oracle``; returns the coloring and query report."""
    n = int(n)
    if n == 0:
        return Coloring(np.zeros(0, np.int64)), QueryBudgetReport(0, 0, True, 0)
    budget = stage1_budget(n)
    start = oracle.total
    edges_u, edges_v = [], []
    completed = True
    for v in range(n):
        left = budget - (oracle.total - start)
        found, hit, _ = oracle.nbr_scan(v, left)
        if not hit:
            completed = False
            break
        up = found[found > v]
        edges_u.append(np.full(up.shape[0], v, dtype=np.int64))
        edges_v.append(up)
    s1 = oracle.total - start
    if completed:
        eu = np.concatenate(edges_u) if edges_u else np.zeros(0, np.int64)
        ev = np.concatenate(edges_v) if edges_v else np.zeros(0, np.int64)
        g = Graph(n, np.stack([eu, ev], axis=1))
        col = greedy_color(g, degeneracy_ordering(g))
        return col, QueryBudgetReport(s1, 0, True, budget)

    if epsilon is None:
        epsilon = 1.0 / log2n(n) if n > 2 else 1.0
    if epsilon <= 0:
        raise ParameterError("epsilon must be positive")
    k = math.isqrt(n - 1) + 1 if n > 1 else 1  # ceil(sqrt(n))
    s = max(1, math.ceil(epsilon ** -2 * n * log2n(n)))
    ell = _ell(n, min(k, n), s)
    part = partition_from_seed(n, ell, derive_int(seed, PARTITION, k))
    cap = stage2_cap(n, s, k, cap_factor)
    sizes = part.sizes()
    need = int(np.sum(sizes * (sizes - 1) // 2))
    report = QueryBudgetReport(s1, 0, False, budget, cap, ell, s, k, float(epsilon))
    if need > cap:
        raise QueryBudgetExceeded(f"stage two needs {need} pair queries, cap is {cap}")
    order = np.argsort(part.psi, kind="stable")
    starts = np.zeros(ell + 1, dtype=np.int64)
    np.cumsum(sizes, out=starts[1:])
    before = oracle.total
    blocks = []
    for i in range(ell):
        members = np.sort(order[starts[i]:starts[i + 1]])
        bu, bv = [], []
        # canonical order: u ascending, then v ascending
        for a in range(members.shape[0] - 1):
            u = int(members[a])
            rest = members[a + 1:]
            hit = oracle.pair_row(u, rest)
            bv.append(np.nonzero(hit)[0] + a + 1)
            bu.append(np.full(bv[-1].shape[0], a, dtype=np.int64))
        lu = np.concatenate(bu) if bu else np.zeros(0, np.int64)
        lv = np.concatenate(bv) if bv else np.zeros(0, np.int64)
        blocks.append(Block(i, Graph._from_canonical(members.shape[0], lu, lv), members))
    report.stage2_queries = oracle.total - before
    return color_blocks(n, blocks), report

"""Random low-degeneracy partitions.

A partition draws each vertex's block uniformly from ``ell`` blocks, with
``ell = ceil(2nk / s)`` for a degeneracy guess ``k`` and sparsity ``s``.
When the guess is accurate, each block has small degeneracy, no block is
much larger than ``n / ell``, and at most ``s`` edges stay inside blocks.
Coloring the blocks greedily with disjoint palettes then uses about
``kappa + lambda + ell`` colors.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ParameterError
from .graph import Coloring, Graph, degeneracy_ordering, greedy_color
from .rng import PARTITION, derive

DEFAULT_C = 48


def log2n(n: int) -> float:
    return math.log2(n) if n > 1 else 0.0


@dataclass(frozen=True)
class LdpParams:
    n: int
    k: int
    s: int
    ell: int
    C: float = DEFAULT_C

    @property
    def claims_guarantees(self) -> bool:
        """Whether ``s`` is large enough for the partition guarantees."""
        return self.s >= self.C * self.n * log2n(self.n)


def _ell(n: int, k: int, s: int) -> int:
    return min(max(1, -(-2 * n * k // s)), max(n, 1))


def ldp_params(n: int, k: int, s: int, C: float = DEFAULT_C) -> LdpParams:
    if not 1 <= k <= n:
        raise ParameterError(f"guess k={k} outside [1, {n}]")
    if s < 1:
        raise ParameterError("sparsity s must be positive")
    return LdpParams(int(n), int(k), int(s), _ell(int(n), int(k), int(s)), C)


def sparsity_for(n: int, C: float = DEFAULT_C) -> int:
    """The smallest admissible sparsity ``ceil(C n log2 n)``."""
    return max(1, math.ceil(C * n * log2n(n)))


@dataclass(frozen=True)
class VertexPartition:
    psi: np.ndarray
    ell: int
    seed: int

    def sizes(self) -> np.ndarray:
        return np.bincount(self.psi, minlength=self.ell)


def partition_from_seed(n: int, ell: int, seed: int) -> VertexPartition:
    # Generator.integers draws by bounded rejection, so it is exactly uniform
    psi = derive(seed, PARTITION).integers(0, ell, size=n, dtype=np.int64) if ell > 1 \
        else np.zeros(n, dtype=np.int64)
    psi.flags.writeable = False
    return VertexPartition(psi, int(ell), int(seed))


def random_partition(params: LdpParams, seed: int) -> VertexPartition:
    return partition_from_seed(params.n, params.ell, seed)


@dataclass(frozen=True)
class Block:
    index: int
    graph: Graph
    vertices: np.ndarray


def monochromatic_mask(g: Graph, psi: np.ndarray) -> np.ndarray:
    e = g.edges
    return psi[e[:, 0]] == psi[e[:, 1]]


def blocks(g: Graph, part: VertexPartition) -> list[Block]:
    """The induced subgraphs ``G[psi^-1(i)]`` with maps back to ``g``."""
    psi = np.asarray(part.psi, dtype=np.int64)
    if psi.shape[0] != g.n:
        raise ParameterError("partition does not cover the graph")
    order = np.argsort(psi, kind="stable")
    sizes = np.bincount(psi, minlength=part.ell)
    starts = np.zeros(part.ell + 1, dtype=np.int64)
    np.cumsum(sizes, out=starts[1:])
    local = np.empty(g.n, dtype=np.int64)
    local[order] = np.arange(g.n) - starts[psi[order]]
    e = g.edges[monochromatic_mask(g, psi)]
    eb = psi[e[:, 0]]
    # edges stay lexicographic inside each block since local ids preserve order
    by_block = np.argsort(eb, kind="stable")
    e = e[by_block]
    eb = eb[by_block]
    ecount = np.bincount(eb, minlength=part.ell)
    estart = np.zeros(part.ell + 1, dtype=np.int64)
    np.cumsum(ecount, out=estart[1:])
    out = []
    for i in range(part.ell):
        verts = order[starts[i]:starts[i + 1]]
        be = e[estart[i]:estart[i + 1]]
        sub = Graph._from_canonical(int(sizes[i]), local[be[:, 0]], local[be[:, 1]])
        out.append(Block(i, sub, verts))
    return out


def lambda_bound(kappa: int, ell: int, n: int) -> float:
    return 3.0 * math.sqrt(kappa * ell * log2n(n))


@dataclass(frozen=True)
class LdpReport:
    kappa: int
    ell: int
    s: int
    lam: float
    per_block_kappa: list = field(repr=False)
    per_block_size: list = field(repr=False)
    monochromatic_edges: int
    holds_i: bool
    holds_ii: bool
    holds_iii: bool

    @property
    def holds(self) -> bool:
        return self.holds_i and self.holds_ii and self.holds_iii

    @property
    def color_bound(self) -> float:
        return self.kappa + self.lam + self.ell


def verify_ldp(g: Graph, part: VertexPartition, params: LdpParams,
               kappa: int | None = None) -> LdpReport:
    """Check the three partition guarantees against ``g``.

    ``kappa`` may be passed when the true degeneracy is already known.
    """
    if kappa is None:
        kappa = degeneracy_ordering(g).kappa
    bl = blocks(g, part)
    per_kappa = [degeneracy_ordering(b.graph).kappa for b in bl]
    per_size = [b.graph.n for b in bl]
    mono = sum(b.graph.m for b in bl)
    lam = lambda_bound(kappa, part.ell, g.n)
    return LdpReport(
        kappa=int(kappa), ell=part.ell, s=params.s, lam=lam,
        per_block_kappa=per_kappa, per_block_size=per_size, monochromatic_edges=int(mono),
        holds_i=max(per_kappa, default=0) * part.ell <= kappa + lam,
        holds_ii=max(per_size, default=0) * part.ell <= 2 * g.n,
        holds_iii=mono <= params.s,
    )


def color_blocks(n: int, bl: list[Block]) -> Coloring:
    """Greedy-color each block with its own palette tag and glue the results."""
    parts = []
    for b in bl:
        if b.graph.n == 0:
            continue
        parts.append((b.vertices, greedy_color(b.graph, degeneracy_ordering(b.graph), b.index)))
    return Coloring.assemble(n, parts)


def color_via_ldp(g: Graph, part: VertexPartition) -> Coloring:
    return color_blocks(g.n, blocks(g, part))

"""Round-level simulators for MPC, Congested Clique and LOCAL coloring.

MPC and Congested Clique
    One machine per vertex, holding that vertex's incident edges.  Round 1
    broadcasts every vertex's block color for every guess ``k``; round 2
    broadcasts every vertex's monochromatic degree per guess, which lets
    each machine compute all block edge counts and select the same guess;
    round 3 sends each monochromatic edge of the selected guess to the
    machine that owns its block, which colors the block greedily.  The
    Congested Clique variant derives every guess's coloring from one
    ``ceil(log2 n)``-bit master color per vertex.

LOCAL
    Every node draws its block, tells its neighbors, and the blocks are
    colored by a pluggable subroutine.  Messages only travel along edges;
    the engine checks this for every message it delivers.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import ParameterError
from .graph import Coloring, Graph, degeneracy_ordering, greedy_color, verify_proper
from .ldp import (DEFAULT_C, VertexPartition, _ell, blocks, color_blocks, lambda_bound, log2n,
                  partition_from_seed)
from .rng import MACHINE, PARTITION, derive, derive_int
from .streaming import guess_ladder


def ceil_log2(x: int) -> int:
    return max(1, math.ceil(math.log2(x))) if x > 1 else 1


def log_star(x: float) -> int:
    """Iterated base-2 logarithm, with log*(x) = 0 for x <= 1."""
    count = 0
    while x > 1:
        x = math.log2(x)
        count += 1
    return count


# -- transcripts ------------------------------------------------------------

@dataclass
class RoundRecord:
    label: str
    sent_bits: np.ndarray
    received_bits: np.ndarray
    sent_messages: np.ndarray
    received_messages: np.ndarray

    def as_dict(self) -> dict:
        return {"label": self.label,
                "sent_bits": self.sent_bits.tolist(),
                "received_bits": self.received_bits.tolist(),
                "sent_messages": self.sent_messages.tolist(),
                "received_messages": self.received_messages.tolist()}


@dataclass
class MachineState:
    machine: int
    sent_bits: list
    received_bits: list
    storage_bits: int


@dataclass
class RoundTranscript:
    machines: int
    rounds: list = field(default_factory=list)
    storage_bits: np.ndarray | None = None

    def machine_state(self, i: int) -> MachineState:
        store = 0 if self.storage_bits is None else int(self.storage_bits[i])
        return MachineState(i, [int(r.sent_bits[i]) for r in self.rounds],
                            [int(r.received_bits[i]) for r in self.rounds], store)

    @property
    def total_rounds(self) -> int:
        return len(self.rounds)

    def max_sent(self) -> int:
        return max((int(r.sent_bits.max(initial=0)) for r in self.rounds), default=0)

    def max_received(self) -> int:
        return max((int(r.received_bits.max(initial=0)) for r in self.rounds), default=0)

    def to_json(self) -> str:
        return json.dumps({"machines": self.machines, "total_rounds": self.total_rounds,
                           "rounds": [r.as_dict() for r in self.rounds]})

    @classmethod
    def from_json(cls, text: str) -> "RoundTranscript":
        data = json.loads(text)
        tr = cls(data["machines"])
        for r in data["rounds"]:
            tr.rounds.append(RoundRecord(r["label"], np.asarray(r["sent_bits"], np.int64),
                                         np.asarray(r["received_bits"], np.int64),
                                         np.asarray(r["sent_messages"], np.int64),
                                         np.asarray(r["received_messages"], np.int64)))
        return tr


class _RoundBuilder:
    """Accumulates point-to-point and broadcast traffic for one round."""

    def __init__(self, machines: int, label: str):
        self.p = machines
        self.label = label
        self.sent = np.zeros(machines, dtype=np.int64)
        self.recv = np.zeros(machines, dtype=np.int64)
        self.msent = np.zeros(machines, dtype=np.int64)
        self.mrecv = np.zeros(machines, dtype=np.int64)

    def send(self, src: np.ndarray, dst: np.ndarray, bits) -> None:
        src = np.asarray(src, dtype=np.int64)
        dst = np.asarray(dst, dtype=np.int64)
        bits = np.broadcast_to(np.asarray(bits, dtype=np.int64), src.shape)
        remote = src != dst  # a machine does not pay to talk to itself
        src, dst, bits = src[remote], dst[remote], bits[remote]
        self.sent += np.bincount(src, weights=bits, minlength=self.p).astype(np.int64)
        self.recv += np.bincount(dst, weights=bits, minlength=self.p).astype(np.int64)
        self.msent += np.bincount(src, minlength=self.p)
        self.mrecv += np.bincount(dst, minlength=self.p)

    def broadcast(self, bits_per_machine: np.ndarray) -> None:
        """Every machine sends its own payload to each other machine."""
        b = np.asarray(bits_per_machine, dtype=np.int64)
        self.sent += b * (self.p - 1)
        self.recv += int(b.sum()) - b
        self.msent += self.p - 1
        self.mrecv += self.p - 1

    def finish(self) -> RoundRecord:
        return RoundRecord(self.label, self.sent, self.recv, self.msent, self.mrecv)


@dataclass
class Verdict:
    conforming: bool
    conservation: bool
    rounds: int
    cap_bits: float
    max_sent: int
    max_received: int
    violations: list

    def as_dict(self) -> dict:
        return {"conforming": self.conforming, "conservation": self.conservation,
                "rounds": self.rounds, "cap_bits": self.cap_bits, "max_sent": self.max_sent,
                "max_received": self.max_received, "violations": self.violations}


def round_audit(tr: RoundTranscript, cap_bits: float) -> Verdict:
    """Recompute conservation and per-machine cap conformance from raw counts."""
    conservation = True
    violations = []
    for idx, r in enumerate(tr.rounds):
        if int(r.sent_bits.sum()) != int(r.received_bits.sum()) or \
                int(r.sent_messages.sum()) != int(r.received_messages.sum()):
            conservation = False
            violations.append({"round": idx, "kind": "conservation"})
        over_s = np.nonzero(r.sent_bits > cap_bits)[0]
        over_r = np.nonzero(r.received_bits > cap_bits)[0]
        for m in over_s[:10].tolist():
            violations.append({"round": idx, "kind": "sent", "machine": m,
                               "bits": int(r.sent_bits[m])})
        for m in over_r[:10].tolist():
            violations.append({"round": idx, "kind": "received", "machine": m,
                               "bits": int(r.received_bits[m])})
    return Verdict(conservation and not violations, conservation, tr.total_rounds,
                   float(cap_bits), tr.max_sent(), tr.max_received(), violations)


# -- MPC / Congested Clique -------------------------------------------------

def mpc_epsilon(k: int, n: int, variant: str) -> float:
    lg = log2n(n)
    if variant == "mpc":
        return (lg / k) ** 0.25
    return (lg * lg / k) ** 0.25


def mpc_cap(n: int, variant: str, c: float = 64) -> float:
    lg = log2n(n)
    return c * n * lg * lg if variant == "mpc" else c * n * lg


def master_prefix(phi: np.ndarray, ell: int, bits: int) -> np.ndarray:
    """Block index in [ell] from a ``bits``-bit master color.

    When ``ell`` is a power of two this is exactly the top ``log2 ell``
    bits of ``phi``, so coarser partitions are prefixes of finer ones.
    """
    return (phi.astype(np.int64) * ell) >> bits


@dataclass
class MpcGuess:
    k: int
    epsilon: float
    s: int
    ell: int
    max_block_edges: int = 0
    passes: bool = False


@dataclass
class MpcResult:
    coloring: Coloring
    transcript: RoundTranscript
    verdict: Verdict
    chosen_k: int
    guesses: list
    variant: str
    selection_fallback: bool = False

    def __iter__(self):
        return iter((self.coloring, self.transcript))

    @property
    def chosen(self) -> MpcGuess:
        return next(g for g in self.guesses if g.k == self.chosen_k)


def block_threshold(n: int, variant: str, c3: float = 32) -> float:
    """Edges a block may hold for its guess to be selectable.

    ``c3 n log2 n`` for MPC; ``c3 n`` for the Congested Clique, whose
    larger epsilon keeps blocks at O(n) edges so that routing them fits
    the O(n log n)-bit budget.
    """
    return c3 * n * log2n(n) if variant == "mpc" else c3 * n


def mpc_color(g: Graph, seed: int, variant: str = "mpc", c: float = 64,
              c3: float = 32, threshold: float | None = None) -> MpcResult:
    """Simulate the three-round MPC (or Congested Clique) coloring.

    Block colorings stay on their block machines; the per-vertex colors
    are gathered into the returned :class:`Coloring` without a fourth
    communication round.
    """
    if variant not in ("mpc", "congested-clique"):
        raise ParameterError(f"unknown variant {variant!r}")
    n = g.n
    if n == 0:
        raise ParameterError("graph must be nonempty")
    L = ceil_log2(n)
    idw = ceil_log2(n)  # bits per vertex id or count
    ladder = guess_ladder(n)
    guesses = []
    psis = []
    if variant == "congested-clique":
        phi = derive(seed, MACHINE).integers(0, 1 << L, size=n, dtype=np.int64)
    for k in ladder:
        eps = mpc_epsilon(k, n, variant)
        s = max(1, math.ceil(eps ** -2 * n * log2n(n)))
        ell = _ell(n, min(k, n), s)
        guesses.append(MpcGuess(k, eps, s, ell))
        if variant == "mpc":
            psis.append(partition_from_seed(n, ell, derive_int(seed, PARTITION, k)).psi)
        else:
            psis.append(master_prefix(phi, ell, L))

    tr = RoundTranscript(n)
    deg = g.degrees()
    storage = deg * idw

    # round 1: every machine broadcasts its colors
    r1 = _RoundBuilder(n, "broadcast colors")
    if variant == "mpc":
        per = sum(ceil_log2(gs.ell) for gs in guesses)
    else:
        per = L
    r1.broadcast(np.full(n, per, dtype=np.int64))
    tr.rounds.append(r1.finish())
    storage = storage + n * per

    # round 2: every machine broadcasts its monochromatic degree per guess
    e = g.edges
    mono_deg = []
    for psi in psis:
        same = psi[e[:, 0]] == psi[e[:, 1]]
        d = np.bincount(e[same, 0], minlength=n) + np.bincount(e[same, 1], minlength=n)
        mono_deg.append(d)
    r2 = _RoundBuilder(n, "broadcast monochromatic degrees")
    r2.broadcast(np.full(n, len(ladder) * idw, dtype=np.int64))
    tr.rounds.append(r2.finish())
    storage = storage + n * len(ladder) * idw

    # every machine now evaluates the same selection rule
    if threshold is None:
        threshold = block_threshold(n, variant, c3)
    chosen = None
    for gs, psi, d in zip(guesses, psis, mono_deg):
        block_edges = np.bincount(psi, weights=d, minlength=gs.ell) // 2
        gs.max_block_edges = int(block_edges.max(initial=0))
        gs.passes = gs.max_block_edges <= threshold
        if gs.passes and chosen is None:
            chosen = gs
    fallback = chosen is None
    if fallback:
        chosen = min(guesses, key=lambda x: (x.max_block_edges, x.k))
    psi = psis[guesses.index(chosen)]

    # round 3: route each monochromatic edge to its block machine
    same = psi[e[:, 0]] == psi[e[:, 1]]
    src = e[same, 0]
    dst = psi[src]
    r3 = _RoundBuilder(n, "route block edges")
    r3.send(src, dst, 2 * idw)
    tr.rounds.append(r3.finish())
    storage = storage + np.bincount(dst, minlength=n) * 2 * idw
    tr.storage_bits = storage

    part = VertexPartition(psi, chosen.ell, seed)
    coloring = color_blocks(n, blocks(g, part))
    verdict = round_audit(tr, mpc_cap(n, variant, c))
    return MpcResult(coloring, tr, verdict, chosen.k, guesses, variant, fallback)


# -- LOCAL ------------------------------------------------------------------

BlockSubroutine = Callable[[Graph, int, float, int], tuple]


def reference_block_coloring(block: Graph, b: int, t: float, n: int):
    """Central stand-in for a distributed low-arboricity coloring.

    Colors greedily along a degeneracy ordering and reports the round
    count ``ceil(log_t n) + log* n`` that the distributed routine would
    take on an ``n``-node network.
    """
    col = greedy_color(block, degeneracy_ordering(block)) if block.n else Coloring(np.zeros(0, np.int64))
    rounds = math.ceil(math.log(n) / math.log(t)) + log_star(n) if n > 1 else 0
    return col, rounds


@dataclass
class LocalConfig:
    alpha_estimate: int
    t: float
    subroutine: BlockSubroutine = reference_block_coloring
    C: float = DEFAULT_C
    slack: float = 2.0

    def validate(self, n: int) -> None:
        if self.alpha_estimate < 1:
            raise ParameterError("arboricity estimate must be at least 1")
        upper = self.slack * math.sqrt(n / max(log2n(n), 1.0))
        if not 2 < self.t <= upper:
            raise ParameterError(f"t={self.t} outside (2, {upper:.3f}]")


@dataclass
class Message:
    src: np.ndarray
    dst: np.ndarray
    payload: np.ndarray
    bits: int


class LocalNetwork:
    """Synchronous message engine restricted to the edges of ``g``.

    Node programs hand over their outgoing messages for a round; the
    engine verifies every (src, dst) pair is an edge and only then makes
    the payloads visible to the receivers, at the round boundary.
    """

    def __init__(self, g: Graph):
        self._n = g.n
        e = g.edges
        self._keys = np.sort(np.concatenate([e[:, 0] * g.n + e[:, 1], e[:, 1] * g.n + e[:, 0]]))
        self.log: list = []

    def is_edge(self, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
        q = src * self._n + dst
        pos = np.searchsorted(self._keys, q)
        pos[pos == self._keys.shape[0]] = 0
        return self._keys[pos] == q if self._keys.shape[0] else np.zeros(q.shape, bool)

    def exchange(self, msg: Message) -> Message:
        if not np.all(self.is_edge(msg.src, msg.dst)):
            raise ParameterError("message sent across a non-edge")
        self.log.append(msg)
        return msg

    def locality_holds(self) -> bool:
        return all(bool(np.all(self.is_edge(m.src, m.dst))) for m in self.log)


@dataclass
class LocalResult:
    coloring: Coloring
    rounds: int
    ell: int
    b: int
    s: int
    k: int
    subroutine_rounds: int
    network: LocalNetwork = field(repr=False, default=None)

    def __iter__(self):
        return iter((self.coloring, self.rounds))


def local_color(g: Graph, cfg: LocalConfig, seed: int) -> LocalResult:
    n = g.n
    cfg.validate(n)
    s = max(1, math.ceil(cfg.C * n * log2n(n)))
    k = min(2 * cfg.alpha_estimate, n)
    ell = _ell(n, k, s)
    lam = lambda_bound(k, ell, n)
    b = max(1, math.ceil((k + lam) / ell))

    # round 0: each node draws its block locally
    psi = np.empty(n, dtype=np.int64)
    if ell == 1:
        psi[:] = 0
    else:
        base = derive_int(seed, PARTITION)
        for v in range(n):
            psi[v] = derive(base, v).integers(0, ell)

    # round 1: tell every neighbor
    net = LocalNetwork(g)
    e = g.edges
    src = np.concatenate([e[:, 0], e[:, 1]])
    dst = np.concatenate([e[:, 1], e[:, 0]])
    inbox = net.exchange(Message(src, dst, psi[src], ceil_log2(ell)))

    # each node keeps the neighbors that reported its own block
    keep = inbox.payload == psi[inbox.dst]
    a, c = inbox.src[keep], inbox.dst[keep]
    lower = a < c
    block_graph = Graph(n, np.stack([a[lower], c[lower]], axis=1))
    part = VertexPartition(psi, ell, seed)
    parts = []
    sub_rounds = 0
    for blk in blocks(block_graph, part):
        if blk.graph.n == 0:
            continue
        col, r = cfg.subroutine(blk.graph, b, cfg.t, n)
        if not verify_proper(blk.graph, col):
            raise ParameterError("block subroutine returned an improper coloring")
        sub_rounds = max(sub_rounds, int(r))
        parts.append((blk.vertices, Coloring(col.colors, np.full(blk.graph.n, blk.index))))
    coloring = Coloring.assemble(n, parts) if n else Coloring(np.zeros(0, np.int64))
    return LocalResult(coloring, 2 + sub_rounds, ell, b, s, k, sub_rounds, net)

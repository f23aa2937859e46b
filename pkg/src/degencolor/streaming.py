"""One-pass graph coloring over turnstile and insertion-only edge streams.

The driver runs one guess per power of two ``k = 2, 4, ... <= 2n``.  Each
guess partitions the vertices with its own random map ``psi`` and feeds
only psi-monochromatic updates into a sparse-recovery sketch and an l0
sketch.  After the pass, a guess aborts when the l0 estimate exceeds
``5s/4``; otherwise its sketch is decoded and the recovered blocks are
greedy-colored with disjoint palettes.  The answer comes from the smallest
guess that neither aborts nor fails to decode.

Two guesses whose partitions are both trivial (one block) and whose sketch
seeds coincide perform the same computation, so they share one sketch
instance.  Sketch randomness is keyed by the block count for that reason.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import numpy as np

from . import _kernels as K
from .errors import AllRunsAborted, ParameterError, StreamFormatError
from .generators import unflatten_pairs
from .graph import Coloring, Graph
from .ldp import LdpParams, VertexPartition, _ell, blocks, color_blocks, log2n, partition_from_seed
from .rng import PARTITION, SR_HASH, derive_int
from .sketches import L0Sketch, SparseRecoverySketch, DECODE_FAILED

DEFAULT_BATCH = 1 << 16
SEED_BITS = 64


@dataclass(frozen=True)
class UpdateToken:
    u: int
    v: int
    c: int


class StreamSource:
    """A consume-once stream of update batches ``(u, v, c)``.

    Iterating twice raises, so a consumer cannot look back at past tokens.
    """

    def __init__(self, batches: Iterable[tuple[np.ndarray, np.ndarray, np.ndarray]]):
        self._batches = iter(batches)
        self._used = False

    def __iter__(self) -> Iterator[tuple[np.ndarray, np.ndarray, np.ndarray]]:
        if self._used:
            raise RuntimeError("stream already consumed")
        self._used = True
        for u, v, c in self._batches:
            yield (np.ascontiguousarray(u, dtype=np.int64),
                   np.ascontiguousarray(v, dtype=np.int64),
                   np.ascontiguousarray(c, dtype=np.int64))

    def tokens(self) -> Iterator[UpdateToken]:
        for u, v, c in self:
            for a, b, s in zip(u.tolist(), v.tolist(), c.tolist()):
                yield UpdateToken(a, b, s)

    @classmethod
    def from_arrays(cls, u, v, c, batch_size: int = DEFAULT_BATCH) -> "StreamSource":
        u = np.asarray(u, dtype=np.int64)
        v = np.asarray(v, dtype=np.int64)
        c = np.asarray(c, dtype=np.int64)

        def gen():
            for a in range(0, u.shape[0], batch_size):
                yield u[a:a + batch_size], v[a:a + batch_size], c[a:a + batch_size]
        return cls(gen())

    @classmethod
    def from_tokens(cls, tokens: Iterable, batch_size: int = DEFAULT_BATCH) -> "StreamSource":
        def gen():
            buf = []
            for tok in tokens:
                if isinstance(tok, UpdateToken):
                    tok = (tok.u, tok.v, tok.c)
                buf.append(tok)
                if len(buf) == batch_size:
                    a = np.asarray(buf, dtype=np.int64)
                    yield a[:, 0], a[:, 1], a[:, 2]
                    buf = []
            if buf:
                a = np.asarray(buf, dtype=np.int64)
                yield a[:, 0], a[:, 1], a[:, 2]
        return cls(gen())


# -- stream files ----------------------------------------------------------

def _parse_lines(lines, mode: str, multigraph: bool, n: int | None, max_mult: int,
                 batch_size: int):
    live: dict[tuple[int, int], int] = {}
    bu, bv, bc = [], [], []
    for lineno, raw in enumerate(lines, 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 3:
            raise StreamFormatError("expected 'u v +' or 'u v -'", lineno)
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise StreamFormatError("vertex ids must be integers", lineno) from None
        if parts[2] not in ("+", "-"):
            raise StreamFormatError(f"bad sign {parts[2]!r}", lineno)
        c = 1 if parts[2] == "+" else -1
        if u < 0 or v < 0 or (n is not None and max(u, v) >= n):
            raise StreamFormatError("vertex id out of range", lineno)
        if u == v:
            raise StreamFormatError("self-loop", lineno)
        key = (u, v) if u < v else (v, u)
        x = live.get(key, 0) + c
        if mode == "insertion":
            if c < 0:
                raise StreamFormatError("deletion in an insertion-only stream", lineno)
            if x > 1:
                raise StreamFormatError("edge inserted twice", lineno)
        elif not multigraph:
            if x > 1:
                raise StreamFormatError("edge multiplicity would exceed 1", lineno)
            if x < 0:
                raise StreamFormatError("deletion of an absent edge", lineno)
        elif abs(x) > max_mult:
            raise StreamFormatError("edge multiplicity out of range", lineno)
        if x:
            live[key] = x
        else:
            live.pop(key, None)
        bu.append(u)
        bv.append(v)
        bc.append(c)
        if len(bu) == batch_size:
            yield np.array(bu), np.array(bv), np.array(bc)
            bu, bv, bc = [], [], []
    if bu:
        yield np.array(bu), np.array(bv), np.array(bc)


def replay_file(path, mode: str = "turnstile", multigraph: bool = False,
                n: int | None = None, max_multiplicity: int = 1 << 20,
                batch_size: int = DEFAULT_BATCH) -> StreamSource:
    """Lazily parse a stream file (or an open text stream) into a source.

    Lines are ``u v +`` or ``u v -``; blank lines and ``#`` comments are
    skipped.  Multiplicities are validated online: insertion mode forbids
    deletions and repeated insertions, plain turnstile mode keeps every
    multiplicity in {0, 1}, and ``multigraph`` allows any multiplicity up
    to ``max_multiplicity`` in absolute value.  The check keeps one counter
    per live pair; it belongs to input validation, not to the algorithm.
    """
    if mode not in ("turnstile", "insertion"):
        raise ParameterError(f"unknown stream mode {mode!r}")

    def gen():
        if hasattr(path, "read"):
            yield from _parse_lines(path, mode, multigraph, n, max_multiplicity, batch_size)
        else:
            with open(path, "r") as fh:
                yield from _parse_lines(fh, mode, multigraph, n, max_multiplicity, batch_size)
    return StreamSource(gen())


def write_stream(path, u, v, c) -> None:
    with open(path, "w") as fh:
        for a, b, s in zip(np.asarray(u).tolist(), np.asarray(v).tolist(), np.asarray(c).tolist()):
            fh.write(f"{a} {b} {'+' if s > 0 else '-'}\n")


# -- the guess ladder ------------------------------------------------------

def guess_ladder(n: int) -> list[int]:
    """Powers of two from 2 up to the largest one not above ``2n``."""
    out = []
    k = 2
    while k <= max(2 * n, 2):
        out.append(k)
        k *= 2
    return out


def stream_sparsity(n: int, epsilon: float) -> int:
    return max(1, math.ceil(epsilon ** -2 * n * log2n(n)))


def run_params(n: int, k: int, s: int) -> LdpParams:
    # the ladder may overshoot n; a guess above n says nothing more than n
    kk = min(k, max(n, 1))
    return LdpParams(n, k, s, _ell(n, kk, s))


@dataclass
class SpaceLedger:
    bits_per_run: dict = field(default_factory=dict)
    resident_bits: int = 0

    @property
    def total_bits(self) -> int:
        return int(sum(self.bits_per_run.values()))

    def as_dict(self) -> dict:
        return {"bits_per_run": {str(k): int(b) for k, b in self.bits_per_run.items()},
                "total_bits": self.total_bits, "resident_bits": int(self.resident_bits)}


@dataclass
class OpCounter:
    """Work done per token, counted in primitive steps."""

    tokens: int = 0
    filter_checks: int = 0
    cell_updates: int = 0

    def per_token(self) -> float:
        return (self.filter_checks + self.cell_updates) / max(self.tokens, 1)


@dataclass
class GuessRun:
    k: int
    params: LdpParams
    psi_seed: int
    partition: VertexPartition = field(repr=False)
    instance: int = -1
    l0_estimate: int | None = None
    mono_tokens: int = 0
    stored_edges: int = 0
    aborted: bool = False
    decode_failed: bool = False
    chosen: bool = False
    bits: int = 0

    @property
    def status(self) -> str:
        if self.aborted:
            return "aborted"
        if self.decode_failed:
            return "decode-failed"
        if self.chosen:
            return "chosen"
        return "ok"


@dataclass
class StreamResult:
    coloring: Coloring
    ledger: SpaceLedger
    chosen_k: int
    runs: list
    counter: OpCounter
    s: int

    def __iter__(self):
        return iter((self.coloring, self.ledger, self.chosen_k))

    @property
    def chosen_run(self) -> GuessRun:
        return next(r for r in self.runs if r.k == self.chosen_k)


class _TurnstileInstance:
    def __init__(self, n, s, psi, sketch_seed, gamma, delta):
        self.psi = np.ascontiguousarray(psi, dtype=np.int64)
        self.sr = SparseRecoverySketch(2 * s, n, sketch_seed)
        self.l0 = L0Sketch(gamma, delta, n, sketch_seed)
        self.mono = 0
        self._tables = self.sr.tables()

    def absorb(self, u, v, c, n):
        lo, hi = self._tables
        sr, l0 = self.sr, self.l0
        got = K.absorb_turnstile(u, v, c, self.psi, n, sr.cells, sr.ha, sr.hb, sr.buckets,
                                 lo, hi, l0.cells, l0.hp, l0.nbuckets, l0.top)
        self.mono += got
        return got

    def bits(self) -> int:
        return 8 * (self.sr.nbytes_serialized() + self.l0.nbytes_serialized()) + SEED_BITS


class _InsertionInstance:
    def __init__(self, s, psi):
        self.psi = np.ascontiguousarray(psi, dtype=np.int64)
        self.limit = s
        self.u = np.empty(min(s, 1 << 12), dtype=np.int64)
        self.v = np.empty_like(self.u)
        self.fill = 0
        self.peak = 0
        self.aborted = False

    def absorb(self, u, v):
        if self.aborted:
            return 0
        mask = self.psi[u] == self.psi[v]
        got = int(mask.sum())
        if self.fill + got > self.limit:
            # more than s edges: give up and drop what was stored
            self.aborted = True
            self.u = self.v = np.empty(0, dtype=np.int64)
            self.fill = 0
            return got
        if self.fill + got > self.u.shape[0]:
            size = min(max(self.fill + got, 2 * self.u.shape[0]), self.limit)
            self.u = np.resize(self.u, size)
            self.v = np.resize(self.v, size)
        self.u[self.fill:self.fill + got] = u[mask]
        self.v[self.fill:self.fill + got] = v[mask]
        self.fill += got
        self.peak = max(self.peak, self.fill)
        return got


def _build_runs(n: int, s: int, seed: int):
    runs = []
    for k in guess_ladder(n):
        params = run_params(n, k, s)
        psi_seed = derive_int(seed, PARTITION, k)
        part = partition_from_seed(n, params.ell, psi_seed)
        runs.append(GuessRun(k=k, params=params, psi_seed=psi_seed, partition=part))
    return runs


def _instance_key(run: GuessRun):
    # a one-block partition does not depend on its seed
    return (run.params.ell, None if run.params.ell == 1 else run.psi_seed)


def _check_batch(u, v, c, n):
    if u.shape[0] == 0:
        return
    if min(u.min(), v.min()) < 0 or max(u.max(), v.max()) >= n:
        raise StreamFormatError("vertex id out of range")
    if np.any(u == v):
        raise StreamFormatError("self-loop in stream")
    if np.any((c != 1) & (c != -1)):
        raise StreamFormatError("update values must be +1 or -1")


def stream_color(source: StreamSource, n: int, epsilon: float, seed: int,
                 gamma: float = 0.25, delta: float | None = None,
                 multigraph: bool = False) -> StreamResult:
    """Color the graph described by a turnstile stream in one pass.

    Returns a :class:`StreamResult`, which also unpacks as
    ``(coloring, ledger, chosen_k)``.  Raises :class:`AllRunsAborted` when
    no guess yields a decodable sketch.
    """
    if not 0 < epsilon <= 1:
        raise ParameterError("epsilon must lie in (0, 1]")
    n = int(n)
    if n == 0:
        return StreamResult(Coloring(np.zeros(0, np.int64)), SpaceLedger(), 2, [], OpCounter(), 1)
    s = stream_sparsity(n, epsilon)
    delta = 1.0 / max(n, 2) if delta is None else delta
    runs = _build_runs(n, s, seed)
    instances: dict = {}
    for run in runs:
        key = _instance_key(run)
        if key not in instances:
            sketch_seed = derive_int(seed, SR_HASH, run.params.ell)
            instances[key] = _TurnstileInstance(n, s, run.partition.psi, sketch_seed, gamma, delta)
        run.instance = list(instances).index(key)
    inst_list = list(instances.values())
    counter = OpCounter()
    for u, v, c in source:
        _check_batch(u, v, c, n)
        counter.tokens += u.shape[0]
        for inst in inst_list:
            got = inst.absorb(u, v, c, n)
            counter.filter_checks += u.shape[0]
            counter.cell_updates += got * (inst.sr.rows + 1)

    ledger = SpaceLedger()
    for inst in inst_list:
        ledger.resident_bits += inst.bits()
    chosen = None
    coloring = None
    for run in runs:
        inst = inst_list[run.instance]
        run.mono_tokens = inst.mono
        run.bits = inst.bits()
        ledger.bits_per_run[run.k] = run.bits
        run.l0_estimate = inst.l0.estimate()
        run.aborted = 4 * run.l0_estimate > 5 * s
        if chosen is not None or run.aborted:
            continue
        decoded = inst.sr.decode_arrays()
        if decoded is DECODE_FAILED:
            run.decode_failed = True
            continue
        flat, val = decoded
        flat = flat[val != 0]
        a, b = unflatten_pairs(flat, n)
        g_mono = Graph._from_canonical(n, a, b)
        run.stored_edges = g_mono.m
        coloring = color_blocks(n, blocks(g_mono, run.partition))
        run.chosen = True
        chosen = run
    if chosen is None:
        raise AllRunsAborted(runs)
    return StreamResult(coloring, ledger, chosen.k, runs, counter, s)


def stream_color_insertion_only(source: StreamSource, n: int, epsilon: float,
                                seed: int) -> StreamResult:
    """Insertion-only variant: keep monochromatic edges verbatim.

    A guess aborts as soon as it holds more than ``s`` edges.  Partitions
    match :func:`stream_color` under the same seed, so both paths see
    identical blocks.
    """
    if not 0 < epsilon <= 1:
        raise ParameterError("epsilon must lie in (0, 1]")
    n = int(n)
    if n == 0:
        return StreamResult(Coloring(np.zeros(0, np.int64)), SpaceLedger(), 2, [], OpCounter(), 1)
    s = stream_sparsity(n, epsilon)
    runs = _build_runs(n, s, seed)
    instances: dict = {}
    for run in runs:
        key = _instance_key(run)
        if key not in instances:
            instances[key] = _InsertionInstance(s, run.partition.psi)
        run.instance = list(instances).index(key)
    inst_list = list(instances.values())
    counter = OpCounter()
    for u, v, c in source:
        _check_batch(u, v, c, n)
        if np.any(c != 1):
            raise StreamFormatError("deletion in an insertion-only stream")
        counter.tokens += u.shape[0]
        for inst in inst_list:
            got = inst.absorb(u, v)
            counter.filter_checks += u.shape[0]
            counter.cell_updates += got

    width = 2 * max(1, math.ceil(log2n(n)))
    ledger = SpaceLedger()
    for inst in inst_list:
        ledger.resident_bits += inst.peak * width + SEED_BITS
    chosen = None
    coloring = None
    for run in runs:
        inst = inst_list[run.instance]
        run.bits = inst.peak * width + SEED_BITS
        ledger.bits_per_run[run.k] = run.bits
        run.aborted = inst.aborted
        run.stored_edges = inst.fill
        run.mono_tokens = inst.peak
        if chosen is not None or run.aborted:
            continue
        g_mono = Graph(n, np.stack([inst.u[:inst.fill], inst.v[:inst.fill]], axis=1))
        coloring = color_blocks(n, blocks(g_mono, run.partition))
        run.chosen = True
        chosen = run
    if chosen is None:
        raise AllRunsAborted(runs)
    return StreamResult(coloring, ledger, chosen.k, runs, counter, s)

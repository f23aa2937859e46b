"""Linear sketches over the edge-multiplicity vector.

Both sketches index a pair ``{u, v}`` (``u < v``) by its row-major
position in the strict upper triangle, ``flat in [0, n(n-1)/2)``.

:class:`SparseRecoverySketch` is a grid of 1-sparse detectors
(count, index sum, fingerprint) decoded by peeling;
:class:`L0Sketch` estimates the support size from geometric subsampling
levels with one occupancy bucket array per level.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from .errors import ParameterError
from .rng import L0_HASH, SR_HASH, derive

P61 = K.MERSENNE61

_SR_MAGIC = b"DCSR"
_L0_MAGIC = b"DCL0"
_VERSION = 1


def universe_size(n: int) -> int:
    return n * (n - 1) // 2


@dataclass(frozen=True)
class EdgeIndex:
    u: int
    v: int
    flat: int

    @classmethod
    def of(cls, u: int, v: int, n: int) -> "EdgeIndex":
        if u == v or not (0 <= u < n and 0 <= v < n):
            raise ParameterError("not a vertex pair")
        if u > v:
            u, v = v, u
        return cls(u, v, u * n - u * (u + 1) // 2 + (v - u - 1))

    @classmethod
    def from_flat(cls, flat: int, n: int) -> "EdgeIndex":
        from .generators import unflatten_pairs
        u, v = unflatten_pairs(np.array([flat]), n)
        return cls(int(u[0]), int(v[0]), int(flat))


def flat_index(u: np.ndarray, v: np.ndarray, n: int) -> np.ndarray:
    u = np.asarray(u, dtype=np.int64)
    v = np.asarray(v, dtype=np.int64)
    a = np.minimum(u, v)
    b = np.maximum(u, v)
    return a * n - a * (a + 1) // 2 + (b - a - 1)


class _DecodeFailed:
    """Marker returned when sparse recovery cannot certify its answer."""

    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __bool__(self):
        return False

    def __repr__(self):
        return "DECODE_FAILED"


DECODE_FAILED = _DecodeFailed()


def _field_elements(rng: np.random.Generator, count: int, low: int = 0) -> np.ndarray:
    return rng.integers(low, P61, size=count, dtype=np.uint64)


def sr_shape(t: int, n: int) -> tuple[int, int]:
    """(rows, buckets per row) for sparsity ``t`` on ``n`` vertices.

    Three rows of ``ceil(t/2)`` buckets leave 1.5 cells per stored entry,
    comfortably above the peeling threshold of random 3-uniform
    hypergraphs; small ``t`` get extra rows so the failure chance still
    falls polynomially in ``n``.
    """
    b = max((t + 1) // 2, 64)
    r = max(3, math.ceil(3 * math.log2(max(n, 2)) / math.log2(b)))
    return r, b


class SparseRecoverySketch:
    """Exact t-sparse recovery over the pair universe of an n-vertex graph."""

    def __init__(self, t: int, n: int, seed: int, rows: int | None = None,
                 buckets: int | None = None):
        if t < 1:
            raise ParameterError("sparsity t must be positive")
        if n < 2:
            n = 2
        self.t = int(t)
        self.n = int(n)
        self.seed = int(seed)
        r, b = sr_shape(self.t, self.n)
        self.rows = int(rows or r)
        self.buckets = int(buckets or b)
        rng = derive(self.seed, SR_HASH)
        self.ha = _field_elements(rng, self.rows, 1)
        self.hb = _field_elements(rng, self.rows)
        self.rho = int(_field_elements(rng, 1, 2)[0])
        self.cells = np.zeros((self.rows * self.buckets, 3), dtype=np.int64)
        self._tables = None

    @property
    def universe(self) -> int:
        return universe_size(self.n)

    def tables(self):
        if self._tables is None:
            lo = K.power_table(np.uint64(self.rho), 1 << 16)
            hi_base = K.field_pow(np.uint64(self.rho), 1 << 16)
            hi = K.power_table(hi_base, (self.universe >> 16) + 1)
            self._tables = (lo, hi)
        return self._tables

    def update(self, u: int, v: int, c: int) -> None:
        e = EdgeIndex.of(u, v, self.n)
        self.update_flat(np.array([e.flat]), np.array([c]))

    def update_flat(self, flat: np.ndarray, c: np.ndarray) -> None:
        flat = np.ascontiguousarray(flat, dtype=np.int64)
        c = np.ascontiguousarray(c, dtype=np.int64)
        if flat.size and (flat.min() < 0 or flat.max() >= self.universe):
            raise ParameterError("pair index out of range")
        lo, hi = self.tables()
        K.sr_update(self.cells, self.ha, self.hb, self.buckets, lo, hi, flat, c)

    def decode(self):
        """Recovered ``{flat: value}`` map, or :data:`DECODE_FAILED`.

        Supports larger than ``t`` are reported as failures even when
        peeling happens to succeed.  Every returned entry passed a
        fingerprint check and the residual sketch is exactly zero, so a returned map is the true vector except
        with probability about ``N / 2**61`` per check.
        """
        lo, hi = self.tables()
        idx, val, found, ok = K.sr_peel(self.cells, self.ha, self.hb, self.buckets,
                                        lo, hi, self.universe)
        if not ok or found > self.t:
            return DECODE_FAILED
        order = np.argsort(idx[:found])
        return dict(zip(idx[:found][order].tolist(), val[:found][order].tolist()))

    def decode_arrays(self):
        """Like :meth:`decode` but returns sorted ``(flat, value)`` arrays."""
        lo, hi = self.tables()
        idx, val, found, ok = K.sr_peel(self.cells, self.ha, self.hb, self.buckets,
                                        lo, hi, self.universe)
        if not ok or found > self.t:
            return DECODE_FAILED
        order = np.argsort(idx[:found])
        return idx[:found][order], val[:found][order]

    def _check_compatible(self, other: "SparseRecoverySketch") -> None:
        if (self.n, self.t, self.seed, self.rows, self.buckets) != \
                (other.n, other.t, other.seed, other.rows, other.buckets):
            raise ParameterError("sketches differ in shape or seed")

    def merge(self, other: "SparseRecoverySketch") -> "SparseRecoverySketch":
        self._check_compatible(other)
        out = self.copy()
        out.cells[:, :2] += other.cells[:, :2]
        fp = out.cells[:, 2].astype(np.uint64) + other.cells[:, 2].astype(np.uint64)
        fp = np.where(fp >= np.uint64(P61), fp - np.uint64(P61), fp)
        out.cells[:, 2] = fp.astype(np.int64)
        return out

    def copy(self) -> "SparseRecoverySketch":
        out = object.__new__(SparseRecoverySketch)
        out.__dict__.update(self.__dict__)
        out.cells = self.cells.copy()
        return out

    def is_zero(self) -> bool:
        return not self.cells.any()

    def state_equal(self, other: "SparseRecoverySketch") -> bool:
        return np.array_equal(self.cells, other.cells)

    def to_bytes(self) -> bytes:
        head = struct.pack("<4sHqqqqqq", _SR_MAGIC, _VERSION, self.n, self.t, self.seed,
                           self.rows, self.buckets, self.rho)
        return (head + self.ha.astype("<u8").tobytes() + self.hb.astype("<u8").tobytes()
                + self.cells.astype("<i8").tobytes())

    @classmethod
    def from_bytes(cls, blob: bytes) -> "SparseRecoverySketch":
        fmt = "<4sHqqqqqq"
        size = struct.calcsize(fmt)
        magic, ver, n, t, seed, rows, buckets, rho = struct.unpack(fmt, blob[:size])
        if magic != _SR_MAGIC or ver != _VERSION:
            raise ParameterError("not a sparse recovery sketch blob")
        sk = cls(t, n, seed, rows, buckets)
        off = size
        sk.ha = np.frombuffer(blob, "<u8", rows, off).astype(np.uint64)
        off += 8 * rows
        sk.hb = np.frombuffer(blob, "<u8", rows, off).astype(np.uint64)
        off += 8 * rows
        sk.rho = rho
        sk.cells = np.frombuffer(blob, "<i8", rows * buckets * 3, off).reshape(-1, 3).copy()
        return sk

    def nbytes_serialized(self) -> int:
        return struct.calcsize("<4sHqqqqqq") + 16 * self.rows + 24 * self.cells.shape[0]


def sr_new(t: int, n: int, seed: int) -> SparseRecoverySketch:
    return SparseRecoverySketch(t, n, seed)


def sr_update(sk: SparseRecoverySketch, e: EdgeIndex, c: int) -> SparseRecoverySketch:
    if abs(c) != 1:
        raise ParameterError("updates are +1 or -1")
    sk.update_flat(np.array([e.flat]), np.array([c]))
    return sk


def sr_decode(sk: SparseRecoverySketch):
    return sk.decode()


def l0_buckets(gamma: float, delta: float) -> int:
    return 8 * math.ceil(gamma ** -2 * math.log2(1.0 / delta))


class L0Sketch:
    """(1 +- gamma) estimate of the number of nonzero coordinates.

    A coordinate lands on level ``j`` with probability ``2**-(j+1)`` (the
    trailing zeros of a 2-universal hash) and in one of ``B`` buckets of
    that level.  A bucket is occupied when its signed count or its random
    linear fingerprint is nonzero; both vanish for a bucket whose
    coordinates all cancel.  The estimate reads the shallowest union of
    levels whose occupancy is at most ``B/2`` and inverts the balls-in-bins
    occupancy formula.
    """

    def __init__(self, gamma: float, delta: float, n: int, seed: int):
        if not 0 < gamma <= 1:
            raise ParameterError("gamma must lie in (0, 1]")
        if not 0 < delta < 1:
            raise ParameterError("delta must lie in (0, 1)")
        if n < 2:
            n = 2
        self.gamma = float(gamma)
        self.delta = float(delta)
        self.n = int(n)
        self.seed = int(seed)
        self.nbuckets = l0_buckets(self.gamma, self.delta)
        self.levels = max(1, universe_size(self.n)).bit_length() + 1
        rng = derive(self.seed, L0_HASH)
        hp = _field_elements(rng, 6)
        hp[0] = hp[0] % np.uint64(P61 - 1) + np.uint64(1)
        hp[2] = hp[2] % np.uint64(P61 - 1) + np.uint64(1)
        hp[4] = hp[4] % np.uint64(P61 - 1) + np.uint64(1)
        self.hp = hp
        self.cells = np.zeros((self.levels * self.nbuckets, 2), dtype=np.int64)

    @property
    def top(self) -> int:
        return self.levels - 1

    def update(self, u: int, v: int, c: int) -> None:
        e = EdgeIndex.of(u, v, self.n)
        self.update_flat(np.array([e.flat]), np.array([c]))

    def update_flat(self, flat: np.ndarray, c: np.ndarray) -> None:
        flat = np.ascontiguousarray(flat, dtype=np.int64)
        c = np.ascontiguousarray(c, dtype=np.int64)
        K.l0_update(self.cells, self.hp, self.nbuckets, self.top, flat, c)

    def occupancy(self) -> np.ndarray:
        return K.l0_suffix_occupancy(self.cells, self.nbuckets, self.levels)

    def estimate(self) -> int:
        occ = self.occupancy()
        B = self.nbuckets
        if occ[0] == 0:
            return 0
        for j in range(self.levels):
            o = int(occ[j])
            if o <= B // 2:
                if o == 0:
                    # everything sits in shallower levels; fall back one level
                    j = max(j - 1, 0)
                    o = int(occ[j])
                    o = min(o, B - 1)
                balls = -B * math.log1p(-o / B)
                return int(round(balls * (1 << j)))
        return int(round(-B * math.log1p(-min(int(occ[-1]), B - 1) / B) * (1 << (self.levels - 1))))

    def merge(self, other: "L0Sketch") -> "L0Sketch":
        if (self.n, self.gamma, self.delta, self.seed) != (other.n, other.gamma, other.delta, other.seed):
            raise ParameterError("sketches differ in shape or seed")
        out = self.copy()
        out.cells[:, 0] += other.cells[:, 0]
        fp = out.cells[:, 1].astype(np.uint64) + other.cells[:, 1].astype(np.uint64)
        fp = np.where(fp >= np.uint64(P61), fp - np.uint64(P61), fp)
        out.cells[:, 1] = fp.astype(np.int64)
        return out

    def copy(self) -> "L0Sketch":
        out = object.__new__(L0Sketch)
        out.__dict__.update(self.__dict__)
        out.cells = self.cells.copy()
        return out

    def state_equal(self, other: "L0Sketch") -> bool:
        return np.array_equal(self.cells, other.cells)

    def is_zero(self) -> bool:
        return not self.cells.any()

    def to_bytes(self) -> bytes:
        head = struct.pack("<4sHqddqqq", _L0_MAGIC, _VERSION, self.n, self.gamma, self.delta,
                           self.seed, self.levels, self.nbuckets)
        return head + self.hp.astype("<u8").tobytes() + self.cells.astype("<i8").tobytes()

    @classmethod
    def from_bytes(cls, blob: bytes) -> "L0Sketch":
        fmt = "<4sHqddqqq"
        size = struct.calcsize(fmt)
        magic, ver, n, gamma, delta, seed, levels, nbuckets = struct.unpack(fmt, blob[:size])
        if magic != _L0_MAGIC or ver != _VERSION:
            raise ParameterError("not an l0 sketch blob")
        sk = cls(gamma, delta, n, seed)
        sk.hp = np.frombuffer(blob, "<u8", 6, size).astype(np.uint64)
        sk.cells = np.frombuffer(blob, "<i8", levels * nbuckets * 2, size + 48).reshape(-1, 2).copy()
        return sk

    def nbytes_serialized(self) -> int:
        return struct.calcsize("<4sHqddqqq") + 48 + 16 * self.cells.shape[0]


def l0_new(gamma: float, delta: float, n: int, seed: int) -> L0Sketch:
    return L0Sketch(gamma, delta, n, seed)


def l0_update(sk: L0Sketch, e: EdgeIndex, c: int) -> L0Sketch:
    sk.update_flat(np.array([e.flat]), np.array([c]))
    return sk


def l0_estimate(sk: L0Sketch) -> int:
    return sk.estimate()

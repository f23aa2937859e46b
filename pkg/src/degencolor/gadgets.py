"""Hard instances for low-degeneracy coloring, with checkable certificates.

Vertex layouts are fixed so certificates can name concrete ids.  Composite
gadgets place their groups consecutively (``L``, ``R``, then the rest, as
listed per generator) and a blow-up by ``lam`` maps vertex ``v`` to the
copies ``v*lam .. v*lam + lam - 1``.

All ``(y, z)`` and ``(i, j)`` indices are 1-based; vertex ids are 0-based.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import ParameterError, ResourceLimitError
from .graph import Graph, exact_chromatic_number, exact_degeneracy, list_coloring_solve
from .query import QueryOracle
from .rng import TRIAL, derive


@dataclass(frozen=True)
class BitMatrix:
    bits: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.bits, dtype=bool)
        if b.ndim != 2 or b.shape[0] != b.shape[1]:
            raise ParameterError("bit matrix must be square")
        b = b.copy()
        b.flags.writeable = False
        object.__setattr__(self, "bits", b)

    @property
    def p(self) -> int:
        return self.bits.shape[0]

    def __getitem__(self, ij) -> bool:
        i, j = ij
        return bool(self.bits[i - 1, j - 1])

    def complement(self) -> "BitMatrix":
        return BitMatrix(~self.bits)

    @classmethod
    def random(cls, p: int, seed: int) -> "BitMatrix":
        return cls(derive(seed, TRIAL, p).random((p, p)) < 0.5)


@dataclass
class GadgetCertificate:
    """Claims about a gadget.

    ``expected_kappa`` is an int or an inclusive ``(lo, hi)`` interval.
    ``witness`` is a clique (list of ids) or an ordering, and ``fields``
    records named vertex ids for downstream checks.
    """

    expected_kappa: int | tuple | None = None
    expected_chi_lower: int | None = None
    expected_chi: int | None = None
    witness: list | None = None
    witness_kind: str | None = None
    fields: dict = field(default_factory=dict)

    def check(self, g: Graph, chi_limit_n: int = 20) -> dict:
        """Validate every claim with exact oracles; chromatic claims need small ``g``."""
        out = {}
        if self.expected_kappa is not None:
            k = exact_degeneracy(g)
            lo, hi = (self.expected_kappa, self.expected_kappa) \
                if isinstance(self.expected_kappa, int) else self.expected_kappa
            out["kappa"] = lo <= k <= hi
        if self.witness_kind == "clique" and self.witness is not None:
            w = list(self.witness)
            out["clique"] = all(g.has_edge(a, b) for i, a in enumerate(w) for b in w[i + 1:])
        if self.expected_chi_lower is not None:
            if self.witness_kind == "clique":
                out["chi_lower"] = out["clique"] and len(self.witness) >= self.expected_chi_lower
            elif g.n <= chi_limit_n:
                out["chi_lower"] = exact_chromatic_number(g, chi_limit_n) >= self.expected_chi_lower
        if self.expected_chi is not None and g.n <= chi_limit_n:
            out["chi"] = exact_chromatic_number(g, chi_limit_n) == self.expected_chi
        return out

    def as_dict(self) -> dict:
        kappa = list(self.expected_kappa) if isinstance(self.expected_kappa, tuple) \
            else self.expected_kappa
        return {"expected_kappa": kappa, "expected_chi_lower": self.expected_chi_lower,
                "expected_chi": self.expected_chi, "witness_kind": self.witness_kind,
                "witness": None if self.witness is None else [int(v) for v in self.witness],
                "fields": self.fields}


def _copies(vertices: Sequence[int], lam: int) -> list:
    return [v * lam + c for v in vertices for c in range(lam)]


def blow_up(g: Graph, lam: int) -> Graph:
    """Lexicographic product ``g[K_lam]``; vertex ``v`` becomes ``v*lam + c``."""
    if lam < 1:
        raise ParameterError("blow-up factor must be at least 1")
    if lam == 1:
        return g
    cu, cv = np.triu_indices(lam, 1)
    base = np.arange(g.n, dtype=np.int64) * lam
    inner_u = (base[:, None] + cu[None, :]).ravel()
    inner_v = (base[:, None] + cv[None, :]).ravel()
    e = g.edges
    a, b = np.meshgrid(np.arange(lam), np.arange(lam), indexing="ij")
    cross_u = (e[:, 0, None] * lam + a.ravel()[None, :]).ravel()
    cross_v = (e[:, 1, None] * lam + b.ravel()[None, :]).ravel()
    u = np.concatenate([inner_u, cross_u])
    v = np.concatenate([inner_v, cross_v])
    return Graph(g.n * lam, np.stack([u, v], axis=1))


def bipartite_gadget(x: BitMatrix, left: Sequence[int], right: Sequence[int]) -> list:
    """Edges ``{left[i], right[j]}`` for every set bit ``x_ij``."""
    if len(left) != x.p or len(right) != x.p:
        raise ParameterError("vertex lists must have length p")
    if set(left) & set(right):
        raise ParameterError("vertex lists must be disjoint")
    ii, jj = np.nonzero(x.bits)
    return [(int(left[i]), int(right[j])) for i, j in zip(ii.tolist(), jj.tolist())]


def _check_index(p: int, y: int, z: int) -> None:
    if not (1 <= y <= p and 1 <= z <= p):
        raise ParameterError(f"index ({y}, {z}) outside [1, {p}]^2")


def _clique_edges(vs: Sequence[int], skip=()) -> list:
    skip = {frozenset(s) for s in skip}
    return [(a, b) for i, a in enumerate(vs) for b in vs[i + 1:] if frozenset((a, b)) not in skip]


def dist_instance(p: int, lam: int, x: BitMatrix, y: int, z: int):
    """Distinguishing instance on ``3 * lam * p`` vertices.

    Layout before blow-up: ``L = 0..p-1``, ``R = p..2p-1``, ``C = 2p..3p-1``.
    When ``x_yz = 1`` the graph has a ``(p+2) lam`` clique; otherwise its
    degeneracy is at most ``(p+1) lam - 1``.
    """
    if x.p != p:
        raise ParameterError("matrix size does not match p")
    _check_index(p, y, z)
    L, R, C = list(range(p)), list(range(p, 2 * p)), list(range(2 * p, 3 * p))
    ly, rz = L[y - 1], R[z - 1]
    edges = bipartite_gadget(x, L, R) + _clique_edges(C + [ly, rz], skip=[(ly, rz)])
    g = blow_up(Graph(3 * p, edges), lam)
    layout = {"L": _copies(L, lam), "R": _copies(R, lam), "C": _copies(C, lam),
              "l_y": _copies([ly], lam), "r_z": _copies([rz], lam), "bit": x[y, z]}
    if x[y, z]:
        cert = GadgetCertificate(expected_chi_lower=(p + 2) * lam,
                                 witness=_copies(C + [ly, rz], lam), witness_kind="clique",
                                 fields=layout)
    else:
        rest = [v for v in L + R if v not in (ly, rz)]
        cert = GadgetCertificate(expected_kappa=(0, (p + 1) * lam - 1),
                                 witness=_copies(rest + [ly, rz] + C, lam),
                                 witness_kind="ordering", fields=layout)
    return g, cert


def known_kappa_instance(p: int, lam: int, x: BitMatrix, y: int, z: int):
    """Instance on ``5 * lam * p`` vertices whose degeneracy is ``(p+3) lam - 1``.

    Layout before blow-up: ``L``, ``R``, ``Lbar``, ``Rbar``, ``C``, each of
    size ``p`` in that order.  ``x`` sits on ``L x R`` and its complement on
    ``Lbar x Rbar``; ``S = C + {l, r, lbar, rbar}`` is a clique minus the two
    designated pairs, exactly one of which is an edge.
    """
    if x.p != p:
        raise ParameterError("matrix size does not match p")
    _check_index(p, y, z)
    groups = [list(range(i * p, (i + 1) * p)) for i in range(5)]
    L, R, Lb, Rb, C = groups
    l, r, lb, rb = L[y - 1], R[z - 1], Lb[y - 1], Rb[z - 1]
    S = C + [l, r, lb, rb]
    edges = (bipartite_gadget(x, L, R) + bipartite_gadget(x.complement(), Lb, Rb)
             + _clique_edges(S, skip=[(l, r), (lb, rb)]))
    g = blow_up(Graph(5 * p, edges), lam)
    bit = x[y, z]
    pair = (lb, rb) if bit else (l, r)
    clique = C + [l, r, lb] if bit else C + [l, lb, rb]
    fields = {"L": _copies(L, lam), "R": _copies(R, lam), "Lbar": _copies(Lb, lam),
              "Rbar": _copies(Rb, lam), "C": _copies(C, lam), "S": _copies(S, lam),
              "repeat_pair": [_copies([pair[0]], lam), _copies([pair[1]], lam)], "bit": bit}
    cert = GadgetCertificate(expected_kappa=(p + 3) * lam - 1, witness=_copies(clique, lam),
                             witness_kind="clique", fields=fields)
    return g, cert


def multipass_instance(n: int, h: int, k: int) -> Graph:
    """``K_n`` without the edge ``{h, k}``; its degeneracy is ``n - 2``."""
    if h == k or not (0 <= h < n and 0 <= k < n):
        raise ParameterError("h and k must be distinct vertices")
    return Graph(n, _clique_edges(list(range(n)), skip=[(h, k)]))


# -- query gadgets ------------------------------------------------------------

def _variant(p: int, variant):
    if variant == "H":
        return None
    i, j = variant
    if not 1 <= i < j <= p:
        raise ParameterError(f"variant {variant!r} needs 1 <= i < j <= {p}")
    return int(i), int(j)


def query_gadget(p: int, variant="H"):
    """``H`` or ``H_ij`` on ids ``a_i = i - 1`` (i <= p+1) and ``b_i = p + i``."""
    ij = _variant(p, variant)
    A = list(range(p + 1))
    B = list(range(p + 1, 2 * p + 1))
    if ij is None:
        edges = _clique_edges(A) + _clique_edges(B)
        cert = GadgetCertificate(expected_kappa=p, expected_chi=p + 1, witness=A,
                                 witness_kind="clique", fields={"A": A, "B": B})
        return Graph(2 * p + 1, edges), cert
    i, j = ij
    ai, aj, bi, bj = A[i - 1], A[j - 1], B[i - 1], B[j - 1]
    edges = (_clique_edges(A, skip=[(ai, aj)]) + _clique_edges(B, skip=[(bi, bj)])
             + [(ai, bj), (aj, bi)])
    order = B + [ai] + [a for a in A if a != ai]
    cert = GadgetCertificate(expected_kappa=p - 1, witness=order, witness_kind="ordering",
                             fields={"A": A, "B": B, "i": i, "j": j})
    return Graph(2 * p + 1, edges), cert


class GadgetOracle(QueryOracle):
    """Implicit query gadget answered from the index table, never materialized.

    Base vertices are ``a_1..a_{p+1}`` then ``b_1..b_p``; with ``lam > 1``
    the oracle answers for the blow-up, listing the other copies of a
    vertex first and then the copies of each base neighbor in base order.
    """

    def __init__(self, p: int, variant="H", lam: int = 1):
        if lam < 1:
            raise ParameterError("blow-up factor must be at least 1")
        self.p = int(p)
        self.lam = int(lam)
        self._ij = _variant(p, variant)
        super().__init__((2 * p + 1) * lam)

    def _x(self, i: int, j: int) -> int:
        """The single input bit consulted per answer."""
        if self._ij is None or i == j:
            return 0
        return int((min(i, j), max(i, j)) == self._ij)

    def _side(self, v: int):
        p = self.p
        return ("a", v + 1) if v <= p else ("b", v - p)

    def _base_pair(self, u: int, v: int) -> bool:
        if u == v:
            return False
        (su, i), (sv, j) = self._side(u), self._side(v)
        p = self.p
        if su == "b" and sv == "a":
            su, sv, i, j = sv, su, j, i
        if su == "a" and sv == "a":
            if i == p + 1 or j == p + 1:
                return True
            return not self._x(i, j)
        if su == "a" and sv == "b":
            if i == p + 1:
                return False
            return bool(self._x(i, j))
        return not self._x(i, j)

    def _base_nbr(self, v: int, d: int):
        p = self.p
        side, i = self._side(v)
        if side == "a" and i == p + 1:
            return d - 1 if d <= p else None
        if side == "a" and d == p:
            return p  # a_{p+1}
        if d > p - 1:
            return None
        j = d if d < i else d + 1
        flip = self._x(i, j)
        if side == "a":
            return p + j if flip else j - 1
        return j - 1 if flip else p + j

    def _pair(self, u, v):
        lam = self.lam
        bu, bv = divmod(u, lam)[0], divmod(v, lam)[0]
        if bu == bv:
            return u != v
        return self._base_pair(bu, bv)

    def _nbr(self, u, d):
        lam = self.lam
        bu, cu = divmod(u, lam)
        if d <= lam - 1:
            c = d - 1 if d - 1 < cu else d
            return bu * lam + c
        q, c = divmod(d - lam, lam)
        w = self._base_nbr(bu, q + 1)
        return None if w is None else w * lam + c

    def adjacency_rows(self) -> list:
        """Full adjacency lists in the oracle's own order (uncounted)."""
        rows = []
        for v in range(self.n):
            row = []
            d = 1
            while (w := self._nbr(v, d)) is not None:
                row.append(w)
                d += 1
            rows.append(row)
        return rows


def gadget_oracle(p: int, variant="H", lam: int = 1) -> GadgetOracle:
    return GadgetOracle(p, variant, lam)


# -- random list coloring -------------------------------------------------------

def join_graph(n: int, t: int) -> Graph:
    """``K_t`` joined with an independent set; ``A = 0..t-1``, ``B = t..n-1``."""
    if not 0 < t < n:
        raise ParameterError("need 0 < t < n")
    edges = [(a, v) for a in range(t) for v in range(a + 1, n)]
    return Graph(n, edges)


def rlc_bound(n: int, t: int, r: int) -> Fraction:
    """Exact upper bound ``r^n / (r+1)^(n-t)`` on the list-coloring success rate."""
    return Fraction(r ** n, (r + 1) ** (n - t))


@dataclass
class RlcResult:
    successes: int
    trials: int
    exhausted: int

    @property
    def success_rate(self) -> float:
        used = self.trials - self.exhausted
        return self.successes / used if used else float("nan")

    @property
    def sigma(self) -> float:
        used = self.trials - self.exhausted
        q = self.success_rate
        return math.sqrt(q * (1 - q) / used) if used else float("nan")

    def __float__(self) -> float:
        return self.success_rate


def sample_lists(n: int, ell: int, r: int, rng: np.random.Generator) -> np.ndarray:
    """``r`` distinct colors from ``[ell]`` per vertex by partial Fisher-Yates."""
    out = np.empty((n, r), dtype=np.int64)
    for v in range(n):
        pal = np.arange(ell)
        for i in range(r):
            j = i + int(rng.integers(0, ell - i))
            pal[i], pal[j] = pal[j], pal[i]
        out[v] = pal[:r]
    return out


def rlc_experiment(g: Graph, ell: int, r: int, trials: int, seed: int,
                   node_budget: int = 200_000) -> RlcResult:
    """Monte Carlo estimate of how often random ``r``-lists admit a list coloring."""
    if not 1 <= r <= ell:
        raise ParameterError("need 1 <= r <= ell")
    successes = exhausted = 0
    for trial in range(trials):
        lists = sample_lists(g.n, ell, r, derive(seed, TRIAL, trial))
        try:
            ok = list_coloring_solve(g, [row.tolist() for row in lists], node_budget) is not None
        except ResourceLimitError:
            exhausted += 1
            continue
        successes += ok
    if exhausted:
        warnings.warn(f"{exhausted} of {trials} trials exceeded the solver budget")
    return RlcResult(successes, trials, exhausted)

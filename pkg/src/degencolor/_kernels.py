"""Compiled inner loops.

Everything here works on plain numpy arrays (CSR adjacency, flat cell
arrays) so the public modules can stay readable.  All field arithmetic is
modulo the Mersenne prime 2**61 - 1 and is done in uint64 without 128-bit
intermediates.
"""

import numpy as np
from numba import njit

MERSENNE61 = (1 << 61) - 1

_P = np.uint64(MERSENNE61)
_M31 = np.uint64((1 << 31) - 1)
_M30 = np.uint64((1 << 30) - 1)
_U1 = np.uint64(1)
_U30 = np.uint64(30)
_U31 = np.uint64(31)
_U61 = np.uint64(61)


# -- field arithmetic -------------------------------------------------------

@njit(cache=True, inline="always")
def _reduce(x):
    x = (x & _P) + (x >> _U61)
    x = (x & _P) + (x >> _U61)
    if x >= _P:
        x -= _P
    return x


@njit(cache=True, inline="always")
def mulmod(a, b):
    """a * b mod 2**61 - 1 for a, b < 2**61."""
    a_hi = a >> _U31
    a_lo = a & _M31
    b_hi = b >> _U31
    b_lo = b & _M31
    mid = a_hi * b_lo + a_lo * b_hi
    x = ((a_hi * b_hi) << _U1) + (mid >> _U30) + ((mid & _M30) << _U31) + a_lo * b_lo
    return _reduce(x)


@njit(cache=True, inline="always")
def addmod(a, b):
    x = a + b
    if x >= _P:
        x -= _P
    return x


@njit(cache=True, inline="always")
def signed_to_field(c):
    """Map a signed int64 to its residue mod 2**61 - 1."""
    if c >= 0:
        return np.uint64(c) % _P
    return (_P - (np.uint64(-c) % _P)) % _P


@njit(cache=True, inline="always")
def hash2u(a, b, x):
    """(a*x + b) mod p: a 2-universal family on x < 2**61."""
    return addmod(mulmod(a, np.uint64(x)), b)


@njit(cache=True)
def power_table(base, size):
    base = np.uint64(base)
    out = np.empty(size, dtype=np.uint64)
    acc = np.uint64(1)
    for i in range(size):
        out[i] = acc
        acc = mulmod(acc, base)
    return out


@njit(cache=True)
def field_pow(base, e):
    result = np.uint64(1)
    b = np.uint64(base)
    while e > 0:
        if e & 1:
            result = mulmod(result, b)
        b = mulmod(b, b)
        e >>= 1
    return result


@njit(cache=True, inline="always")
def _rho_pow(tlo, thi, i):
    return mulmod(tlo[i & 0xFFFF], thi[i >> 16])


# -- degeneracy and greedy coloring ----------------------------------------

@njit(cache=True)
def degeneracy_order(indptr, indices, n):
    """Min-degree peeling with ties to the smallest vertex id.

    A lazy binary heap keyed by deg * n + id gives the tie-break; stale
    entries are skipped on pop.
    """
    order = np.empty(n, dtype=np.int64)
    deg = np.empty(n, dtype=np.int64)
    removed = np.zeros(n, dtype=np.bool_)
    cap = n + indices.shape[0] + 1
    heap = np.empty(cap, dtype=np.int64)
    size = 0
    for v in range(n):
        deg[v] = indptr[v + 1] - indptr[v]
        # heapify by pushing in id order
        key = deg[v] * n + v
        i = size
        size += 1
        heap[i] = key
        while i > 0:
            parent = (i - 1) >> 1
            if heap[parent] <= heap[i]:
                break
            tmp = heap[parent]
            heap[parent] = heap[i]
            heap[i] = tmp
            i = parent
    kappa = 0
    pos = 0
    while pos < n:
        key = heap[0]
        size -= 1
        heap[0] = heap[size]
        i = 0
        while True:
            left = 2 * i + 1
            if left >= size:
                break
            child = left
            if left + 1 < size and heap[left + 1] < heap[left]:
                child = left + 1
            if heap[i] <= heap[child]:
                break
            tmp = heap[child]
            heap[child] = heap[i]
            heap[i] = tmp
            i = child
        d = key // n
        v = key - d * n
        if removed[v] or deg[v] != d:
            continue
        removed[v] = True
        order[pos] = v
        pos += 1
        if d > kappa:
            kappa = d
        for e in range(indptr[v], indptr[v + 1]):
            w = indices[e]
            if removed[w]:
                continue
            deg[w] -= 1
            nk = deg[w] * n + w
            j = size
            size += 1
            heap[j] = nk
            while j > 0:
                parent = (j - 1) >> 1
                if heap[parent] <= heap[j]:
                    break
                tmp = heap[parent]
                heap[parent] = heap[j]
                heap[j] = tmp
                j = parent
    return order, kappa


@njit(cache=True)
def csr_from_sorted(n, u, v):
    """Symmetric CSR with sorted rows from lexicographically sorted u < v pairs.

    For a fixed row w, edges (x, w) arrive in increasing x and edges (w, y)
    in increasing y, so writing all lower neighbors first keeps rows sorted.
    """
    m = u.shape[0]
    indptr = np.zeros(n + 1, dtype=np.int64)
    for e in range(m):
        indptr[u[e] + 1] += 1
        indptr[v[e] + 1] += 1
    for w in range(n):
        indptr[w + 1] += indptr[w]
    fill = indptr[:n].copy()
    indices = np.empty(2 * m, dtype=np.int64)
    for e in range(m):
        w = v[e]
        indices[fill[w]] = u[e]
        fill[w] += 1
    for e in range(m):
        w = u[e]
        indices[fill[w]] = v[e]
        fill[w] += 1
    return indptr, indices


@njit(cache=True)
def ordered_degrees(indptr, indices, position):
    n = position.shape[0]
    out = np.zeros(n, dtype=np.int64)
    for v in range(n):
        pv = position[v]
        c = 0
        for e in range(indptr[v], indptr[v + 1]):
            if position[indices[e]] > pv:
                c += 1
        out[v] = c
    return out


@njit(cache=True)
def greedy_reverse(indptr, indices, order):
    """Color vertices in reverse order, each with the smallest free color."""
    n = order.shape[0]
    colors = np.full(n, -1, dtype=np.int64)
    stamp = np.full(n + 1, -1, dtype=np.int64)
    for step in range(n - 1, -1, -1):
        v = order[step]
        for e in range(indptr[v], indptr[v + 1]):
            c = colors[indices[e]]
            if c >= 0:
                stamp[c] = v
        c = 0
        while stamp[c] == v:
            c += 1
        colors[v] = c
    return colors


@njit(cache=True)
def count_monochromatic(indptr, indices, colors):
    bad = 0
    n = indptr.shape[0] - 1
    for v in range(n):
        for e in range(indptr[v], indptr[v + 1]):
            w = indices[e]
            if w > v and colors[w] == colors[v]:
                bad += 1
    return bad


@njit(cache=True)
def floyd_parents(n, k, draws):
    """Pick min(i, k) distinct earlier vertices for every vertex i.

    ``draws`` holds, for each vertex in order, the integer draws
    j_hi ~ U[0, j] used by Floyd's sampling algorithm.
    """
    total = 0
    for i in range(n):
        total += min(i, k)
    src = np.empty(total, dtype=np.int64)
    dst = np.empty(total, dtype=np.int64)
    mark = np.full(n, -1, dtype=np.int64)
    out = 0
    d = 0
    for i in range(n):
        kk = min(i, k)
        for j in range(i - kk, i):
            t = draws[d]
            d += 1
            if mark[t] == i:
                t = j
            mark[t] = i
            src[out] = t
            dst[out] = i
            out += 1
    return src, dst


# -- sparse recovery grid ---------------------------------------------------

@njit(cache=True, inline="always")
def pair_flat(u, v, n):
    if u > v:
        t = u
        u = v
        v = t
    return u * n - (u * (u + 1)) // 2 + (v - u - 1)


@njit(cache=True, inline="always")
def _sr_apply(cells, ha, hb, nb, tlo, thi, i, c):
    w = _rho_pow(tlo, thi, i)
    if c == 1:
        fw = w
    elif c == -1:
        fw = (_P - w) % _P
    else:
        fw = mulmod(signed_to_field(c), w)
    for r in range(ha.shape[0]):
        cell = r * nb + np.int64(hash2u(ha[r], hb[r], i) % np.uint64(nb))
        cells[cell, 0] += c
        cells[cell, 1] += c * i
        cells[cell, 2] = np.int64(addmod(np.uint64(cells[cell, 2]), fw))


@njit(cache=True)
def sr_update(cells, ha, hb, nb, tlo, thi, flat, c):
    for t in range(flat.shape[0]):
        _sr_apply(cells, ha, hb, nb, tlo, thi, flat[t], c[t])


@njit(cache=True)
def sr_peel(cells, ha, hb, nb, tlo, thi, universe):
    """Sweep the detectors, peeling pure ones, until a sweep changes nothing.

    Sequential sweeps beat a worklist here: the first sweep alone removes
    most entries and touches memory in order.  Returns (indices, values,
    count, ok); ``ok`` is False when some detector is still nonzero.
    """
    work = cells.copy()
    ncells = work.shape[0]
    rows = ha.shape[0]
    out_i = np.empty(ncells, dtype=np.int64)
    out_v = np.empty(ncells, dtype=np.int64)
    found = 0
    progress = True
    while progress:
        progress = False
        for j in range(ncells):
            cnt = work[j, 0]
            if cnt == 0:
                continue
            s = work[j, 1]
            if s % cnt != 0:
                continue
            i = s // cnt
            if i < 0 or i >= universe:
                continue
            row = j // nb
            if np.int64(hash2u(ha[row], hb[row], i) % np.uint64(nb)) != j - row * nb:
                continue
            w = _rho_pow(tlo, thi, i)
            if mulmod(signed_to_field(cnt), w) != np.uint64(work[j, 2]):
                continue
            if found == ncells:
                return out_i, out_v, found, False
            out_i[found] = i
            out_v[found] = cnt
            found += 1
            fw = (_P - mulmod(signed_to_field(cnt), w)) % _P
            for r in range(rows):
                cell = r * nb + np.int64(hash2u(ha[r], hb[r], i) % np.uint64(nb))
                work[cell, 0] -= cnt
                work[cell, 1] -= cnt * i
                work[cell, 2] = np.int64(addmod(np.uint64(work[cell, 2]), fw))
            progress = True
    for j in range(ncells):
        if work[j, 0] != 0 or work[j, 1] != 0 or work[j, 2] != 0:
            return out_i, out_v, found, False
    return out_i, out_v, found, True


# -- l0 estimation grid -----------------------------------------------------

@njit(cache=True, inline="always")
def _trailing_zeros(h, cap):
    if h == 0:
        return cap
    z = 0
    while (h & _U1) == 0 and z < cap:
        h >>= _U1
        z += 1
    return z


@njit(cache=True, inline="always")
def _l0_apply(cells, hp, nbuckets, top, i, c):
    lvl = _trailing_zeros(hash2u(hp[0], hp[1], i), top)
    bucket = np.int64(hash2u(hp[2], hp[3], i) % np.uint64(nbuckets))
    w = hash2u(hp[4], hp[5], i) % (_P - _U1) + _U1
    if c == 1:
        fw = w
    elif c == -1:
        fw = _P - w
    else:
        fw = mulmod(signed_to_field(c), w)
    cell = lvl * nbuckets + bucket
    cells[cell, 0] += c
    cells[cell, 1] = np.int64(addmod(np.uint64(cells[cell, 1]), fw))


@njit(cache=True)
def l0_update(cells, hp, nbuckets, top, flat, c):
    for t in range(flat.shape[0]):
        _l0_apply(cells, hp, nbuckets, top, flat[t], c[t])


@njit(cache=True)
def l0_suffix_occupancy(cells, nbuckets, levels):
    """Occupied-bucket counts of the union of levels >= j, for every j."""
    acc_c = np.zeros(nbuckets, dtype=np.int64)
    acc_f = np.zeros(nbuckets, dtype=np.uint64)
    occ = np.zeros(levels, dtype=np.int64)
    for lvl in range(levels - 1, -1, -1):
        base = lvl * nbuckets
        o = 0
        for b in range(nbuckets):
            acc_c[b] += cells[base + b, 0]
            acc_f[b] = addmod(acc_f[b], np.uint64(cells[base + b, 1]))
            if acc_c[b] != 0 or acc_f[b] != 0:
                o += 1
        occ[lvl] = o
    return occ


# -- fused streaming absorb -------------------------------------------------

@njit(cache=True)
def absorb_turnstile(us, vs, cs, psi, n,
                     sr_cells, ha, hb, nb, tlo, thi,
                     l0_cells, hp, nbuckets, top):
    """Feed psi-monochromatic tokens of one batch into both sketches."""
    mono = 0
    for t in range(us.shape[0]):
        u = us[t]
        v = vs[t]
        if psi[u] != psi[v]:
            continue
        i = pair_flat(u, v, n)
        c = cs[t]
        _sr_apply(sr_cells, ha, hb, nb, tlo, thi, i, c)
        _l0_apply(l0_cells, hp, nbuckets, top, i, c)
        mono += 1
    return mono

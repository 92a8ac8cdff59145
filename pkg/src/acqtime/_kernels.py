"""Hot loops, jitted with numba when available.

Every function here is written in the nopython subset so the undecorated
Python version has identical semantics; tests cross-check the two.  All
vertex/agent arrays are int64, the acquaintance relation is a flat uint8
array over agent pairs (i < j) in lexicographic order.
"""

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]

        def wrap(fn):
            return fn

        return wrap


# Status codes returned by replay_matching_chunk.
OK = 0
ERR_NON_EDGE = 1
ERR_OVERLAP = 2


@njit(cache=True)
def bfs_reach_count(n, indptr, indices, start):
    """Number of vertices reachable from ``start`` (undirected CSR)."""
    seen = np.zeros(n, dtype=np.uint8)
    queue = np.empty(n, dtype=np.int64)
    seen[start] = 1
    queue[0] = start
    head = 0
    tail = 1
    while head < tail:
        v = queue[head]
        head += 1
        for t in range(indptr[v], indptr[v + 1]):
            w = indices[t]
            if seen[w] == 0:
                seen[w] = 1
                queue[tail] = w
                tail += 1
    return tail


@njit(cache=True)
def bfs_parents(n, indptr, indices, start):
    """BFS order and parent array from ``start``; parent[start] = -1.

    Unreached vertices keep parent -2 and are absent from the order's
    prefix; the second return value is the number reached.
    """
    parent = np.full(n, -2, dtype=np.int64)
    order = np.empty(n, dtype=np.int64)
    parent[start] = -1
    order[0] = start
    head = 0
    tail = 1
    while head < tail:
        v = order[head]
        head += 1
        for t in range(indptr[v], indptr[v + 1]):
            w = indices[t]
            if parent[w] == -2:
                parent[w] = v
                order[tail] = w
                tail += 1
    return order, parent, tail


@njit(cache=True)
def _edge_key_present(keys, key):
    """Binary search for ``key`` in the sorted edge-key array."""
    lo = 0
    hi = keys.shape[0]
    while lo < hi:
        mid = (lo + hi) // 2
        if keys[mid] < key:
            lo = mid + 1
        else:
            hi = mid
    return lo < keys.shape[0] and keys[lo] == key


@njit(cache=True)
def replay_matching_chunk(
    n,
    edge_keys,
    eu,
    ev,
    indptr,
    indices,
    r_us,
    r_vs,
    r_off,
    occ,
    loc,
    acq,
    stamp,
    visits,
    track_visits,
    counts_out,
    record_counts,
    count_in,
    total_pairs,
    completion_in,
    round_base,
    stop_on_complete,
):
    """Apply a chunk of matching rounds to the process state in place.

    Rounds are CSR slices of (r_us, r_vs).  ``stamp`` is a scratch int64
    array of length n holding the last round id that touched each vertex.
    Returns (status, rounds_applied, count, completion_round) where
    completion_round is -1 if the state never became complete.
    """
    nrounds = r_off.shape[0] - 1
    count = count_in
    completion = completion_in
    m_edges = eu.shape[0]
    for r in range(nrounds):
        rid = round_base + r + 1
        lo = r_off[r]
        hi = r_off[r + 1]
        # Validate before touching state: every pair an edge, all disjoint.
        for t in range(lo, hi):
            u = r_us[t]
            v = r_vs[t]
            if u < 0 or v < 0 or u >= n or v >= n or u >= v:
                return ERR_NON_EDGE, r, count, completion
            if not _edge_key_present(edge_keys, u * n + v):
                return ERR_NON_EDGE, r, count, completion
            if stamp[u] == rid or stamp[v] == rid:
                return ERR_OVERLAP, r, count, completion
            stamp[u] = rid
            stamp[v] = rid
        # Swap occupants.
        for t in range(lo, hi):
            u = r_us[t]
            v = r_vs[t]
            au = occ[u]
            av = occ[v]
            occ[u] = av
            occ[v] = au
            loc[au] = v
            loc[av] = u
            if track_visits:
                visits[au * n + v] = 1
                visits[av * n + u] = 1
        # New acquaintances: only pairs with a moved member can be new.
        if count < total_pairs:
            before = count
            moved = 2 * (hi - lo)
            if moved > 0 and moved * ((2 * m_edges) // max(n, 1) + 1) >= m_edges:
                # Dense round: one pass over the whole edge list.
                for e in range(m_edges):
                    a = occ[eu[e]]
                    b = occ[ev[e]]
                    if a > b:
                        a, b = b, a
                    ti = a * (2 * n - a - 1) // 2 + (b - a - 1)
                    if acq[ti] == 0:
                        acq[ti] = 1
                        count += 1
            else:
                # Sparse round: scan neighborhoods of moved vertices.
                for t in range(lo, hi):
                    for side in range(2):
                        w = r_us[t] if side == 0 else r_vs[t]
                        a = occ[w]
                        for s in range(indptr[w], indptr[w + 1]):
                            x = indices[s]
                            if stamp[x] == rid and x < w:
                                continue  # both moved; counted from x's side
                            b = occ[x]
                            if a < b:
                                i, j = a, b
                            else:
                                i, j = b, a
                            ti = i * (2 * n - i - 1) // 2 + (j - i - 1)
                            if acq[ti] == 0:
                                acq[ti] = 1
                                count += 1
            if count - before > m_edges:
                # Unreachable by construction; kept as a replay invariant.
                return -1, r, count, completion
        if record_counts:
            counts_out[r] = count
        if completion < 0 and count == total_pairs:
            completion = rid
            if stop_on_complete:
                return OK, r + 1, count, completion
    return OK, nrounds, count, completion

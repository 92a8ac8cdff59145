"""Graphs, trees and caterpillars for the acquaintance process.

Vertices are the integers 0..n-1.  Edges are kept as parallel arrays
(eu, ev) with eu < ev in lexicographic order, so equal graphs have
byte-identical serializations.
"""

from __future__ import annotations

import math
import random
from collections import deque
from typing import Iterable, Optional, Sequence

import numpy as np

from . import _kernels
from .errors import DisconnectedGraph

MAX_SEED = 2**64


def _check_seed(seed: int) -> int:
    if not (0 <= seed < MAX_SEED):
        raise ValueError("seed must be a 64-bit unsigned integer")
    return seed


class Graph:
    """Undirected simple graph with a canonical sorted edge list."""

    __slots__ = ("n", "eu", "ev", "_edge_keys", "_indptr", "_indices", "_adj_lists")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        if n < 1:
            raise ValueError("graph needs at least one vertex")
        pairs = [(u, v) if u < v else (v, u) for (u, v) in edges]
        for u, v in pairs:
            if u == v:
                raise ValueError("self-loop")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError("endpoint out of range")
        pairs = sorted(set(pairs))
        self.n = int(n)
        self.eu = np.array([p[0] for p in pairs], dtype=np.int64)
        self.ev = np.array([p[1] for p in pairs], dtype=np.int64)
        self._edge_keys = None
        self._indptr = None
        self._indices = None
        self._adj_lists = None

    @classmethod
    def _from_sorted_arrays(cls, n: int, eu: np.ndarray, ev: np.ndarray) -> "Graph":
        """Trusted fast path: arrays already canonical (u < v, lex sorted)."""
        g = cls.__new__(cls)
        g.n = int(n)
        g.eu = np.ascontiguousarray(eu, dtype=np.int64)
        g.ev = np.ascontiguousarray(ev, dtype=np.int64)
        g._edge_keys = None
        g._indptr = None
        g._indices = None
        g._adj_lists = None
        return g

    @property
    def m(self) -> int:
        return int(self.eu.shape[0])

    def edge_keys(self) -> np.ndarray:
        """Sorted int64 keys u*n+v, one per edge."""
        if self._edge_keys is None:
            self._edge_keys = self.eu * self.n + self.ev
        return self._edge_keys

    def has_edge(self, u: int, v: int) -> bool:
        if u == v:
            return False
        if u > v:
            u, v = v, u
        keys = self.edge_keys()
        i = int(np.searchsorted(keys, u * self.n + v))
        return i < keys.shape[0] and keys[i] == u * self.n + v

    def adjacency(self) -> tuple[np.ndarray, np.ndarray]:
        """CSR adjacency (indptr, indices); neighbor lists sorted ascending."""
        if self._indptr is None:
            n = self.n
            heads = np.concatenate([self.eu, self.ev])
            tails = np.concatenate([self.ev, self.eu])
            order = np.lexsort((tails, heads))
            heads = heads[order]
            tails = tails[order]
            indptr = np.zeros(n + 1, dtype=np.int64)
            np.add.at(indptr, heads + 1, 1)
            np.cumsum(indptr, out=indptr)
            self._indptr = indptr
            self._indices = tails
        return self._indptr, self._indices

    def adj_lists(self) -> list[list[int]]:
        """Plain Python adjacency lists (ascending), for Python-loop code."""
        if self._adj_lists is None:
            indptr, indices = self.adjacency()
            idx = indices.tolist()
            ptr = indptr.tolist()
            self._adj_lists = [idx[ptr[v] : ptr[v + 1]] for v in range(self.n)]
        return self._adj_lists

    def degree(self, v: int) -> int:
        indptr, _ = self.adjacency()
        return int(indptr[v + 1] - indptr[v])

    def edge_set(self) -> set[tuple[int, int]]:
        return set(zip(self.eu.tolist(), self.ev.tolist()))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Graph)
            and self.n == other.n
            and self.m == other.m
            and bool(np.all(self.eu == other.eu))
            and bool(np.all(self.ev == other.ev))
        )

    def __hash__(self) -> int:
        return hash((self.n, self.eu.tobytes(), self.ev.tobytes()))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"

    # -- text format: "n m" then one "u v" line per edge, lex sorted --

    def to_text(self) -> str:
        lines = [f"{self.n} {self.m}"]
        lines.extend(f"{u} {v}" for u, v in zip(self.eu.tolist(), self.ev.tolist()))
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "Graph":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty graph file")
        head = lines[0].split()
        if len(head) != 2:
            raise ValueError("header must be 'n m'")
        n, m = int(head[0]), int(head[1])
        if len(lines) - 1 != m:
            raise ValueError(f"expected {m} edge lines, found {len(lines) - 1}")
        edges = []
        for ln in lines[1:]:
            parts = ln.split()
            if len(parts) != 2:
                raise ValueError(f"bad edge line: {ln!r}")
            u, v = int(parts[0]), int(parts[1])
            if not u < v:
                raise ValueError("edges must satisfy u < v")
            edges.append((u, v))
        if edges != sorted(set(edges)):
            raise ValueError("edges must be lexicographically sorted and distinct")
        return cls(n, edges)

    def save(self, path) -> None:
        with open(path, "w", encoding="ascii") as fh:
            fh.write(self.to_text())

    @classmethod
    def load(cls, path) -> "Graph":
        with open(path, "r", encoding="ascii") as fh:
            return cls.from_text(fh.read())


class Tree(Graph):
    """Connected acyclic graph; invariants checked at construction."""

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        super().__init__(n, edges)
        self._check()

    @classmethod
    def _from_sorted_arrays(cls, n, eu, ev) -> "Tree":
        t = super()._from_sorted_arrays(n, eu, ev)
        t._check()
        return t

    def _check(self) -> None:
        if self.m != self.n - 1:
            raise ValueError("a tree on n vertices has exactly n-1 edges")
        if not is_connected(self):
            raise ValueError("tree must be connected")


class Caterpillar:
    """A tree whose vertices all lie on or next to its spine path.

    ``vertices`` optionally maps local labels back to a host tree when
    the caterpillar was carved out of a larger tree; identity otherwise.
    """

    __slots__ = ("tree", "spine", "vertices")

    def __init__(self, tree: Tree, spine: Sequence[int], vertices: Optional[np.ndarray] = None):
        self.tree = tree
        self.spine = list(int(v) for v in spine)
        if vertices is None:
            vertices = np.arange(tree.n, dtype=np.int64)
        self.vertices = np.asarray(vertices, dtype=np.int64)
        self._check()

    @property
    def size(self) -> int:
        return self.tree.n

    def _check(self) -> None:
        t = self.tree
        spine = self.spine
        if not spine:
            raise ValueError("spine must be nonempty")
        if len(set(spine)) != len(spine):
            raise ValueError("spine vertices must be distinct")
        if any(not (0 <= v < t.n) for v in spine):
            raise ValueError("spine vertex out of range")
        for a, b in zip(spine, spine[1:]):
            if not t.has_edge(a, b):
                raise ValueError("spine is not a path in the tree")
        on = np.zeros(t.n, dtype=bool)
        on[spine] = True
        covered = on.copy()
        covered[t.ev[on[t.eu]]] = True
        covered[t.eu[on[t.ev]]] = True
        if not covered.all():
            raise ValueError("every vertex must be on or adjacent to the spine")
        if self.vertices.shape[0] != t.n:
            raise ValueError("vertex map must label every caterpillar vertex")

    def __repr__(self) -> str:
        return f"Caterpillar(size={self.size}, spine_len={len(self.spine)})"


# ---------------------------------------------------------------------------
# random generation


def gnp_sample(n: int, p: float, seed: int) -> Graph:
    """Binomial random graph: each of the C(n,2) pairs is an edge with
    probability p, independently, in fixed lexicographic pair order."""
    if n < 1:
        raise ValueError("n must be positive")
    if not (0.0 <= p <= 1.0):
        raise ValueError("p must lie in [0, 1]")
    _check_seed(seed)
    npairs = n * (n - 1) // 2
    rng = np.random.default_rng(seed)
    if p == 0.0 or npairs == 0:
        hits = np.empty(0, dtype=np.int64)
    elif p == 1.0:
        hits = np.arange(npairs, dtype=np.int64)
    else:
        hits = np.nonzero(rng.random(npairs) < p)[0]
    eu, ev = _pair_index_decode(n, hits)
    return Graph._from_sorted_arrays(n, eu, ev)


def _pair_index_decode(n: int, idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Inverse of the lexicographic pair index i*(2n-i-1)/2 + (j-i-1)."""
    if idx.shape[0] == 0:
        z = np.empty(0, dtype=np.int64)
        return z, z
    # Float solve for the row, then fix rounding exactly.
    i = np.floor((2 * n - 1 - np.sqrt((2 * n - 1) ** 2 - 8.0 * idx)) / 2).astype(np.int64)
    row_start = i * (2 * n - i - 1) // 2
    too_big = row_start > idx
    while too_big.any():
        i[too_big] -= 1
        row_start = i * (2 * n - i - 1) // 2
        too_big = row_start > idx
    next_start = (i + 1) * (2 * n - i - 2) // 2
    too_small = next_start <= idx
    while too_small.any():
        i[too_small] += 1
        row_start = i * (2 * n - i - 1) // 2
        next_start = (i + 1) * (2 * n - i - 2) // 2
        too_small = next_start <= idx
    j = idx - row_start + i + 1
    return i, j


def random_tree(n: int, seed: int) -> Tree:
    """Uniform random labeled tree via a random Pruefer sequence."""
    if n < 1:
        raise ValueError("n must be positive")
    _check_seed(seed)
    if n == 1:
        return Tree(1, [])
    if n == 2:
        return Tree(2, [(0, 1)])
    rng = np.random.default_rng(seed)
    seq = rng.integers(0, n, size=n - 2)
    return _tree_from_prufer(n, seq.tolist())


def _tree_from_prufer(n: int, seq: list[int]) -> Tree:
    deg = [1] * n
    for x in seq:
        deg[x] += 1
    edges = []
    ptr = 0
    while deg[ptr] != 1:
        ptr += 1
    leaf = ptr
    for x in seq:
        edges.append((leaf, x) if leaf < x else (x, leaf))
        deg[x] -= 1
        if deg[x] == 1 and x < ptr:
            leaf = x
        else:
            ptr += 1
            while deg[ptr] != 1:
                ptr += 1
            leaf = ptr
    edges.append((leaf, n - 1) if leaf < n - 1 else (n - 1, leaf))
    pairs = sorted(edges)
    eu = np.array([p[0] for p in pairs], dtype=np.int64)
    ev = np.array([p[1] for p in pairs], dtype=np.int64)
    return Tree._from_sorted_arrays(n, eu, ev)


def random_caterpillar(n: int, spine_len: int, seed: int) -> Caterpillar:
    """Random caterpillar: a spine path plus legs attached to uniformly
    chosen spine vertices, with labels shuffled."""
    if not (2 <= spine_len <= n):
        raise ValueError("need 2 <= spine_len <= n")
    _check_seed(seed)
    rng = np.random.default_rng(seed)
    perm = rng.permutation(n)
    edges = []
    for i in range(spine_len - 1):
        a, b = int(perm[i]), int(perm[i + 1])
        edges.append((a, b) if a < b else (b, a))
    if n > spine_len:
        anchors = rng.integers(0, spine_len, size=n - spine_len)
        for off, anchor in enumerate(anchors.tolist()):
            a, b = int(perm[spine_len + off]), int(perm[anchor])
            edges.append((a, b) if a < b else (b, a))
    tree = Tree(n, edges)
    spine = [int(perm[i]) for i in range(spine_len)]
    return Caterpillar(tree, spine)


# ---------------------------------------------------------------------------
# connectivity and traversal


def is_connected(g: Graph) -> bool:
    if g.n == 1:
        return True
    if g.m < g.n - 1:
        return False
    indptr, indices = g.adjacency()
    return int(_kernels.bfs_reach_count(g.n, indptr, indices, 0)) == g.n


def bfs_tree(g: Graph, root: int) -> tuple[np.ndarray, np.ndarray, int]:
    """BFS order, parents and reach count from ``root`` (ascending ties)."""
    indptr, indices = g.adjacency()
    order, parent, reached = _kernels.bfs_parents(g.n, indptr, indices, root)
    return order, parent, int(reached)


def spanning_tree(g: Graph) -> Tree:
    """Deterministic BFS spanning tree from vertex 0, neighbors ascending."""
    order, parent, reached = bfs_tree(g, 0)
    if reached != g.n:
        raise DisconnectedGraph("spanning_tree requires a connected graph")
    vs = order[1 : g.n]
    ps = parent[vs]
    eu = np.minimum(vs, ps)
    ev = np.maximum(vs, ps)
    keys = eu * g.n + ev
    o = np.argsort(keys)
    return Tree._from_sorted_arrays(g.n, eu[o], ev[o])


def tree_depths(t: Tree, root: int) -> np.ndarray:
    """Distance from ``root`` to every vertex of the tree."""
    order, parent, reached = bfs_tree(t, root)
    depth = np.zeros(t.n, dtype=np.int64)
    for v in order[1:reached].tolist():
        depth[v] = depth[parent[v]] + 1
    return depth


def max_dist(t: Tree, S: Iterable[int], T: Iterable[int]) -> int:
    """Largest tree distance between a vertex of S and a vertex of T."""
    S = list(S)
    T = list(T)
    if not S or not T:
        raise ValueError("S and T must be nonempty")
    T_arr = np.array(sorted(set(T)), dtype=np.int64)
    best = 0
    for s in sorted(set(S)):
        depth = tree_depths(t, s)
        best = max(best, int(depth[T_arr].max()))
    return best


# ---------------------------------------------------------------------------
# Hamiltonian paths


def is_hamiltonian_path(g: Graph, path: Sequence[int]) -> bool:
    """Independent checker: a permutation of the vertices with every
    consecutive pair an edge."""
    if len(path) != g.n or set(path) != set(range(g.n)):
        return False
    edges = g.edge_set()
    for a, b in zip(path, path[1:]):
        if (min(a, b), max(a, b)) not in edges:
            return False
    return True


def find_hamiltonian_path(
    g: Graph,
    restart_budget: int = 20,
    seed: int = 0,
    rotation_budget: Optional[int] = None,
) -> Optional[list[int]]:
    """Randomized rotation-extension search for a Hamiltonian path.

    Returns a path (list of all n vertices, consecutive pairs adjacent)
    or None once the budget is exhausted.  None is not a certificate of
    non-existence.
    """
    n = g.n
    _check_seed(seed)
    if n == 1:
        return [0]
    if g.m == 0:
        return None
    if rotation_budget is None:
        rotation_budget = 50 * n
    adj = g.adj_lists()
    rng = random.Random(seed)

    for _ in range(max(1, restart_budget)):
        start = rng.randrange(n)
        path = [start]
        on = bytearray(n)
        on[start] = 1
        pos = [-1] * n
        pos[start] = 0
        rotations = 0
        while len(path) < n:
            if not _extend(path, on, pos, adj, rng):
                # Try the other endpoint before rotating.
                _reverse_all(path, pos)
                if not _extend(path, on, pos, adj, rng):
                    if rotations >= rotation_budget:
                        break
                    rotations += 1
                    if not _rotate(path, pos, adj, rng):
                        break
        if len(path) == n:
            return path
    return None


def _extend(path, on, pos, adj, rng) -> bool:
    end = path[-1]
    nbrs = adj[end]
    d = len(nbrs)
    if d == 0:
        return False
    off = rng.randrange(d)
    for t in range(d):
        x = nbrs[off + t - d]
        if not on[x]:
            pos[x] = len(path)
            path.append(x)
            on[x] = 1
            return True
    return False


def _reverse_all(path, pos) -> None:
    path.reverse()
    for i, v in enumerate(path):
        pos[v] = i


def _rotate(path, pos, adj, rng) -> bool:
    """Posa rotation: pick a neighbor x of the endpoint inside the path
    and reverse the segment after x, exposing a new endpoint.  The
    predecessor is excluded (rotating there is a no-op)."""
    end = path[-1]
    last = len(path) - 2
    candidates = [x for x in adj[end] if pos[x] < last]
    if not candidates:
        return False
    x = candidates[rng.randrange(len(candidates))]
    i = pos[x]
    path[i + 1 :] = path[: i : -1]
    for t in range(i + 1, len(path)):
        pos[path[t]] = t
    return True


# ---------------------------------------------------------------------------
# caterpillars inside trees


def largest_caterpillar(t: Tree) -> Caterpillar:
    """Caterpillar subtree built by heavy-subtree descent from vertex 0.

    The spine follows, at each step, the child with the largest subtree
    (ties to smallest id); the other children become legs.  The result
    always has at least log2(n) vertices; it is not a globally maximum
    caterpillar despite serving that role in the surrounding bounds.
    """
    n = t.n
    if n == 1:
        return Caterpillar(Tree(1, []), [0], np.array([0], dtype=np.int64))
    order, parent, reached = bfs_tree(t, 0)
    sizes = np.ones(n, dtype=np.int64)
    for v in order[:0:-1].tolist():  # reverse BFS order, root excluded
        sizes[parent[v]] += sizes[v]
    # children grouped per vertex, ascending id
    child_of = np.argsort(parent[order[1:]] * np.int64(n) + order[1:], kind="stable")
    kids = order[1:][child_of]
    kid_parents = parent[kids]
    kid_ptr = np.zeros(n + 1, dtype=np.int64)
    np.add.at(kid_ptr, kid_parents + 1, 1)
    np.cumsum(kid_ptr, out=kid_ptr)

    def children(v: int) -> list[int]:
        return kids[kid_ptr[v] : kid_ptr[v + 1]].tolist()

    spine = [0]
    legs: list[int] = []
    v = 0
    while True:
        ch = children(v)
        if not ch:
            break
        best = max(ch, key=lambda c: (sizes[c], -c))
        legs.extend(c for c in ch if c != best)
        spine.append(best)
        v = best
    verts = spine + sorted(legs)
    local = {g: i for i, g in enumerate(verts)}
    edges = []
    for a, b in zip(spine, spine[1:]):
        la, lb = local[a], local[b]
        edges.append((la, lb) if la < lb else (lb, la))
    for leg in legs:
        la, lb = local[int(parent[leg])], local[leg]
        edges.append((la, lb) if la < lb else (lb, la))
    sub = Tree(len(verts), edges)
    return Caterpillar(sub, [local[s] for s in spine], np.array(verts, dtype=np.int64))


def find_spine(t: Tree) -> Optional[list[int]]:
    """Spine of ``t`` if it is a caterpillar, else None.

    Removing all leaves of a caterpillar leaves a (possibly empty) path;
    the spine returned is that core extended by one leaf at each end so
    the whole tree is on or adjacent to it.
    """
    n = t.n
    if n == 1:
        return [0]
    if n == 2:
        return [0, 1]
    indptr, indices = t.adjacency()
    deg = (indptr[1:] - indptr[:-1]).copy()
    core = np.nonzero(deg > 1)[0]
    if core.shape[0] == 0:  # n == 2 handled above
        return None
    core_set = set(core.tolist())
    # The core must itself be a path: every core vertex has <= 2 core
    # neighbors, and exactly 0 or 2 of them have < 2.
    ends = []
    for v in core.tolist():
        cn = sum(1 for w in indices[indptr[v] : indptr[v + 1]].tolist() if w in core_set)
        if cn > 2:
            return None
        if cn < 2:
            ends.append(v)
    if len(core_set) == 1:
        path = [core.tolist()[0]]
    elif len(ends) != 2:
        return None
    else:
        path = [ends[0]]
        prev = -1
        while path[-1] != ends[1]:
            v = path[-1]
            nxt = [w for w in indices[indptr[v] : indptr[v + 1]].tolist() if w in core_set and w != prev]
            if len(nxt) != 1:
                return None
            prev = v
            path.append(nxt[0])
        if len(path) != len(core_set):
            return None
    # extend with one adjacent leaf at each end
    for at_end in (0, 1):
        v = path[0] if at_end == 0 else path[-1]
        on_path = set(path)
        leaves = [
            w
            for w in indices[indptr[v] : indptr[v + 1]].tolist()
            if w not in core_set and w not in on_path
        ]
        if leaves:
            if at_end == 0:
                path.insert(0, min(leaves))
            else:
                path.append(min(leaves))
    try:
        Caterpillar(t, path)
    except ValueError:
        return None
    return path

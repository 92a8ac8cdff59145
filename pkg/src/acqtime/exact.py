"""Exact solvers on tiny graphs: ground truth for everything else.

``exact_ac`` searches the full (placement, acquaintance) state space of
the matching process; ``exact_bac`` searches placement sequences of the
free-placement (helicopter) process; ``cover_number`` independently
solves the equivalent edge-cover problem by branch and bound.  All are
capped at n <= 5 (6 behind a flag).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations, permutations
from typing import Iterator

from .engine import MODEL_MATCHING, MODEL_PLACEMENT, Schedule
from .errors import DisconnectedGraph, TooLarge
from .graphs import Graph, is_connected

_DEFAULT_CAP = 5
_HARD_CAP = 6


def _cap_check(n: int, enable_n6: bool, what: str) -> None:
    cap = _HARD_CAP if enable_n6 else _DEFAULT_CAP
    if n > cap:
        raise TooLarge(f"{what} is capped at n <= {cap} (got n={n})")


def _pair_bit(n: int, a: int, b: int) -> int:
    if a > b:
        a, b = b, a
    return 1 << (a * (2 * n - a - 1) // 2 + (b - a - 1))


def _edges_mask(n: int, edges, placement) -> int:
    """Bitmask of acquainted agent pairs given vertex->agent placement."""
    mask = 0
    for u, v in edges:
        mask |= _pair_bit(n, placement[u], placement[v])
    return mask


def all_matchings(edges: list[tuple[int, int]]) -> list[tuple[tuple[int, int], ...]]:
    """Every matching of the given edge list, the empty one included."""
    out: list[tuple[tuple[int, int], ...]] = []

    def rec(i: int, used: int, acc: tuple) -> None:
        if i == len(edges):
            out.append(acc)
            return
        rec(i + 1, used, acc)
        u, v = edges[i]
        bit = (1 << u) | (1 << v)
        if not used & bit:
            rec(i + 1, used | bit, acc + ((u, v),))

    rec(0, 0, ())
    return out


def exact_ac(g: Graph, *, enable_n6: bool = False) -> int:
    """Minimum matching rounds to acquaint all agent pairs, by BFS over
    (placement, acquaintance) states with full matching branching."""
    _cap_check(g.n, enable_n6, "exact_ac")
    if not is_connected(g):
        raise DisconnectedGraph("acquaintance time is defined for connected graphs")
    n = g.n
    edges = list(zip(g.eu.tolist(), g.ev.tolist()))
    full = (1 << (n * (n - 1) // 2)) - 1
    start_occ = tuple(range(n))
    start_mask = _edges_mask(n, edges, start_occ)
    if start_mask == full:
        return 0
    matchings = [m for m in all_matchings(edges) if m]
    gain_memo: dict[tuple, int] = {start_occ: start_mask}
    seen = {(start_occ, start_mask)}
    queue = deque([(start_occ, start_mask, 0)])
    while queue:
        occ, mask, depth = queue.popleft()
        for m in matchings:
            new = list(occ)
            for u, v in m:
                new[u], new[v] = new[v], new[u]
            occ2 = tuple(new)
            gain = gain_memo.get(occ2)
            if gain is None:
                gain = _edges_mask(n, edges, occ2)
                gain_memo[occ2] = gain
            mask2 = mask | gain
            if mask2 == full:
                return depth + 1
            state = (occ2, mask2)
            if state not in seen:
                seen.add(state)
                queue.append((occ2, mask2, depth + 1))
    raise AssertionError("connected graph must complete")  # pragma: no cover


def _image_masks(g: Graph) -> list[int]:
    """Distinct acquaintance masks of the edge set under all vertex
    bijections, sorted for determinism."""
    n = g.n
    edges = list(zip(g.eu.tolist(), g.ev.tolist()))
    masks = set()
    for perm in permutations(range(n)):
        mask = 0
        for u, v in edges:
            mask |= _pair_bit(n, perm[u], perm[v])
        masks.add(mask)
    return sorted(masks)


def exact_bac(g: Graph, *, enable_n6: bool = False) -> int:
    """Minimum free-placement rounds after the initial placement, by BFS
    over covered-pair masks (each round ORs in one edge-set image)."""
    _cap_check(g.n, enable_n6, "exact_bac")
    n = g.n
    full = (1 << (n * (n - 1) // 2)) - 1
    edges = list(zip(g.eu.tolist(), g.ev.tolist()))
    start = _edges_mask(n, edges, tuple(range(n)))
    if start == full:
        return 0
    images = _image_masks(g)
    seen = {start}
    frontier = [start]
    depth = 0
    while frontier:
        depth += 1
        nxt = []
        for mask in frontier:
            for img in images:
                m2 = mask | img
                if m2 == full:
                    return depth
                if m2 not in seen:
                    seen.add(m2)
                    nxt.append(m2)
        frontier = nxt
    raise AssertionError("cover must exist")  # pragma: no cover


def cover_number(g: Graph, *, enable_n6: bool = False) -> int:
    """Minimum number of copies of g (under vertex bijections) whose edge
    images cover the complete graph, by branch and bound over pair covers.

    Always equals exact_bac + 1: the initial placement contributes the
    first copy for free in the process view.
    """
    _cap_check(g.n, enable_n6, "cover_number")
    n = g.n
    npairs = n * (n - 1) // 2
    full = (1 << npairs) - 1
    if full == 0:
        return 1
    if g.m == 0:
        raise ValueError("edgeless graphs cannot cover the complete graph")
    images = _image_masks(g)
    max_size = max(bin(img).count("1") for img in images)
    per_pair = [[img for img in images if img >> b & 1] for b in range(npairs)]

    # greedy upper bound
    covered = 0
    greedy = 0
    while covered != full:
        best = max(images, key=lambda img: bin(img & ~covered).count("1"))
        covered |= best
        greedy += 1
    best_found = greedy

    def dfs(covered: int, used: int) -> None:
        nonlocal best_found
        if covered == full:
            best_found = min(best_found, used)
            return
        missing = bin(full & ~covered).count("1")
        if used + -(-missing // max_size) >= best_found:
            return
        # branch on the uncovered pair with the fewest covering images
        pick = -1
        fewest = None
        for b in range(npairs):
            if covered >> b & 1:
                continue
            k = len(per_pair[b])
            if fewest is None or k < fewest:
                fewest = k
                pick = b
        for img in per_pair[pick]:
            dfs(covered | img, used + 1)

    dfs(0, 0)
    return best_found


# ---------------------------------------------------------------------------
# pair traces


@dataclass
class PairTrace:
    """Vertex pairs occupied by one agent pair, round by round (the entry
    at index 0 is the initial placement)."""

    pair: tuple[int, int]
    positions: list[tuple[int, int]]

    @property
    def distinct_positions(self) -> set[tuple[int, int]]:
        return set(self.positions)


def pair_trace(schedule: Schedule, pair: tuple[int, int]) -> PairTrace:
    """Replay only the two agents of ``pair`` through a schedule."""
    a, b = pair
    n = schedule.n
    if not (0 <= a < n and 0 <= b < n) or a == b:
        raise ValueError("pair must be two distinct agents")
    va, vb = a, b
    positions = [(min(va, vb), max(va, vb))]
    for rnd in schedule.iter_rounds():
        if schedule.model == MODEL_PLACEMENT:
            va, vb = int(rnd[va]), int(rnd[vb])
        else:
            na, nb = va, vb
            for u, v in rnd:
                if u == va:
                    na = v
                elif v == va:
                    na = u
                if u == vb:
                    nb = v
                elif v == vb:
                    nb = u
            va, vb = na, nb
        positions.append((min(va, vb), max(va, vb)))
    return PairTrace(pair=(min(a, b), max(a, b)), positions=positions)


# ---------------------------------------------------------------------------
# test corpus enumeration


def _connected_edge_subset(n: int, edges: list[tuple[int, int]]) -> bool:
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    comps = n
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            comps -= 1
    return comps == 1


def enumerate_connected_graphs(n: int) -> Iterator[Graph]:
    """All labeled connected graphs on n vertices, each exactly once, in
    increasing edge-subset order (n=4 yields 38 graphs, n=5 yields 728)."""
    if n > _DEFAULT_CAP:
        raise TooLarge(f"enumeration is capped at n <= {_DEFAULT_CAP}")
    if n < 1:
        raise ValueError("n must be positive")
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        edges = [pairs[b] for b in range(len(pairs)) if mask >> b & 1]
        if _connected_edge_subset(n, edges):
            yield Graph(n, edges)

"""Constructive schedule generators.

Every generator emits rounds that are legal matchings of its ambient
graph; replay through the engine is the ground truth for completion.
The big-tree generators are also exposed as round iterators so multi-
million-round schedules never need to be materialized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Optional

import numpy as np

from .bounds import exposure_split, team_k
from .engine import Schedule
from .errors import DisconnectedGraph, NoHamiltonianPath, SizeMismatch
from .graphs import (
    Caterpillar,
    Graph,
    Tree,
    bfs_tree,
    find_hamiltonian_path,
    largest_caterpillar,
    max_dist,
    spanning_tree,
)

MatchingRound = list[tuple[int, int]]


# ---------------------------------------------------------------------------
# path oscillation


def oscillation_matchings(path: Iterable[int]) -> tuple[MatchingRound, MatchingRound]:
    """The two alternating matchings over a path's odd- and even-indexed
    edges (edges are 1-indexed along the path)."""
    p = list(path)
    odd = []
    even = []
    for i in range(len(p) - 1):
        a, b = p[i], p[i + 1]
        pair = (a, b) if a < b else (b, a)
        (odd if i % 2 == 0 else even).append(pair)
    return sorted(odd), sorted(even)


def oscillation_schedule(n: int) -> Schedule:
    """2n alternating rounds on the path 0-1-...-(n-1).

    Replayed on that path, every agent traverses the whole path (and so
    visits every vertex), acquainting all pairs within the 2n rounds.
    """
    if n < 1:
        raise ValueError("n must be positive")
    odd, even = oscillation_matchings(range(n))
    return Schedule.from_alternating(n, odd, even, 2 * n)


# ---------------------------------------------------------------------------
# team strategy for G(n,p)


@dataclass(frozen=True)
class TeamPlan:
    """Partition of a Hamiltonian path into consecutive segments of k
    vertices (the last may be smaller); teams oscillate independently."""

    k: int
    segments: tuple[tuple[int, ...], ...]
    path: tuple[int, ...]

    def __post_init__(self):
        flat = [v for seg in self.segments for v in seg]
        if flat != list(self.path):
            raise ValueError("segments must partition the path in order")
        if any(len(seg) != self.k for seg in self.segments[:-1]):
            raise ValueError("only the last segment may be short")
        if self.segments and not (1 <= len(self.segments[-1]) <= self.k):
            raise ValueError("last segment size out of range")


def team_plan(path: Iterable[int], k: int) -> TeamPlan:
    p = tuple(path)
    if k < 1:
        raise ValueError("k must be positive")
    segments = tuple(p[i : i + k] for i in range(0, len(p), k))
    return TeamPlan(k=k, segments=segments, path=p)


def gnp_team_strategy(
    g: Graph,
    p: float,
    mode: str = "direct",
    eps: float = 1.0,
    seed: int = 0,
) -> Schedule:
    """Split a Hamiltonian path into teams of ~2.5*log_{1/(1-p)} n vertices
    and oscillate all teams simultaneously for 2*ceil(k) rounds.

    ``direct`` sizes teams straight from p; ``strict`` sizes them from the
    p2 of the two-phase exposure split (larger teams, used for fidelity
    experiments).  The schedule has exactly min(2*ceil(k), 2n) rounds.
    """
    if g.n == 1:
        return oscillation_schedule(1)
    path = find_hamiltonian_path(g, seed=seed)
    if path is None:
        raise NoHamiltonianPath(f"no Hamiltonian path found in budget (n={g.n})")
    if mode == "direct":
        k_real = team_k(g.n, p)
    elif mode == "strict":
        _, p2 = exposure_split(g.n, p, eps)
        k_real = 2.5 * math.log(g.n) / -math.log1p(-p2)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    k = min(max(math.ceil(k_real), 2), g.n)
    plan = team_plan(path, k)
    odd: MatchingRound = []
    even: MatchingRound = []
    for seg in plan.segments:
        o, e = oscillation_matchings(seg)
        odd.extend(o)
        even.extend(e)
    odd.sort()
    even.sort()
    return Schedule.from_alternating(g.n, odd, even, 2 * k)


# ---------------------------------------------------------------------------
# unlabeled routing on trees


@dataclass
class RouteRequest:
    """Move a team occupying S onto T (as sets) inside a tree."""

    tree: Tree
    S: frozenset[int]
    T: frozenset[int]
    ell: Optional[int] = None

    def max_distance(self) -> int:
        if self.ell is None:
            self.ell = max_dist(self.tree, self.S, self.T)
        return self.ell


def tree_route(req: RouteRequest, team: Iterable[int]) -> Schedule:
    """Schedule of tree matchings after which the team occupies exactly T.

    Bystanders may be displaced; that is harmless because acquaintance is
    monotone.  Empirically the length stays within 4*(ell + 2(k-1)).
    """
    team = set(team)
    S = set(req.S)
    T = set(req.T)
    if len(S) != len(T):
        raise SizeMismatch(f"|S|={len(S)} but |T|={len(T)}")
    if len(team) != len(S):
        raise SizeMismatch(f"team size {len(team)} but |S|={len(S)}")
    rounds = route_rounds(req.tree, S, T)
    return Schedule.from_matching_rounds(req.tree.n, rounds)


def route_rounds(tree: Tree, sources: set[int], targets: set[int]) -> list[MatchingRound]:
    """Greedy flow routing: every tree edge knows the net number of team
    agents that must cross it (subtree surplus), and each round executes a
    maximal set of demanded, non-conflicting swaps.

    Vertices are processed in ascending id, which fixes the output.  Each
    executed swap reduces the total residual demand by one, so the routine
    terminates with all subtree counts balanced, i.e. with the team exactly
    on ``targets``.
    """
    if len(sources) != len(targets):
        raise SizeMismatch(f"|S|={len(sources)} but |T|={len(targets)}")
    if sources == targets:
        return []
    n = tree.n
    root = min(targets)
    order, parent, _ = bfs_tree(tree, root)
    order_list = order.tolist()
    parent_list = parent.tolist()

    balance = [0] * n  # becomes: team agents minus targets in subtree(v)
    for v in sources:
        balance[v] += 1
    for v in targets:
        balance[v] -= 1
    for v in reversed(order_list[1:]):
        balance[parent_list[v]] += balance[v]
    res = balance
    res[root] = 0

    children: list[list[int]] = [[] for _ in range(n)]
    for v in order_list[1:]:
        children[parent_list[v]].append(v)

    team_at = bytearray(n)
    for v in sources:
        team_at[v] = 1

    remaining = sum(abs(r) for r in res)

    def movable(v: int) -> int:
        """0: no move, 1: team goes up across (v, parent), -1: comes down."""
        r = res[v]
        if r == 0:
            return 0
        p = parent_list[v]
        if r > 0 and team_at[v] and not team_at[p]:
            return 1
        if r < 0 and team_at[p] and not team_at[v]:
            return -1
        return 0

    cand = {v for v in range(n) if v != root and movable(v)}
    rounds: list[MatchingRound] = []
    while remaining > 0:
        used = bytearray(n)
        chosen: list[tuple[int, int]] = []
        stale = []
        for v in sorted(cand):
            direction = movable(v)
            if direction == 0:
                stale.append(v)
                continue
            p = parent_list[v]
            if used[v] or used[p]:
                continue
            used[v] = 1
            used[p] = 1
            chosen.append((v, direction))
        for v in stale:
            cand.discard(v)
        if not chosen:
            raise AssertionError("tree router stalled with unmet demand")
        pairs: MatchingRound = []
        for v, direction in chosen:
            p = parent_list[v]
            pairs.append((v, p) if v < p else (p, v))
            team_at[v], team_at[p] = team_at[p], team_at[v]
            res[v] -= direction
            remaining -= 1
            for w in (v, p):
                if w != root and movable(w):
                    cand.add(w)
                for c in children[w]:
                    if movable(c):
                        cand.add(c)
        rounds.append(sorted(pairs))
    return rounds


# ---------------------------------------------------------------------------
# caterpillar and general tree strategies


class _Placements:
    """Tracks agent positions while a strategy lays out its rounds."""

    __slots__ = ("occ", "loc")

    def __init__(self, n: int):
        self.occ = list(range(n))
        self.loc = list(range(n))

    def apply(self, pairs: MatchingRound) -> None:
        occ = self.occ
        loc = self.loc
        for u, v in pairs:
            au = occ[u]
            av = occ[v]
            occ[u] = av
            occ[v] = au
            loc[au] = v
            loc[av] = u

    def positions(self, agents: Iterable[int]) -> set[int]:
        loc = self.loc
        return {loc[a] for a in agents}


def _agent_chunks(n: int, size: int) -> list[list[int]]:
    return [list(range(i, min(i + size, n))) for i in range(0, n, size)]


def iter_caterpillar_strategy(c: Caterpillar) -> Iterator[MatchingRound]:
    """Rounds of the spine-sweep strategy on a caterpillar arena.

    Agents are split into ceil(n/s) teams of spine capacity s; each team
    is routed onto the spine and oscillated across it for 2s rounds.  A
    sweeping agent passes within one edge of every vertex, so after every
    team has swept, all pairs are acquainted.
    """
    tree = c.tree
    n = tree.n
    spine = c.spine
    s = len(spine)
    odd, even = oscillation_matchings(spine)
    sim = _Placements(n)
    for team in _agent_chunks(n, s):
        src = sim.positions(team)
        dst = set(spine[: len(team)])
        for rnd in route_rounds(tree, src, dst):
            sim.apply(rnd)
            yield rnd
        for r in range(2 * s):
            rnd = odd if r % 2 == 0 else even
            sim.apply(rnd)
            yield rnd


def caterpillar_strategy(c: Caterpillar) -> Schedule:
    return Schedule.from_matching_rounds(c.tree.n, iter_caterpillar_strategy(c))


def iter_tree_strategy(t: Tree) -> Iterator[MatchingRound]:
    """Rounds of the pairwise team-meeting strategy on a tree.

    Pulls out a caterpillar of k >= log2(n) vertices, splits the agents
    into teams of floor(k/2), and for every pair of teams routes both
    onto the caterpillar and sweeps them across its spine in groups of
    spine capacity.  Everyone parked on the caterpillar is within one
    edge of the spine, so each sweep acquaints the sweeping group with
    both teams; over all pairs of teams, all agent pairs are covered.
    """
    n = t.n
    if n == 1:
        return
    cat = largest_caterpillar(t)
    k = cat.size
    team_size = max(1, k // 2)
    teams = _agent_chunks(n, team_size)
    m = len(teams)

    to_global = cat.vertices.tolist()
    to_local = {g: i for i, g in enumerate(to_global)}
    spine_g = [to_global[v] for v in cat.spine]
    legs_g = sorted(set(to_global) - set(spine_g))
    fill_order = spine_g + legs_g
    fill_rank = {v: i for i, v in enumerate(fill_order)}
    s = len(spine_g)
    odd, even = oscillation_matchings(spine_g)

    sim = _Placements(n)
    for i in range(m):
        for j in range(i + 1, m):
            union = teams[i] + teams[j]
            src = sim.positions(union)
            dst = set(fill_order[: len(union)])
            for rnd in route_rounds(t, src, dst):
                sim.apply(rnd)
                yield rnd
            ordered = sorted(union, key=lambda a: fill_rank[sim.loc[a]])
            for g0 in range(0, len(ordered), s):
                group = ordered[g0 : g0 + s]
                src_l = {to_local[sim.loc[a]] for a in group}
                dst_l = set(cat.spine[: len(group)])
                for rnd in route_rounds(cat.tree, src_l, dst_l):
                    g_rnd = sorted(
                        (to_global[u], to_global[v])
                        if to_global[u] < to_global[v]
                        else (to_global[v], to_global[u])
                        for u, v in rnd
                    )
                    sim.apply(g_rnd)
                    yield g_rnd
                for r in range(2 * s):
                    rnd = odd if r % 2 == 0 else even
                    sim.apply(rnd)
                    yield rnd


def tree_strategy(t: Tree) -> Schedule:
    return Schedule.from_matching_rounds(t.n, iter_tree_strategy(t))


def general_graph_strategy(g: Graph) -> Schedule:
    """Tree strategy on a deterministic spanning tree; legal on g because
    every tree edge is a g edge, and completion only improves with more
    edges present."""
    tree = spanning_tree(g)  # raises DisconnectedGraph
    return Schedule.from_matching_rounds(g.n, iter_tree_strategy(tree))


def iter_general_graph_strategy(g: Graph) -> Iterator[MatchingRound]:
    tree = spanning_tree(g)
    return iter_tree_strategy(tree)

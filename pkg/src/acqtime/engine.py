"""State machine for the acquaintance process.

Two round models: ``matching`` (swap the occupants of a set of disjoint
edges) and ``placement`` (an arbitrary bijection relocates every agent,
the helicopter variant).  Replay validates rounds, tracks the monotone
acquaintance relation and reports when all C(n,2) agent pairs have been
acquainted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional, Sequence, Union

import numpy as np

from . import _kernels
from .errors import IllegalMatching, NotABijection
from .graphs import Graph

MODEL_MATCHING = "matching"
MODEL_PLACEMENT = "placement"

MatchingRound = Sequence[tuple[int, int]]

_CHUNK_ROUNDS = 65536


def total_pairs(n: int) -> int:
    return n * (n - 1) // 2


def pair_index(n: int, a: int, b: int) -> int:
    """Index of the unordered agent pair {a,b} in lexicographic order."""
    if a == b:
        raise ValueError("pair must be distinct")
    if a > b:
        a, b = b, a
    return a * (2 * n - a - 1) // 2 + (b - a - 1)


class Schedule:
    """An ordered list of rounds under a single model.

    Matching rounds are stored as flat endpoint arrays with CSR offsets
    so schedules with millions of rounds stay compact; placement rounds
    are one permutation array each.
    """

    def __init__(self, model: str, n: int, us=None, vs=None, offsets=None, placements=None):
        if model not in (MODEL_MATCHING, MODEL_PLACEMENT):
            raise ValueError(f"unknown model {model!r}")
        self.model = model
        self.n = int(n)
        if model == MODEL_MATCHING:
            self._us = np.asarray(us if us is not None else [], dtype=np.int64)
            self._vs = np.asarray(vs if vs is not None else [], dtype=np.int64)
            self._off = np.asarray(offsets if offsets is not None else [0], dtype=np.int64)
            self._placements = None
        else:
            self._us = self._vs = self._off = None
            self._placements = [np.asarray(p, dtype=np.int64) for p in (placements or [])]

    @classmethod
    def from_matching_rounds(cls, n: int, rounds: Iterable[MatchingRound]) -> "Schedule":
        us: list[int] = []
        vs: list[int] = []
        off = [0]
        for rnd in rounds:
            for u, v in rnd:
                if u > v:
                    u, v = v, u
                us.append(int(u))
                vs.append(int(v))
            off.append(len(us))
        return cls(MODEL_MATCHING, n, us=us, vs=vs, offsets=off)

    @classmethod
    def from_placements(cls, n: int, placements: Iterable[Sequence[int]]) -> "Schedule":
        return cls(MODEL_PLACEMENT, n, placements=list(placements))

    @classmethod
    def from_alternating(
        cls, n: int, first: MatchingRound, second: MatchingRound, rounds: int
    ) -> "Schedule":
        """``rounds`` rounds alternating between two fixed matchings,
        built by array tiling (oscillation schedules are periodic)."""
        a_us = np.array([min(p) for p in first], dtype=np.int64)
        a_vs = np.array([max(p) for p in first], dtype=np.int64)
        b_us = np.array([min(p) for p in second], dtype=np.int64)
        b_vs = np.array([max(p) for p in second], dtype=np.int64)
        pair_us = np.concatenate([a_us, b_us])
        pair_vs = np.concatenate([a_vs, b_vs])
        full, extra = divmod(rounds, 2)
        us = np.tile(pair_us, full)
        vs = np.tile(pair_vs, full)
        if extra:
            us = np.concatenate([us, a_us])
            vs = np.concatenate([vs, a_vs])
        sizes = np.empty(rounds + 1, dtype=np.int64)
        sizes[0] = 0
        sizes[1::2] = len(first)
        if rounds > 1:
            sizes[2::2] = len(second)
        off = np.cumsum(sizes)
        return cls(MODEL_MATCHING, n, us=us, vs=vs, offsets=off)

    def __len__(self) -> int:
        if self.model == MODEL_MATCHING:
            return int(self._off.shape[0] - 1)
        return len(self._placements)

    def matching_round(self, i: int) -> list[tuple[int, int]]:
        lo, hi = int(self._off[i]), int(self._off[i + 1])
        return list(zip(self._us[lo:hi].tolist(), self._vs[lo:hi].tolist()))

    def placement_round(self, i: int) -> np.ndarray:
        return self._placements[i]

    def iter_rounds(self) -> Iterator:
        for i in range(len(self)):
            if self.model == MODEL_MATCHING:
                yield self.matching_round(i)
            else:
                yield self._placements[i]

    def arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return self._us, self._vs, self._off

    def __eq__(self, other) -> bool:
        if not isinstance(other, Schedule) or self.model != other.model or self.n != other.n:
            return False
        if self.model == MODEL_MATCHING:
            return (
                bool(np.array_equal(self._off, other._off))
                and bool(np.array_equal(self._us, other._us))
                and bool(np.array_equal(self._vs, other._vs))
            )
        return len(self._placements) == len(other._placements) and all(
            np.array_equal(a, b) for a, b in zip(self._placements, other._placements)
        )

    # -- JSON wire format --

    def to_json_obj(self) -> dict:
        rounds: list = []
        if self.model == MODEL_MATCHING:
            for i in range(len(self)):
                rounds.append(sorted([list(p) for p in self.matching_round(i)]))
        else:
            rounds = [p.tolist() for p in self._placements]
        return {"model": self.model, "n": self.n, "rounds": rounds}

    @classmethod
    def from_json_obj(cls, obj: dict) -> "Schedule":
        model = obj["model"]
        n = int(obj["n"])
        rounds = obj["rounds"]
        if model == MODEL_MATCHING:
            parsed = []
            for rnd in rounds:
                pairs = []
                for pair in rnd:
                    if len(pair) != 2:
                        raise ValueError("matching entries must be [u, v] pairs")
                    u, v = int(pair[0]), int(pair[1])
                    pairs.append((u, v) if u < v else (v, u))
                parsed.append(pairs)
            return cls.from_matching_rounds(n, parsed)
        if model == MODEL_PLACEMENT:
            perms = []
            for rnd in rounds:
                if len(rnd) != n:
                    raise ValueError("placement rounds must list all n images")
                perms.append([int(x) for x in rnd])
            return cls.from_placements(n, perms)
        raise ValueError(f"unknown model {model!r}")

    def save(self, path) -> None:
        with open(path, "w", encoding="ascii") as fh:
            json.dump(self.to_json_obj(), fh)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "Schedule":
        with open(path, "r", encoding="ascii") as fh:
            return cls.from_json_obj(json.load(fh))


@dataclass
class RunReport:
    """Replay summary.  ``completion_round`` counts executed rounds, with
    0 meaning the initial placement was already complete."""

    rounds_executed: int
    completed: bool
    completion_round: Optional[int]
    acquainted_per_round: Optional[np.ndarray]
    final_acquainted: int

    def to_json_obj(self) -> dict:
        return {
            "rounds_executed": self.rounds_executed,
            "completed": self.completed,
            "completion_round": self.completion_round,
            "final_acquainted": self.final_acquainted,
            "acquainted_per_round": None
            if self.acquainted_per_round is None
            else [int(x) for x in self.acquainted_per_round],
        }


class ProcessState:
    """Mutable process state: a placement bijection plus the symmetric,
    monotone acquaintance relation (flat boolean array over agent pairs)."""

    __slots__ = ("n", "occ", "loc", "acq", "count", "visits", "_stamp", "_round_no")

    def __init__(self, n: int):
        self.n = n
        self.occ = np.arange(n, dtype=np.int64)  # vertex -> agent
        self.loc = np.arange(n, dtype=np.int64)  # agent -> vertex
        self.acq = np.zeros(total_pairs(n), dtype=np.uint8)
        self.count = 0
        self.visits = None
        self._stamp = np.full(n, -1, dtype=np.int64)
        self._round_no = 0

    def acquainted(self, a: int, b: int) -> bool:
        return bool(self.acq[pair_index(self.n, a, b)])

    @property
    def is_complete(self) -> bool:
        return self.count == total_pairs(self.n)

    def placement_is_bijection(self) -> bool:
        return bool(np.array_equal(self.loc[self.occ], np.arange(self.n)))

    def agent_positions(self, agents: Iterable[int]) -> set[int]:
        return {int(self.loc[a]) for a in agents}


def init_state(g: Graph, track_visits: bool = False) -> ProcessState:
    """Agent i starts on vertex i; pairs on edges are acquainted for free."""
    s = ProcessState(g.n)
    if track_visits:
        s.visits = np.zeros(g.n * g.n, dtype=np.uint8)
        s.visits[np.arange(g.n) * g.n + np.arange(g.n)] = 1
    _acquaint_all_edges(s, g)
    return s


def _acquaint_all_edges(s: ProcessState, g: Graph) -> None:
    if g.m == 0:
        return
    a = s.occ[g.eu]
    b = s.occ[g.ev]
    lo = np.minimum(a, b)
    hi = np.maximum(a, b)
    idx = lo * (2 * s.n - lo - 1) // 2 + (hi - lo - 1)
    fresh = s.acq[idx] == 0
    s.count += int(fresh.sum())
    s.acq[idx[fresh]] = 1


def _normalize_matching(m: MatchingRound) -> tuple[np.ndarray, np.ndarray]:
    us = np.empty(len(m), dtype=np.int64)
    vs = np.empty(len(m), dtype=np.int64)
    for i, (u, v) in enumerate(m):
        if u > v:
            u, v = v, u
        us[i] = u
        vs[i] = v
    return us, vs


def apply_matching(s: ProcessState, g: Graph, m: MatchingRound) -> ProcessState:
    """Swap the occupants of each matched edge; returns the same state."""
    us, vs = _normalize_matching(m)
    off = np.array([0, len(m)], dtype=np.int64)
    status, _, count, _ = _run_chunk(s, g, us, vs, off, record=None, stop=False)
    s._round_no += 1
    if status == _kernels.ERR_NON_EDGE:
        raise IllegalMatching("non_edge")
    if status == _kernels.ERR_OVERLAP:
        raise IllegalMatching("overlap")
    s.count = count
    return s


def apply_placement(s: ProcessState, g: Graph, pi: Sequence[int]) -> ProcessState:
    """Fly the agent on vertex v to vertex pi[v], simultaneously for all v."""
    pi = np.asarray(pi, dtype=np.int64)
    if pi.shape[0] != s.n or not np.array_equal(np.sort(pi), np.arange(s.n)):
        raise NotABijection()
    new_occ = np.empty_like(s.occ)
    new_occ[pi] = s.occ
    s.occ = new_occ
    s.loc = pi[s.loc]
    if s.visits is not None:
        s.visits[s.occ * s.n + np.arange(s.n)] = 1
    _acquaint_all_edges(s, g)
    return s


def _run_chunk(s: ProcessState, g: Graph, us, vs, off, record, stop: bool):
    track = s.visits is not None
    dummy = s.visits if track else np.empty(0, dtype=np.uint8)
    counts = record if record is not None else np.empty(0, dtype=np.int64)
    indptr, indices = g.adjacency()
    return _kernels.replay_matching_chunk(
        s.n,
        g.edge_keys(),
        g.eu,
        g.ev,
        indptr,
        indices,
        us,
        vs,
        off,
        s.occ,
        s.loc,
        s.acq,
        s._stamp,
        dummy,
        track,
        counts,
        record is not None,
        s.count,
        total_pairs(s.n),
        -1,
        s._round_no,
        stop,
    )


RoundsLike = Union[Schedule, Iterable]


def _chunks_of_rounds(rounds: Iterable[MatchingRound]) -> Iterator[tuple[np.ndarray, np.ndarray, np.ndarray]]:
    us: list[int] = []
    vs: list[int] = []
    off = [0]
    for rnd in rounds:
        for u, v in rnd:
            if u > v:
                u, v = v, u
            us.append(int(u))
            vs.append(int(v))
        off.append(len(us))
        if len(off) - 1 >= _CHUNK_ROUNDS:
            yield (
                np.array(us, dtype=np.int64),
                np.array(vs, dtype=np.int64),
                np.array(off, dtype=np.int64),
            )
            us, vs, off = [], [], [0]
    if len(off) > 1:
        yield (
            np.array(us, dtype=np.int64),
            np.array(vs, dtype=np.int64),
            np.array(off, dtype=np.int64),
        )


def run_schedule(
    g: Graph,
    schedule: RoundsLike,
    track_visits: bool = False,
    record_counts: bool = True,
    stop_on_complete: bool = False,
    model: str = MODEL_MATCHING,
) -> RunReport:
    """Replay a schedule from the initial placement and report progress.

    ``schedule`` is a Schedule or, for matching schedules too large to
    materialize, any iterable of matching rounds.  Round errors carry the
    1-based index of the offending round.  ``acquainted_per_round`` holds
    the running pair count after each executed round, preceded by the
    initial count; it is omitted when ``record_counts`` is false.
    """
    if isinstance(schedule, Schedule):
        model = schedule.model
        if schedule.n != g.n:
            raise ValueError("schedule and graph disagree on n")
    s = init_state(g, track_visits=track_visits)
    total = total_pairs(g.n)
    counts: list[int] = [s.count]
    completion = 0 if s.count == total else -1

    if model == MODEL_PLACEMENT:
        if not isinstance(schedule, Schedule):
            schedule = Schedule.from_placements(g.n, schedule)
        executed = 0
        for i in range(len(schedule)):
            if stop_on_complete and completion >= 0:
                break
            try:
                apply_placement(s, g, schedule.placement_round(i))
            except NotABijection:
                raise NotABijection(round_index=i + 1)
            executed += 1
            counts.append(s.count)
            if completion < 0 and s.count == total:
                completion = executed
        return _report(s, total, executed, completion, counts if record_counts else None)

    if isinstance(schedule, Schedule):
        chunk_iter = iter([schedule.arrays()])
    else:
        chunk_iter = _chunks_of_rounds(schedule)

    executed = 0
    for us, vs, off in chunk_iter:
        nrounds = off.shape[0] - 1
        rec = np.empty(nrounds, dtype=np.int64) if record_counts else None
        stop = stop_on_complete and completion < 0
        status, applied, count, comp = _run_chunk(s, g, us, vs, off, rec, stop)
        bad_round = executed + applied + 1
        if status == _kernels.ERR_NON_EDGE:
            raise IllegalMatching("non_edge", round_index=bad_round)
        if status == _kernels.ERR_OVERLAP:
            raise IllegalMatching("overlap", round_index=bad_round)
        if status != _kernels.OK:
            raise AssertionError("per-round growth exceeded |E|")
        s.count = count
        s._round_no += applied
        executed += applied
        if record_counts:
            counts.extend(rec[:applied].tolist())
        if comp >= 0 and completion < 0:
            completion = comp
        if not s.placement_is_bijection():
            raise AssertionError("placement stopped being a bijection")
        if stop_on_complete and completion >= 0:
            break
    return _report(s, total, executed, completion, counts if record_counts else None)


def _report(s, total, executed, completion, counts) -> RunReport:
    arr = None
    if counts is not None:
        arr = np.array(counts, dtype=np.int64)
        if np.any(np.diff(arr) < 0):
            raise AssertionError("acquaintance count decreased")
    return RunReport(
        rounds_executed=executed,
        completed=completion >= 0,
        completion_round=completion if completion >= 0 else None,
        acquainted_per_round=arr,
        final_acquainted=s.count,
    )


def final_placement(g: Graph, schedule: RoundsLike, model: str = MODEL_MATCHING) -> np.ndarray:
    """Agent -> vertex map after replaying a schedule (no acquaintance)."""
    if isinstance(schedule, Schedule):
        model = schedule.model
        rounds = schedule.iter_rounds()
    else:
        rounds = iter(schedule)
    n = g.n
    occ = np.arange(n, dtype=np.int64)
    loc = np.arange(n, dtype=np.int64)
    edges = g.edge_set()
    if model == MODEL_PLACEMENT:
        for pi in rounds:
            pi = np.asarray(pi, dtype=np.int64)
            loc = pi[loc]
        return loc
    for rnd in rounds:
        seen: set[int] = set()
        for u, v in rnd:
            a, b = (u, v) if u < v else (v, u)
            if (a, b) not in edges:
                raise IllegalMatching("non_edge")
            if a in seen or b in seen:
                raise IllegalMatching("overlap")
            seen.add(a)
            seen.add(b)
            au, av = occ[a], occ[b]
            occ[a], occ[b] = av, au
            loc[au], loc[av] = b, a
    return loc


def matching_to_placement(n: int, m: MatchingRound) -> np.ndarray:
    """The placement equivalent to swapping along matching ``m``."""
    pi = np.arange(n, dtype=np.int64)
    for u, v in m:
        pi[u], pi[v] = v, u
    return pi

"""Reproducible experiment grids over (n, p, seed) cells.

Each cell samples an instance, builds a schedule with the selected
strategy, replays it and emits one CSV row.  Given the same config the
output file is byte-identical, whatever the worker count.
"""

from __future__ import annotations

import json
import math
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .engine import run_schedule, total_pairs
from .errors import AcqtimeError
from .graphs import Graph, gnp_sample, random_caterpillar, random_tree
from .strategies import (
    caterpillar_strategy,
    general_graph_strategy,
    gnp_team_strategy,
    oscillation_schedule,
    tree_strategy,
)

CSV_HEADER = "n,p,seed,strategy,rounds,completed,acquainted_pairs,ratio"

STRATEGIES = ("oscillation", "team", "caterpillar", "tree", "general")

_P_LOG_RE = re.compile(r"^\s*([0-9.eE+-]+)\s*\*\s*ln\(n\)\s*/\s*n\s*$")

_MIX = 0x9E3779B97F4A7C15
_MASK = (1 << 64) - 1


def splitmix64(x: int) -> int:
    """One step of the splitmix64 generator (public-domain constants)."""
    x = (x + _MIX) & _MASK
    z = x
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK
    return z ^ (z >> 31)


def cell_seed(base_seed: int, n: int, p_index: int, replicate: int) -> int:
    """Per-cell seed: fold n, the p-grid index and the replicate into the
    base seed with chained splitmix64 steps."""
    x = base_seed & _MASK
    for v in (n, p_index, replicate):
        x = splitmix64(x ^ ((v * _MIX) & _MASK))
    return x


PSpec = Union[float, int, str]


def resolve_p(spec: PSpec, n: int) -> float:
    """A p specifier is either a constant or the string 'c*ln(n)/n'."""
    if isinstance(spec, (int, float)):
        return float(spec)
    m = _P_LOG_RE.match(spec)
    if not m:
        raise ValueError(f"bad p specifier {spec!r}; use a number or 'c*ln(n)/n'")
    return float(m.group(1)) * math.log(n) / n


@dataclass(frozen=True)
class ExperimentConfig:
    ns: tuple[int, ...]
    ps: tuple[PSpec, ...]
    seeds: int
    base_seed: int
    strategy: str
    mode: str = "direct"
    eps: float = 1.0
    spine_len: Optional[int] = None  # caterpillar runs; default max(2, n//2)

    def __post_init__(self):
        if any(n < 2 for n in self.ns):
            raise ValueError("all n must be at least 2")
        if self.seeds < 1:
            raise ValueError("need at least one seed per cell")
        if self.strategy not in STRATEGIES:
            raise ValueError(f"strategy must be one of {STRATEGIES}")
        for n in self.ns:
            for spec in self.ps:
                p = resolve_p(spec, n)
                if self.strategy == "team" and not (0.0 < p < 1.0):
                    raise ValueError(f"p={p} not in (0,1) for n={n}")

    @classmethod
    def from_json_obj(cls, obj: dict) -> "ExperimentConfig":
        return cls(
            ns=tuple(int(n) for n in obj["ns"]),
            ps=tuple(obj.get("ps", [0])),
            seeds=int(obj["seeds"]),
            base_seed=int(obj.get("base_seed", 0)),
            strategy=str(obj["strategy"]),
            mode=str(obj.get("mode", "direct")),
            eps=float(obj.get("eps", 1.0)),
            spine_len=None if obj.get("spine_len") is None else int(obj["spine_len"]),
        )

    @classmethod
    def load(cls, path) -> "ExperimentConfig":
        with open(path, "r", encoding="ascii") as fh:
            return cls.from_json_obj(json.load(fh))


@dataclass(frozen=True)
class ResultRow:
    n: int
    p: float
    seed: int
    strategy: str
    rounds: int
    completed: bool
    acquainted_pairs: int
    ratio: float

    def to_csv(self) -> str:
        return ",".join(
            (
                str(self.n),
                _fmt(self.p),
                str(self.seed),
                self.strategy,
                str(self.rounds),
                "true" if self.completed else "false",
                str(self.acquainted_pairs),
                _fmt(self.ratio),
            )
        )


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _ratio(strategy: str, rounds: int, n: int, p: float) -> float:
    if strategy == "team":
        return rounds * p / math.log(n)
    return rounds * math.log2(n) / (n * n)


def run_cell(config: ExperimentConfig, n: int, p_index: int, replicate: int) -> ResultRow:
    """One (n, p, seed) cell; strategy failures become completed=false
    rows rather than aborting the grid."""
    seed = cell_seed(config.base_seed, n, p_index, replicate)
    p = resolve_p(config.ps[p_index], n)
    strategy = config.strategy
    try:
        if strategy == "team":
            g = gnp_sample(n, p, seed)
            sched = gnp_team_strategy(g, p, mode=config.mode, eps=config.eps, seed=seed)
        elif strategy == "oscillation":
            g = Graph(n, [(i, i + 1) for i in range(n - 1)])
            sched = oscillation_schedule(n)
        elif strategy == "caterpillar":
            spine = config.spine_len if config.spine_len is not None else max(2, n // 2)
            cat = random_caterpillar(n, spine, seed)
            g = cat.tree
            sched = caterpillar_strategy(cat)
        elif strategy == "tree":
            g = random_tree(n, seed)
            sched = tree_strategy(g)
        elif strategy == "general":
            g = gnp_sample(n, p, seed)
            sched = general_graph_strategy(g)
    except AcqtimeError:
        return ResultRow(
            n=n,
            p=p,
            seed=seed,
            strategy=strategy,
            rounds=0,
            completed=False,
            acquainted_pairs=0,
            ratio=0.0,
        )
    report = run_schedule(g, sched, record_counts=False)
    rounds = report.rounds_executed
    return ResultRow(
        n=n,
        p=p,
        seed=seed,
        strategy=strategy,
        rounds=rounds,
        completed=report.completed and report.final_acquainted == total_pairs(n),
        acquainted_pairs=report.final_acquainted,
        ratio=_ratio(strategy, rounds, n, p),
    )


def _run_cell_tuple(args) -> tuple[tuple[int, int, int], ResultRow]:
    config, n, p_index, replicate = args
    return (n, p_index, replicate), run_cell(config, n, p_index, replicate)


def worker_count() -> int:
    """ACQ_THREADS caps workers; unset or 0 means run sequentially."""
    raw = os.environ.get("ACQ_THREADS", "0")
    try:
        return max(0, int(raw))
    except ValueError:
        return 0


def run_experiment(config: ExperimentConfig, workers: Optional[int] = None) -> list[ResultRow]:
    """All cells of the grid, ordered by (n, p index, replicate); the
    ordering is restored after parallel execution so output bytes never
    depend on the worker count."""
    cells = [
        (config, n, pi, r)
        for n in sorted(config.ns)
        for pi in range(len(config.ps))
        for r in range(config.seeds)
    ]
    if workers is None:
        workers = worker_count()
    if workers and workers > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            keyed = list(pool.map(_run_cell_tuple, cells, chunksize=1))
        keyed.sort(key=lambda kv: kv[0])
        return [row for _, row in keyed]
    return [run_cell(config, n, pi, r) for (_, n, pi, r) in cells]


def rows_to_csv(rows: Sequence[ResultRow]) -> str:
    lines = [CSV_HEADER]
    lines.extend(row.to_csv() for row in rows)
    return "\n".join(lines) + "\n"


def write_csv(rows: Sequence[ResultRow], path) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(rows_to_csv(rows))

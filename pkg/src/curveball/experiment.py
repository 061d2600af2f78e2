"""Perturbation-score mixing experiments.

Each chain kind is run ``reps`` times from the same starting graph; the
fraction of starting edges that have disappeared is recorded on a regular
step grid and averaged over repetitions.
"""
from __future__ import annotations

import csv
import math
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .chains import Chain, ChainKind, check_compatible, default_cadence, good_shuffle_kind
from .generators import gen_erdos_renyi, gen_preferential_attachment
from .graph_core import AdjacencySetRep, Flavor, read_graph
from .rng import Stream, default_seed


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    generator: dict
    kinds: list | None = None
    steps: int = 100_000
    reps: int = 10
    every: int | None = None
    seed: int | None = None
    window: int = 10
    tol: float = 0.005
    jobs: int = 1

    def __post_init__(self):
        if self.seed is None:
            self.seed = default_seed()
        if self.kinds is not None:
            if isinstance(self.kinds, str):
                self.kinds = self.kinds.split(",")
            self.kinds = [ChainKind.parse(k) if isinstance(k, str) else k for k in self.kinds]
            if not self.kinds:
                raise ConfigError("at least one chain kind is required")
        if self.steps < 0 or self.reps < 1:
            raise ConfigError("steps must be >= 0 and reps >= 1")
        if self.every is None:
            # shrink the default cadence to a divisor of N when needed
            self.every = math.gcd(self.steps, default_cadence(self.steps)) or 1
        if self.every < 1:
            raise ConfigError("every must be positive")
        if self.steps % self.every:
            raise ConfigError(f"cadence {self.every} does not divide steps {self.steps}")
        if self.generator.get("type") not in ("erdos_renyi", "preferential_attachment", "file"):
            raise ConfigError(f"unknown generator {self.generator.get('type')!r}")

    @classmethod
    def from_mapping(cls, data: dict) -> "ExperimentConfig":
        data = dict(data)
        gen = dict(data.pop("generator", {}))
        unknown = set(data) - {"kinds", "steps", "reps", "every", "seed", "window", "tol", "jobs"}
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        try:
            return cls(generator=gen, **data)
        except TypeError as exc:
            raise ConfigError(str(exc)) from None

    @classmethod
    def from_toml(cls, path) -> "ExperimentConfig":
        try:
            import tomllib
        except ModuleNotFoundError:  # python < 3.11
            import tomli as tomllib
        with open(path, "rb") as fh:
            return cls.from_mapping(tomllib.load(fh))


def default_kinds(flavor: Flavor) -> list:
    """Good-shuffle trades against adjusted switching, as in the reference protocol."""
    return [ChainKind.ADJUSTED_SWITCHING, good_shuffle_kind(flavor)]


def build_graph(gen: dict, seed: int) -> AdjacencySetRep:
    kind = gen["type"]
    rng = np.random.default_rng(seed)
    if kind == "erdos_renyi":
        return gen_erdos_renyi(int(gen["n"]), float(gen["p"]), bool(gen.get("directed", True)),
                               rng, self_loops=bool(gen.get("self_loops", False)))
    if kind == "preferential_attachment":
        return gen_preferential_attachment(int(gen["n"]), int(gen["m"]),
                                           bool(gen.get("directed", True)), rng)
    path = Path(gen["path"])
    if not path.exists():
        raise FileNotFoundError(path)
    return read_graph(path)


@dataclass
class PerturbationSeries:
    grid: np.ndarray
    runs: dict = field(default_factory=dict)  # (kind, rep) -> scores on grid

    def kinds(self) -> list:
        seen = []
        for kind, _ in self.runs:
            if kind not in seen:
                seen.append(kind)
        return seen

    def mean(self, kind: ChainKind) -> np.ndarray:
        return np.mean([s for (k, _), s in self.runs.items() if k is kind], axis=0)

    def plateau(self, kind: ChainKind, window: int = 10, tol: float = 0.005) -> int:
        return plateau_step(self.grid, self.mean(kind), window, tol)

    def long_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kind", "rep", "step", "score"])
        for (kind, rep), scores in self.runs.items():
            for step, score in zip(self.grid, scores):
                w.writerow([kind.value, rep, int(step), repr(float(score))])
        return buf.getvalue()

    def mean_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["kind", "step", "mean_score"])
        for kind in self.kinds():
            for step, score in zip(self.grid, self.mean(kind)):
                w.writerow([kind.value, int(step), repr(float(score))])
        return buf.getvalue()


def plateau_step(grid, scores, window: int = 10, tol: float = 0.005) -> int:
    """First grid step from which ``window`` consecutive points span at most ``tol``.

    Returns the last grid step when the series never stabilises.
    """
    grid = np.asarray(grid)
    scores = np.asarray(scores, dtype=float)
    if len(scores) == 0:
        raise ValueError("empty series")
    for k in range(len(scores) - window + 1):
        chunk = scores[k : k + window]
        if chunk.max() - chunk.min() <= tol:
            return int(grid[k])
    return int(grid[-1])


def _one_run(start: AdjacencySetRep, rows0, deg0, kind, steps, every, stream) -> np.ndarray:
    chain = Chain(start, kind, stream)
    scores = np.zeros(steps // every + 1)
    for t in range(1, len(scores)):
        chain.advance(every)
        scores[t] = chain.perturbation(rows0, deg0)
    return scores


def run_experiment(cfg: ExperimentConfig, start: AdjacencySetRep | None = None
                   ) -> PerturbationSeries:
    """Run every (kind, repetition) from one starting graph; deterministic in ``cfg.seed``."""
    if start is None:
        start = build_graph(cfg.generator, cfg.seed)
    kinds = cfg.kinds or default_kinds(start.flavor)
    for kind in kinds:
        check_compatible(start, kind)
    rows0, deg0 = start.to_arrays()
    grid = np.arange(0, cfg.steps + 1, cfg.every)
    tasks = [(kind, rep) for kind in kinds for rep in range(cfg.reps)]

    def work(task):
        kind, rep = task
        stream = Stream(cfg.seed, 1 + kind.code, rep)
        return _one_run(start, rows0, deg0, kind, cfg.steps, cfg.every, stream)

    if cfg.jobs > 1:
        with ThreadPoolExecutor(cfg.jobs) as pool:
            results = list(pool.map(work, tasks))
    else:
        results = [work(t) for t in tasks]
    return PerturbationSeries(grid, dict(zip(tasks, results)))

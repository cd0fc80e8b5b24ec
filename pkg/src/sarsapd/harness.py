"""Run orchestration: single runs, seed repeats, and parameter sweeps.

A run iterates the epoch engine until either the horizon is reached or
the state is provably absorbing.  "Provably" is deliberately narrow: the
lattice must be homogeneous *and* every agent traditional, because any
epsilon-greedy learner can re-introduce the extinct strategy (a pure
target-selection population is also frozen once homogeneous, since those
agents only ever copy a neighbour, but runs with learners still go to
horizon so their Q-tables keep the full history).  Runs that never
absorb report the tail average of the cooperation-rate series.

Repeats run seeds seed, seed+1, ..., seed+repeats-1 and reduce to the
sample mean and population standard deviation of the final cooperation
rate.  Sweeps fan independent (point, seed) jobs over a process pool;
row order in the output tables is fixed (row-major for the dilemma grid,
DS-major for the mixed-population sweep) regardless of job scheduling.
"""

from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from . import __version__
from .dynamics import (
    AgentGrid,
    AgentKind,
    EpochConfig,
    MODES,
    TraditionalRule,
    assign_kinds,
    run_epoch,
)
from .lattice import DilemmaParams, InitScheme, init_lattice, payoff_matrix
from .learning import LearningParams
from .metrics import EpochMetrics, cooperation_rate, epoch_metrics, snapshot, tail_average

#: desk-scale defaults: minutes per sweep instead of days
DESK_PRESET = {"size": 50, "epochs_max": 20_000, "repeats": 10}
#: full-scale defaults; a single run takes hours, sweeps much longer
FULL_PRESET = {"size": 200, "epochs_max": 500_000, "repeats": 20}


class Termination(Enum):
    ABSORBED_ALL_C = "absorbed-all-c"
    ABSORBED_ALL_D = "absorbed-all-d"
    TAIL_AVERAGE = "tail-average"


@dataclass
class RunConfig:
    """Everything a single run depends on; equal configs give equal outputs."""

    size: int = 50
    epochs_max: int = 20_000
    init: InitScheme = field(default_factory=InitScheme.random)
    mode: str = "traditional"
    rho: float = 0.5  # learner fraction, mixed mode only
    traditional_rule: TraditionalRule = TraditionalRule.FERMI_ONLY
    dg: float = 0.1
    dr: float = 0.1
    ds: float | None = None  # when set, forces dg = dr = ds
    learning: LearningParams = field(default_factory=LearningParams)
    seed: int = 0
    record_every: int = 1
    snapshot_epochs: tuple[int, ...] = ()
    tail_window: int = 1000

    def __post_init__(self):
        if self.ds is not None:
            self.dg = self.ds
            self.dr = self.ds
        if self.size < 2:
            raise ValueError(f"size must be >= 2, got {self.size}")
        if self.epochs_max < 1:
            raise ValueError(f"epochs_max must be >= 1, got {self.epochs_max}")
        if self.record_every < 1:
            raise ValueError(f"record_every must be >= 1, got {self.record_every}")
        if self.tail_window < 1:
            raise ValueError(f"tail_window must be >= 1, got {self.tail_window}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.mode == "mixed" and not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must lie in [0, 1], got {self.rho}")
        self.dilemma = DilemmaParams(self.dg, self.dr)  # validates ranges

    def epoch_config(self) -> EpochConfig:
        return EpochConfig(
            learning=self.learning,
            matrix=payoff_matrix(self.dilemma),
            traditional_rule=self.traditional_rule,
        )


@dataclass
class RunResult:
    final_coop: float
    terminated_by: Termination
    epochs_run: int
    coop_series: np.ndarray  # per-epoch cooperation rate, length epochs_run
    metrics: list[EpochMetrics]  # every record_every epochs
    snapshots: dict[int, np.ndarray]  # epoch -> class-code grid


def run_single(cfg: RunConfig, *, early_stop: bool = True, workers: int = 1) -> RunResult:
    """Execute one seeded run to absorption or horizon."""
    lat = init_lattice(cfg.size, cfg.init, cfg.seed)
    lat.kinds = assign_kinds(cfg.size, cfg.rho, cfg.mode, cfg.seed)
    agents = AgentGrid.from_kinds(lat.kinds, cfg.traditional_rule, cfg.seed)
    ecfg = cfg.epoch_config()

    all_traditional = bool((lat.kinds == AgentKind.TRADITIONAL).all())
    snap_at = set(cfg.snapshot_epochs)
    snapshots: dict[int, np.ndarray] = {}
    if 0 in snap_at:
        snapshots[0] = snapshot(lat)

    coop = np.empty(cfg.epochs_max)
    metrics: list[EpochMetrics] = []
    terminated = Termination.TAIL_AVERAGE
    epochs_run = cfg.epochs_max
    for t in range(1, cfg.epochs_max + 1):
        run_epoch(lat, agents, ecfg, t, cfg.seed, workers=workers)
        c = cooperation_rate(lat)
        coop[t - 1] = c
        if t % cfg.record_every == 0:
            metrics.append(epoch_metrics(lat, t))
        if t in snap_at:
            snapshots[t] = snapshot(lat)
        if early_stop and all_traditional and (c == 0.0 or c == 1.0):
            # homogeneous + imitation-only is a fixed point: stop here
            terminated = (
                Termination.ABSORBED_ALL_C if c == 1.0 else Termination.ABSORBED_ALL_D
            )
            epochs_run = t
            break

    coop = coop[:epochs_run]
    if terminated is Termination.TAIL_AVERAGE:
        final = tail_average(coop, min(cfg.tail_window, epochs_run))
    else:
        final = float(coop[-1])
    return RunResult(
        final_coop=final,
        terminated_by=terminated,
        epochs_run=epochs_run,
        coop_series=coop,
        metrics=metrics,
        snapshots=snapshots,
    )


@dataclass
class RepeatedResult:
    mean: float
    std: float  # population standard deviation over seeds
    finals: np.ndarray  # final cooperation rate per seed
    results: list[RunResult] | None  # populated only when keep_results


def _seeded(cfg: RunConfig, repeats: int) -> list[RunConfig]:
    return [replace(cfg, seed=cfg.seed + k) for k in range(repeats)]


def _map_runs(cfgs: list[RunConfig], jobs: int) -> list[RunResult]:
    if jobs > 1 and len(cfgs) > 1:
        with ProcessPoolExecutor(max_workers=min(jobs, len(cfgs))) as pool:
            return list(pool.map(run_single, cfgs, chunksize=1))
    return [run_single(c) for c in cfgs]


def run_repeated(
    cfg: RunConfig, repeats: int, *, jobs: int = 1, keep_results: bool = False
) -> RepeatedResult:
    """Run `repeats` seeds of one configuration and aggregate final cooperation."""
    if repeats < 1:
        raise ValueError(f"repeats must be >= 1, got {repeats}")
    results = _map_runs(_seeded(cfg, repeats), jobs)
    finals = np.array([r.final_coop for r in results])
    return RepeatedResult(
        mean=float(finals.mean()),
        std=float(finals.std()),
        finals=finals,
        results=results if keep_results else None,
    )


def value_grid(lo: float, hi: float, step: float) -> list[float]:
    """Inclusive lo..hi in the given step, rounded to keep CSV values clean."""
    if step <= 0:
        raise ValueError(f"step must be positive, got {step}")
    count = int(np.floor((hi - lo) / step + 1e-9))
    return [round(lo + k * step, 12) for k in range(count + 1)]


def sweep_heatmap(
    base: RunConfig,
    dg_range: tuple[float, float] = (0.0, 1.0),
    dr_range: tuple[float, float] = (0.0, 1.0),
    step: float = 0.01,
    repeats: int = 20,
    *,
    jobs: int = 1,
) -> list[tuple]:
    """Mean/std of final cooperation over the (dg, dr) grid, row-major dg-outer.

    Returns heatmap CSV rows: (dg, dr, mean, std, runs).
    """
    points = [
        (dg, dr) for dg in value_grid(*dg_range, step) for dr in value_grid(*dr_range, step)
    ]
    cfgs = [
        c
        for dg, dr in points
        for c in _seeded(replace(base, dg=dg, dr=dr, ds=None), repeats)
    ]
    results = _map_runs(cfgs, jobs)
    rows = []
    for i, (dg, dr) in enumerate(points):
        finals = np.array([r.final_coop for r in results[i * repeats : (i + 1) * repeats]])
        rows.append((dg, dr, float(finals.mean()), float(finals.std()), repeats))
    return rows


def sweep_rho(
    base: RunConfig,
    ds_values,
    rho_values,
    repeats: int = 20,
    *,
    jobs: int = 1,
) -> list[tuple]:
    """Mixed-population sweep over dilemma strength and learner fraction.

    Returns rho CSV rows (ds, rho, mean, std, runs) in DS-major order.
    """
    points = [(float(ds), float(rho)) for ds in ds_values for rho in rho_values]
    cfgs = [
        c
        for ds, rho in points
        for c in _seeded(replace(base, mode="mixed", ds=ds, rho=rho), repeats)
    ]
    results = _map_runs(cfgs, jobs)
    rows = []
    for i, (ds, rho) in enumerate(points):
        finals = np.array([r.final_coop for r in results[i * repeats : (i + 1) * repeats]])
        rows.append((ds, rho, float(finals.mean()), float(finals.std()), repeats))
    return rows


def manifest_pairs(cfg: RunConfig, extra: dict | None = None, wall_clock_s: float = 0.0):
    """Flat key=value pairs describing a run, for the provenance manifest."""
    pairs = {
        "version": f"sarsapd-{__version__}",
        "size": cfg.size,
        "epochs_max": cfg.epochs_max,
        "init": str(cfg.init),
        "mode": cfg.mode,
        "rho": cfg.rho,
        "traditional_rule": cfg.traditional_rule.value,
        "dg": cfg.dg,
        "dr": cfg.dr,
        "ds": "" if cfg.ds is None else cfg.ds,
        "alpha": cfg.learning.alpha,
        "gamma": cfg.learning.gamma,
        "epsilon": cfg.learning.epsilon,
        "noise_k": cfg.learning.k,
        "seed": cfg.seed,
        "record_every": cfg.record_every,
        "snapshot_epochs": ",".join(str(t) for t in cfg.snapshot_epochs),
        "tail_window": cfg.tail_window,
    }
    pairs.update(extra or {})
    pairs["wall_clock_s"] = round(wall_clock_s, 3)
    return pairs


def write_manifest(path, pairs: dict) -> None:
    with open(path, "w") as fh:
        for key, value in pairs.items():
            fh.write(f"{key}={value}\n")


class Stopwatch:
    """Wall-clock timer for manifests."""

    def __enter__(self):
        self._t0 = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self._t0
        return False

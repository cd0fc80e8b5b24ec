"""Observables and the plain-text file formats every tool agrees on.

Formats
-------
timeseries CSV
    header ``epoch,coop_rate,avg_reward,avg_reward_coop,avg_reward_def``,
    one row per recorded epoch.  Class averages over an empty class are
    written as 0.

snapshot file
    header line ``L=<side> epoch=<t>``, then L lines of L single-digit
    class codes with no separators.  Codes combine strategy and agent
    kind: 0 defector/non-learner, 1 cooperator/non-learner,
    2 cooperator/learner, 3 defector/learner.

heatmap CSV
    header ``Dg,Dr,mean_final_coop,std_final_coop,runs``.

rho CSV
    header ``DS,rho,mean_final_coop,std_final_coop,runs``.

Q-table CSV
    header ``state,action,value``, one row per table entry.

Floats are written with ``repr`` so files round-trip to the exact
double-precision value and re-runs of the same configuration are
byte-identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dynamics import AgentKind
from .lattice import Lattice

TIMESERIES_HEADER = "epoch,coop_rate,avg_reward,avg_reward_coop,avg_reward_def"
HEATMAP_HEADER = "Dg,Dr,mean_final_coop,std_final_coop,runs"
RHO_HEADER = "DS,rho,mean_final_coop,std_final_coop,runs"
QTABLE_HEADER = "state,action,value"


@dataclass(frozen=True)
class EpochMetrics:
    epoch: int
    coop_rate: float
    avg_reward: float
    avg_reward_coop: float  # 0 when no cooperators remain
    avg_reward_def: float  # 0 when no defectors remain


def cooperation_rate(lat: Lattice) -> float:
    """Fraction of cells currently cooperating (exact count over side^2)."""
    return np.count_nonzero(lat.strategies) / lat.cell_count()


def class_average_reward(lat: Lattice, *, strategy=None, kind=None, where=None) -> float:
    """Mean reward over the cells matching all given filters; 0 if none match.

    `strategy` and `kind` filter on the respective grids; `where` is an
    optional extra boolean mask of lattice shape.
    """
    mask = np.ones(lat.strategies.shape, dtype=bool)
    if strategy is not None:
        mask &= lat.strategies == int(strategy)
    if kind is not None:
        mask &= lat.kinds == int(kind)
    if where is not None:
        mask &= where
    count = int(np.count_nonzero(mask))
    if count == 0:
        return 0.0
    return float(lat.rewards[mask].mean())


def epoch_metrics(lat: Lattice, epoch: int) -> EpochMetrics:
    """All per-epoch observables, read after payoffs have committed."""
    coop = lat.strategies == 1
    n_coop = int(np.count_nonzero(coop))
    n = lat.cell_count()
    return EpochMetrics(
        epoch=epoch,
        coop_rate=n_coop / n,
        avg_reward=float(lat.rewards.mean()),
        avg_reward_coop=float(lat.rewards[coop].mean()) if n_coop else 0.0,
        avg_reward_def=float(lat.rewards[~coop].mean()) if n_coop < n else 0.0,
    )


def snapshot(lat: Lattice) -> np.ndarray:
    """Per-cell class codes combining strategy and learner/non-learner kind."""
    learner = lat.kinds != AgentKind.TRADITIONAL
    return np.where(learner, 2 + (1 - lat.strategies), lat.strategies).astype(np.int8)


def snapshot_to_grids(codes: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Invert `snapshot`: (strategy grid, learner mask)."""
    strategies = np.isin(codes, (1, 2)).astype(np.int8)
    return strategies, codes >= 2


def tail_average(series, window: int) -> float:
    """Arithmetic mean of the last `window` entries of a series."""
    arr = np.asarray(series, dtype=float)
    if not 1 <= window <= arr.size:
        raise ValueError(f"tail window must lie in 1..{arr.size}, got {window}")
    return float(arr[-window:].mean())


def _fmt(x) -> str:
    return repr(float(x))


def write_timeseries_csv(path, metrics) -> None:
    with open(path, "w") as fh:
        fh.write(TIMESERIES_HEADER + "\n")
        for m in metrics:
            fh.write(
                f"{m.epoch},{_fmt(m.coop_rate)},{_fmt(m.avg_reward)},"
                f"{_fmt(m.avg_reward_coop)},{_fmt(m.avg_reward_def)}\n"
            )


def read_timeseries_csv(path) -> list[EpochMetrics]:
    out = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != TIMESERIES_HEADER:
            raise ValueError(f"{path}: unexpected timeseries header {header!r}")
        for line in fh:
            epoch, *vals = line.strip().split(",")
            out.append(EpochMetrics(int(epoch), *(float(v) for v in vals)))
    return out


def write_snapshot(path, codes: np.ndarray, epoch: int) -> None:
    side = codes.shape[0]
    with open(path, "w") as fh:
        fh.write(f"L={side} epoch={epoch}\n")
        for row in codes:
            fh.write("".join(str(int(c)) for c in row) + "\n")


def read_snapshot(path) -> tuple[np.ndarray, int]:
    with open(path) as fh:
        header = fh.readline().split()
        side = int(header[0].removeprefix("L="))
        epoch = int(header[1].removeprefix("epoch="))
        codes = np.array(
            [[int(ch) for ch in fh.readline().strip()] for _ in range(side)], dtype=np.int8
        )
    if codes.shape != (side, side):
        raise ValueError(f"{path}: snapshot body does not match L={side}")
    return codes, epoch


def write_heatmap_csv(path, rows) -> None:
    """Rows are (dg, dr, mean_final_coop, std_final_coop, runs) tuples."""
    with open(path, "w") as fh:
        fh.write(HEATMAP_HEADER + "\n")
        for dg, dr, mean, std, runs in rows:
            fh.write(f"{_fmt(dg)},{_fmt(dr)},{_fmt(mean)},{_fmt(std)},{int(runs)}\n")


def read_heatmap_csv(path) -> list[tuple]:
    return _read_sweep(path, HEATMAP_HEADER)


def write_rho_csv(path, rows) -> None:
    """Rows are (ds, rho, mean_final_coop, std_final_coop, runs) tuples."""
    with open(path, "w") as fh:
        fh.write(RHO_HEADER + "\n")
        for ds, rho, mean, std, runs in rows:
            fh.write(f"{_fmt(ds)},{_fmt(rho)},{_fmt(mean)},{_fmt(std)},{int(runs)}\n")


def read_rho_csv(path) -> list[tuple]:
    return _read_sweep(path, RHO_HEADER)


def _read_sweep(path, expected_header: str) -> list[tuple]:
    out = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != expected_header:
            raise ValueError(f"{path}: unexpected header {header!r}")
        for line in fh:
            a, b, mean, std, runs = line.strip().split(",")
            out.append((float(a), float(b), float(mean), float(std), int(runs)))
    return out


def write_qtable_csv(path, q: np.ndarray) -> None:
    with open(path, "w") as fh:
        fh.write(QTABLE_HEADER + "\n")
        for s in range(q.shape[0]):
            for a in range(q.shape[1]):
                fh.write(f"{s},{a},{_fmt(q[s, a])}\n")

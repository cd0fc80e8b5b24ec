"""Parsers for the simulator's plain-text outputs.

The four input kinds and their exact layouts:

timeseries CSV   header ``epoch,coop_rate,avg_reward,avg_reward_coop,avg_reward_def``
heatmap CSV      header ``Dg,Dr,mean_final_coop,std_final_coop,runs``
rho CSV          header ``DS,rho,mean_final_coop,std_final_coop,runs``
snapshot         header line ``L=<side> epoch=<t>`` followed by `side` rows
                 of `side` single digits; codes 0..3 combine strategy and
                 learner flag (0 defector/non-learner, 1 cooperator/
                 non-learner, 2 cooperator/learner, 3 defector/learner)

Malformed input raises FormatError carrying the offending line number,
which the CLI turns into a nonzero exit naming file and line.
"""

from __future__ import annotations

import numpy as np

TIMESERIES_HEADER = "epoch,coop_rate,avg_reward,avg_reward_coop,avg_reward_def"
HEATMAP_HEADER = "Dg,Dr,mean_final_coop,std_final_coop,runs"
RHO_HEADER = "DS,rho,mean_final_coop,std_final_coop,runs"


class FormatError(ValueError):
    def __init__(self, path, lineno: int, message: str):
        super().__init__(f"{path}:{lineno}: {message}")
        self.path = path
        self.lineno = lineno


def _read_csv(path, header: str, n_floats: int):
    """Shared CSV body: validated header, n_floats floats then an int count."""
    rows = []
    with open(path) as fh:
        first = fh.readline().rstrip("\n")
        if first != header:
            raise FormatError(path, 1, f"expected header {header!r}, got {first!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != n_floats + 1:
                raise FormatError(
                    path, lineno, f"expected {n_floats + 1} fields, got {len(parts)}"
                )
            try:
                rows.append([float(v) for v in parts[:n_floats]] + [int(parts[-1])])
            except ValueError as e:
                raise FormatError(path, lineno, str(e)) from None
    return rows


def read_timeseries(path):
    """Timeseries rows as a dict of column arrays keyed by header name."""
    cols = TIMESERIES_HEADER.split(",")
    data = {c: [] for c in cols}
    with open(path) as fh:
        first = fh.readline().rstrip("\n")
        if first != TIMESERIES_HEADER:
            raise FormatError(path, 1, f"expected header {TIMESERIES_HEADER!r}, got {first!r}")
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != len(cols):
                raise FormatError(path, lineno, f"expected {len(cols)} fields, got {len(parts)}")
            try:
                data["epoch"].append(int(parts[0]))
                for c, v in zip(cols[1:], parts[1:]):
                    data[c].append(float(v))
            except ValueError as e:
                raise FormatError(path, lineno, str(e)) from None
    if not data["epoch"]:
        raise FormatError(path, 2, "timeseries has no rows")
    return {c: np.asarray(v) for c, v in data.items()}


def read_heatmap(path):
    """Heatmap rows as (dg, dr, mean, std, runs) arrays."""
    rows = _read_csv(path, HEATMAP_HEADER, 4)
    if not rows:
        raise FormatError(path, 2, "heatmap has no rows")
    arr = np.asarray(rows)
    return arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3], arr[:, 4].astype(int)


def read_rho(path):
    """Rho-sweep rows as (ds, rho, mean, std, runs) arrays."""
    rows = _read_csv(path, RHO_HEADER, 4)
    if not rows:
        raise FormatError(path, 2, "rho table has no rows")
    arr = np.asarray(rows)
    return arr[:, 0], arr[:, 1], arr[:, 2], arr[:, 3], arr[:, 4].astype(int)


def read_snapshot(path):
    """Snapshot class codes as an (L, L) int array, plus the epoch tag."""
    with open(path) as fh:
        header = fh.readline().split()
        try:
            side = int(header[0].removeprefix("L="))
            epoch = int(header[1].removeprefix("epoch="))
        except (IndexError, ValueError):
            raise FormatError(path, 1, "expected header 'L=<side> epoch=<t>'") from None
        rows = []
        for lineno in range(2, side + 2):
            line = fh.readline().strip()
            if len(line) != side:
                raise FormatError(path, lineno, f"expected {side} digits, got {len(line)}")
            try:
                row = [int(ch) for ch in line]
            except ValueError:
                raise FormatError(path, lineno, "non-digit cell code") from None
            if any(c > 3 for c in row):
                raise FormatError(path, lineno, "cell codes must be 0..3")
            rows.append(row)
    return np.asarray(rows, dtype=np.int8), epoch

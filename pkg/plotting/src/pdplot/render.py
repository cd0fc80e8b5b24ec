"""Renderers for the four plot kinds.

The snapshot palette is the documented class-code coloring:

    0 defector, non-learner   -> white  (255, 255, 255)
    1 cooperator, non-learner -> red    (255,   0,   0)
    2 cooperator, learner     -> blue   (  0,   0, 255)
    3 defector, learner       -> green  (  0, 128,   0)

The ``pure`` palette collapses the learner flag for single-kind runs:
cooperators blue, defectors white.  Snapshot images are written
pixel-exactly (one upscaled block per cell, no axes or antialiasing),
so downstream checks can assert on raw pixel values.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.image
import matplotlib.pyplot as plt
import numpy as np

from .formats import read_heatmap, read_rho, read_snapshot, read_timeseries

FOUR_CLASS_PALETTE = np.array(
    [
        [255, 255, 255],  # 0 defector, non-learner
        [255, 0, 0],  # 1 cooperator, non-learner
        [0, 0, 255],  # 2 cooperator, learner
        [0, 128, 0],  # 3 defector, learner
    ],
    dtype=np.uint8,
)

PURE_PALETTE = np.array(
    [
        [255, 255, 255],  # defector
        [0, 0, 255],  # cooperator
        [0, 0, 255],
        [255, 255, 255],
    ],
    dtype=np.uint8,
)

PALETTES = {"four-class": FOUR_CLASS_PALETTE, "pure": PURE_PALETTE}


def render_snapshot(infile, outfile, palette: str = "four-class", scale: int = 8) -> None:
    """Write a lattice snapshot as a pixel-exact PNG, `scale` pixels per cell."""
    codes, _epoch = read_snapshot(infile)
    rgb = PALETTES[palette][codes]
    rgb = np.kron(rgb, np.ones((scale, scale, 1), dtype=np.uint8))
    matplotlib.image.imsave(outfile, rgb)


def render_heatmap(infile, outfile, cmap: str = "viridis") -> None:
    """Heatmap of mean final cooperation with dr on x and dg on y."""
    dg, dr, mean, _std, _runs = read_heatmap(infile)
    dg_vals, dr_vals = np.unique(dg), np.unique(dr)
    grid = np.full((dg_vals.size, dr_vals.size), np.nan)
    gi = np.searchsorted(dg_vals, dg)
    ri = np.searchsorted(dr_vals, dr)
    grid[gi, ri] = mean

    fig, ax = plt.subplots(figsize=(6, 5))
    half_g = (dg_vals[1] - dg_vals[0]) / 2 if dg_vals.size > 1 else 0.5
    half_r = (dr_vals[1] - dr_vals[0]) / 2 if dr_vals.size > 1 else 0.5
    im = ax.imshow(
        grid,
        origin="lower",
        aspect="auto",
        cmap=cmap,
        vmin=0.0,
        vmax=1.0,
        extent=(
            dr_vals[0] - half_r,
            dr_vals[-1] + half_r,
            dg_vals[0] - half_g,
            dg_vals[-1] + half_g,
        ),
    )
    ax.set_xlabel("Dr")
    ax.set_ylabel("Dg")
    fig.colorbar(im, ax=ax, label="mean final cooperation rate")
    fig.tight_layout()
    fig.savefig(outfile, dpi=120)
    plt.close(fig)


def render_timeseries(infile, outfile, series: str = "coop") -> None:
    """Cooperation rate and/or class rewards against the epoch."""
    data = read_timeseries(infile)
    epochs = data["epoch"]
    fig, ax = plt.subplots(figsize=(7, 4))
    if series in ("coop", "all"):
        ax.plot(epochs, data["coop_rate"], label="cooperation rate", color="tab:blue")
        ax.set_ylim(-0.02, 1.02)
        ax.set_ylabel("cooperation rate")
    if series in ("rewards", "all"):
        target = ax.twinx() if series == "all" else ax
        target.plot(epochs, data["avg_reward"], label="avg reward", color="tab:gray")
        target.plot(epochs, data["avg_reward_coop"], label="cooperators", color="tab:green")
        target.plot(epochs, data["avg_reward_def"], label="defectors", color="tab:red")
        target.set_ylabel("average reward")
        target.legend(loc="best", fontsize=8)
    ax.set_xlabel("epoch")
    fig.tight_layout()
    fig.savefig(outfile, dpi=120)
    plt.close(fig)


def render_rho(infile, outfile) -> None:
    """Final cooperation against the learner fraction, one line per DS."""
    ds, rho, mean, std, _runs = read_rho(infile)
    fig, ax = plt.subplots(figsize=(6, 4))
    for value in np.unique(ds):
        sel = ds == value
        order = np.argsort(rho[sel])
        ax.errorbar(
            rho[sel][order],
            mean[sel][order],
            yerr=std[sel][order],
            marker="o",
            capsize=3,
            label=f"DS = {value:g}",
        )
    ax.set_xlabel("learner fraction rho")
    ax.set_ylabel("mean final cooperation rate")
    ax.set_ylim(-0.02, 1.02)
    ax.legend()
    fig.tight_layout()
    fig.savefig(outfile, dpi=120)
    plt.close(fig)


RENDERERS = {
    "heatmap": render_heatmap,
    "timeseries": render_timeseries,
    "rho-curve": render_rho,
    "snapshot": render_snapshot,
}

"""Coarse cooperation heatmap over the dilemma square.

Sweeps a 3x3 grid of (dg, dr) points for both update rules and prints
the mean final cooperation rate of each cell.  The full-resolution
version of this table is what the `sarsapd heatmap` command writes to
CSV (step 0.01, 20 repeats, full scale: days of compute; this demo:
about a minute).
"""

from sarsapd import RunConfig, sweep_heatmap

SIZE = 24
EPOCHS = 3000

for mode in ("traditional", "sarsa-target"):
    base = RunConfig(size=SIZE, epochs_max=EPOCHS, mode=mode, seed=1,
                     record_every=EPOCHS, tail_window=500)
    rows = sweep_heatmap(base, (0.0, 1.0), (0.0, 1.0), step=0.5, repeats=3, jobs=2)
    print(f"{mode}: mean final cooperation")
    print("           dr=0.0  dr=0.5  dr=1.0")
    for dg in (0.0, 0.5, 1.0):
        cells = [mean for g, _, mean, _, _ in rows if g == dg]
        print(f"  dg={dg:3.1f} " + "".join(f"{c:8.3f}" for c in cells))
    print()

print("Learners keep cooperation alive deeper into the dilemma square.")

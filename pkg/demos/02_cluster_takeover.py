"""Cooperator cluster vs. the two update rules, at a glance.

A square of cooperators is planted in a sea of defectors under a weak
dilemma (dg = 0.02, dr = 0).  Traditional Fermi imitators erode or barely
hold the cluster; target-selection learners pick *whom* to imitate and
the cluster takes over the lattice.

Runs at a small scale so it finishes in under a minute; crank SIZE and
EPOCHS for the full effect.
"""

from sarsapd import InitScheme, RunConfig, run_single, snapshot_to_grids

SIZE = 30
EPOCHS = 2000

for mode in ("traditional", "sarsa-target"):
    cfg = RunConfig(
        size=SIZE,
        epochs_max=EPOCHS,
        init=InitScheme.cluster(6),
        mode=mode,
        dg=0.02,
        dr=0.0,
        seed=7,
        record_every=EPOCHS,
        snapshot_epochs=(0, EPOCHS),
    )
    res = run_single(cfg)
    series = res.coop_series
    marks = [int(EPOCHS * f) for f in (0.05, 0.25, 0.5, 0.75, 1.0)]
    trail = " -> ".join(f"{series[min(t, len(series)) - 1]:.2f}" for t in marks)
    print(f"{mode:13s} coop rate {series[0]:.2f} -> {trail}")

    strategies, _ = snapshot_to_grids(res.snapshots[EPOCHS])
    print("  final lattice (# = cooperator):")
    for row in strategies[:: max(1, SIZE // 15)]:
        print("   " + "".join("#" if c else "." for c in row[:: max(1, SIZE // 30)]))
    print()

"""Cooperation as a function of the learner fraction rho.

Mixed populations place a fraction rho of strategy learners among
traditional Fermi imitators.  At rho = 0 cooperation collapses under
any real dilemma; adding learners pulls it back up.  The `sarsapd
rho-sweep` command produces the CSV version of this curve.
"""

from sarsapd import RunConfig, sweep_rho

base = RunConfig(size=30, epochs_max=5000, seed=5, record_every=5000, tail_window=500)
rows = sweep_rho(base, ds_values=[0.05, 0.1], rho_values=[0.0, 0.25, 0.5, 0.75, 1.0],
                 repeats=3, jobs=2)

current = None
for ds, rho, mean, std, runs in rows:
    if ds != current:
        print(f"DS = {ds}")
        current = ds
    bar = "#" * int(mean * 40)
    print(f"  rho={rho:4.2f}  {mean:6.3f} +-{std:5.3f}  {bar}")

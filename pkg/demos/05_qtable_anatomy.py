"""What a strategy learner actually learns.

Runs a pure strategy-learner population, then prints one agent's
Q-table: rows are the local state (cooperator count among self + 4
neighbours), columns the two actions.  The defect column dominates in
defector-heavy states, the cooperate column in cooperative ones; the
crossover row is where the learned policy tips.
"""

import numpy as np

from sarsapd import RunConfig, run_single
from sarsapd.dynamics import AgentGrid, assign_kinds, run_epoch
from sarsapd.lattice import InitScheme, init_lattice
from sarsapd.metrics import write_qtable_csv

SIZE, EPOCHS, SEED = 20, 4000, 2

cfg = RunConfig(size=SIZE, epochs_max=EPOCHS, mode="sarsa-strategy", ds=0.1, seed=SEED,
                record_every=EPOCHS)
lat = init_lattice(SIZE, InitScheme.random(0.5), SEED)
lat.kinds = assign_kinds(SIZE, 0.0, "sarsa-strategy", SEED)
agents = AgentGrid.from_kinds(lat.kinds, cfg.traditional_rule, SEED)
ecfg = cfg.epoch_config()
for t in range(1, EPOCHS + 1):
    run_epoch(lat, agents, ecfg, t, SEED)

agent_id = SIZE * SIZE // 2 + SIZE // 2
q = agents.q[agent_id, :, :2]
print(f"Q-table of agent {agent_id} after {EPOCHS} epochs (DS=0.1):")
print(f"{'state':>6} {'defect':>9} {'cooperate':>10}  greedy")
for s in range(6):
    pick = "cooperate" if q[s, 1] > q[s, 0] else ("defect" if q[s, 0] > q[s, 1] else "tie")
    print(f"{s:>6} {q[s, 0]:9.3f} {q[s, 1]:10.3f}  {pick}")

write_qtable_csv("demo_qtable.csv", q)
print("\nwrote demo_qtable.csv (state,action,value)")

res = run_single(cfg)
print(f"population cooperation settles near {res.final_coop:.3f}")

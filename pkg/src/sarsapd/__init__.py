"""Spatial prisoner's dilemma on a periodic lattice with SARSA-learning agents.

The package is a numpy library plus a thin CLI.  Core pieces:

* :mod:`sarsapd.lattice`   world state, payoff matrix, neighbourhood geometry
* :mod:`sarsapd.learning`  Q-tables, epsilon-greedy choice, SARSA / Q-learning
  updates, the pairwise Fermi rule
* :mod:`sarsapd.dynamics`  the synchronous epoch engine and agent kinds
* :mod:`sarsapd.metrics`   observables and the CSV / snapshot file formats
* :mod:`sarsapd.harness`   seeded runs, repeats, and parameter sweeps
* :mod:`sarsapd.cli`       the ``sarsapd`` command
"""

__version__ = "0.1.0"

from .dynamics import (
    AgentGrid,
    AgentKind,
    AgentState,
    EpochConfig,
    TraditionalRule,
    alg_strategy_resolve,
    alg_target_resolve,
    assign_kinds,
    run_epoch,
    traditional_resolve,
)
from .harness import (
    DESK_PRESET,
    FULL_PRESET,
    RepeatedResult,
    RunConfig,
    RunResult,
    Termination,
    run_repeated,
    run_single,
    sweep_heatmap,
    sweep_rho,
)
from .lattice import (
    DilemmaParams,
    InitScheme,
    Lattice,
    PayoffMatrix,
    Strategy,
    cumulative_payoff,
    init_lattice,
    neighbors,
    pair_payoff,
    payoff_matrix,
    total_payoffs,
)
from .learning import (
    LearningParams,
    epsilon_greedy,
    fermi_probability,
    new_qtable,
    q_learning_update,
    sarsa_update,
    state_of,
)
from .metrics import (
    EpochMetrics,
    class_average_reward,
    cooperation_rate,
    epoch_metrics,
    snapshot,
    snapshot_to_grids,
    tail_average,
)

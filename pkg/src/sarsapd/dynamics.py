"""Synchronous epoch engine for mixed populations of imitators and learners.

Agent kinds
-----------
TRADITIONAL      imitates: picks a random neighbour and adopts its strategy
                 with the pairwise Fermi probability.  In mixed runs an
                 alternative rule can make traditional agents use the
                 target-selection learner instead (see TraditionalRule).
SARSA_TARGET     learns *whom to imitate*: four actions, one per neighbour;
                 the chosen target still has to pass the Fermi test, else
                 the previous target is kept.  The committed strategy is
                 always the chosen neighbour's previous strategy.
SARSA_STRATEGY   learns *what to play*: two actions, defect or cooperate,
                 committed directly with no Fermi gate.

Epoch protocol
--------------
Every epoch runs five synchronous phases over the whole lattice:

  A. each agent reads its state (cooperator count) from the committed grid;
  B. each agent resolves a new (action, strategy); all Fermi comparisons
     use the previous epoch's cumulative payoffs;
  C. all new strategies commit simultaneously;
  D. cumulative payoffs are recomputed on the committed grid;
  E. learners with a complete (state, action, reward) history apply the
     SARSA update -- the reward is the one earned in the *previous* epoch,
     bootstrapped with the state/action just chosen -- then shift their
     history forward.  The first epoch only records history.

Determinism
-----------
Phase B consumes three uniform draws per agent (explore test, action
pick / tie-break, Fermi test) from a counter-based block keyed by
(seed, epoch), and everything it computes from them is an elementwise
gather/compare over whole-lattice arrays evaluated in one fixed order.
The `order` and `workers` arguments repartition only the final per-agent
selection stage, so any iteration order and any worker count produce
bit-identical lattices.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import Enum, IntEnum

import numpy as np

from .lattice import Lattice, PayoffMatrix, Strategy, neighbor_index_table, neighbors
from .learning import LearningParams, epsilon_greedy, fermi_probability, state_of
from .rng import PURPOSE_ACTIONS, PURPOSE_KINDS, epoch_draws, stream


class AgentKind(IntEnum):
    TRADITIONAL = 0
    SARSA_TARGET = 1
    SARSA_STRATEGY = 2


class TraditionalRule(str, Enum):
    """What traditional agents do in mixed runs."""

    FERMI_ONLY = "fermi"
    TARGET_SELECTION = "target"


MODES = ("traditional", "sarsa-target", "sarsa-strategy", "mixed")

_PURE_KIND = {
    "traditional": AgentKind.TRADITIONAL,
    "sarsa-target": AgentKind.SARSA_TARGET,
    "sarsa-strategy": AgentKind.SARSA_STRATEGY,
}


@dataclass(frozen=True)
class EpochConfig:
    """Per-run constants the epoch engine needs."""

    learning: LearningParams
    matrix: PayoffMatrix
    traditional_rule: TraditionalRule = TraditionalRule.FERMI_ONLY


@dataclass
class AgentState:
    """Scalar view of one agent's learner bookkeeping."""

    q: np.ndarray | None  # (6, n_actions) view; None for pure imitators
    s_prev: int
    a_prev: int
    r_prev: float
    has_history: bool


def assign_kinds(side: int, rho: float, mode: str, seed: int) -> np.ndarray:
    """Agent-kind grid for a run.

    Pure modes fill the lattice with a single kind.  Mixed mode places
    exactly round(rho * side^2) strategy learners uniformly at random and
    leaves the rest traditional.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    n = side * side
    if mode != "mixed":
        return np.full((side, side), int(_PURE_KIND[mode]), dtype=np.int8)
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must lie in [0, 1], got {rho}")
    kinds = np.full(n, int(AgentKind.TRADITIONAL), dtype=np.int8)
    n_learners = int(round(rho * n))
    perm = stream(seed, PURPOSE_KINDS).permutation(n)
    kinds[perm[:n_learners]] = int(AgentKind.SARSA_STRATEGY)
    return kinds.reshape(side, side)


def _action_counts(kinds_flat: np.ndarray, rule: TraditionalRule) -> np.ndarray:
    counts = np.zeros(kinds_flat.size, dtype=np.int8)
    counts[kinds_flat == AgentKind.SARSA_TARGET] = 4
    counts[kinds_flat == AgentKind.SARSA_STRATEGY] = 2
    if rule is TraditionalRule.TARGET_SELECTION:
        counts[kinds_flat == AgentKind.TRADITIONAL] = 4
    return counts


@dataclass
class AgentGrid:
    """Struct-of-arrays learner state for every cell, plus resolve-rule masks.

    The masks bake in the traditional rule for the run: `rule_fermi`,
    `rule_target` and `rule_strategy` partition the agents by how phase B
    resolves them.  Kinds never change during a run, so the masks are
    computed once.
    """

    q: np.ndarray  # (n, 6, 4); columns beyond an agent's action count stay 0
    s_prev: np.ndarray  # (n,) int8
    a_prev: np.ndarray  # (n,) int8
    r_prev: np.ndarray  # (n,) float64
    has_history: np.ndarray  # (n,) bool
    n_actions: np.ndarray  # (n,) int8; 0 for pure imitators
    rule_fermi: np.ndarray  # (n,) bool
    rule_target: np.ndarray
    rule_strategy: np.ndarray
    learning: np.ndarray
    ids: np.ndarray  # arange(n), cached for the engine
    learning_ids: np.ndarray
    coverage: tuple  # (any, all) flags per rule, scanned once at setup
    all_history: bool = False

    @classmethod
    def from_kinds(cls, kinds: np.ndarray, rule: TraditionalRule, seed: int) -> "AgentGrid":
        flat = kinds.reshape(-1)
        n = flat.size
        n_actions = _action_counts(flat, rule)
        traditional = flat == AgentKind.TRADITIONAL
        rule_target = (flat == AgentKind.SARSA_TARGET) | (
            traditional if rule is TraditionalRule.TARGET_SELECTION else np.zeros(n, bool)
        )
        rule_fermi = traditional & ~rule_target
        rule_strategy = flat == AgentKind.SARSA_STRATEGY
        learning = rule_target | rule_strategy
        u = stream(seed, PURPOSE_ACTIONS).random(n)
        a_prev = np.where(n_actions > 0, (u * n_actions).astype(np.int8), np.int8(0))
        coverage = tuple(
            (bool(m.any()), bool(m.all())) for m in (rule_fermi, rule_target, rule_strategy)
        )
        return cls(
            q=np.zeros((n, 6, 4)),
            s_prev=np.zeros(n, dtype=np.int8),
            a_prev=a_prev.astype(np.int8),
            r_prev=np.zeros(n),
            has_history=np.zeros(n, dtype=bool),
            n_actions=n_actions,
            rule_fermi=rule_fermi,
            rule_target=rule_target,
            rule_strategy=rule_strategy,
            learning=learning,
            ids=np.arange(n, dtype=np.intp),
            learning_ids=np.flatnonzero(learning),
            coverage=coverage,
        )

    def view(self, i: int) -> AgentState:
        na = int(self.n_actions[i])
        return AgentState(
            q=self.q[i, :, :na] if na else None,
            s_prev=int(self.s_prev[i]),
            a_prev=int(self.a_prev[i]),
            r_prev=float(self.r_prev[i]),
            has_history=bool(self.has_history[i]),
        )


# -- per-agent resolve rules (scalar reference forms) ------------------------
#
# The epoch engine below vectorizes exactly these decisions; the scalar
# forms are the readable contract and are cross-checked against the
# engine in the test suite.  Each consumes draws from `rng` in the
# documented order and mutates nothing.


def traditional_resolve(
    lat: Lattice, index: tuple[int, int], params: LearningParams, rng: np.random.Generator
) -> Strategy:
    """Fermi imitation: random neighbour, adopt its strategy if the test passes.

    Draws, in order: neighbour pick, adoption test.
    """
    u_pick = rng.random()
    u_adopt = rng.random()
    nbs = neighbors(index, lat.side)
    y = nbs[int(u_pick * 4)]
    w = fermi_probability(lat.rewards[index], lat.rewards[y], params.k)
    if w >= u_adopt:
        return Strategy(int(lat.strategies[y]))
    return Strategy(int(lat.strategies[index]))


def alg_target_resolve(
    lat: Lattice,
    index: tuple[int, int],
    agent: AgentState,
    params: LearningParams,
    rng: np.random.Generator,
) -> tuple[int, Strategy]:
    """Target selection: epsilon-greedy neighbour choice behind a Fermi gate.

    The candidate neighbour is accepted with the Fermi probability of its
    payoff gap; otherwise the previous target is kept.  Either way the
    returned strategy is the chosen target's current strategy.  Draws, in
    order: explore test, action pick, Fermi test.
    """
    s_now = state_of(lat, index)
    a_temp = epsilon_greedy(agent.q[s_now], params.epsilon, rng)
    u_gate = rng.random()
    nbs = neighbors(index, lat.side)
    w = fermi_probability(lat.rewards[index], lat.rewards[nbs[a_temp]], params.k)
    a_new = a_temp if w >= u_gate else agent.a_prev
    return a_new, Strategy(int(lat.strategies[nbs[a_new]]))


def alg_strategy_resolve(
    lat: Lattice,
    index: tuple[int, int],
    agent: AgentState,
    params: LearningParams,
    rng: np.random.Generator,
) -> tuple[int, Strategy]:
    """Direct strategy choice: epsilon-greedy over {defect, cooperate}, no gate.

    Draws, in order: explore test, action pick.
    """
    s_now = state_of(lat, index)
    a_new = epsilon_greedy(agent.q[s_now], params.epsilon, rng)
    return a_new, Strategy(a_new)


# -- vectorized epoch ---------------------------------------------------------


def _tiebreak2(q0: np.ndarray, q1: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Tie-broken argmax over two action columns, elementwise."""
    rand = (u * 2.0).astype(np.int8)
    return np.where(q0 == q1, rand, q1 > q0)


def _tiebreak4(rows: np.ndarray, u: np.ndarray) -> np.ndarray:
    """Tie-broken argmax over four action columns, elementwise.

    Matches `argmax_tiebreak` row by row: the draw u selects uniformly
    among the tied maxima.
    """
    q0, q1, q2, q3 = rows[:, 0], rows[:, 1], rows[:, 2], rows[:, 3]
    best = np.maximum(np.maximum(q0, q1), np.maximum(q2, q3))
    c0 = (q0 == best).astype(np.int8)  # cumulative tie counts per column
    c1 = c0 + (q1 == best)
    c2 = c1 + (q2 == best)
    n_tied = c2 + (q3 == best)
    k = (u * n_tied).astype(np.int8)
    return (k >= c0).astype(np.int8) + (k >= c1) + (k >= c2)


def run_epoch(
    lat: Lattice,
    agents: AgentGrid,
    cfg: EpochConfig,
    epoch: int,
    seed: int,
    *,
    order: np.ndarray | None = None,
    workers: int = 1,
) -> tuple[Lattice, AgentGrid]:
    """Advance the lattice by one synchronous epoch, in place.

    `epoch` numbers start at 1 and key the per-epoch draw block together
    with `seed`.  `order` (a permutation of the flat cell indices) and
    `workers` (> 1 splits the selection stage across threads) exist to
    demonstrate order independence; they never change the result.
    """
    side = lat.side
    n = side * side
    strat = lat.strategies.reshape(n)
    rew = lat.rewards.reshape(n)
    p = cfg.learning
    nbr = neighbor_index_table(side)

    u_explore, u_action, u_fermi = epoch_draws(seed, epoch, n)

    # phase A: states from the committed grid
    nb_strat = strat[nbr]
    s_next = strat + nb_strat[0] + nb_strat[1] + nb_strat[2] + nb_strat[3]

    # phase B, canonical stage: every rule's decision for every agent,
    # computed whole-lattice in one fixed evaluation order
    (any_fermi, all_fermi), (any_target, all_target), (any_strategy, all_strategy) = (
        agents.coverage
    )
    ids = agents.ids
    a_prev = agents.a_prev
    pick4 = (u_action * 4.0).astype(np.int8)
    if any_fermi or any_target:
        nb_rew = rew[nbr]
    if any_target or any_strategy:
        explore = u_explore < p.epsilon

    if any_fermi:
        w = fermi_probability(rew, nb_rew[pick4, ids], p.k)
        strat_fermi = np.where(w >= u_fermi, nb_strat[pick4, ids], strat)
    if any_target:
        q4 = agents.q[ids, s_next]
        cand = np.where(explore, pick4, _tiebreak4(q4, u_action))
        w = fermi_probability(rew, nb_rew[cand, ids], p.k)
        chosen = np.where(w >= u_fermi, cand, a_prev)
        strat_target = nb_strat[chosen, ids]
    if any_strategy:
        q2 = agents.q[ids, s_next, :2]
        pick2 = (u_action * 2.0).astype(np.int8)
        act = np.where(explore, pick2, _tiebreak2(q2[:, 0], q2[:, 1], u_action))

    new_strat = strat.copy()
    a_next = a_prev.copy()

    # phase B, selection stage: scatter each agent's own decision; pure
    # per-agent copies, so any index partition gives the same bits
    def _select(sel: np.ndarray) -> None:
        if any_fermi:
            sub = sel if all_fermi else sel[agents.rule_fermi[sel]]
            new_strat[sub] = strat_fermi[sub]  # a_next keeps a_prev
        if any_target:
            sub = sel if all_target else sel[agents.rule_target[sel]]
            a_next[sub] = chosen[sub]
            new_strat[sub] = strat_target[sub]
        if any_strategy:
            sub = sel if all_strategy else sel[agents.rule_strategy[sel]]
            a_next[sub] = act[sub]
            new_strat[sub] = act[sub]

    if order is not None:
        _select(np.asarray(order, dtype=np.intp))
    elif workers > 1:
        blocks = np.array_split(ids, workers)
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(_select, blocks))
    else:
        _select(ids)

    # phase C: commit
    strat[:] = new_strat

    # phase D: payoffs on the committed grid, accumulated in neighbour order
    table = cfg.matrix.as_lookup()
    nb_new = strat[nbr]
    mine2 = strat * np.int8(2)
    r_next = table[mine2 + nb_new[0]]
    r_next += table[mine2 + nb_new[1]]
    r_next += table[mine2 + nb_new[2]]
    r_next += table[mine2 + nb_new[3]]

    # phase E: delayed-reward SARSA update, then shift history
    if agents.learning_ids.size:
        i = agents.learning_ids if agents.all_history else np.flatnonzero(
            agents.learning & agents.has_history
        )
        if i.size:
            sp = agents.s_prev[i]
            ap = agents.a_prev[i]
            qsa = agents.q[i, sp, ap]
            boot = agents.q[i, s_next[i], a_next[i]]
            agents.q[i, sp, ap] = qsa + p.alpha * (agents.r_prev[i] + p.gamma * boot - qsa)

    agents.s_prev[:] = s_next
    agents.a_prev[:] = a_next
    agents.r_prev[:] = r_next
    rew[:] = r_next
    if not agents.all_history:
        agents.has_history[:] = True
        agents.all_history = True
    return lat, agents

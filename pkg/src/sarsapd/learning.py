"""Tabular value learning: Q-tables, action selection, and the Fermi rule.

An agent's state is the number of cooperators among itself and its four
neighbours, an integer in 0..5, so a Q-table is a (6, n_actions) array.
Target-selection learners have four actions (one per neighbour, in the
frozen neighbour order); strategy learners have two (0 = defect,
1 = cooperate, matching the strategy codes).

Tables start at zero.  Exploration uses a constant epsilon, and greedy
ties are broken uniformly at random from the tied set, so the all-zero
start is unbiased.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lattice import Lattice, neighbors

N_STATES = 6  # cooperator counts 0..5 over self + 4 neighbours

# largest Fermi exponent magnitude fed to exp(); beyond this the
# probability is indistinguishable from 0 or 1 at double precision
_EXP_CLAMP = 500.0


@dataclass(frozen=True)
class LearningParams:
    """Learning-rule constants shared by every learner in a run."""

    alpha: float = 0.3  # learning rate
    gamma: float = 0.9  # discount
    epsilon: float = 0.02  # exploration rate
    k: float = 0.1  # Fermi noise

    def __post_init__(self):
        # alpha = 0 is allowed: it freezes the tables, which the tests use
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must lie in [0, 1], got {self.alpha}")
        if not 0.0 <= self.gamma < 1.0:
            raise ValueError(f"gamma must lie in [0, 1), got {self.gamma}")
        if not 0.0 <= self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in [0, 1], got {self.epsilon}")
        if self.k <= 0.0:
            raise ValueError(f"Fermi noise k must be positive, got {self.k}")


def new_qtable(n_actions: int) -> np.ndarray:
    """A zero-initialized (6, n_actions) action-value table."""
    return np.zeros((N_STATES, n_actions))


def state_of(lat: Lattice, index: tuple[int, int]) -> int:
    """Cooperator count over the cell and its four neighbours, in 0..5."""
    s = int(lat.strategies[index])
    for nb in neighbors(index, lat.side):
        s += int(lat.strategies[nb])
    return s


def argmax_tiebreak(row: np.ndarray, u: float) -> int:
    """Index of the row maximum; ties resolved uniformly by the draw u in [0,1)."""
    tied = np.flatnonzero(row == row.max())
    return int(tied[int(u * tied.size)])


def epsilon_greedy(q_row, epsilon: float, rng: np.random.Generator) -> int:
    """Pick an action from one Q-table row.

    Consumes exactly two draws, in order: the exploration test, then the
    action pick (used for the random action when exploring, or the
    tie-break when greedy).
    """
    row = np.asarray(q_row, dtype=float)
    if row.size == 0:
        raise ValueError("epsilon_greedy needs a non-empty action-value row")
    u_explore = rng.random()
    u_pick = rng.random()
    if u_explore < epsilon:
        return int(u_pick * row.size)
    return argmax_tiebreak(row, u_pick)


def sarsa_update(
    q: np.ndarray,
    s: int,
    a: int,
    r: float,
    s_next: int,
    a_next: int,
    p: LearningParams,
) -> np.ndarray:
    """On-policy update: bootstrap with the action actually chosen next.

    Q(s,a) += alpha * (r + gamma * Q(s', a') - Q(s,a)).  Mutates exactly
    one entry of `q` in place and returns the table.
    """
    q[s, a] += p.alpha * (r + p.gamma * q[s_next, a_next] - q[s, a])
    return q


def q_learning_update(
    q: np.ndarray,
    s: int,
    a: int,
    r: float,
    s_next: int,
    p: LearningParams,
) -> np.ndarray:
    """Off-policy baseline: bootstrap with the greedy value of the next state.

    Q(s,a) += alpha * (r + gamma * max_a' Q(s', a') - Q(s,a)).  In place,
    one entry.
    """
    q[s, a] += p.alpha * (r + p.gamma * q[s_next].max() - q[s, a])
    return q


def fermi_probability(pi_x, pi_y, k: float):
    """Probability that agent x adopts from y under the pairwise Fermi rule.

    W = 1 / (1 + exp((pi_x - pi_y) / k)).  Accepts scalars or arrays;
    the exponent is clamped to +-500 so the result is always finite and
    saturates to ~0 / ~1 for payoff gaps far beyond the noise scale.
    """
    if k <= 0.0:
        raise ValueError(f"Fermi noise k must be positive, got {k}")
    z = (np.asarray(pi_x, dtype=float) - np.asarray(pi_y, dtype=float)) / k
    z = np.clip(z, -_EXP_CLAMP, _EXP_CLAMP)
    w = 1.0 / (1.0 + np.exp(z))
    if w.ndim == 0:
        return float(w)
    return w

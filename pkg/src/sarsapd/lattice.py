"""World state of the lattice game: strategies, payoffs, geometry.

Agents sit on an L x L square lattice with periodic boundaries and play
a one-shot prisoner's dilemma against their four von Neumann neighbours
each epoch.  The payoff matrix is parameterized by two dilemma scalars
(dg, dr), both in [0, 1]:

    reward(me, other):  (C,C) -> R = 1        (C,D) -> S = -dr
                        (D,C) -> T = 1 + dg   (D,D) -> P = 0

so T >= R >= P >= S always, strictly when dg > 0 and dr > 0.

Conventions frozen here and relied on everywhere else:

* strategies are stored as int8 with COOPERATE = 1, DEFECT = 0 (the same
  codes appear in every file format);
* grids are row-major; the flat index of cell (r, c) is r * L + c;
* the neighbour order is (up, down, left, right) and action ids 0..3 of
  the target-selection rule index into it;
* cumulative payoffs are summed over neighbours in that same order.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import IntEnum
from functools import lru_cache

import numpy as np

from .rng import PURPOSE_STRATEGIES, stream


class Strategy(IntEnum):
    DEFECT = 0
    COOPERATE = 1


@dataclass(frozen=True)
class DilemmaParams:
    """Dilemma scalars: dg scales the temptation payoff, dr the sucker loss."""

    dg: float
    dr: float

    def __post_init__(self):
        if not 0.0 <= self.dg <= 1.0:
            raise ValueError(f"dg must lie in [0, 1], got {self.dg}")
        if not 0.0 <= self.dr <= 1.0:
            raise ValueError(f"dr must lie in [0, 1], got {self.dr}")


@dataclass(frozen=True)
class PayoffMatrix:
    r: float
    s: float
    t: float
    p: float

    def as_lookup(self) -> np.ndarray:
        """Pair payoffs indexed by 2 * mine + theirs: order (P, T, S, R)."""
        return np.array([self.p, self.t, self.s, self.r])


def payoff_matrix(params: DilemmaParams) -> PayoffMatrix:
    """Payoff scalars (R, S, T, P) = (1, -dr, 1 + dg, 0) for the given dilemma."""
    # 0.0 - dr rather than -dr keeps S at +0.0 when dr is 0
    return PayoffMatrix(r=1.0, s=0.0 - params.dr, t=1.0 + params.dg, p=0.0)


def neighbors(index: tuple[int, int], side: int) -> tuple[tuple[int, int], ...]:
    """The four von Neumann neighbours of a cell, in (up, down, left, right) order.

    Action ids 0..3 of the target-selection rule refer to this order, so it
    must never change.
    """
    r, c = index
    return (
        ((r - 1) % side, c),
        ((r + 1) % side, c),
        (r, (c - 1) % side),
        (r, (c + 1) % side),
    )


@lru_cache(maxsize=8)
def neighbor_index_table(side: int) -> np.ndarray:
    """Flat neighbour indices, shape (4, side*side), row order (up, down, left, right)."""
    n = side * side
    r, c = np.divmod(np.arange(n, dtype=np.intp), side)
    table = np.empty((4, n), dtype=np.intp)
    table[0] = ((r - 1) % side) * side + c
    table[1] = ((r + 1) % side) * side + c
    table[2] = r * side + (c - 1) % side
    table[3] = r * side + (c + 1) % side
    table.setflags(write=False)
    return table


def pair_payoff(mine: Strategy | int, theirs: Strategy | int, m: PayoffMatrix) -> float:
    """Reward of `mine` against `theirs` for one pairing."""
    if mine:
        return m.r if theirs else m.s
    return m.t if theirs else m.p


@dataclass
class Lattice:
    """Strategy, reward and agent-kind fields of an L x L periodic lattice.

    `rewards` holds each agent's cumulative payoff from the *previous*
    epoch; that is the quantity Fermi comparisons read.  `kinds` stores
    the per-cell agent kind codes defined in `dynamics.AgentKind`.
    """

    side: int
    strategies: np.ndarray  # (L, L) int8, 1 = cooperate
    rewards: np.ndarray  # (L, L) float64
    kinds: np.ndarray  # (L, L) int8

    def cell_count(self) -> int:
        return self.side * self.side


@dataclass(frozen=True)
class InitScheme:
    """Initial strategy field: all-random coin flips or a centered square.

    ``random`` fills each cell independently with cooperation probability
    p0; ``cluster`` plants a (2w+1) x (2w+1) cooperator square at the
    lattice center in a sea of defectors.
    """

    kind: str
    param: float

    @classmethod
    def random(cls, p0: float = 0.5) -> "InitScheme":
        return cls("random", p0)

    @classmethod
    def cluster(cls, half_width: int) -> "InitScheme":
        return cls("cluster", float(half_width))

    @classmethod
    def parse(cls, text: str) -> "InitScheme":
        """Parse 'random:<p0>' or 'cluster:<half-width>'."""
        kind, _, arg = text.partition(":")
        if kind == "random":
            return cls.random(float(arg) if arg else 0.5)
        if kind == "cluster":
            if not arg:
                raise ValueError("cluster init needs a half-width, e.g. cluster:10")
            return cls.cluster(int(arg))
        raise ValueError(f"unknown init scheme {text!r}; use random:<p0> or cluster:<w>")

    def __str__(self) -> str:
        if self.kind == "cluster":
            return f"cluster:{int(self.param)}"
        return f"random:{self.param}"


def init_lattice(side: int, scheme: InitScheme, seed: int) -> Lattice:
    """Build a lattice with the given initial strategies, zero rewards, all kinds 0."""
    if side < 2:
        raise ValueError(f"lattice side must be >= 2, got {side}")
    if scheme.kind == "random":
        p0 = scheme.param
        if not 0.0 <= p0 <= 1.0:
            raise ValueError(f"initial cooperation probability must lie in [0, 1], got {p0}")
        u = stream(seed, PURPOSE_STRATEGIES).random((side, side))
        strategies = (u < p0).astype(np.int8)
    elif scheme.kind == "cluster":
        w = int(scheme.param)
        if w < 0 or 2 * w >= side:
            raise ValueError(f"cluster half-width must satisfy 0 <= w < side/2, got {w}")
        strategies = np.zeros((side, side), dtype=np.int8)
        mid = side // 2
        strategies[mid - w : mid + w + 1, mid - w : mid + w + 1] = 1
    else:
        raise ValueError(f"unknown init scheme kind {scheme.kind!r}")
    return Lattice(
        side=side,
        strategies=strategies,
        rewards=np.zeros((side, side)),
        kinds=np.zeros((side, side), dtype=np.int8),
    )


def cumulative_payoff(lat: Lattice, index: tuple[int, int], m: PayoffMatrix) -> float:
    """Sum of pair payoffs of one cell against its four neighbours.

    Summed in neighbour order so the result is bit-identical to the
    vectorized epoch engine.
    """
    mine = int(lat.strategies[index])
    total = 0.0
    for nb in neighbors(index, lat.side):
        total += pair_payoff(mine, int(lat.strategies[nb]), m)
    return total


def total_payoffs(strategies: np.ndarray, m: PayoffMatrix) -> np.ndarray:
    """Cumulative payoff of every cell on a committed strategy grid.

    Accumulation order is (up, down, left, right), matching
    `cumulative_payoff`.
    """
    side = strategies.shape[0]
    flat = strategies.reshape(side * side)
    nbr = neighbor_index_table(side)
    table = m.as_lookup()
    mine2 = flat * np.int8(2)
    out = table[mine2 + flat[nbr[0]]]
    out += table[mine2 + flat[nbr[1]]]
    out += table[mine2 + flat[nbr[2]]]
    out += table[mine2 + flat[nbr[3]]]
    return out.reshape(side, side)

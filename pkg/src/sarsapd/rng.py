"""Counter-based random streams for reproducible lattice runs.

All randomness in a run comes from Philox, a counter-based generator.
A stream cell is addressed by (run seed, purpose, index): the 128-bit
Philox key encodes (seed, purpose) and the high word of the 256-bit
counter encodes the index, so any cell can be opened directly without
replaying earlier draws and distinct cells never overlap.  A value's
position inside a generated block never depends on how many draws other
agents consumed, which is what makes epoch results independent of agent
iteration order and of worker count.

Purposes keep the independent uses of the seed from colliding:

=================  =======================================================
PURPOSE_STRATEGIES  initial strategy field of the lattice
PURPOSE_KINDS       placement of learning agents in mixed populations
PURPOSE_ACTIONS     each agent's initial action id
PURPOSE_EPOCH       per-epoch decision draws (index = epoch number)
=================  =======================================================

The per-epoch block is laid out slot-major with one column per agent
(flat row-major cell index): row 0 is the exploration test, row 1 the
action pick / tie-break, row 2 the Fermi adoption test.  An agent's
stream is its column, so draws are effectively keyed by
(seed, epoch, draw slot, agent index).

Streams are opened through a small per-process cache of Philox
instances; repositioning a cached instance is not thread-safe, so
parallel runs must use separate processes (the harness does).
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

_MASK64 = (1 << 64) - 1

PURPOSE_STRATEGIES = 1
PURPOSE_KINDS = 2
PURPOSE_ACTIONS = 3
PURPOSE_EPOCH = 4

#: draws available to one agent in one epoch (see module docstring)
SLOT_EXPLORE, SLOT_ACTION, SLOT_FERMI = 0, 1, 2


@lru_cache(maxsize=16)
def _philox(key: int) -> np.random.Philox:
    return np.random.Philox(key=key)


def stream(seed: int, purpose: int, index: int = 0) -> np.random.Generator:
    """Open the generator for one (seed, purpose, index) cell of the key space."""
    bg = _philox(((seed & _MASK64) << 64) | (purpose & _MASK64))
    state = bg.state
    state["state"]["counter"] = np.array([0, 0, 0, index & _MASK64], dtype=np.uint64)
    # discard buffered words and half-consumed 32-bit leftovers so a
    # repositioned instance is indistinguishable from a fresh one
    state["buffer_pos"] = 4
    state["has_uint32"] = 0
    state["uinteger"] = 0
    bg.state = state
    return np.random.Generator(bg)


def epoch_draws(seed: int, epoch: int, n_agents: int):
    """Uniform [0,1) draws for one epoch, shape (3, n_agents).

    Returns the (explore, action, fermi) slot rows; column i belongs to
    the agent at flat cell index i.
    """
    block = stream(seed, PURPOSE_EPOCH, epoch).random((3, n_agents))
    return block[SLOT_EXPLORE], block[SLOT_ACTION], block[SLOT_FERMI]

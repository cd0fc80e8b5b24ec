import numpy as np
import pytest
from hypothesis import given, strategies as st

from sarsapd.lattice import (
    DilemmaParams,
    InitScheme,
    Lattice,
    Strategy,
    cumulative_payoff,
    init_lattice,
    neighbors,
    pair_payoff,
    payoff_matrix,
    total_payoffs,
)

from oracles import payoff_enumeration


def make_lattice(strategies) -> Lattice:
    grid = np.asarray(strategies, dtype=np.int8)
    side = grid.shape[0]
    return Lattice(
        side=side,
        strategies=grid,
        rewards=np.zeros((side, side)),
        kinds=np.zeros((side, side), dtype=np.int8),
    )


class TestPayoffMatrix:
    def test_weak_dilemma_values(self):
        m = payoff_matrix(DilemmaParams(dg=0.02, dr=0.0))
        assert (m.r, m.s, m.t, m.p) == (1.0, 0.0, 1.02, 0.0)

    def test_boundary_values(self):
        m = payoff_matrix(DilemmaParams(0.0, 0.0))
        assert (m.r, m.s, m.t, m.p) == (1.0, 0.0, 1.0, 0.0)
        m = payoff_matrix(DilemmaParams(1.0, 1.0))
        assert (m.r, m.s, m.t, m.p) == (1.0, -1.0, 2.0, 0.0)

    @pytest.mark.parametrize("dg,dr", [(-0.1, 0.5), (1.1, 0.5), (0.5, -0.1), (0.5, 2.0)])
    def test_out_of_range_rejected(self, dg, dr):
        with pytest.raises(ValueError):
            DilemmaParams(dg, dr)

    @given(st.floats(0, 1), st.floats(0, 1))
    def test_ordering_holds_everywhere(self, dg, dr):
        m = payoff_matrix(DilemmaParams(dg, dr))
        assert m.t >= m.r >= m.p >= m.s
        # strict ordering whenever the scalars do not vanish in float64
        if 1.0 + dg > 1.0 and dr > 0:
            assert m.t > m.r > m.p > m.s


class TestNeighbors:
    def test_corner_wraps(self):
        assert neighbors((0, 0), 3) == ((2, 0), (1, 0), (0, 2), (0, 1))

    def test_interior(self):
        assert neighbors((1, 1), 3) == ((0, 1), (2, 1), (1, 0), (1, 2))

    def test_involution(self):
        # stepping back in the opposite direction returns the cell
        opposite = [1, 0, 3, 2]
        for side in (2, 3, 5):
            for r in range(side):
                for c in range(side):
                    nbs = neighbors((r, c), side)
                    for d, nb in enumerate(nbs):
                        assert neighbors(nb, side)[opposite[d]] == (r, c)

    def test_symmetry(self):
        for side in (2, 4, 7):
            for r in range(side):
                for c in range(side):
                    for nb in neighbors((r, c), side):
                        assert (r, c) in neighbors(nb, side)


class TestPairPayoff:
    def test_weak_dilemma_pairings(self):
        m = payoff_matrix(DilemmaParams(0.02, 0.0))
        assert pair_payoff(Strategy.COOPERATE, Strategy.COOPERATE, m) == 1.0
        assert pair_payoff(Strategy.DEFECT, Strategy.COOPERATE, m) == 1.02
        assert pair_payoff(Strategy.DEFECT, Strategy.DEFECT, m) == 0.0

    @given(st.floats(0, 1), st.floats(0, 1))
    def test_pairings_come_from_one_row(self, dg, dr):
        # the two sides of any pairing earn (R,R), (S,T), (T,S) or (P,P)
        m = payoff_matrix(DilemmaParams(dg, dr))
        seen = {
            (pair_payoff(a, b, m), pair_payoff(b, a, m))
            for a in (0, 1)
            for b in (0, 1)
        }
        assert seen <= {(m.r, m.r), (m.s, m.t), (m.t, m.s), (m.p, m.p)}


class TestCumulativePayoff:
    def test_homogeneous(self):
        m = payoff_matrix(DilemmaParams(0.3, 0.2))
        all_c = make_lattice(np.ones((4, 4)))
        all_d = make_lattice(np.zeros((4, 4)))
        assert cumulative_payoff(all_c, (2, 2), m) == 4.0
        assert cumulative_payoff(all_d, (1, 3), m) == 0.0

    def test_mixed_neighborhood(self):
        # cooperator facing two cooperators and two defectors
        m = payoff_matrix(DilemmaParams(0.3, 0.2))
        grid = np.zeros((5, 5), dtype=np.int8)
        grid[2, 2] = 1  # focal
        grid[1, 2] = 1  # up
        grid[3, 2] = 1  # down
        lat = make_lattice(grid)
        assert cumulative_payoff(lat, (2, 2), m) == pytest.approx(1.6, abs=1e-15)

    def test_matches_enumeration_oracle_exactly(self):
        rng = np.random.default_rng(42)
        for _ in range(100):
            dg, dr = rng.random(), rng.random()
            m = payoff_matrix(DilemmaParams(dg, dr))
            grid = rng.integers(0, 2, size=(4, 4)).astype(np.int8)
            lat = make_lattice(grid)
            expected = payoff_enumeration(grid.tolist(), m.r, m.s, m.t, m.p)
            for i in range(4):
                for j in range(4):
                    assert cumulative_payoff(lat, (i, j), m) == expected[i * 4 + j]

    def test_vectorized_matches_scalar_exactly(self):
        rng = np.random.default_rng(3)
        m = payoff_matrix(DilemmaParams(0.37, 0.61))
        grid = rng.integers(0, 2, size=(6, 6)).astype(np.int8)
        lat = make_lattice(grid)
        vec = total_payoffs(grid, m)
        for i in range(6):
            for j in range(6):
                assert vec[i, j] == cumulative_payoff(lat, (i, j), m)

    def test_bounds_exhaustive_3x3(self):
        # every 3x3 configuration stays within [4S, 4T]
        m = payoff_matrix(DilemmaParams(0.8, 0.6))
        for bits in range(2**9):
            grid = np.array([(bits >> k) & 1 for k in range(9)], dtype=np.int8).reshape(3, 3)
            pay = total_payoffs(grid, m)
            assert (pay >= 4 * m.s).all() and (pay <= 4 * m.t).all()


class TestInitLattice:
    def test_cluster_is_centered_square(self):
        lat = init_lattice(5, InitScheme.cluster(1), seed=0)
        assert lat.strategies.sum() == 9
        assert lat.strategies[1:4, 1:4].all()
        assert not lat.strategies[0].any() and not lat.strategies[:, 0].any()

    def test_random_extremes(self):
        assert init_lattice(8, InitScheme.random(0.0), 1).strategies.sum() == 0
        assert init_lattice(8, InitScheme.random(1.0), 1).strategies.sum() == 64

    def test_random_seed_reproducible(self):
        a = init_lattice(200, InitScheme.random(0.5), seed=77)
        b = init_lattice(200, InitScheme.random(0.5), seed=77)
        c = init_lattice(200, InitScheme.random(0.5), seed=78)
        assert np.array_equal(a.strategies, b.strategies)
        assert not np.array_equal(a.strategies, c.strategies)

    def test_rewards_start_at_zero(self):
        lat = init_lattice(6, InitScheme.random(0.5), 5)
        assert not lat.rewards.any()

    @pytest.mark.parametrize(
        "scheme",
        [InitScheme.random(-0.1), InitScheme.random(1.5), InitScheme.cluster(3), InitScheme("x", 1)],
    )
    def test_invalid_schemes_rejected(self, scheme):
        with pytest.raises(ValueError):
            init_lattice(6, scheme, 0)

    def test_side_too_small(self):
        with pytest.raises(ValueError):
            init_lattice(1, InitScheme.random(0.5), 0)

    def test_parse_round_trip(self):
        assert InitScheme.parse("random:0.25") == InitScheme.random(0.25)
        assert InitScheme.parse("cluster:10") == InitScheme.cluster(10)
        assert str(InitScheme.cluster(10)) == "cluster:10"
        with pytest.raises(ValueError):
            InitScheme.parse("blob:3")

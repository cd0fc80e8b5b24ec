import numpy as np
import pytest

from sarsapd.dynamics import AgentKind
from sarsapd.lattice import DilemmaParams, InitScheme, init_lattice, payoff_matrix, total_payoffs
from sarsapd.metrics import (
    HEATMAP_HEADER,
    RHO_HEADER,
    TIMESERIES_HEADER,
    EpochMetrics,
    class_average_reward,
    cooperation_rate,
    epoch_metrics,
    read_heatmap_csv,
    read_rho_csv,
    read_snapshot,
    read_timeseries_csv,
    snapshot,
    snapshot_to_grids,
    tail_average,
    write_heatmap_csv,
    write_qtable_csv,
    write_rho_csv,
    write_snapshot,
    write_timeseries_csv,
)
from test_lattice import make_lattice


class TestCooperationRate:
    def test_extremes(self):
        assert cooperation_rate(make_lattice(np.ones((6, 6)))) == 1.0
        assert cooperation_rate(make_lattice(np.zeros((6, 6)))) == 0.0

    def test_cluster_fraction(self):
        lat = init_lattice(5, InitScheme.cluster(1), 0)
        assert cooperation_rate(lat) == 0.36

    def test_rate_times_cells_recovers_integer_count(self):
        rng = np.random.default_rng(0)
        for _ in range(20):
            side = int(rng.integers(2, 12))
            lat = make_lattice(rng.integers(0, 2, size=(side, side)))
            scaled = cooperation_rate(lat) * side * side
            assert scaled == pytest.approx(round(scaled), abs=1e-9)
            assert round(scaled) == int(np.count_nonzero(lat.strategies))


class TestClassAverageReward:
    def test_all_cooperators(self):
        lat = make_lattice(np.ones((4, 4)))
        lat.rewards = total_payoffs(lat.strategies, payoff_matrix(DilemmaParams(0.2, 0.3)))
        assert class_average_reward(lat, strategy=1) == 4.0
        assert class_average_reward(lat, strategy=0) == 0.0  # empty class

    def test_checkerboard_class_means(self):
        grid = np.array([[1, 0], [0, 1]], dtype=np.int8)
        lat = make_lattice(grid)
        lat.rewards = total_payoffs(grid, payoff_matrix(DilemmaParams(0.5, 0.5)))
        assert class_average_reward(lat, strategy=1) == -2.0
        assert class_average_reward(lat, strategy=0) == 6.0

    def test_kind_and_where_filters(self):
        lat = make_lattice(np.ones((2, 2)))
        lat.kinds[0, 0] = AgentKind.SARSA_STRATEGY
        lat.rewards[:] = [[4.0, 2.0], [2.0, 2.0]]
        assert class_average_reward(lat, kind=AgentKind.SARSA_STRATEGY) == 4.0
        assert class_average_reward(lat, kind=AgentKind.TRADITIONAL) == 2.0
        assert class_average_reward(lat, where=lat.rewards > 3.0) == 4.0

    def test_weighted_mean_identity(self):
        rng = np.random.default_rng(4)
        for _ in range(25):
            lat = make_lattice(rng.integers(0, 2, size=(8, 8)))
            lat.rewards = total_payoffs(
                lat.strategies, payoff_matrix(DilemmaParams(rng.random(), rng.random()))
            )
            m = epoch_metrics(lat, 1)
            if 0 < m.coop_rate < 1:
                combined = (
                    m.coop_rate * m.avg_reward_coop + (1 - m.coop_rate) * m.avg_reward_def
                )
                assert combined == pytest.approx(m.avg_reward, abs=1e-12)


class TestSnapshot:
    def test_pure_codes(self):
        lat = make_lattice(np.ones((3, 3)))
        assert (snapshot(lat) == 1).all()  # cooperator, non-learner
        lat = make_lattice(np.zeros((3, 3)))
        lat.kinds[:] = AgentKind.SARSA_STRATEGY
        assert (snapshot(lat) == 3).all()  # defector, learner

    def test_histogram_matches_joint_counts(self):
        rng = np.random.default_rng(17)
        lat = make_lattice(rng.integers(0, 2, size=(10, 10)))
        lat.kinds = (rng.random((10, 10)) < 0.5).astype(np.int8) * int(
            AgentKind.SARSA_STRATEGY
        )
        codes = snapshot(lat)
        learner = lat.kinds != AgentKind.TRADITIONAL
        coop = lat.strategies == 1
        assert (codes == 0).sum() == (~learner & ~coop).sum()
        assert (codes == 1).sum() == (~learner & coop).sum()
        assert (codes == 2).sum() == (learner & coop).sum()
        assert (codes == 3).sum() == (learner & ~coop).sum()

    def test_invertible(self):
        rng = np.random.default_rng(23)
        lat = make_lattice(rng.integers(0, 2, size=(7, 7)))
        lat.kinds = rng.integers(0, 3, size=(7, 7)).astype(np.int8)
        strategies, learner = snapshot_to_grids(snapshot(lat))
        assert np.array_equal(strategies, lat.strategies)
        assert np.array_equal(learner, lat.kinds != AgentKind.TRADITIONAL)


class TestTailAverage:
    def test_constant_series(self):
        assert tail_average([0.25] * 50, 10) == 0.25

    def test_window_one(self):
        assert tail_average([0.0] * 99 + [1.0], 1) == 1.0

    def test_arithmetic_run(self):
        assert tail_average(np.arange(1, 2001), 1000) == 1500.5

    def test_window_larger_than_series_rejected(self):
        with pytest.raises(ValueError):
            tail_average([1.0, 2.0], 3)
        with pytest.raises(ValueError):
            tail_average([1.0], 0)


class TestFileFormats:
    def test_timeseries_round_trip(self, tmp_path):
        rows = [
            EpochMetrics(1, 0.5, 1.234567890123456, 2.0, 0.3333333333333333),
            EpochMetrics(2, 1 / 3, -0.1, 0.0, 4.0),
        ]
        path = tmp_path / "ts.csv"
        write_timeseries_csv(path, rows)
        text = path.read_text().splitlines()
        assert text[0] == TIMESERIES_HEADER
        assert len(text) == 3
        back = read_timeseries_csv(path)
        assert back == rows  # repr round-trips float64 exactly

    def test_snapshot_round_trip(self, tmp_path):
        rng = np.random.default_rng(5)
        codes = rng.integers(0, 4, size=(9, 9)).astype(np.int8)
        path = tmp_path / "snap.txt"
        write_snapshot(path, codes, epoch=123)
        lines = path.read_text().splitlines()
        assert lines[0] == "L=9 epoch=123"
        assert len(lines) == 10 and all(len(l) == 9 for l in lines[1:])
        back, epoch = read_snapshot(path)
        assert epoch == 123
        assert np.array_equal(back, codes)

    def test_heatmap_round_trip(self, tmp_path):
        rows = [(0.0, 0.5, 0.123456789012, 0.01, 20), (1.0, 0.0, 0.9, 0.0, 20)]
        path = tmp_path / "hm.csv"
        write_heatmap_csv(path, rows)
        assert path.read_text().splitlines()[0] == HEATMAP_HEADER
        assert read_heatmap_csv(path) == rows

    def test_rho_round_trip(self, tmp_path):
        rows = [(0.1, 0.75, 0.4781, 0.002, 10)]
        path = tmp_path / "rho.csv"
        write_rho_csv(path, rows)
        assert path.read_text().splitlines()[0] == RHO_HEADER
        assert read_rho_csv(path) == rows

    def test_qtable_format(self, tmp_path):
        q = np.zeros((6, 2))
        q[3, 1] = 0.125
        path = tmp_path / "q.csv"
        write_qtable_csv(path, q)
        lines = path.read_text().splitlines()
        assert lines[0] == "state,action,value"
        assert len(lines) == 13
        assert "3,1,0.125" in lines

    def test_wrong_header_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("epoch,stuff\n1,2\n")
        with pytest.raises(ValueError):
            read_timeseries_csv(path)

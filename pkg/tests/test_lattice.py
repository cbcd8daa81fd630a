import numpy as np
import pytest

from somvq.errors import ConfigurationError
from somvq.lattice import (
    GridCoord,
    LatticeSpec,
    coord_of,
    distances_from,
    grid_distance,
    index_of,
)


class TestLatticeSpec:
    def test_neuron_count(self):
        assert LatticeSpec(3, 4).neuron_count == 12
        assert LatticeSpec(1, 5).neuron_count == 5

    @pytest.mark.parametrize("rows,cols", [(0, 4), (4, 0), (-1, 3), (0, 0)])
    def test_rejects_degenerate_shapes(self, rows, cols):
        with pytest.raises(ConfigurationError):
            LatticeSpec(rows, cols)

    def test_rejects_non_integers(self):
        with pytest.raises(ConfigurationError):
            LatticeSpec(2.0, 3)


class TestCoordOf:
    def test_1d_identity_layout(self):
        assert coord_of(LatticeSpec(1, 5), 3) == GridCoord(0, 3)

    def test_origin(self):
        assert coord_of(LatticeSpec(3, 4), 0) == GridCoord(0, 0)

    def test_row_major_matches_hand_enumeration(self):
        # oracle: walk the grid row by row and record the sequence
        spec = LatticeSpec(3, 4)
        expected = []
        for row in range(spec.rows):
            for col in range(spec.cols):
                expected.append(GridCoord(row, col))
        assert [coord_of(spec, j) for j in range(spec.neuron_count)] == expected
        assert coord_of(spec, 7) == GridCoord(1, 3)

    @pytest.mark.parametrize("bad", [-1, 12, 100])
    def test_out_of_range(self, bad):
        with pytest.raises(IndexError):
            coord_of(LatticeSpec(3, 4), bad)

    @pytest.mark.parametrize("rows,cols", [(1, 1), (1, 8), (3, 4), (5, 5)])
    def test_index_round_trip(self, rows, cols):
        spec = LatticeSpec(rows, cols)
        for j in range(spec.neuron_count):
            assert index_of(spec, coord_of(spec, j)) == j


class TestGridDistance:
    def test_identity(self):
        spec = LatticeSpec(5, 5)
        assert grid_distance(spec, GridCoord(2, 2), GridCoord(2, 2)) == 0.0

    def test_3_4_5_triangle(self):
        spec = LatticeSpec(4, 5)
        assert grid_distance(spec, GridCoord(0, 0), GridCoord(3, 4)) == 5.0

    def test_collinear_on_1d_lattice(self):
        spec = LatticeSpec(1, 8)
        assert grid_distance(spec, GridCoord(0, 2), GridCoord(0, 7)) == 5.0

    def test_invalid_coordinate(self):
        spec = LatticeSpec(2, 2)
        with pytest.raises(IndexError):
            grid_distance(spec, GridCoord(0, 0), GridCoord(2, 0))
        with pytest.raises(IndexError):
            grid_distance(spec, GridCoord(-1, 0), GridCoord(0, 0))

    @pytest.mark.parametrize("rows,cols", [(1, 10), (4, 4), (10, 10)])
    def test_metric_axioms_exhaustive(self, rows, cols):
        spec = LatticeSpec(rows, cols)
        n = spec.neuron_count
        dist = np.stack([distances_from(spec, j) for j in range(n)])
        # identity of indiscernibles and symmetry
        assert np.array_equal(np.diag(dist), np.zeros(n))
        assert (dist[~np.eye(n, dtype=bool)] > 0).all()
        assert np.array_equal(dist, dist.T)
        # triangle inequality over every (a, b, c), with float headroom
        via = dist[:, :, np.newaxis] + dist[np.newaxis, :, :]
        assert (dist[:, np.newaxis, :] <= via + 1e-12).all()


class TestDistancesFrom:
    def test_matches_pairwise_grid_distance(self):
        spec = LatticeSpec(3, 4)
        for j in range(spec.neuron_count):
            row = distances_from(spec, j)
            for k in range(spec.neuron_count):
                assert row[k] == grid_distance(spec, coord_of(spec, j), coord_of(spec, k))

    def test_out_of_range(self):
        with pytest.raises(IndexError):
            distances_from(LatticeSpec(2, 2), 4)

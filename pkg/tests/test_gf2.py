"""
Tests for GF(2) linear algebra.
"""

import numpy as np
import pytest

from src.core.gf2 import BitMatrix, lempel_factor, minrank2, rank, rref
from src.exceptions import ValidationError


def cycle_adjacency(n: int) -> BitMatrix:
    data = np.zeros((n, n), dtype=np.uint8)
    for i in range(n):
        j = (i + 1) % n
        data[i, j] = data[j, i] = 1
    return BitMatrix(data)


def random_symmetric(rng, n: int) -> BitMatrix:
    upper = np.triu(rng.integers(0, 2, size=(n, n)))
    return BitMatrix(upper | upper.T)


class TestBitMatrix:
    """Test BitMatrix basics."""

    def test_from_rows_and_indexing(self):
        """Test parsing bit strings."""
        m = BitMatrix.from_rows(['101', '011'])
        assert m.shape == (2, 3)
        assert m[0, 2] == 1
        assert m[1, 0] == 0
        assert m.to_strings() == ['101', '011']

    def test_row_ints(self):
        """Test rows pack into integers with bit j holding column j."""
        m = BitMatrix.from_rows(['101', '011'])
        assert m.row_ints() == [5, 6]

    def test_rejects_bad_rows(self):
        """Test that malformed rows are rejected."""
        with pytest.raises(ValidationError):
            BitMatrix.from_rows(['10', '1'])
        with pytest.raises(ValidationError):
            BitMatrix.from_rows(['12'])

    def test_is_immutable(self):
        """Test that the backing array cannot be modified."""
        m = BitMatrix.identity(3)
        with pytest.raises(ValueError):
            m.array[0, 0] = 0

    def test_product_mod_two(self):
        """Test matrix product reduces mod 2."""
        m = BitMatrix.from_rows(['11', '11'])
        assert m @ m == BitMatrix.zeros(2, 2)

    def test_inverse(self):
        """Test inverse of random invertible matrices."""
        rng = np.random.default_rng(3)
        found = 0
        while found < 5:
            m = BitMatrix(rng.integers(0, 2, size=(6, 6)))
            if not m.is_invertible():
                continue
            found += 1
            assert m @ m.inverse() == BitMatrix.identity(6)
            assert m.inverse() @ m == BitMatrix.identity(6)

    def test_singular_inverse_raises(self):
        """Test that singular matrices are rejected."""
        with pytest.raises(ValidationError):
            BitMatrix.from_rows(['11', '11']).inverse()

    def test_rank(self):
        """Test rank of simple matrices."""
        assert rank(BitMatrix.identity(5)) == 5
        assert rank(BitMatrix.from_rows(['110', '011', '101'])) == 2
        assert rank(BitMatrix.zeros(3, 3)) == 0

    def test_rref_pivots(self):
        """Test reduced row echelon form."""
        reduced, pivots = rref(BitMatrix.from_rows(['011', '010', '001']))
        assert pivots == [1, 2]
        assert reduced.to_strings() == ['010', '001', '000']


class TestLempelFactor:
    """Test minimum-width symmetric factorization."""

    def test_rejects_non_symmetric(self):
        """Test non-symmetric input raises."""
        with pytest.raises(ValidationError):
            lempel_factor(BitMatrix.from_rows(['01', '00']))

    def test_zero_matrix(self):
        """Test zero matrix gives zero columns."""
        factor = lempel_factor(BitMatrix.zeros(4, 4))
        assert factor.shape == (4, 0)

    def test_four_cycle_is_alternating(self):
        """Test C4 needs rank + 1 columns."""
        c4 = cycle_adjacency(4)
        factor = lempel_factor(c4)
        assert rank(c4) == 2
        assert factor.cols == 3
        assert factor @ factor.T == c4

    def test_identity(self):
        """Test identity factors into n columns."""
        factor = lempel_factor(BitMatrix.identity(4))
        assert factor.cols == 4
        assert factor @ factor.T == BitMatrix.identity(4)

    @pytest.mark.parametrize('seed', range(20))
    def test_random_symmetric(self, seed):
        """Test width equals Lempel's bound on random matrices."""
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 9))
        s = random_symmetric(rng, n)
        factor = lempel_factor(s)
        assert factor @ factor.T == s
        expected = rank(s) + (1 if (s.is_alternating() and not s.is_zero()) else 0)
        assert factor.cols == expected


class TestMinrank:
    """Test minimum rank over diagonal completions."""

    def test_complete_graph(self):
        """Test complete graph plus identity has rank 1."""
        k5 = BitMatrix(np.ones((5, 5), dtype=np.uint8)).without_diagonal()
        result = minrank2(k5)
        assert result.value == 1
        assert result.witness == (1, 1, 1, 1, 1)
        assert result.exact

    def test_four_cycle(self):
        """Test C4 has minrank 2."""
        result = minrank2(cycle_adjacency(4))
        assert result.value == 2
        assert rank(cycle_adjacency(4) ^ result.witness_matrix()) == 2

    def test_empty_graph_prefers_zero_witness(self):
        """Test the first minimum in lexicographic order is kept."""
        result = minrank2(BitMatrix.zeros(3, 3))
        assert result.value == 0
        assert result.witness == (0, 0, 0)

    def test_rejects_non_graph(self):
        """Test adjacency with a diagonal entry is rejected."""
        with pytest.raises(ValidationError):
            minrank2(BitMatrix.identity(3))

    def test_accepts_graph_objects(self):
        """Test objects exposing an adjacency attribute."""

        class Holder:
            adjacency = cycle_adjacency(5)

        assert minrank2(Holder()).value == rank(
            cycle_adjacency(5) ^ minrank2(Holder()).witness_matrix()
        )

    def test_heuristic_is_upper_bound(self):
        """Test greedy mode never beats the exact value."""
        rng = np.random.default_rng(11)
        adjacency = random_symmetric(rng, 8).without_diagonal()
        exact = minrank2(adjacency)
        greedy = minrank2(adjacency, exact_limit=4)
        assert not greedy.exact
        assert greedy.value >= exact.value
        assert rank(adjacency ^ greedy.witness_matrix()) == greedy.value

    def test_exact_mode_refuses_large_graphs(self):
        """Test exact mode raises above the vertex limit."""
        with pytest.raises(ValidationError, match='limited to 4 vertices'):
            minrank2(cycle_adjacency(6), exact_limit=4, mode='exact')

    def test_exact_mode_within_limit(self):
        """Test exact mode matches the default search up to the limit."""
        result = minrank2(cycle_adjacency(4), exact_limit=4, mode='exact')
        assert result.exact
        assert result.value == 2

    def test_auto_mode_falls_back_to_greedy(self):
        """Test the default mode switches to greedy flips above the limit."""
        result = minrank2(cycle_adjacency(6), exact_limit=4)
        assert not result.exact
        assert rank(cycle_adjacency(6) ^ result.witness_matrix()) == result.value

    def test_heuristic_mode_on_small_graph(self):
        """Test heuristic mode skips the exhaustive search."""
        rng = np.random.default_rng(5)
        adjacency = random_symmetric(rng, 6).without_diagonal()
        greedy = minrank2(adjacency, mode='heuristic')
        assert not greedy.exact
        assert greedy.value >= minrank2(adjacency).value

    def test_unknown_mode(self):
        """Test unknown modes are rejected."""
        with pytest.raises(ValidationError):
            minrank2(cycle_adjacency(4), mode='fast')

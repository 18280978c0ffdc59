"""
Tests for Hadamard-free Clifford synthesis.
"""

import numpy as np
import pytest

from src.bounds import upper_bound
from src.core.circuit import depth, simulate, validate_schedule
from src.core.gates import SINGLE_QUBIT_NAMES, Cnot, FanOut, SingleQubit
from src.core.gf2 import BitMatrix
from src.core.tableau import CliffordTableau
from src.exceptions import ValidationError
from src.synthesis.cx_synth import linear_tableau, permutation_tableau
from src.synthesis.cz_synth import CzGraph
from src.synthesis.hfree_synth import (
    AbsorptionTrace,
    absorb,
    commute_cz_through_fanout,
    cz_ahead_of_cx,
    hadamard_free_tableau,
    synth_hfree,
    synth_hfree_exact,
)
from tests.test_cx_synth import random_invertible
from tests.test_cz_synth import random_graph


def random_locals(rng, n, count):
    return [
        SingleQubit(int(q), SINGLE_QUBIT_NAMES[int(rng.integers(0, 24))])
        for q in rng.integers(0, n, size=count)
    ]


def random_fanout(rng, n):
    control = int(rng.integers(0, n))
    others = [q for q in range(n) if q != control]
    size = int(rng.integers(0, len(others) + 1))
    targets = sorted(int(q) for q in rng.choice(others, size=size, replace=False))
    return FanOut(control, tuple(targets))


class TestCommutation:
    """Test moving a CZ layer through one fan-out."""

    def test_disjoint_support(self):
        """Test an edge away from the fan-out passes through untouched."""
        cz = CzGraph.from_edges(4, [(2, 3)])
        result = commute_cz_through_fanout(cz, FanOut(0, (1,)))
        assert result.fanout == FanOut(0, (1,))
        assert result.before == () and result.after == ()
        assert result.residual == cz

    def test_edge_on_the_fanout(self):
        """Test CZ(0,1) before CNOT-like fan-out 0->1 turns into phase gates."""
        cz = CzGraph.from_edges(2, [(0, 1)])
        fanout = FanOut(0, (1,))
        result = commute_cz_through_fanout(cz, fanout)
        assert result.residual.is_empty()
        assert result.fanout == fanout
        expected = CliffordTableau.from_gates(2, cz.cz_gates() + [fanout])
        assert CliffordTableau.from_gates(2, result.gates()) == expected

    def test_new_target(self):
        """Test a neighbour of the control outside the targets joins the fan-out."""
        cz = CzGraph.from_edges(3, [(0, 2)])
        result = commute_cz_through_fanout(cz, FanOut(0, (1,)))
        assert result.fanout == FanOut(0, (1, 2))
        assert SingleQubit(2, 'H') in result.before

    def test_cnot_is_one_target_fanout(self):
        """Test CNOT inputs are handled as fan-outs."""
        cz = CzGraph.from_edges(3, [(0, 1), (1, 2)])
        result = commute_cz_through_fanout(cz, Cnot(1, 0))
        expected = CliffordTableau.from_gates(3, cz.cz_gates() + [Cnot(1, 0)])
        assert CliffordTableau.from_gates(3, result.gates()) == expected

    def test_random_commutations(self):
        """Test cz then fan-out equals the rewritten sequence and the control is cleared."""
        rng = np.random.default_rng(17)
        for _ in range(300):
            n = int(rng.integers(2, 8))
            cz = random_graph(rng, n, p=float(rng.random()))
            fanout = random_fanout(rng, n)
            result = commute_cz_through_fanout(cz, fanout)
            expected = CliffordTableau.from_gates(n, cz.cz_gates() + [fanout])
            assert CliffordTableau.from_gates(n, result.gates()) == expected
            assert result.residual.neighbors(fanout.control) == ()
            assert set(fanout.targets) <= set(result.fanout.targets)
            assert all(isinstance(g, SingleQubit) for g in result.before + result.after)

    def test_out_of_range(self):
        """Test fan-outs must fit the graph."""
        with pytest.raises(ValidationError):
            commute_cz_through_fanout(CzGraph.empty(2), FanOut(0, (3,)))


class TestCzAheadOfCx:
    """Test moving a CZ layer in front of a CNOT transform."""

    def test_random_transforms(self):
        """Test CX(M) then CZ(G) equals Z^l, CZ(G'), CX(M)."""
        rng = np.random.default_rng(23)
        for _ in range(100):
            n = int(rng.integers(1, 8))
            matrix = random_invertible(rng, n)
            cz = random_graph(rng, n)
            diagonal, moved = cz_ahead_of_cx(matrix, cz)
            zs = [SingleQubit(q, 'Z') for q, bit in enumerate(diagonal) if bit]
            lhs = linear_tableau(matrix).then(cz.to_tableau())
            rhs = (
                CliffordTableau.from_gates(n, zs + moved.cz_gates())
                .then(linear_tableau(matrix))
            )
            assert lhs == rhs

    def test_identity_transform(self):
        """Test the identity leaves the graph alone."""
        cz = CzGraph.from_edges(3, [(0, 1), (1, 2)])
        diagonal, moved = cz_ahead_of_cx(BitMatrix.identity(3), cz)
        assert diagonal == (0, 0, 0)
        assert moved == cz


class TestAbsorption:
    """Test pushing a CZ layer through a fan-out sequence."""

    def test_triangle_through_identity_reduction(self):
        """Test K3 through three empty fan-outs leaves no CZ."""
        cz = CzGraph.complete(3, range(3))
        gates, residual = absorb(cz, [FanOut(q, ()) for q in range(3)])
        assert residual.is_empty()
        assert CliffordTableau.from_gates(3, gates) == cz.to_tableau()

    def test_trace_shrinks(self):
        """Test each crossed gate only removes edges."""
        rng = np.random.default_rng(3)
        n = 6
        cz = random_graph(rng, n, p=0.8)
        trace = AbsorptionTrace()
        fanouts = [FanOut(q, ()) for q in range(n)]
        _, residual = absorb(cz, fanouts, trace)
        assert len(trace.residuals) == n
        previous = set(cz.edges())
        for step, graph in enumerate(trace.residuals):
            edges = set(graph.edges())
            assert edges <= previous
            assert all(step not in edge for edge in edges)
            previous = edges
        assert residual.is_empty()


class TestHadamardFree:
    """Test the n fan-out and 2n-1 constructions."""

    def test_triangle_with_identity(self):
        """Test K3 with M = I needs at most three fan-outs and no permutation."""
        cz = CzGraph.complete(3, range(3))
        s, sigma = synth_hfree([], BitMatrix.identity(3), cz)
        validate_schedule(s)
        assert sigma == (0, 1, 2)
        assert depth(s).injection_layers <= 3
        assert simulate(s) == cz.to_tableau()

    def test_random_layers(self):
        """Test at most n injections and equality up to the final permutation."""
        rng = np.random.default_rng(41)
        for _ in range(100):
            n = int(rng.integers(2, 9))
            matrix = random_invertible(rng, n)
            cz = random_graph(rng, n, p=float(rng.random()))
            local = random_locals(rng, n, n)
            s, sigma = synth_hfree(local, matrix, cz)
            validate_schedule(s)
            assert depth(s).injection_layers <= n
            assert len(s.multi_qubit_gates()) <= n
            expected = hadamard_free_tableau(local, matrix, cz)
            assert simulate(s).then(permutation_tableau(sigma)) == expected

    def test_random_exact(self):
        """Test depth 2n-1 with exact equality."""
        rng = np.random.default_rng(43)
        for _ in range(100):
            n = int(rng.integers(2, 9))
            matrix = random_invertible(rng, n)
            cz = random_graph(rng, n)
            local = random_locals(rng, n, 2)
            s = synth_hfree_exact(local, matrix, cz)
            validate_schedule(s)
            assert depth(s).injection_layers <= upper_bound('hfree-exact', n)
            assert simulate(s) == hadamard_free_tableau(local, matrix, cz)

    def test_size_mismatch(self):
        """Test the CZ layer must match the transform."""
        with pytest.raises(ValidationError):
            synth_hfree([], BitMatrix.identity(3), CzGraph.empty(2))

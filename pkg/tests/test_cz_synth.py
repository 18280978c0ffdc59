"""
Tests for CZ-layer synthesis.
"""

import math
from itertools import combinations

import numpy as np
import pytest

from src.bounds import upper_bound
from src.core.circuit import Architecture, depth, simulate, validate_schedule
from src.core.gates import SINGLE_QUBIT_NAMES, CliqueFlip, SingleQubit
from src.core.gf2 import BitMatrix, minrank2
from src.core.pauli import PauliString
from src.core.tableau import CliffordTableau
from src.exceptions import ValidationError
from src.synthesis.cz_synth import (
    CzGraph,
    graph_state_circuit,
    synth_bipartite,
    synth_disentangle,
    synth_minrank,
    synth_stacked,
)


def random_graph(rng, n, p=0.5):
    upper = np.triu((rng.random((n, n)) < p).astype(np.uint8), 1)
    return CzGraph(BitMatrix(upper | upper.T))


def all_graphs(n):
    pairs = list(combinations(range(n), 2))
    for mask in range(1 << len(pairs)):
        yield CzGraph.from_edges(n, [p for k, p in enumerate(pairs) if mask >> k & 1])


class TestCzGraph:
    """Test the graph form of CZ layers."""

    def test_concatenation_is_xor(self):
        """Test two layers compose to the symmetric difference of edges."""
        g1 = CzGraph.from_edges(3, [(0, 1), (1, 2)])
        g2 = CzGraph.from_edges(3, [(1, 2), (0, 2)])
        combined = CliffordTableau.from_gates(3, g1.cz_gates() + g2.cz_gates())
        assert (g1 ^ g2).edges() == [(0, 1), (0, 2)]
        assert (g1 ^ g2).to_tableau() == combined

    def test_from_cliques(self):
        """Test cliques XOR into a graph."""
        graph = CzGraph.from_cliques(4, [(0, 1, 2), (1, 2, 3)])
        assert graph.edges() == [(0, 1), (0, 2), (1, 3), (2, 3)]

    def test_clique_flip_tableau(self):
        """Test a clique flip equals the CZ layer of its complete graph."""
        tableau = CliffordTableau.from_gates(4, [CliqueFlip((0, 2, 3))])
        assert tableau == CzGraph.complete(4, (0, 2, 3)).to_tableau()

    def test_relabeled(self):
        """Test vertex renaming."""
        graph = CzGraph.from_edges(3, [(0, 1)]).relabeled([2, 0, 1])
        assert graph.edges() == [(0, 2)]

    def test_rejects_diagonal(self):
        """Test self loops are not CZ gates."""
        with pytest.raises(ValidationError):
            CzGraph(BitMatrix.identity(2))


class TestMinrankCliques:
    """Test clique synthesis from a minrank witness."""

    def test_triangle(self):
        """Test K3 is one clique."""
        assert synth_minrank(CzGraph.complete(3, range(3))) == [(0, 1, 2)]

    def test_edgeless(self):
        """Test no edges means no cliques."""
        assert synth_minrank(CzGraph.empty(4)) == []

    def test_four_cycle(self):
        """Test C4 against its minrank window."""
        cycle = CzGraph.from_edges(4, [(0, 1), (1, 2), (2, 3), (0, 3)])
        cliques = synth_minrank(cycle)
        assert CzGraph.from_cliques(4, cliques) == cycle
        assert len(cliques) <= minrank2(cycle).value + 1

    @pytest.mark.parametrize('n', [2, 3, 4, 5])
    def test_every_small_graph(self, n):
        """Test XOR soundness and the minrank window on all graphs."""
        for graph in all_graphs(n):
            cliques = synth_minrank(graph)
            value = minrank2(graph).value if not graph.is_empty() else 0
            assert CzGraph.from_cliques(n, cliques) == graph
            assert value <= len(cliques) <= value + 1

    @pytest.mark.slow
    def test_random_larger_graphs(self):
        """Test the window on random graphs up to twelve vertices."""
        rng = np.random.default_rng(5)
        for _ in range(200):
            n = int(rng.integers(6, 13))
            graph = random_graph(rng, n)
            cliques = synth_minrank(graph)
            value = minrank2(graph).value
            assert CzGraph.from_cliques(n, cliques) == graph
            assert value <= len(cliques) <= value + 1


class TestDisentangle:
    """Test the one-vertex-at-a-time construction."""

    def test_triangle(self):
        """Test K3 needs a single clique."""
        assert synth_disentangle(CzGraph.complete(3, range(3))) == [(0, 1, 2)]

    def test_path(self):
        """Test a path peels edge by edge."""
        path = CzGraph.from_edges(3, [(0, 1), (1, 2)])
        assert synth_disentangle(path) == [(0, 1), (1, 2)]

    def test_star(self):
        """Test a star is flipped from its centre, then the leaves are cleaned."""
        star = CzGraph.from_edges(5, [(0, k) for k in range(1, 5)])
        cliques = synth_disentangle(star)
        assert cliques[0] == (0, 1, 2, 3, 4)
        assert CzGraph.from_cliques(5, cliques) == star
        assert len(cliques) <= 4

    def test_random_graphs(self):
        """Test soundness, count and staircase support."""
        rng = np.random.default_rng(9)
        for _ in range(100):
            n = int(rng.integers(2, 13))
            graph = random_graph(rng, n)
            cliques = synth_disentangle(graph)
            assert CzGraph.from_cliques(n, cliques) == graph
            assert len(cliques) <= n - 1
            for i, clique in enumerate(cliques):
                assert min(clique) >= i

    def test_custom_order(self):
        """Test a reversed order gives cliques below each vertex."""
        rng = np.random.default_rng(2)
        graph = random_graph(rng, 7)
        cliques = synth_disentangle(graph, range(6, -1, -1))
        assert CzGraph.from_cliques(7, cliques) == graph
        assert all(max(a) > max(b) for a, b in zip(cliques, cliques[1:]))

    def test_bad_order(self):
        """Test orders must be permutations."""
        with pytest.raises(ValidationError):
            synth_disentangle(CzGraph.empty(3), [0, 0, 1])


class TestStacked:
    """Test two CZ layers around a local layer on one bus."""

    def test_edgeless(self):
        """Test empty layers cost nothing."""
        s = synth_stacked(CzGraph.empty(4), CzGraph.empty(4))
        assert depth(s).injection_layers == 0

    def test_random_pairs(self):
        """Test depth n+1, clique count 2n-2 and simulation equality."""
        rng = np.random.default_rng(21)
        for _ in range(100):
            n = int(rng.integers(2, 13))
            g1, g2 = random_graph(rng, n), random_graph(rng, n)
            local = [
                SingleQubit(int(q), SINGLE_QUBIT_NAMES[int(rng.integers(0, 24))])
                for q in rng.integers(0, n, size=n)
            ]
            s = synth_stacked(g1, g2, local)
            validate_schedule(s)
            assert depth(s).injection_layers <= upper_bound('cz-stacked', n)
            assert len(s.multi_qubit_gates()) <= 2 * n - 2
            expected = CliffordTableau.from_gates(n, g1.cz_gates() + local + g2.cz_gates())
            assert simulate(s) == expected

    def test_size_mismatch(self):
        """Test layers must share a register."""
        with pytest.raises(ValidationError):
            synth_stacked(CzGraph.empty(3), CzGraph.empty(4))


class TestBipartite:
    """Test the two-bus construction."""

    def test_edgeless(self):
        """Test no edges means no layers."""
        assert depth(synth_bipartite(CzGraph.empty(6))).injection_layers == 0

    def test_eight_vertex_example(self):
        """Test a graph where 0,7 are apart and 1,6 and 2,5 are joined."""
        graph = CzGraph.from_edges(
            8,
            [(0, 5), (0, 6), (7, 1), (7, 2), (1, 6), (1, 4), (2, 5), (0, 1), (5, 7), (2, 3)],
        )
        s = synth_bipartite(graph)
        validate_schedule(s)
        assert depth(s).injection_layers <= 5
        assert simulate(s) == graph.to_tableau()
        first = s.layers[0]
        assert first.groups[0] and first.groups[1]

    @pytest.mark.parametrize('n', range(1, 13))
    def test_random_graphs(self, n):
        """Test depth ceil(n/2)+1 and simulation equality."""
        rng = np.random.default_rng(100 + n)
        for _ in range(100):
            graph = random_graph(rng, n, p=float(rng.random()))
            s = synth_bipartite(graph)
            validate_schedule(s)
            assert depth(s).injection_layers <= math.ceil(n / 2) + 1
            assert simulate(s) == graph.to_tableau()


class TestGraphState:
    """Test graph state preparation."""

    def test_edgeless_is_plus_state(self):
        """Test no edges leaves |+...+>."""
        s = graph_state_circuit(CzGraph.empty(3), Architecture.linear(3))
        stabilizers = simulate(s).stabilizers()
        assert [p.to_label() for p in stabilizers] == ['+XII', '+IXI', '+IIX']

    def test_bell_pair(self):
        """Test K2 has stabilizers XZ and ZX."""
        s = graph_state_circuit(CzGraph.from_edges(2, [(0, 1)]), Architecture.linear(2))
        assert simulate(s).stabilizers() == (
            PauliString.from_label('XZ'),
            PauliString.from_label('ZX'),
        )

    @pytest.mark.parametrize('arch', ['linear', 'dual'])
    def test_random_graph_states(self, arch):
        """Test prepared states and depth bounds per architecture."""
        rng = np.random.default_rng(8)
        for _ in range(20):
            graph = random_graph(rng, 8)
            s = graph_state_circuit(graph, Architecture(arch, 8))
            validate_schedule(s)
            hadamards = [SingleQubit(q, 'H') for q in range(8)]
            expected = CliffordTableau.from_gates(8, hadamards + graph.cz_gates())
            assert simulate(s) == expected
            assert depth(s).injection_layers <= upper_bound(f'graph-state-{arch}', 8)

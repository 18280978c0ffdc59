"""
CZ-layer synthesis with clique flips.

A CZ layer is a graph: one edge per CZ gate. Clique flips toggle every
edge inside a qubit set, so synthesizing a layer means writing its graph
as an XOR of complete graphs and packing those cliques into bus layers.
"""

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.core.circuit import (
    Architecture,
    ArchitectureKind,
    Circuit,
    Schedule,
    schedule,
    validate_schedule,
)
from src.core.gates import CliqueFlip, SingleQubit
from src.core.gf2 import BitMatrix, MinrankMode, lempel_factor, minrank2
from src.core.tableau import CliffordTableau
from src.exceptions import SynthesisError, ValidationError

Clique = Tuple[int, ...]


@dataclass(frozen=True)
class CzGraph:
    """Adjacency of a CZ layer; symmetric with zero diagonal."""

    adjacency: BitMatrix

    def __post_init__(self):
        adjacency = BitMatrix(self.adjacency)
        if not adjacency.is_square() or not adjacency.is_alternating():
            raise ValidationError('A CZ graph needs a symmetric zero-diagonal adjacency')
        object.__setattr__(self, 'adjacency', adjacency)

    @classmethod
    def empty(cls, n: int) -> 'CzGraph':
        return cls(BitMatrix.zeros(n, n))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[Tuple[int, int]]) -> 'CzGraph':
        data = np.zeros((n, n), dtype=np.uint8)
        for u, v in edges:
            if u == v or not (0 <= u < n and 0 <= v < n):
                raise ValidationError(f'Invalid edge ({u}, {v}) for n={n}')
            data[u, v] ^= 1
            data[v, u] ^= 1
        return cls(BitMatrix(data))

    @classmethod
    def complete(cls, n: int, qubits: Iterable[int]) -> 'CzGraph':
        members = sorted(set(qubits))
        return cls.from_edges(n, [(u, v) for i, u in enumerate(members) for v in members[i + 1:]])

    @classmethod
    def from_cliques(cls, n: int, cliques: Iterable[Sequence[int]]) -> 'CzGraph':
        """XOR of the complete graphs on each clique."""
        data = np.zeros((n, n), dtype=np.uint8)
        for clique in cliques:
            members = np.zeros(n, dtype=np.uint8)
            members[list(clique)] = 1
            data ^= np.outer(members, members).astype(np.uint8)
        np.fill_diagonal(data, 0)
        return cls(BitMatrix(data))

    @property
    def n(self) -> int:
        return self.adjacency.rows

    def edges(self) -> List[Tuple[int, int]]:
        return [
            (u, v) for u in range(self.n) for v in range(u + 1, self.n) if self.adjacency[u, v]
        ]

    def neighbors(self, v: int) -> Tuple[int, ...]:
        return tuple(int(u) for u in np.nonzero(self.adjacency.row(v))[0])

    def is_empty(self) -> bool:
        return self.adjacency.is_zero()

    def __xor__(self, other: 'CzGraph') -> 'CzGraph':
        if self.n != other.n:
            raise ValidationError('CZ graphs must share a vertex set')
        return CzGraph(self.adjacency ^ other.adjacency)

    def relabeled(self, mapping: Sequence[int]) -> 'CzGraph':
        """Graph with vertex v renamed to mapping[v]."""
        return CzGraph.from_edges(self.n, [(mapping[u], mapping[v]) for u, v in self.edges()])

    def cz_gates(self) -> List[CliqueFlip]:
        return [CliqueFlip(edge) for edge in self.edges()]

    def to_tableau(self) -> CliffordTableau:
        return CliffordTableau.from_gates(self.n, self.cz_gates())


def _as_graph(graph) -> CzGraph:
    return graph if isinstance(graph, CzGraph) else CzGraph(graph)


def synth_minrank(graph, exact_limit: int = 20, mode: MinrankMode = 'auto') -> List[Clique]:
    """Cliques read off a Lempel factor of adjacency + minrank diagonal.

    Column f of F with F F^T = G + D contributes diag(f) + K_f, so the
    off-diagonal XOR of the K_f is G. Uses at most minrank2(G) + 1 cliques.
    """
    graph = _as_graph(graph)
    if graph.is_empty():
        return []
    result = minrank2(graph, exact_limit, mode)
    factor = lempel_factor(graph.adjacency ^ result.witness_matrix())
    cliques = []
    for j in range(factor.cols):
        members = tuple(int(q) for q in np.nonzero(factor.col(j))[0])
        if len(members) >= 2:
            cliques.append(members)
    return cliques


def synth_disentangle(graph, order: Optional[Sequence[int]] = None) -> List[Clique]:
    """Isolate vertices one at a time with a clique on each and its neighbours.

    With ascending order, clique i only touches qubits >= i.
    """
    graph = _as_graph(graph)
    n = graph.n
    order = list(range(n)) if order is None else [int(v) for v in order]
    if sorted(order) != list(range(n)):
        raise ValidationError('Disentangling order must be a permutation of the qubits')
    residual = graph.adjacency.copy_array()
    cliques = []
    for v in order:
        neighbours = np.nonzero(residual[v])[0]
        if neighbours.size == 0:
            continue
        members = np.zeros(n, dtype=np.uint8)
        members[v] = 1
        members[neighbours] = 1
        residual ^= np.outer(members, members).astype(np.uint8)
        np.fill_diagonal(residual, 0)
        cliques.append(tuple(int(q) for q in np.nonzero(members)[0]))
    return cliques


def clique_schedule(n: int, cliques: Sequence[Clique], architecture: Architecture) -> Schedule:
    """Pack clique flips greedily; depth never exceeds the clique count."""
    return schedule(Circuit(n, [CliqueFlip(c) for c in cliques]), architecture)


def synth_stacked(
    first, second, local: Sequence[SingleQubit] = ()
) -> Schedule:
    """Schedule CZ(first), then free local gates, then CZ(second) on one bus.

    first is disentangled in ascending order and second in descending
    order, so the two staircases interleave: layer t holds the clique of
    vertex t from first and the clique of vertex t-1 from second. Local
    gates on qubit q run between layers q and q+1. Depth is at most n+1.
    """
    first, second = _as_graph(first), _as_graph(second)
    n = first.n
    if second.n != n:
        raise ValidationError('Stacked CZ layers must have the same size')
    for gate in local:
        if gate.qubit >= n:
            raise ValidationError(f'{gate!r} does not fit in {n} qubits')

    ascending = {min(c): c for c in synth_disentangle(first)}
    descending = {max(c): c for c in synth_disentangle(second, range(n - 1, -1, -1))}
    result = Schedule(n, Architecture.linear(n))
    for t in range(n + 1):
        group = [CliqueFlip(c) for c in (ascending.get(t), descending.get(t - 1)) if c]
        before = [g for g in local if g.qubit == t - 1]
        result.new_layer([group], before=before)
    validate_schedule(result)
    return result.compacted()


def synth_bipartite(graph) -> Schedule:
    """Two-bus CZ synthesis in depth at most ceil(n/2) + 1.

    Vertices 0..h-1 form the left half. Step i clears the cut edges of
    left vertex i and right vertex n-1-i: with one clique when the two
    are joined across the cut, otherwise with two qubit-disjoint cliques
    on the two buses. The leftover graphs inside each half are then
    disentangled as staircases that fit beside the cut cliques.
    """
    graph = _as_graph(graph)
    n = graph.n
    half = (n + 1) // 2
    left = np.zeros(n, dtype=bool)
    left[:half] = True
    residual = graph.adjacency.copy_array()

    def flip(members: Sequence[int]) -> None:
        mask = np.zeros(n, dtype=np.uint8)
        mask[list(members)] = 1
        residual[:] ^= np.outer(mask, mask).astype(np.uint8)
        np.fill_diagonal(residual, 0)

    def cut_neighbours(v: int) -> List[int]:
        side = ~left if left[v] else left
        return [int(u) for u in np.nonzero(residual[v].astype(bool) & side)[0]]

    result = Schedule(n, Architecture.dual(n))
    layers: List[List[List[CliqueFlip]]] = [[[], []] for _ in range(half + 1)]
    for i in range(half):
        a, b = i, n - 1 - i
        left_members = [a] + cut_neighbours(a)
        right_members = [b] + cut_neighbours(b) if b >= half else [b]
        if b >= half and b in left_members:
            joined = sorted(set(left_members) | set(right_members))
            flip(joined)
            layers[i][0].append(CliqueFlip(joined))
            continue
        for bus, members in enumerate((left_members, right_members)):
            if len(members) >= 2:
                flip(members)
                layers[i][bus].append(CliqueFlip(members))

    if np.any(residual[:half, half:]):
        raise SynthesisError('Cut edges survived the bipartite phase')

    inside_left = residual.copy()
    inside_left[half:, :] = 0
    inside_right = residual ^ inside_left
    # left half descending, right half ascending; the other half is isolated
    left_order = list(range(half - 1, -1, -1)) + list(range(half, n))
    for clique in synth_disentangle(CzGraph(BitMatrix(inside_left)), left_order):
        layers[max(clique) + 1][0].append(CliqueFlip(clique))
    for clique in synth_disentangle(CzGraph(BitMatrix(inside_right))):
        layers[n - min(clique)][0].append(CliqueFlip(clique))

    for groups in layers:
        result.new_layer(groups)
    validate_schedule(result)
    return result.compacted()


def graph_state_circuit(graph, architecture: Architecture, exact_limit: int = 20) -> Schedule:
    """Prepare the graph state CZ(G)|+...+> from |0...0>."""
    graph = _as_graph(graph)
    n = graph.n
    if architecture.kind == ArchitectureKind.DUAL_SNAKE:
        cz_schedule = synth_bipartite(graph)
    else:
        candidates = [synth_disentangle(graph)]
        if n <= exact_limit:
            candidates.append(synth_minrank(graph, exact_limit))
        cz_schedule = clique_schedule(n, min(candidates, key=len), architecture)
    hadamards = [SingleQubit(q, 'H') for q in range(n)]
    if cz_schedule.layers:
        cz_schedule.layers[0].before[:0] = hadamards
    else:
        cz_schedule.tail[:0] = hadamards
    return cz_schedule

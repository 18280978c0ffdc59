"""
Full Clifford synthesis on GHZ buses.

Every Clifford is written as layers of CZ, CNOT and single-qubit gates.
The linear-bus pipeline absorbs the first CZ layer into an exact CNOT
synthesis and stacks the XCX layer onto its CNOT slots. The dual-snake
pipeline runs the Hadamard-free part up to a permutation, the second CZ
layer on both buses, and routes the permutation with grid swaps.
"""

from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from src.bounds import DEFAULT_GRID_CONSTANT, grid_width, swap_layer_bound, upper_bound
from src.core.circuit import (
    Architecture,
    LayerKind,
    Schedule,
    depth,
    simulate,
    validate_schedule,
)
from src.core.gates import Gate, SingleQubit, Swap, XcxCliqueFlip
from src.core.gf2 import BitMatrix, rref
from src.core.pauli import PauliString
from src.core.tableau import (
    CliffordTableau,
    merge_local_gates,
    pauli_layer,
    sign_correction,
)
from src.exceptions import BoundViolationError, SynthesisError, ValidationError
from src.synthesis.cx_synth import (
    Permutation,
    exact_steps,
    linear_tableau,
    permutation_matrix,
)
from src.synthesis.cz_synth import CzGraph, synth_bipartite, synth_disentangle
from src.synthesis.hfree_synth import commute_cz_through_fanout, synth_hfree

SwapLayer = List[Swap]


class LayerForm(str, Enum):
    CZ_CX_XCX = 'cz-cx-xcx'
    CX_CZ_H_CZ = 'cx-cz-h-cz'


@dataclass(frozen=True)
class LayerDecomposition:
    """A Clifford as local and graph layers around one CNOT transform.

    CZ_CX_XCX runs l1, CZ(cz), CX(cx), XCX(xcx), l2. CX_CZ_H_CZ runs l1,
    CX(cx), CZ(cz), middle, CZ(xcx), l2, where middle holds the Hadamard
    layer. Both end with the Pauli layer that fixes the signs.
    """

    form: LayerForm
    l1: Tuple[SingleQubit, ...]
    cz: CzGraph
    cx: BitMatrix
    xcx: CzGraph
    l2: Tuple[SingleQubit, ...]
    middle: Tuple[SingleQubit, ...] = ()
    pauli: Optional[PauliString] = None

    @property
    def n(self) -> int:
        return self.cx.rows

    def correction(self) -> Tuple[SingleQubit, ...]:
        return pauli_layer(self.pauli) if self.pauli is not None else ()

    def recompose(self) -> CliffordTableau:
        n = self.n
        start = CliffordTableau.from_gates(n, self.l1)
        if self.form == LayerForm.CZ_CX_XCX:
            before = start.then(self.cz.to_tableau())
            xcx: List[Gate] = [XcxCliqueFlip(edge) for edge in self.xcx.edges()]
            after = xcx + list(self.l2) + list(self.correction())
        else:
            before = start
            after = (
                list(self.cz.cz_gates())
                + list(self.middle)
                + list(self.xcx.cz_gates())
                + list(self.l2)
                + list(self.correction())
            )
        return before.then(linear_tableau(self.cx)).then(CliffordTableau.from_gates(n, after))


def _phase_gates(bits) -> List[SingleQubit]:
    return [SingleQubit(q, 'S') for q, bit in enumerate(bits) if bit]


def _hadamards(qubits) -> List[SingleQubit]:
    return [SingleQubit(q, 'H') for q in qubits]


def _raw_layers(tableau: CliffordTableau, form: LayerForm) -> LayerDecomposition:
    n = tableau.n
    x, z = tableau.x_part, tableau.z_part
    # Hadamards on the non-pivot columns make the Z-rows' X block invertible
    _, pivots = rref(x[n:])
    swapped = [q for q in range(n) if q not in pivots]
    x[:, swapped], z[:, swapped] = z[:, swapped], x[:, swapped]

    block = BitMatrix(x[n:])
    block_inverse = block.inverse()
    transform = block_inverse.T
    first = BitMatrix(x[:n]) @ block_inverse
    second = block_inverse @ BitMatrix(z[n:])
    everywhere = _hadamards(range(n))
    final = _hadamards(swapped)

    if form == LayerForm.CZ_CX_XCX:
        return LayerDecomposition(
            form=form,
            l1=tuple(_phase_gates(first.diagonal())),
            cz=CzGraph(first.without_diagonal()),
            cx=transform,
            xcx=CzGraph(second.without_diagonal()),
            l2=merge_local_gates(everywhere + _phase_gates(second.diagonal()) + final),
        )
    # the first phase layer moves behind the CNOTs as block^T first block
    moved = block.T @ first @ block
    return LayerDecomposition(
        form=form,
        l1=(),
        cz=CzGraph(moved.without_diagonal()),
        cx=transform,
        xcx=CzGraph(second.without_diagonal()),
        l2=merge_local_gates(_phase_gates(second.diagonal()) + final),
        middle=merge_local_gates(_phase_gates(moved.diagonal()) + everywhere),
    )


def decompose_layers(
    tableau: CliffordTableau,
    form: LayerForm = LayerForm.CZ_CX_XCX,
    leading_hadamards: bool = False,
) -> LayerDecomposition:
    """Split a Clifford into graph, CNOT and local layers.

    The Z-rows' X block C, made invertible by Hadamards on the non-pivot
    columns of its echelon form, gives the transform M = C^-T. The
    symmetric blocks A C^-1 and C^-1 D give the two graph layers, with
    their diagonals as phase gates. With leading_hadamards=True the
    decomposition starts with a Hadamard on every qubit.
    """
    form = LayerForm(form)
    n = tableau.n
    source = tableau
    if leading_hadamards:
        source = CliffordTableau.from_gates(n, _hadamards(range(n))).then(tableau)
    layers = _raw_layers(source, form)
    if leading_hadamards:
        layers = replace(layers, l1=merge_local_gates(_hadamards(range(n)) + list(layers.l1)))
    try:
        pauli = sign_correction(layers.recompose(), tableau)
    except ValidationError as exc:
        raise SynthesisError(f'Layer decomposition does not match its tableau: {exc}') from exc
    return replace(layers, pauli=pauli)


@dataclass
class CliffordSynthesis:
    """A synthesized schedule, the layers it came from and its Pauli fix.

    The schedule ends with the Pauli layer, so simulating it gives the
    target exactly (embedded into schedule.n sites for the dual snake).
    """

    schedule: Schedule
    decomposition: LayerDecomposition
    pauli: PauliString
    permutation: Permutation

    @property
    def injection_depth(self) -> int:
        return depth(self.schedule).injection_layers

    @property
    def swap_depth(self) -> int:
        return depth(self.schedule).swap_layers

    def target(self, tableau: CliffordTableau) -> CliffordTableau:
        return tableau.embed(self.schedule.n)


def _finish(result: Schedule, target: CliffordTableau) -> PauliString:
    try:
        pauli = sign_correction(simulate(result), target)
    except ValidationError as exc:
        raise SynthesisError(f'Schedule does not implement the target: {exc}') from exc
    result.add_local(pauli_layer(pauli))
    return pauli


def _linear_from_layers(tableau: CliffordTableau, layers: LayerDecomposition) -> CliffordSynthesis:
    n = tableau.n
    # slots in time order: C'_{n-1}, F_{n-1}, ..., C'_1, F_1, F_0, then two spare
    slots: List[Optional[Gate]] = []
    for step in exact_steps(layers.cx, descending=True):
        if step.fanout.control > 0:
            slots.append(step.cnot)
        slots.append(step.fanout)
    slots += [None, None]

    groups: List[List[Gate]] = [[] for _ in slots]
    befores: List[List[SingleQubit]] = [[] for _ in range(len(slots) + 1)]
    befores[0].extend(layers.l1)
    residual = layers.cz
    for index, gate in enumerate(slots):
        if gate is None:
            continue
        crossed = commute_cz_through_fanout(residual, gate)
        befores[index].extend(crossed.before)
        if crossed.fanout.targets:
            groups[index].append(crossed.fanout)
        befores[index + 1].extend(crossed.after)
        residual = crossed.residual
    if not residual.is_empty():
        raise SynthesisError('CZ layer was not absorbed by the CNOT slots')

    # clique v touches qubits >= v only, so it commutes with every later slot
    # once it sits after the fan-out controlled by v
    for clique in synth_disentangle(layers.xcx):
        v = min(clique)
        index = 2 * (n - v) if v >= 2 else 2 * n - 1 + (1 - v)
        groups[index].append(XcxCliqueFlip(clique))

    result = Schedule(n, Architecture.linear(n))
    for group, before in zip(groups, befores):
        result.new_layer([group], before=before)
    result.add_local(befores[-1])
    result.add_local(layers.l2)
    result = result.compacted()
    validate_schedule(result)
    pauli = _finish(result, tableau)
    return CliffordSynthesis(result, layers, pauli, tuple(range(n)))


def _shallowest(candidates: Sequence[CliffordSynthesis]) -> CliffordSynthesis:
    return min(candidates, key=lambda c: (c.injection_depth, c.swap_depth))


def synth_linear(tableau: CliffordTableau) -> CliffordSynthesis:
    """Linear-bus Clifford synthesis in injection depth at most 2n + 1."""
    candidates = [
        _linear_from_layers(tableau, decompose_layers(tableau, LayerForm.CZ_CX_XCX, lead))
        for lead in (False, True)
    ]
    best = _shallowest(candidates)
    allowed = upper_bound('linear', tableau.n)
    if best.injection_depth > allowed:
        raise BoundViolationError(
            f'Linear-bus schedule has depth {best.injection_depth} > {allowed}',
            measured=best.injection_depth,
            allowed=allowed,
        )
    return best


def snake_position(site: int, width: int) -> Tuple[int, int]:
    """Grid (row, column) of a site; odd rows run right to left."""
    row, offset = divmod(site, width)
    return row, offset if row % 2 == 0 else width - 1 - offset


def snake_site(row: int, column: int, width: int) -> int:
    return row * width + (column if row % 2 == 0 else width - 1 - column)


def _row_assignment(
    state: List[int], destination: Dict[int, int], width: int
) -> Dict[int, int]:
    """Rows for every token such that each row sees each destination column once.

    Tokens form a width-regular bipartite multigraph between current and
    destination columns; peeling one perfect matching per row (Kuhn's
    augmenting paths) gives the assignment. Tokens already in the row are
    tried first.
    """
    remaining: List[List[int]] = [[] for _ in range(width)]
    current_row: Dict[int, int] = {}
    for site, token in enumerate(state):
        row, column = snake_position(site, width)
        remaining[column].append(token)
        current_row[token] = row

    def target_column(token: int) -> int:
        return snake_position(destination[token], width)[1]

    assignment: Dict[int, int] = {}
    for row in range(width):
        owner: Dict[int, Tuple[int, int]] = {}

        def augment(column: int, seen: set) -> bool:
            for token in sorted(remaining[column], key=lambda t: current_row[t] != row):
                goal = target_column(token)
                if goal in seen:
                    continue
                seen.add(goal)
                if goal not in owner or augment(owner[goal][0], seen):
                    owner[goal] = (column, token)
                    return True
            return False

        for column in range(width):
            if not augment(column, set()):
                raise SynthesisError('Regular token graph has no perfect matching')
        for column, token in owner.values():
            remaining[column].remove(token)
            assignment[token] = row
    return assignment


def _transposition_sort(
    lines: List[List[int]], state: List[int], key: Dict[int, int]
) -> List[SwapLayer]:
    layers: List[SwapLayer] = []
    length = len(lines[0]) if lines else 0
    for parity in range(length):
        swaps: SwapLayer = []
        for line in lines:
            for i in range(parity % 2, length - 1, 2):
                a, b = line[i], line[i + 1]
                if key[state[a]] > key[state[b]]:
                    state[a], state[b] = state[b], state[a]
                    swaps.append(Swap(min(a, b), max(a, b)))
        if swaps:
            layers.append(swaps)
    return layers


def route_permutation_grid(permutation: Sequence[int], n: Optional[int] = None) -> List[SwapLayer]:
    """Nearest-neighbour swap layers leaving input permutation[i] on site i.

    The sites are the first n cells of the snake order on a w x w grid
    (w = ceil(sqrt(n))); spare cells are left as they were. Routing runs
    column, row, column phases of odd-even transposition sort, at most
    3w layers.
    """
    permutation = tuple(int(p) for p in permutation)
    n = len(permutation) if n is None else n
    if len(permutation) != n:
        raise ValidationError(f'Permutation has {len(permutation)} entries, expected {n}')
    permutation_matrix(permutation)
    width = grid_width(n)
    sites = width * width
    goal = list(permutation) + list(range(n, sites))
    destination = {token: site for site, token in enumerate(goal)}
    state = list(range(sites))

    rows = [[snake_site(r, c, width) for c in range(width)] for r in range(width)]
    columns = [[snake_site(r, c, width) for r in range(width)] for c in range(width)]
    layers = _transposition_sort(columns, state, _row_assignment(state, destination, width))
    layers += _transposition_sort(
        rows, state, {t: snake_position(s, width)[1] for t, s in destination.items()}
    )
    layers += _transposition_sort(
        columns, state, {t: snake_position(s, width)[0] for t, s in destination.items()}
    )
    if state != goal:
        raise SynthesisError('Grid routing did not reach the permutation')
    return layers


def _relabeled_locals(gates: Sequence[SingleQubit], mapping: Sequence[int]) -> List[SingleQubit]:
    return [SingleQubit(mapping[g.qubit], g.name) for g in gates]


def _dual_from_layers(
    tableau: CliffordTableau, layers: LayerDecomposition, grid_constant: int
) -> CliffordSynthesis:
    n = tableau.n
    sites = grid_width(n) ** 2
    hadamard_free, sigma = synth_hfree(layers.l1, layers.cx, layers.cz)

    # gates after the permutation act on wire sigma[q] before it
    second = synth_bipartite(layers.xcx.relabeled(sigma))
    middle = _relabeled_locals(layers.middle, sigma)
    if second.layers:
        second.layers[0].before[:0] = middle
    else:
        second.tail[:0] = middle
    second.add_local(_relabeled_locals(layers.l2, sigma))

    routing = Schedule(sites, Architecture.dual(sites))
    for swaps in route_permutation_grid(sigma, n):
        routing.new_layer([swaps], kind=LayerKind.SWAP)

    result = Schedule(sites, Architecture.dual(sites))
    result.extend(hadamard_free)
    result.extend(second)
    result.extend(routing)
    validate_schedule(result)
    if depth(result).swap_layers > swap_layer_bound(n, grid_constant):
        raise BoundViolationError(
            'Grid routing used too many swap layers',
            measured=depth(result).swap_layers,
            allowed=swap_layer_bound(n, grid_constant),
        )
    pauli = _finish(result, tableau.embed(sites))
    return CliffordSynthesis(result, layers, pauli, sigma)


def synth_dual(
    tableau: CliffordTableau, grid_constant: int = DEFAULT_GRID_CONSTANT
) -> CliffordSynthesis:
    """Dual-snake Clifford synthesis in injection depth at most ceil(3n/2) + 1.

    The schedule runs on the w^2 sites of the routing grid; the first n
    hold the data. Swap layers are counted separately.
    """
    candidates = [
        _dual_from_layers(
            tableau, decompose_layers(tableau, LayerForm.CX_CZ_H_CZ, lead), grid_constant
        )
        for lead in (False, True)
    ]
    best = _shallowest(candidates)
    allowed = upper_bound('dual', tableau.n)
    if best.injection_depth > allowed:
        raise BoundViolationError(
            f'Dual-snake schedule has depth {best.injection_depth} > {allowed}',
            measured=best.injection_depth,
            allowed=allowed,
        )
    return best

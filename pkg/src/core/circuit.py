"""
Circuits, architectures and GHZ-injection schedules.

A schedule is an ordered list of layers. Each layer carries the free
single-qubit gates that run before it and one (linear bus) or two (dual
snake) groups of parallel multi-qubit gates. Swap layers hold nearest
neighbour SWAPs and are counted separately from injection layers.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, List, Optional, Sequence, Tuple

from src.core.gates import (
    FanOut,
    Gate,
    PauliRotation,
    SingleQubit,
    Swap,
    is_injection,
    is_local,
    span,
)
from src.core.tableau import CliffordTableau, single_qubit_name
from src.exceptions import SynthesisError, UnsupportedGateError, ValidationError


class ArchitectureKind(str, Enum):
    LINEAR_BUS = 'linear'
    DUAL_SNAKE = 'dual'


class SchedulePolicy(str, Enum):
    AS_EARLY = 'asap'
    AS_LATE = 'alap'


class LayerKind(str, Enum):
    INJECTION = 'injection'
    SWAP = 'swap'


@dataclass(frozen=True)
class Architecture:
    kind: ArchitectureKind
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError('Architecture needs at least one qubit')
        object.__setattr__(self, 'kind', ArchitectureKind(self.kind))

    @classmethod
    def linear(cls, n: int) -> 'Architecture':
        return cls(ArchitectureKind.LINEAR_BUS, n)

    @classmethod
    def dual(cls, n: int) -> 'Architecture':
        return cls(ArchitectureKind.DUAL_SNAKE, n)

    @property
    def group_count(self) -> int:
        return 2 if self.kind == ArchitectureKind.DUAL_SNAKE else 1


@dataclass
class Circuit:
    n: int
    gates: List[Gate] = field(default_factory=list)

    def __post_init__(self):
        for gate in self.gates:
            self._check(gate)

    def _check(self, gate: Gate) -> None:
        if max(gate.qubits) >= self.n:
            raise ValidationError(f'{gate!r} does not fit in {self.n} qubits')

    def append(self, gate: Gate) -> None:
        self._check(gate)
        self.gates.append(gate)

    def extend(self, gates: Iterable[Gate]) -> None:
        for gate in gates:
            self.append(gate)

    def simulate(self) -> CliffordTableau:
        return CliffordTableau.from_gates(self.n, self.gates)

    def __len__(self) -> int:
        return len(self.gates)


@dataclass(frozen=True)
class DepthMetrics:
    injection_layers: int
    swap_layers: int

    def weighted(self, swap_weight: float = 3) -> float:
        return self.injection_layers + swap_weight * self.swap_layers


@dataclass
class Layer:
    kind: LayerKind = LayerKind.INJECTION
    groups: List[List[Gate]] = field(default_factory=lambda: [[]])
    before: List[SingleQubit] = field(default_factory=list)

    def gates(self) -> List[Gate]:
        return [gate for group in self.groups for gate in group]

    def is_empty(self) -> bool:
        return not any(self.groups)


def _ranges_overlap(a: Gate, b: Gate) -> bool:
    a_lo, a_hi = span(a)
    b_lo, b_hi = span(b)
    return not (a_hi < b_lo or b_hi < a_lo)


def _share_qubit(a: Gate, b: Gate) -> bool:
    return bool(set(a.qubits) & set(b.qubits))


@dataclass
class Schedule:
    n: int
    architecture: Architecture
    layers: List[Layer] = field(default_factory=list)
    tail: List[SingleQubit] = field(default_factory=list)

    def new_layer(
        self,
        groups: Sequence[Sequence[Gate]],
        before: Iterable[SingleQubit] = (),
        kind: LayerKind = LayerKind.INJECTION,
    ) -> Layer:
        padded = [list(g) for g in groups] or [[]]
        while kind == LayerKind.INJECTION and len(padded) < self.architecture.group_count:
            padded.append([])
        if len(padded) > self.architecture.group_count and kind == LayerKind.INJECTION:
            raise ValidationError('Too many parallel groups for this architecture')
        layer = Layer(kind=kind, groups=padded, before=list(before))
        self.layers.append(layer)
        return layer

    def add_local(self, gates: Iterable[SingleQubit]) -> None:
        """Append local gates after everything scheduled so far."""
        self.tail.extend(gates)

    def extend(self, other: 'Schedule') -> None:
        """Append another schedule's layers and tail after everything here."""
        if other.n > self.n:
            raise ValidationError('Cannot extend with a wider schedule')
        pending = self.tail
        self.tail = []
        for layer in other.layers:
            groups = [list(g) for g in layer.groups]
            if layer.kind == LayerKind.INJECTION:
                if len(groups) > self.architecture.group_count:
                    raise ValidationError('Too many parallel groups for this architecture')
                groups += [[] for _ in range(self.architecture.group_count - len(groups))]
            self.layers.append(
                Layer(kind=layer.kind, groups=groups, before=pending + list(layer.before))
            )
            pending = []
        self.tail = pending + list(other.tail)

    def gates(self) -> List[Gate]:
        flat: List[Gate] = []
        for layer in self.layers:
            flat.extend(layer.before)
            flat.extend(layer.gates())
        flat.extend(self.tail)
        return flat

    def to_circuit(self) -> Circuit:
        return Circuit(self.n, self.gates())

    @property
    def metrics(self) -> DepthMetrics:
        return depth(self)

    def injection_depth(self) -> int:
        return self.metrics.injection_layers

    def swap_depth(self) -> int:
        return self.metrics.swap_layers

    def multi_qubit_gates(self) -> List[Gate]:
        return [g for layer in self.layers for g in layer.gates()]

    def compacted(self) -> 'Schedule':
        """Drop empty layers, carrying their local gates forward."""
        result = Schedule(self.n, self.architecture)
        pending: List[SingleQubit] = []
        for layer in self.layers:
            pending.extend(layer.before)
            if layer.is_empty():
                continue
            result.layers.append(
                Layer(kind=layer.kind, groups=[list(g) for g in layer.groups], before=pending)
            )
            pending = []
        result.tail = pending + list(self.tail)
        return result


def depth(schedule: Schedule) -> DepthMetrics:
    injection = sum(
        1
        for layer in schedule.layers
        if layer.kind == LayerKind.INJECTION and any(is_injection(g) for g in layer.gates())
    )
    swaps = sum(
        1 for layer in schedule.layers if layer.kind == LayerKind.SWAP and not layer.is_empty()
    )
    return DepthMetrics(injection, swaps)


def simulate(schedule: Schedule) -> CliffordTableau:
    return CliffordTableau.from_gates(schedule.n, schedule.gates())


def _fits(layer: Layer, gate: Gate, architecture: Architecture) -> Optional[int]:
    """Index of the group the gate can join, or None."""
    if layer.kind == LayerKind.SWAP:
        if any(_share_qubit(gate, other) for other in layer.gates()):
            return None
        return 0
    for index, group in enumerate(layer.groups):
        if any(_ranges_overlap(gate, other) for other in group):
            continue
        others = [g for j, grp in enumerate(layer.groups) if j != index for g in grp]
        if any(_share_qubit(gate, other) for other in others):
            continue
        return index
    return None


def as_single_qubit(gate: Gate) -> SingleQubit:
    """Rewrite a one-qubit rotation as a named single-qubit Clifford."""
    if isinstance(gate, SingleQubit):
        return gate
    if isinstance(gate, PauliRotation) and gate.pauli.weight == 1:
        (qubit,) = gate.qubits
        local = PauliRotation(gate.pauli.restricted([qubit]), gate.quarter_turns)
        return SingleQubit(qubit, single_qubit_name(CliffordTableau.from_gates(1, [local])))
    raise UnsupportedGateError(f'Cannot schedule local gate {gate!r}')


def _schedule_asap(gates: Sequence[Gate], architecture: Architecture, n: int) -> Schedule:
    result = Schedule(n, architecture)
    last = [-1] * n
    pending_tail: List[SingleQubit] = []

    def locals_slot(index: int) -> List[SingleQubit]:
        if index < len(result.layers):
            return result.layers[index].before
        return pending_tail

    for gate in gates:
        if max(gate.qubits) >= n:
            raise ValidationError(f'{gate!r} does not fit in {n} qubits')
        if isinstance(gate, FanOut) and not gate.targets:
            continue
        if is_local(gate):
            gate = as_single_qubit(gate)
            locals_slot(last[gate.qubit] + 1).append(gate)
            continue
        if isinstance(gate, Swap):
            kind = LayerKind.SWAP
        elif is_injection(gate):
            kind = LayerKind.INJECTION
        else:
            raise UnsupportedGateError(f'Cannot schedule {gate!r} on a GHZ bus')
        lower = max(last[q] for q in gate.qubits) + 1
        placed = None
        for index in range(lower, len(result.layers)):
            layer = result.layers[index]
            if layer.kind != kind:
                continue
            group = _fits(layer, gate, architecture)
            if group is not None:
                layer.groups[group].append(gate)
                placed = index
                break
        if placed is None:
            groups: List[List[Gate]] = [[] for _ in range(architecture.group_count)]
            if kind == LayerKind.SWAP:
                groups = [[]]
            groups[0].append(gate)
            # locals waiting for the next layer now precede it
            result.layers.append(Layer(kind=kind, groups=groups, before=pending_tail))
            pending_tail = []
            placed = len(result.layers) - 1
        for q in gate.qubits:
            last[q] = placed
    result.tail = pending_tail
    return result


def _reverse_schedule(reversed_schedule: Schedule) -> Schedule:
    layers = reversed_schedule.layers
    result = Schedule(reversed_schedule.n, reversed_schedule.architecture)
    if not layers:
        result.tail = list(reversed(reversed_schedule.tail))
        return result
    befores = [list(reversed(reversed_schedule.tail))]
    befores += [list(reversed(layer.before)) for layer in reversed(layers[1:])]
    for before, layer in zip(befores, reversed(layers)):
        result.layers.append(
            Layer(kind=layer.kind, groups=[list(g) for g in layer.groups], before=before)
        )
    result.tail = list(reversed(layers[0].before))
    return result


def schedule(
    circuit: Circuit,
    architecture: Architecture,
    policy: SchedulePolicy = SchedulePolicy.AS_EARLY,
) -> Schedule:
    """Pack a circuit into GHZ-injection layers.

    Per-qubit gate order is preserved; multi-qubit gates go to the
    earliest (or, for AS_LATE, latest) compatible layer.
    """
    if circuit.n > architecture.n and architecture.kind == ArchitectureKind.LINEAR_BUS:
        raise ValidationError('Circuit is wider than the architecture')
    policy = SchedulePolicy(policy)
    if policy == SchedulePolicy.AS_EARLY:
        return _schedule_asap(circuit.gates, architecture, circuit.n)
    backwards = _schedule_asap(list(reversed(circuit.gates)), architecture, circuit.n)
    return _reverse_schedule(backwards)


def validate_schedule(target: Schedule) -> None:
    """Raise SynthesisError when a layer breaks its architecture's rules."""
    groups_allowed = target.architecture.group_count
    for index, layer in enumerate(target.layers):
        gates = layer.gates()
        for gate in gates + list(layer.before):
            if max(gate.qubits) >= target.n:
                raise SynthesisError(f'Layer {index}: {gate!r} out of range')
        for gate in layer.before:
            if not isinstance(gate, SingleQubit):
                raise SynthesisError(f'Layer {index}: non-local gate in local slot')
        if layer.kind == LayerKind.SWAP:
            if not all(isinstance(g, Swap) for g in gates):
                raise SynthesisError(f'Swap layer {index} holds non-swap gates')
            for i, a in enumerate(gates):
                for b in gates[i + 1:]:
                    if _share_qubit(a, b):
                        raise SynthesisError(f'Swap layer {index} reuses a qubit')
            continue
        if len(layer.groups) > groups_allowed:
            raise SynthesisError(f'Layer {index} has too many groups')
        for gate in gates:
            if not is_injection(gate):
                raise SynthesisError(f'Layer {index}: {gate!r} is not injectable')
        for g_index, group in enumerate(layer.groups):
            for i, a in enumerate(group):
                for b in group[i + 1:]:
                    if _ranges_overlap(a, b):
                        raise SynthesisError(
                            f'Layer {index} group {g_index}: overlapping ranges'
                        )
        if len(layer.groups) == 2:
            for a in layer.groups[0]:
                for b in layer.groups[1]:
                    if _share_qubit(a, b):
                        raise SynthesisError(f'Layer {index}: groups share a qubit')


def locals_only(gates: Iterable[Gate]) -> Tuple[SingleQubit, ...]:
    result = []
    for gate in gates:
        if not isinstance(gate, SingleQubit):
            raise ValidationError(f'{gate!r} is not a single-qubit gate')
        result.append(gate)
    return tuple(result)

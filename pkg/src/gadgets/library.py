"""
GHZ-state gadgets.

Every injectable gate becomes a physical circuit on its data qubits plus
one GHZ rail per qubit in the gate's support and the parity-check qubits
that prepare the GHZ state. Rail i pairs with the i-th support qubit.
"""

from typing import Dict, List, Literal, Optional, Sequence, Tuple, Union

from src.core.circuit import Circuit
from src.core.gates import Cnot, CliqueFlip, FanOut, PauliRotation, SingleQubit
from src.core.pauli import PauliString
from src.core.tableau import CliffordTableau
from src.exceptions import UnsupportedGateError, ValidationError
from src.gadgets.physical import PhysicalCircuit
from src.gadgets.verify import GadgetTarget, MeasurementTarget, StateTarget, UnitaryTarget

Primitive = Literal['fanout', 'rotation', 'measurement']
PRIMITIVES: Tuple[str, ...] = ('fanout', 'rotation', 'measurement')
GHZ_METHODS: Tuple[str, ...] = ('parity', 'fanout', 'rotation', 'measurement')

# Local gates taking each letter to Z, and back
_TO_Z: Dict[str, Tuple[str, ...]] = {'X': ('H',), 'Y': ('S_Z', 'H'), 'Z': ()}
_FROM_Z: Dict[str, Tuple[str, ...]] = {'X': ('H',), 'Y': ('H', 'S'), 'Z': ()}
_PHASE_POWER = {1: 'S', 2: 'Z', 3: 'S_Z'}


def ghz_state(k: int) -> CliffordTableau:
    """Clifford preparing (|0...0> + |1...1>)/sqrt(2) from |0...0>."""
    gates = [SingleQubit(0, 'H')] + [Cnot(0, i) for i in range(1, k)]
    return CliffordTableau.from_gates(k, gates)


def _prepare_ghz(circuit: PhysicalCircuit, rails: Sequence[int], checks: Sequence[int]) -> None:
    for rail in rails:
        circuit.local(rail, 'H')
    for j, check in enumerate(checks):
        circuit.gate(Cnot(rails[j], check))
    for j, check in enumerate(checks):
        circuit.gate(Cnot(rails[j + 1], check))
    parities = [circuit.measure_z(check) for check in checks]
    for j in range(1, len(rails)):
        circuit.correct(parities[:j], 'X', rails[j])
    for check, bit in zip(checks, parities):
        circuit.correct([bit], 'X', check)


def ghz_prep(k: int) -> PhysicalCircuit:
    """Constant-depth GHZ preparation from parity checks.

    Qubits 0..k-1 end in the GHZ state; the k-1 check qubits return to |0>.
    """
    if k < 1:
        raise ValidationError('GHZ state needs at least one qubit')
    circuit = PhysicalCircuit(k, k - 1)
    _prepare_ghz(circuit, list(range(k)), list(range(k, 2 * k - 1)))
    return circuit


def ghz_prep_variant(k: int, method: str = 'parity') -> PhysicalCircuit:
    """GHZ preparation from a single primitive of the given kind."""
    if k < 1:
        raise ValidationError('GHZ state needs at least one qubit')
    if method == 'parity':
        return ghz_prep(k)
    circuit = PhysicalCircuit(k)
    if method == 'fanout':
        circuit.local(0, 'H')
        if k > 1:
            circuit.gate(FanOut(0, tuple(range(1, k))))
    elif method == 'rotation':
        # exp(i pi/4 Y..Y)|0..0> puts i^(k+1) on |1..1>
        circuit.gate(PauliRotation(PauliString.from_label('Y' * k), 1))
        power = -(k + 1) % 4
        if power:
            circuit.local(0, _PHASE_POWER[power])
    elif method == 'measurement':
        bit = circuit.measure_pauli(PauliString.from_label('X' * k))
        circuit.correct([bit], 'Z', 0)
    else:
        raise ValidationError(f'Unknown GHZ preparation method {method!r}; use one of {GHZ_METHODS}')
    return circuit


def _layout(data: int, support: int) -> Tuple[List[int], List[int]]:
    rails = [data + i for i in range(support)]
    checks = [data + support + j for j in range(support - 1)]
    return rails, checks


def _data_width(qubits: Sequence[int], data: Optional[int]) -> int:
    width = max(qubits) + 1 if data is None else data
    if max(qubits) >= width:
        raise ValidationError(f'Gate on {tuple(qubits)} does not fit in {width} data qubits')
    return width


def expand_fanout(gate: Union[FanOut, Cnot], data: Optional[int] = None) -> PhysicalCircuit:
    if isinstance(gate, Cnot):
        gate = FanOut(gate.control, (gate.target,))
    if not gate.targets:
        raise ValidationError('Fan-out without targets needs no gadget')
    width = _data_width(gate.qubits, data)
    support = (gate.control,) + gate.targets
    rails, checks = _layout(width, len(support))
    circuit = PhysicalCircuit(width, len(rails) + len(checks))
    _prepare_ghz(circuit, rails, checks)

    circuit.gate(Cnot(gate.control, rails[0]))
    merged = circuit.measure_z(rails[0])
    for rail in rails:
        circuit.correct([merged], 'X', rail)
    for target, rail in zip(gate.targets, rails[1:]):
        circuit.gate(Cnot(rail, target))

    released = []
    for rail in rails[1:]:
        circuit.local(rail, 'H')
        released.append(circuit.measure_z(rail))
    circuit.correct(released, 'Z', gate.control)
    for rail, bit in zip(rails[1:], released):
        circuit.correct([bit], 'X', rail)
    return circuit


def _inject_parity(
    circuit: PhysicalCircuit,
    support: Sequence[int],
    rails: Sequence[int],
    checks: Sequence[int],
    phase: Optional[str],
) -> List[int]:
    """Imprint the Z-parity of support on the GHZ phase and read it out.

    Returns the rail X-outcomes; their XOR is the parity when phase is
    None. With phase S (S_Z) the data gets exp(+-i pi/4 Z..Z), with the
    sign flipped when the XOR is 1.
    """
    _prepare_ghz(circuit, rails, checks)
    for qubit, rail in zip(support, rails):
        circuit.local(rail, 'H')
        circuit.gate(Cnot(qubit, rail))
        circuit.local(rail, 'H')
    if phase:
        circuit.local(rails[0], phase)
    outcomes = []
    for rail in rails:
        circuit.local(rail, 'H')
        outcomes.append(circuit.measure_z(rail))
    for rail, bit in zip(rails, outcomes):
        circuit.correct([bit], 'X', rail)
    return outcomes


def _basis_change(circuit: PhysicalCircuit, pauli: PauliString, table: Dict[str, Tuple[str, ...]]) -> None:
    for qubit in pauli.support:
        for name in table[pauli.letter(qubit)]:
            circuit.local(qubit, name)


def expand_rotation(gate: PauliRotation, data: Optional[int] = None) -> PhysicalCircuit:
    pauli = gate.pauli
    if data is not None and data != pauli.n:
        raise ValidationError(f'Rotation Pauli has {pauli.n} letters, expected {data}')
    turns = gate.quarter_turns % 8
    if turns % 2 == 0:
        raise UnsupportedGateError('Rotations by multiples of pi/2 are Pauli layers, not injections')
    direction = 1 if turns % 4 == 1 else -1
    if pauli.sign:
        direction = -direction
    support = pauli.support
    rails, checks = _layout(pauli.n, len(support))
    circuit = PhysicalCircuit(pauli.n, len(rails) + len(checks))
    _basis_change(circuit, pauli, _TO_Z)
    outcomes = _inject_parity(circuit, support, rails, checks, 'S' if direction == 1 else 'S_Z')
    for qubit in support:
        circuit.correct(outcomes, 'Z', qubit)
    _basis_change(circuit, pauli, _FROM_Z)
    return circuit


def expand_measurement(pauli: PauliString) -> PhysicalCircuit:
    """Non-destructive measurement of pauli; the outcome is the XOR of rail bits."""
    if pauli.weight == 0:
        raise ValidationError('Cannot measure the identity')
    support = pauli.support
    rails, checks = _layout(pauli.n, len(support))
    circuit = PhysicalCircuit(pauli.n, len(rails) + len(checks))
    _basis_change(circuit, pauli, _TO_Z)
    outcomes = _inject_parity(circuit, support, rails, checks, None)
    _basis_change(circuit, pauli, _FROM_Z)
    circuit.set_outcome(outcomes, pauli.sign)
    return circuit


def expand(
    gate: Union[FanOut, Cnot, PauliRotation, PauliString], data: Optional[int] = None
) -> PhysicalCircuit:
    """Physical GHZ-injection circuit for a fan-out, rotation or measured Pauli."""
    if isinstance(gate, (FanOut, Cnot)):
        return expand_fanout(gate, data)
    if isinstance(gate, PauliRotation):
        return expand_rotation(gate, data)
    if isinstance(gate, PauliString):
        if data is not None and data != gate.n:
            raise ValidationError(f'Pauli has {gate.n} letters, expected {data}')
        return expand_measurement(gate)
    raise UnsupportedGateError(f'No GHZ gadget for {gate!r}')


def expansion_target(gate: Union[FanOut, Cnot, PauliRotation, PauliString], data: int) -> GadgetTarget:
    if isinstance(gate, PauliString):
        return MeasurementTarget(gate)
    return UnitaryTarget(CliffordTableau.from_gates(data, [gate]))


# Interconversion ----------------------------------------------------


def primitive_target(kind: str, k: int) -> GadgetTarget:
    """Fan-out 0 -> 1..k-1, exp(i pi/4 Z..Z), or a Z..Z measurement on k qubits."""
    _check_primitive(kind)
    zs = PauliString.from_label('Z' * k)
    if kind == 'fanout':
        return UnitaryTarget(CliffordTableau.from_gates(k, [FanOut(0, tuple(range(1, k)))]))
    if kind == 'rotation':
        return UnitaryTarget(CliffordTableau.from_gates(k, [PauliRotation(zs, 1)]))
    return MeasurementTarget(zs)


def ghz_target(k: int) -> StateTarget:
    return StateTarget(ghz_state(k))


def _check_primitive(kind: str) -> None:
    if kind not in PRIMITIVES:
        raise ValidationError(f'Unknown primitive {kind!r}; use one of {PRIMITIVES}')


def _zs_with(k: int, ancilla_letter: str) -> PauliString:
    return PauliString.on_support(k + 1, [(q, 'Z') for q in range(k)] + [(k, ancilla_letter)])


def _hadamard_all(circuit: PhysicalCircuit) -> None:
    for qubit in range(circuit.total):
        circuit.local(qubit, 'H')


def interconvert(source: str, target: str, k: int) -> PhysicalCircuit:
    """Implement target on k data qubits from one source primitive and one ancilla.

    Fan-out targets spend one extra CNOT copying the control onto the ancilla.
    """
    _check_primitive(source)
    _check_primitive(target)
    if source == target:
        raise ValidationError(f'Nothing to convert: {source} to {target}')
    if k < 2:
        raise ValidationError('Interconversion needs at least two data qubits')
    circuit = PhysicalCircuit(k, 1)
    ancilla = k
    targets = tuple(range(1, k))

    if target == 'fanout':
        circuit.gate(Cnot(0, ancilla))
        if source == 'rotation':
            letters = [(ancilla, 'Y')] + [(t, 'X') for t in targets]
            circuit.gate(PauliRotation(PauliString.on_support(k + 1, letters), 1))
            flip = circuit.measure_z(ancilla)
            circuit.correct([flip], 'Z', 0)
        else:
            letters = [(ancilla, 'X')] + [(t, 'X') for t in targets]
            sign_bit = circuit.measure_pauli(PauliString.on_support(k + 1, letters))
            flip = circuit.measure_z(ancilla)
            circuit.correct([sign_bit], 'Z', 0)
        for t in targets:
            circuit.correct([flip], 'X', t)
        circuit.correct([flip], 'X', ancilla)
        return circuit

    if source == 'fanout':
        # Hadamards turn the fan-out from the ancilla into a parity fan-in
        _hadamard_all(circuit)
        circuit.gate(FanOut(ancilla, tuple(range(k))))
        _hadamard_all(circuit)
        if target == 'measurement':
            parity = circuit.measure_z(ancilla)
            circuit.correct([parity], 'X', ancilla)
            circuit.set_outcome([parity])
            return circuit
        circuit.local(ancilla, 'S_Z')
        circuit.local(ancilla, 'H')
        released = circuit.measure_z(ancilla)
        for q in range(k):
            circuit.correct([released], 'Z', q)
        circuit.correct([released], 'X', ancilla)
        return circuit

    if source == 'rotation':
        circuit.local(ancilla, 'H')
        circuit.gate(PauliRotation(_zs_with(k, 'Z'), 1))
        circuit.local(ancilla, 'S')
        circuit.local(ancilla, 'H')
        parity = circuit.measure_z(ancilla)
        circuit.correct([parity], 'X', ancilla)
        circuit.set_outcome([parity])
        return circuit

    # measurement -> rotation
    joint = circuit.measure_pauli(_zs_with(k, 'Y'))
    circuit.local(ancilla, 'H')
    released = circuit.measure_z(ancilla)
    for q in range(k):
        circuit.correct([joint, released], 'Z', q)
    circuit.correct([released], 'X', ancilla)
    return circuit


def fanout_from_clique_flips(control: int, targets: Sequence[int], n: Optional[int] = None) -> Circuit:
    """Ancilla-free fan-out from two clique flips and Hadamards on the targets.

    The clique on control+targets XOR the clique on the targets is the CZ
    star around the control.
    """
    target_set = tuple(sorted(set(int(t) for t in targets)))
    if not target_set or control in target_set:
        raise ValidationError('Fan-out needs targets distinct from the control')
    width = max((control,) + target_set) + 1 if n is None else n
    hadamards = [SingleQubit(t, 'H') for t in target_set]
    gates: List = list(hadamards)
    gates.append(CliqueFlip((control,) + target_set))
    if len(target_set) > 1:
        gates.append(CliqueFlip(target_set))
    gates.extend(hadamards)
    return Circuit(width, gates)

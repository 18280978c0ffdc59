"""
Physical circuits with mid-circuit measurements and classically
controlled Pauli corrections.

Qubits 0..data-1 are data qubits; the rest are ancillae that start in
|0>. Classical bits are written exactly once by a measurement and may
then control corrections through XOR expressions. Outcome 0 always means
the +1 eigenvalue.

Text form::

    n=5
    data=2
    SQ 2 H
    CX 0 2
    MZ 2 -> b0
    MZZ 3 4 -> b1
    MP +XXIII -> b2
    CPAULI b0^b1 -> X 3
    OUTCOME b2^1
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from src.core.formats import content_lines, format_gate, parse_gate
from src.core.gates import Cnot, FanOut, Gate, PauliRotation, SingleQubit
from src.core.pauli import PauliString
from src.core.tableau import CliffordTableau, measure_pauli
from src.exceptions import ParseError, UnsupportedGateError, ValidationError

PHYSICAL_GATES = (SingleQubit, Cnot, FanOut, PauliRotation)


@dataclass(frozen=True)
class MeasureZ:
    qubit: int
    bit: int

    @property
    def qubits(self) -> Tuple[int, ...]:
        return (self.qubit,)


@dataclass(frozen=True)
class MeasureZZ:
    a: int
    b: int
    bit: int

    def __post_init__(self):
        if self.a == self.b:
            raise ValidationError('ZZ measurement needs two distinct qubits')

    @property
    def qubits(self) -> Tuple[int, ...]:
        return (self.a, self.b)


@dataclass(frozen=True)
class MeasurePauli:
    """Multi-qubit Pauli measurement; the Pauli spans the whole register."""

    pauli: PauliString
    bit: int

    def __post_init__(self):
        if self.pauli.weight == 0:
            raise ValidationError('Cannot measure the identity')

    @property
    def qubits(self) -> Tuple[int, ...]:
        return self.pauli.support


@dataclass(frozen=True)
class ConditionalPauli:
    """Apply letter on qubit when the XOR of the condition bits is 1."""

    condition: Tuple[int, ...]
    letter: str
    qubit: int
    constant: int = 0

    def __post_init__(self):
        letter = self.letter.upper()
        if letter not in ('X', 'Y', 'Z'):
            raise ValidationError(f'Correction must be X, Y or Z, got {self.letter!r}')
        object.__setattr__(self, 'letter', letter)
        object.__setattr__(self, 'condition', tuple(int(b) for b in self.condition))
        object.__setattr__(self, 'constant', int(self.constant) & 1)

    @property
    def qubits(self) -> Tuple[int, ...]:
        return (self.qubit,)

    def fires(self, bits: Mapping[int, int]) -> bool:
        return bool(self.constant ^ (sum(bits[b] for b in self.condition) & 1))


Measurement = Union[MeasureZ, MeasureZZ, MeasurePauli]
Op = Union[SingleQubit, Cnot, FanOut, PauliRotation, MeasureZ, MeasureZZ, MeasurePauli, ConditionalPauli]
MEASUREMENTS = (MeasureZ, MeasureZZ, MeasurePauli)


@dataclass(frozen=True)
class Branch:
    """One run of the circuit for a fixed set of measurement outcomes."""

    bits: Dict[int, int]
    state: CliffordTableau
    random_measurements: int

    @property
    def label(self) -> str:
        return ''.join(str(self.bits[b]) for b in sorted(self.bits)) or '-'

    @property
    def probability(self) -> Fraction:
        return Fraction(1, 2 ** self.random_measurements)


@dataclass
class PhysicalCircuit:
    data: int
    ancillae: int = 0
    ops: List[Op] = field(default_factory=list)
    outcome: Tuple[int, ...] = ()
    outcome_constant: int = 0

    def __post_init__(self):
        if self.data < 0 or self.ancillae < 0 or self.total < 1:
            raise ValidationError('Physical circuit needs at least one qubit')
        ops, self.ops = list(self.ops), []
        for op in ops:
            self.append(op)
        self.set_outcome(self.outcome, self.outcome_constant)

    @property
    def total(self) -> int:
        return self.data + self.ancillae

    @property
    def bit_count(self) -> int:
        return sum(1 for op in self.ops if isinstance(op, MEASUREMENTS))

    def _written(self) -> set:
        return {op.bit for op in self.ops if isinstance(op, MEASUREMENTS)}

    def _next_bit(self) -> int:
        return max(self._written(), default=-1) + 1

    def append(self, op: Op) -> None:
        if not isinstance(op, PHYSICAL_GATES + MEASUREMENTS + (ConditionalPauli,)):
            raise UnsupportedGateError(f'{op!r} is not a physical operation')
        if op.qubits and max(op.qubits) >= self.total:
            raise ValidationError(f'{op!r} does not fit in {self.total} qubits')
        if isinstance(op, (PauliRotation, MeasurePauli)) and op.pauli.n != self.total:
            raise ValidationError(f'{op!r} must span all {self.total} qubits')
        written = self._written()
        if isinstance(op, MEASUREMENTS) and op.bit in written:
            raise ValidationError(f'Bit {op.bit} is written twice')
        if isinstance(op, ConditionalPauli):
            missing = set(op.condition) - written
            if missing:
                raise ValidationError(f'Correction reads unwritten bits {sorted(missing)}')
        self.ops.append(op)

    def set_outcome(self, bits: Sequence[int], constant: int = 0) -> None:
        """Declare the logical outcome as an XOR of measured bits."""
        missing = set(bits) - self._written()
        if missing:
            raise ValidationError(f'Outcome reads unwritten bits {sorted(missing)}')
        self.outcome = tuple(int(b) for b in bits)
        self.outcome_constant = int(constant) & 1

    # Builders return the classical bit they allocate.

    def gate(self, gate: Gate) -> None:
        self.append(gate)

    def local(self, qubit: int, name: str) -> None:
        self.append(SingleQubit(qubit, name))

    def measure_z(self, qubit: int) -> int:
        bit = self._next_bit()
        self.append(MeasureZ(qubit, bit))
        return bit

    def measure_zz(self, a: int, b: int) -> int:
        bit = self._next_bit()
        self.append(MeasureZZ(a, b, bit))
        return bit

    def measure_pauli(self, pauli: PauliString) -> int:
        bit = self._next_bit()
        self.append(MeasurePauli(pauli, bit))
        return bit

    def correct(self, condition: Sequence[int], letter: str, qubit: int, constant: int = 0) -> None:
        if not condition and not constant:
            return
        self.append(ConditionalPauli(tuple(condition), letter, qubit, constant))

    def count(self, *kinds: type) -> int:
        return sum(1 for op in self.ops if isinstance(op, kinds))

    def logical_outcome(self, bits: Mapping[int, int]) -> int:
        return (self.outcome_constant + sum(bits[b] for b in self.outcome)) & 1

    def branches(self, initial: Optional[CliffordTableau] = None) -> Iterator[Branch]:
        """Every outcome branch, run on initial (default |0...0>)."""
        state = CliffordTableau.identity(self.total) if initial is None else initial
        if state.n < self.total:
            raise ValidationError(f'Initial state has {state.n} qubits, need {self.total}')
        width = state.n
        stack = [(0, state, {}, 0)]
        while stack:
            index, current, bits, randoms = stack.pop()
            for position in range(index, len(self.ops)):
                op = self.ops[position]
                if isinstance(op, ConditionalPauli):
                    if op.fires(bits):
                        current = current.apply(SingleQubit(op.qubit, op.letter))
                elif isinstance(op, MEASUREMENTS):
                    observable = _observable(op, self.total, width)
                    result = measure_pauli(current, observable, forced_outcome=0)
                    if not result.deterministic:
                        randoms += 1
                        other = measure_pauli(current, observable, forced_outcome=1)
                        stack.append((position + 1, other.state, {**bits, op.bit: 1}, randoms))
                    current = result.state
                    bits = {**bits, op.bit: result.outcome}
                else:
                    current = current.apply(_widen(op, self.total, width))
            yield Branch(bits, current, randoms)


def _observable(op: Measurement, total: int, width: int) -> PauliString:
    if isinstance(op, MeasureZ):
        return PauliString.single(width, op.qubit, 'Z')
    if isinstance(op, MeasureZZ):
        return PauliString.on_support(width, [(op.a, 'Z'), (op.b, 'Z')])
    return op.pauli.embedded(width, range(total))


def _widen(gate: Gate, total: int, width: int) -> Gate:
    if isinstance(gate, PauliRotation) and width != total:
        return PauliRotation(gate.pauli.embedded(width, range(total)), gate.quarter_turns)
    return gate


# Text form ----------------------------------------------------------


def _format_expr(bits: Sequence[int], constant: int = 0) -> str:
    terms = [f'b{b}' for b in bits] + (['1'] if constant else [])
    return '^'.join(terms) or '0'


def _parse_expr(text: str) -> Tuple[Tuple[int, ...], int]:
    bits: List[int] = []
    constant = 0
    for term in text.replace(' ', '').split('^'):
        if term in ('0', '1'):
            constant ^= int(term)
        elif term.startswith('b') and term[1:].isdigit():
            bits.append(int(term[1:]))
        else:
            raise ValueError(f'Bad bit expression term {term!r}')
    return tuple(bits), constant


def _bit(text: str) -> int:
    if not (text.startswith('b') and text[1:].isdigit()):
        raise ValueError(f'Expected a bit name like b0, got {text!r}')
    return int(text[1:])


def format_op(op: Op) -> str:
    if isinstance(op, MeasureZ):
        return f'MZ {op.qubit} -> b{op.bit}'
    if isinstance(op, MeasureZZ):
        return f'MZZ {op.a} {op.b} -> b{op.bit}'
    if isinstance(op, MeasurePauli):
        return f'MP {op.pauli.to_label()} -> b{op.bit}'
    if isinstance(op, ConditionalPauli):
        return f'CPAULI {_format_expr(op.condition, op.constant)} -> {op.letter} {op.qubit}'
    return format_gate(op)


def format_physical(circuit: PhysicalCircuit) -> str:
    lines = [f'n={circuit.total}', f'data={circuit.data}']
    lines.extend(format_op(op) for op in circuit.ops)
    if circuit.outcome or circuit.outcome_constant:
        lines.append(f'OUTCOME {_format_expr(circuit.outcome, circuit.outcome_constant)}')
    return '\n'.join(lines) + '\n'


def _parse_op(line: str, total: int, number: int, source: str) -> Op:
    head, _, result = line.partition('->')
    parts = head.split()
    op = parts[0].upper()
    if op == 'MZ' and len(parts) == 2:
        return MeasureZ(int(parts[1]), _bit(result.strip()))
    if op == 'MZZ' and len(parts) == 3:
        return MeasureZZ(int(parts[1]), int(parts[2]), _bit(result.strip()))
    if op == 'MP' and len(parts) == 2:
        pauli = PauliString.from_label(parts[1])
        if pauli.n != total:
            raise ValueError(f'Pauli {parts[1]!r} does not have {total} letters')
        return MeasurePauli(pauli, _bit(result.strip()))
    if op == 'CPAULI':
        condition, constant = _parse_expr(''.join(parts[1:]))
        target = result.split()
        if len(target) != 2:
            raise ValueError('CPAULI needs "-> <letter> <qubit>"')
        return ConditionalPauli(condition, target[0], int(target[1]), constant)
    return parse_gate(line, total, number, source)


def parse_physical(text: str, source: str = '<gadget>') -> PhysicalCircuit:
    lines = content_lines(text)
    if len(lines) < 2:
        raise ParseError('Expected n=<k> and data=<d> headers', 1, source)
    (n_line, n_text), (d_line, d_text) = lines[0], lines[1]
    try:
        total = int(n_text.replace(' ', '').split('n=', 1)[1])
    except (IndexError, ValueError):
        raise ParseError(f'Expected n=<k>, got {n_text!r}', n_line, source) from None
    try:
        data = int(d_text.replace(' ', '').split('data=', 1)[1])
    except (IndexError, ValueError):
        raise ParseError(f'Expected data=<d>, got {d_text!r}', d_line, source) from None
    if not 0 <= data <= total:
        raise ParseError(f'data={data} does not fit in n={total}', d_line, source)
    circuit = PhysicalCircuit(data, total - data)
    for number, line in lines[2:]:
        try:
            if line.upper().startswith('OUTCOME'):
                bits, constant = _parse_expr(line[len('OUTCOME'):])
                circuit.set_outcome(bits, constant)
            else:
                circuit.append(_parse_op(line, total, number, source))
        except ParseError:
            raise
        except (ValidationError, UnsupportedGateError, ValueError) as e:
            raise ParseError(str(e), number, source) from e
    return circuit

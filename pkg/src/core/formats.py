"""
Text codecs for tableaux, graphs, matrices, circuits and schedules.

Every format starts with an ``n=<k>`` header. Blank lines and anything
after ``#`` are ignored. Graph edges are 1-indexed; qubits in circuit
and schedule files are 0-indexed, matching the in-memory gates.
"""

import re
from pathlib import Path
from typing import Callable, Iterator, List, Literal, Optional, Tuple, TypeVar, Union

import numpy as np

from src.core.circuit import Architecture, Circuit, Layer, LayerKind, Schedule
from src.core.gates import (
    Cnot,
    CliqueFlip,
    FanOut,
    Gate,
    PauliRotation,
    SingleQubit,
    Swap,
    XcxCliqueFlip,
    format_angle,
    parse_angle,
)
from src.core.gf2 import BitMatrix
from src.core.pauli import PauliString
from src.core.tableau import CliffordTableau
from src.exceptions import ParseError, UnsupportedGateError, ValidationError

InputKind = Literal['tableau', 'graph', 'matrix']
Line = Tuple[int, str]
T = TypeVar('T')

_HEADER = re.compile(r'^n\s*=\s*(\d+)$')
_ARCH = re.compile(r'^arch\s*=\s*(\w+)$')
_SECTION = re.compile(r'^---\s*(?:layer\s+(\d+)\s*\(([^)]*)\)|tail\s*\(local\))\s*---$')
_BUS_NAMES = ('bus A', 'bus B')


def content_lines(text: str) -> List[Line]:
    """Non-empty lines with comments stripped, paired with 1-based line numbers."""
    lines = []
    for number, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.split('#', 1)[0].strip()
        if stripped:
            lines.append((number, stripped))
    return lines


def _guard(source: str, number: int, build: Callable[[], T]) -> T:
    try:
        return build()
    except (ValidationError, UnsupportedGateError, ValueError) as e:
        raise ParseError(str(e), number, source) from e


def _header(lines: List[Line], source: str) -> Tuple[int, Iterator[Line]]:
    if not lines:
        raise ParseError('Missing n=<k> header', 1, source)
    number, first = lines[0]
    match = _HEADER.match(first)
    if not match:
        raise ParseError(f'Expected n=<k>, got {first!r}', number, source)
    n = int(match.group(1))
    if n < 1:
        raise ParseError('Register size must be positive', number, source)
    return n, iter(lines[1:])


def _bits(text: str, width: int, number: int, source: str) -> List[int]:
    compact = text.replace(' ', '')
    if len(compact) != width or set(compact) - {'0', '1'}:
        raise ParseError(f'Expected {width} bits, got {text!r}', number, source)
    return [int(c) for c in compact]


# Tableau ------------------------------------------------------------


def parse_tableau(text: str, source: str = '<tableau>') -> CliffordTableau:
    lines = content_lines(text)
    n, rest = _header(lines, source)
    body = list(rest)
    if len(body) != 2 * n + 1:
        last = body[-1][0] if body else lines[0][0]
        raise ParseError(
            f'Expected {2 * n} tableau rows and one sign row, got {len(body)} lines',
            last,
            source,
        )
    rows = np.array([_bits(t, 2 * n, k, source) for k, t in body[:-1]], dtype=np.uint8)
    sign_number, sign_text = body[-1]
    signs = _bits(sign_text, 2 * n, sign_number, source)
    try:
        return CliffordTableau(rows[:, :n], rows[:, n:], np.array(signs, dtype=np.uint8))
    except ValidationError as e:
        raise ParseError(str(e), body[0][0], source) from e


def format_tableau(tableau: CliffordTableau) -> str:
    rows = tableau.symplectic.to_strings()
    signs = ''.join(str(int(s)) for s in tableau.signs)
    return '\n'.join([f'n={tableau.n}', *rows, signs]) + '\n'


# Graphs and matrices ------------------------------------------------


def parse_graph(text: str, source: str = '<graph>') -> BitMatrix:
    """Adjacency matrix of a 1-indexed edge list."""
    n, rest = _header(content_lines(text), source)
    adjacency = np.zeros((n, n), dtype=np.uint8)
    for number, line in rest:
        parts = line.split()
        if len(parts) != 2 or not all(p.isdigit() for p in parts):
            raise ParseError(f'Expected an edge "u v", got {line!r}', number, source)
        u, v = int(parts[0]) - 1, int(parts[1]) - 1
        if not (0 <= u < n and 0 <= v < n) or u == v:
            raise ParseError(f'Invalid edge {line!r} for n={n}', number, source)
        # repeated edges cancel, as consecutive CZ gates do
        adjacency[u, v] ^= 1
        adjacency[v, u] ^= 1
    return BitMatrix(adjacency)


def format_graph(adjacency: BitMatrix) -> str:
    n = adjacency.rows
    lines = [f'n={n}']
    for u in range(n):
        for v in range(u + 1, n):
            if adjacency[u, v]:
                lines.append(f'{u + 1} {v + 1}')
    return '\n'.join(lines) + '\n'


def parse_matrix(text: str, source: str = '<matrix>') -> BitMatrix:
    n, rest = _header(content_lines(text), source)
    body = list(rest)
    if len(body) != n:
        last = body[-1][0] if body else 1
        raise ParseError(f'Expected {n} matrix rows, got {len(body)}', last, source)
    return BitMatrix([_bits(t, n, k, source) for k, t in body])


def format_matrix(matrix: BitMatrix) -> str:
    return '\n'.join([f'n={matrix.rows}', *matrix.to_strings()]) + '\n'


def detect_kind(text: str) -> InputKind:
    """Guess whether a file holds a tableau, a graph or a matrix."""
    lines = content_lines(text)
    n, rest = _header(lines, '<input>')
    body = [line for _, line in rest]
    if not body or all(len(line.split()) == 2 for line in body):
        return 'graph'
    if len(body) == n and all(len(line) == n for line in body):
        return 'matrix'
    return 'tableau'


# Gates and circuits -------------------------------------------------


def format_gate(gate: Gate) -> str:
    if isinstance(gate, SingleQubit):
        return f'SQ {gate.qubit} {gate.name}'
    if isinstance(gate, Cnot):
        return f'CX {gate.control} {gate.target}'
    if isinstance(gate, Swap):
        return f'SWAP {gate.a} {gate.b}'
    if isinstance(gate, FanOut):
        return f'FANOUT {gate.control} : ' + ' '.join(str(t) for t in gate.targets)
    if isinstance(gate, PauliRotation):
        return f'ROT {format_angle(gate.quarter_turns)} {gate.pauli.to_label()}'
    if isinstance(gate, XcxCliqueFlip):
        return 'XCLIQUE ' + ' '.join(str(q) for q in gate.qubits)
    if isinstance(gate, CliqueFlip):
        return 'CLIQUE ' + ' '.join(str(q) for q in gate.qubits)
    raise UnsupportedGateError(f'No text form for {gate!r}')


def _ints(parts: List[str]) -> List[int]:
    return [int(p) for p in parts]


def parse_gate(line: str, n: int, number: int = 0, source: str = '<circuit>') -> Gate:
    parts = line.split()
    op = parts[0].upper()
    args = parts[1:]

    def build() -> Gate:
        if op == 'SQ' and len(args) == 2:
            return SingleQubit(int(args[0]), args[1])
        if op == 'CX' and len(args) == 2:
            return Cnot(*_ints(args))
        if op == 'SWAP' and len(args) == 2:
            return Swap(*_ints(args))
        if op == 'FANOUT' and ':' in args:
            split = args.index(':')
            if split != 1:
                raise ValueError('FANOUT takes one control before ":"')
            return FanOut(int(args[0]), tuple(_ints(args[2:])))
        if op == 'ROT' and len(args) == 2:
            pauli = PauliString.from_label(args[1])
            if pauli.n != n:
                raise ValueError(f'Pauli {args[1]!r} does not have {n} letters')
            return PauliRotation(pauli, parse_angle(args[0]))
        if op == 'CLIQUE':
            return CliqueFlip(tuple(_ints(args)))
        if op == 'XCLIQUE':
            return XcxCliqueFlip(tuple(_ints(args)))
        raise ValueError(f'Unknown gate line {line!r}')

    gate = _guard(source, number, build)
    if max(gate.qubits) >= n:
        raise ParseError(f'{line!r} does not fit in {n} qubits', number, source)
    return gate


def parse_circuit(text: str, source: str = '<circuit>') -> Circuit:
    n, rest = _header(content_lines(text), source)
    return Circuit(n, [parse_gate(line, n, number, source) for number, line in rest])


def format_circuit(circuit: Circuit) -> str:
    return '\n'.join([f'n={circuit.n}', *(format_gate(g) for g in circuit.gates)]) + '\n'


# Schedules ----------------------------------------------------------


def format_schedule(schedule: Schedule) -> str:
    lines = [f'n={schedule.n}', f'arch={schedule.architecture.kind.value}']
    for index, layer in enumerate(schedule.layers):
        if layer.before:
            lines.append(f'--- layer {index} (local) ---')
            lines.extend(format_gate(g) for g in layer.before)
        if layer.kind == LayerKind.SWAP:
            lines.append(f'--- layer {index} (swap) ---')
            lines.extend(format_gate(g) for g in layer.gates())
            continue
        for bus, group in zip(_BUS_NAMES, layer.groups):
            lines.append(f'--- layer {index} ({bus}) ---')
            lines.extend(format_gate(g) for g in group)
    if schedule.tail:
        lines.append('--- tail (local) ---')
        lines.extend(format_gate(g) for g in schedule.tail)
    return '\n'.join(lines) + '\n'


def parse_schedule(text: str, source: str = '<schedule>') -> Schedule:
    lines = content_lines(text)
    n, rest = _header(lines, source)
    body = list(rest)
    kind_name = 'linear'
    if body and _ARCH.match(body[0][1]):
        kind_name = _ARCH.match(body[0][1]).group(1)
        body = body[1:]
    architecture = _guard(source, lines[0][0], lambda: Architecture(kind_name, n))
    result = Schedule(n, architecture)
    layer: Optional[Layer] = None
    layer_index = -1
    target: Optional[List[Gate]] = None
    in_tail = False

    for number, line in body:
        match = _SECTION.match(line)
        if match:
            index_text, label = match.groups()
            if index_text is None:
                in_tail = True
                target = result.tail
                continue
            if in_tail:
                raise ParseError('Layers cannot follow the tail', number, source)
            index = int(index_text)
            label = label.strip()
            if index != layer_index:
                if index != layer_index + 1:
                    raise ParseError(f'Layer {index} is out of order', number, source)
                kind = LayerKind.SWAP if label == 'swap' else LayerKind.INJECTION
                groups = [[]] if kind == LayerKind.SWAP else [
                    [] for _ in range(architecture.group_count)
                ]
                layer = Layer(kind=kind, groups=groups)
                result.layers.append(layer)
                layer_index = index
            if label == 'local':
                target = layer.before
            elif label == 'swap':
                layer.kind = LayerKind.SWAP
                layer.groups = layer.groups[:1]
                target = layer.groups[0]
            elif label in _BUS_NAMES[: architecture.group_count]:
                target = layer.groups[_BUS_NAMES.index(label)]
            else:
                raise ParseError(f'Unknown section {label!r}', number, source)
            continue
        if target is None:
            raise ParseError('Gate outside of any layer section', number, source)
        gate = parse_gate(line, n, number, source)
        if target is result.tail or (layer is not None and target is layer.before):
            if not isinstance(gate, SingleQubit):
                raise ParseError('Local sections hold single-qubit gates only', number, source)
        target.append(gate)
    return result


# Files --------------------------------------------------------------


def read_text(path: Union[str, Path]) -> str:
    try:
        return Path(path).read_text(encoding='utf-8')
    except OSError as e:
        raise ParseError(f'Cannot read file: {e}', source=str(path)) from e


def write_text(path: Union[str, Path], text: str) -> None:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding='utf-8')

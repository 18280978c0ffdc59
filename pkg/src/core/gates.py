"""
Gate model shared by the tableau simulator, the scheduler and the
synthesis routines.

Single-qubit Cliffords are named by words over H and S applied left to
right in time, optionally followed by a Pauli, e.g. 'H_S' or 'S_H_X'.
"""

import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, Tuple, Union

from src.core.pauli import PauliString
from src.exceptions import UnsupportedGateError, ValidationError

SYMPLECTIC_WORDS: Tuple[str, ...] = ('I', 'H', 'S', 'H_S', 'S_H', 'H_S_H')
PAULI_LETTERS: Tuple[str, ...] = ('I', 'X', 'Y', 'Z')


def _canonical_names() -> Tuple[str, ...]:
    names = []
    for word in SYMPLECTIC_WORDS:
        for pauli in PAULI_LETTERS:
            if word == 'I':
                names.append(pauli)
            elif pauli == 'I':
                names.append(word)
            else:
                names.append(f'{word}_{pauli}')
    return tuple(names)


SINGLE_QUBIT_NAMES: Tuple[str, ...] = _canonical_names()

ALIASES: Dict[str, str] = {
    'ID': 'I',
    'SDG': 'S_Z',
    'SX': 'H_S_H',
    'SXDG': 'H_S_H_X',
    'HS': 'H_S',
    'SH': 'S_H',
    'HSH': 'H_S_H',
}


def canonical_name(name: str) -> str:
    """Map a single-qubit gate name or alias to its canonical spelling."""
    key = name.strip().upper()
    key = ALIASES.get(key, key)
    if key not in SINGLE_QUBIT_NAMES:
        raise UnsupportedGateError(f'Unknown single-qubit gate {name!r}')
    return key


def name_letters(name: str) -> Tuple[str, ...]:
    """Elementary letters of a canonical name, in time order."""
    return tuple(letter for letter in canonical_name(name).split('_') if letter != 'I')


def _check_qubits(qubits: Iterable[int]) -> None:
    for q in qubits:
        if q < 0:
            raise ValidationError(f'Negative qubit index {q}')


@dataclass(frozen=True)
class SingleQubit:
    """One of the 24 single-qubit Cliffords."""

    qubit: int
    name: str

    def __post_init__(self):
        _check_qubits((self.qubit,))
        object.__setattr__(self, 'name', canonical_name(self.name))

    @property
    def qubits(self) -> Tuple[int, ...]:
        return (self.qubit,)


@dataclass(frozen=True)
class Cnot:
    control: int
    target: int

    def __post_init__(self):
        _check_qubits((self.control, self.target))
        if self.control == self.target:
            raise ValidationError('CNOT control and target must differ')

    @property
    def qubits(self) -> Tuple[int, ...]:
        return (self.control, self.target)


@dataclass(frozen=True)
class Swap:
    a: int
    b: int

    def __post_init__(self):
        _check_qubits((self.a, self.b))
        if self.a == self.b:
            raise ValidationError('SWAP needs two distinct qubits')

    @property
    def qubits(self) -> Tuple[int, ...]:
        return (self.a, self.b)


@dataclass(frozen=True)
class FanOut:
    """CNOT from one control onto every target."""

    control: int
    targets: Tuple[int, ...]

    def __post_init__(self):
        targets = tuple(sorted(set(int(t) for t in self.targets)))
        if self.control in targets:
            raise ValidationError('Fan-out targets must exclude the control')
        _check_qubits((self.control,) + targets)
        object.__setattr__(self, 'targets', targets)

    @property
    def qubits(self) -> Tuple[int, ...]:
        return tuple(sorted((self.control,) + self.targets))


@dataclass(frozen=True)
class PauliRotation:
    """exp(i * quarter_turns * pi/4 * P)."""

    pauli: PauliString
    quarter_turns: int = 1

    def __post_init__(self):
        if self.pauli.weight == 0:
            raise ValidationError('Rotation about the identity is a global phase')
        object.__setattr__(self, 'quarter_turns', int(self.quarter_turns) % 8)

    @property
    def qubits(self) -> Tuple[int, ...]:
        return self.pauli.support


@dataclass(frozen=True)
class CliqueFlip:
    """CZ on every pair of the qubit set."""

    qubits_set: Tuple[int, ...] = field(default=())

    def __post_init__(self):
        qubits = tuple(sorted(set(int(q) for q in self.qubits_set)))
        if len(qubits) < 2:
            raise ValidationError('Clique flips act on at least two qubits')
        _check_qubits(qubits)
        object.__setattr__(self, 'qubits_set', qubits)

    @property
    def qubits(self) -> Tuple[int, ...]:
        return self.qubits_set


@dataclass(frozen=True)
class XcxCliqueFlip(CliqueFlip):
    """Clique flip conjugated by Hadamards on every qubit of the set."""


Gate = Union[SingleQubit, Cnot, Swap, FanOut, PauliRotation, CliqueFlip, XcxCliqueFlip]

INJECTABLE_TYPES = (Cnot, FanOut, PauliRotation, CliqueFlip)


def span(gate: Gate) -> Tuple[int, int]:
    qubits = gate.qubits
    return min(qubits), max(qubits)


def is_multi_qubit(gate: Gate) -> bool:
    return len(gate.qubits) >= 2


def is_injection(gate: Gate) -> bool:
    """Multi-qubit gates that consume one GHZ injection."""
    return isinstance(gate, INJECTABLE_TYPES) and is_multi_qubit(gate)


def is_local(gate: Gate) -> bool:
    return not is_multi_qubit(gate)


def clique_flip(qubits: Iterable[int]) -> CliqueFlip:
    return CliqueFlip(tuple(qubits))


def xcx_clique_flip(qubits: Iterable[int]) -> XcxCliqueFlip:
    return XcxCliqueFlip(tuple(qubits))


_ANGLE = re.compile(r'^\s*([+-]?)\s*(\d*)\s*\*?\s*pi\s*(?:/\s*(\d+))?\s*$', re.IGNORECASE)


def parse_angle(text: Union[str, float, int]) -> int:
    """Angle as an integer number of pi/4 steps.

    Accepts 'pi/4', '3pi/4', '-pi/2', 'pi' or a float in radians.
    Angles that are not multiples of pi/4 are rejected.
    """
    if isinstance(text, str):
        match = _ANGLE.match(text)
        if match:
            sign, numerator, denominator = match.groups()
            value = Fraction(int(numerator or 1), int(denominator or 1))
            steps = value * 4
            if steps.denominator != 1:
                raise UnsupportedGateError(f'Angle {text!r} is not a multiple of pi/4')
            return -int(steps) if sign == '-' else int(steps)
        try:
            radians = float(text)
        except ValueError as e:
            raise ValidationError(f'Cannot parse angle {text!r}') from e
    else:
        radians = float(text)
    steps_float = radians / (math.pi / 4)
    steps_int = round(steps_float)
    if abs(steps_float - steps_int) > 1e-9:
        raise UnsupportedGateError(f'Angle {radians} is not a multiple of pi/4')
    return int(steps_int)


def format_angle(quarter_turns: int) -> str:
    value = Fraction(quarter_turns, 4)
    sign = '-' if value < 0 else ''
    value = abs(value)
    numerator = '' if value.numerator == 1 else str(value.numerator)
    if value == 0:
        return '0'
    if value.denominator == 1:
        return f'{sign}{numerator}pi'
    return f'{sign}{numerator}pi/{value.denominator}'

"""
Pauli strings with a sign bit.

A PauliString is the Hermitian operator (-1)^sign times the tensor
product of per-qubit letters I, X, Y, Z, where the letter on qubit q is
X when only x[q] is set, Z when only z[q] is set and Y when both are.
"""

from typing import Iterable, Sequence, Tuple

import numpy as np

from src.exceptions import ValidationError

_LETTERS = {(0, 0): 'I', (1, 0): 'X', (1, 1): 'Y', (0, 1): 'Z'}
_BITS = {letter: bits for bits, letter in _LETTERS.items()}


class PauliString:
    """Signed n-qubit Pauli operator."""

    __slots__ = ('x', 'z', 'sign')

    def __init__(self, x: Sequence[int], z: Sequence[int], sign: int = 0):
        x_bits = np.asarray(x, dtype=np.uint8) & 1
        z_bits = np.asarray(z, dtype=np.uint8) & 1
        if x_bits.ndim != 1 or x_bits.shape != z_bits.shape:
            raise ValidationError('Pauli x and z parts must be equal-length vectors')
        x_bits.flags.writeable = False
        z_bits.flags.writeable = False
        self.x = x_bits
        self.z = z_bits
        self.sign = int(sign) & 1

    @classmethod
    def from_label(cls, label: str) -> 'PauliString':
        """Parse labels such as 'XZI', '+XYZ' or '-ZZ'."""
        text = label.strip()
        sign = 0
        if text and text[0] in '+-':
            sign = 1 if text[0] == '-' else 0
            text = text[1:]
        if not text:
            raise ValidationError(f'Empty Pauli label {label!r}')
        try:
            bits = [_BITS[ch] for ch in text.upper()]
        except KeyError as e:
            raise ValidationError(f'Invalid Pauli letter in {label!r}') from e
        return cls([b[0] for b in bits], [b[1] for b in bits], sign)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str, sign: int = 0) -> 'PauliString':
        x = np.zeros(n, dtype=np.uint8)
        z = np.zeros(n, dtype=np.uint8)
        x[qubit], z[qubit] = _BITS[letter.upper()]
        return cls(x, z, sign)

    @classmethod
    def on_support(
        cls, n: int, letters: Iterable[Tuple[int, str]], sign: int = 0
    ) -> 'PauliString':
        """Build from (qubit, letter) pairs; other qubits carry I."""
        x = np.zeros(n, dtype=np.uint8)
        z = np.zeros(n, dtype=np.uint8)
        for qubit, letter in letters:
            x[qubit], z[qubit] = _BITS[letter.upper()]
        return cls(x, z, sign)

    @classmethod
    def identity(cls, n: int) -> 'PauliString':
        return cls(np.zeros(n, dtype=np.uint8), np.zeros(n, dtype=np.uint8))

    @property
    def n(self) -> int:
        return int(self.x.shape[0])

    @property
    def support(self) -> Tuple[int, ...]:
        return tuple(int(q) for q in np.nonzero(self.x | self.z)[0])

    @property
    def weight(self) -> int:
        return len(self.support)

    def letter(self, qubit: int) -> str:
        return _LETTERS[(int(self.x[qubit]), int(self.z[qubit]))]

    def commutes_with(self, other: 'PauliString') -> bool:
        overlap = int(np.sum(self.x & other.z)) + int(np.sum(self.z & other.x))
        return overlap % 2 == 0

    def negated(self) -> 'PauliString':
        return PauliString(self.x, self.z, self.sign ^ 1)

    def restricted(self, qubits: Sequence[int]) -> 'PauliString':
        index = list(qubits)
        return PauliString(self.x[index], self.z[index], self.sign)

    def embedded(self, n: int, qubits: Sequence[int]) -> 'PauliString':
        """Place this string on the given qubits of an n-qubit register."""
        if len(qubits) != self.n:
            raise ValidationError('Embedding needs one target qubit per letter')
        x = np.zeros(n, dtype=np.uint8)
        z = np.zeros(n, dtype=np.uint8)
        x[list(qubits)] = self.x
        z[list(qubits)] = self.z
        return PauliString(x, z, self.sign)

    def to_label(self, signed: bool = True) -> str:
        body = ''.join(self.letter(q) for q in range(self.n))
        if not signed:
            return body
        return ('-' if self.sign else '+') + body

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return (
            self.sign == other.sign
            and bool(np.array_equal(self.x, other.x))
            and bool(np.array_equal(self.z, other.z))
        )

    def __hash__(self) -> int:
        return hash((self.sign, self.x.tobytes(), self.z.tobytes()))

    def __repr__(self) -> str:
        return f'PauliString({self.to_label()!r})'

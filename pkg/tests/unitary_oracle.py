"""
Dense-matrix reference for small registers.

Qubit 0 is the most significant bit of the computational basis index.
Used only by tests to cross-check the tableau simulator.
"""

from functools import reduce
from typing import Iterable

import numpy as np

from src.core.gates import (
    Cnot,
    CliqueFlip,
    FanOut,
    PauliRotation,
    SingleQubit,
    Swap,
    XcxCliqueFlip,
    name_letters,
)
from src.core.pauli import PauliString

LETTER = {
    'I': np.eye(2, dtype=complex),
    'X': np.array([[0, 1], [1, 0]], dtype=complex),
    'Y': np.array([[0, -1j], [1j, 0]], dtype=complex),
    'Z': np.array([[1, 0], [0, -1]], dtype=complex),
    'H': np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2),
    'S': np.array([[1, 0], [0, 1j]], dtype=complex),
}


def bit(index: int, qubit: int, n: int) -> int:
    return (index >> (n - 1 - qubit)) & 1


def on_qubit(n: int, qubit: int, matrix: np.ndarray) -> np.ndarray:
    factors = [matrix if q == qubit else LETTER['I'] for q in range(n)]
    return reduce(np.kron, factors)


def permutation(n: int, mapping) -> np.ndarray:
    dim = 2 ** n
    matrix = np.zeros((dim, dim), dtype=complex)
    for index in range(dim):
        matrix[mapping(index), index] = 1
    return matrix


def cx(n: int, control: int, target: int) -> np.ndarray:
    flip = 1 << (n - 1 - target)
    return permutation(n, lambda b: b ^ flip if bit(b, control, n) else b)


def cz(n: int, a: int, b: int) -> np.ndarray:
    return np.diag(
        [(-1) ** (bit(i, a, n) * bit(i, b, n)) for i in range(2 ** n)]
    ).astype(complex)


def swap(n: int, a: int, b: int) -> np.ndarray:
    def mapping(index: int) -> int:
        va, vb = bit(index, a, n), bit(index, b, n)
        if va == vb:
            return index
        return index ^ (1 << (n - 1 - a)) ^ (1 << (n - 1 - b))

    return permutation(n, mapping)


def pauli_matrix(pauli: PauliString) -> np.ndarray:
    matrix = reduce(np.kron, [LETTER[pauli.letter(q)] for q in range(pauli.n)])
    return -matrix if pauli.sign else matrix


def product(matrices: Iterable[np.ndarray], n: int) -> np.ndarray:
    """Unitary of applying the matrices in time order."""
    result = np.eye(2 ** n, dtype=complex)
    for matrix in matrices:
        result = matrix @ result
    return result


def gate_unitary(gate, n: int) -> np.ndarray:
    if isinstance(gate, SingleQubit):
        return product((on_qubit(n, gate.qubit, LETTER[l]) for l in name_letters(gate.name)), n)
    if isinstance(gate, Cnot):
        return cx(n, gate.control, gate.target)
    if isinstance(gate, FanOut):
        return product((cx(n, gate.control, t) for t in gate.targets), n)
    if isinstance(gate, Swap):
        return swap(n, gate.a, gate.b)
    if isinstance(gate, XcxCliqueFlip):
        hadamards = product((on_qubit(n, q, LETTER['H']) for q in gate.qubits), n)
        return hadamards @ gate_unitary(CliqueFlip(gate.qubits), n) @ hadamards
    if isinstance(gate, CliqueFlip):
        qs = gate.qubits
        return product((cz(n, a, b) for i, a in enumerate(qs) for b in qs[i + 1:]), n)
    if isinstance(gate, PauliRotation):
        angle = gate.quarter_turns * np.pi / 4
        return np.cos(angle) * np.eye(2 ** n) + 1j * np.sin(angle) * pauli_matrix(gate.pauli)
    raise TypeError(gate)


def circuit_unitary(gates, n: int) -> np.ndarray:
    return product((gate_unitary(g, n) for g in gates), n)


def tableau_matches_unitary(tableau, unitary: np.ndarray) -> bool:
    """Check U P U^dagger against every tableau row, signs included."""
    n = tableau.n
    for q in range(n):
        for k, letter in ((q, 'X'), (n + q, 'Z')):
            generator = pauli_matrix(PauliString.single(n, q, letter))
            image = unitary @ generator @ unitary.conj().T
            if not np.allclose(image, pauli_matrix(tableau.row(k))):
                return False
    return True

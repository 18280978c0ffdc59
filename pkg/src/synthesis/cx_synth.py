"""
Reversible linear (CNOT) synthesis with fan-out gates.

Column j of a transform M lists the inputs XORed into output j. A CNOT
with control c and target t adds column c to column t, and running gate
A then gate B gives the matrix M_A @ M_B.
"""

from dataclasses import dataclass
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.core.circuit import Architecture, Circuit, Schedule, schedule
from src.core.gates import Cnot, FanOut, Gate, SingleQubit, Swap
from src.core.gf2 import BitMatrix
from src.core.tableau import CliffordTableau
from src.exceptions import UnsupportedGateError, ValidationError

Permutation = Tuple[int, ...]


@dataclass(frozen=True)
class ExactStep:
    """Optional pivot-fixing CNOT followed by a fan-out (possibly empty)."""

    cnot: Optional[Cnot]
    fanout: FanOut

    def gates(self) -> List[Gate]:
        gates: List[Gate] = [self.cnot] if self.cnot else []
        if self.fanout.targets:
            gates.append(self.fanout)
        return gates


@dataclass(frozen=True)
class FanoutSynthesis:
    """Fan-outs in elimination order (control i first) and the leftover permutation.

    Output wire i of the permutation carries input permutation[i].
    """

    fanouts: Tuple[FanOut, ...]
    permutation: Permutation

    def circuit_gates(self) -> List[FanOut]:
        """Fan-outs in time order; running them and then the permutation gives M."""
        return relabeled_fanouts(self.fanouts, self.permutation)


def checked_transform(matrix) -> BitMatrix:
    matrix = BitMatrix(matrix)
    if not matrix.is_square():
        raise ValidationError(f'Linear transform must be square, got {matrix.shape}')
    if not matrix.is_invertible():
        raise ValidationError('Linear transform is singular')
    return matrix


def permutation_matrix(permutation: Sequence[int]) -> BitMatrix:
    n = len(permutation)
    if sorted(permutation) != list(range(n)):
        raise ValidationError(f'{tuple(permutation)} is not a permutation')
    data = np.zeros((n, n), dtype=np.uint8)
    for i, source in enumerate(permutation):
        data[source, i] = 1
    return BitMatrix(data)


def linear_tableau(matrix) -> CliffordTableau:
    """Tableau of the CNOT circuit with transform M: X_k -> X^(row k of M)."""
    matrix = checked_transform(matrix)
    n = matrix.rows
    zero = np.zeros((n, n), dtype=np.uint8)
    x = np.concatenate([matrix.array, zero])
    z = np.concatenate([zero, matrix.inverse().T.array])
    return CliffordTableau(x, z)


def permutation_tableau(permutation: Sequence[int]) -> CliffordTableau:
    return linear_tableau(permutation_matrix(permutation))


def linear_matrix(n: int, gates: Iterable[Gate]) -> BitMatrix:
    """Transform of a circuit of CNOT, fan-out and SWAP gates."""
    work = np.eye(n, dtype=np.uint8)
    for gate in gates:
        if isinstance(gate, Cnot):
            work[:, gate.target] ^= work[:, gate.control]
        elif isinstance(gate, FanOut):
            for t in gate.targets:
                work[:, t] ^= work[:, gate.control]
        elif isinstance(gate, Swap):
            work[:, [gate.a, gate.b]] = work[:, [gate.b, gate.a]]
        elif isinstance(gate, SingleQubit) and gate.name == 'I':
            continue
        else:
            raise UnsupportedGateError(f'{gate!r} is not a linear reversible gate')
    return BitMatrix(work)


def _column_reduction(matrix: BitMatrix) -> Tuple[List[FanOut], Permutation]:
    work = matrix.copy_array()
    n = matrix.rows
    fanouts = []
    sigma = []
    for i in range(n):
        pivot = int(np.nonzero(work[:, i])[0][0])
        targets = [j for j in range(n) if j != i and work[pivot, j]]
        for j in targets:
            work[:, j] ^= work[:, i]
        fanouts.append(FanOut(i, tuple(targets)))
        sigma.append(pivot)
    return fanouts, tuple(sigma)


def synth_fanout(matrix) -> FanoutSynthesis:
    """Reduce M to a permutation with at most n fan-outs.

    Fan-out i is controlled by qubit i and adds column i to every column
    that shares its pivot row; M @ F_0 @ ... @ F_{n-1} is the returned
    permutation matrix.
    """
    fanouts, sigma = _column_reduction(checked_transform(matrix))
    return FanoutSynthesis(tuple(f for f in fanouts if f.targets), sigma)


def relabeled_fanouts(fanouts: Sequence[FanOut], permutation: Sequence[int]) -> List[FanOut]:
    """Move the permutation behind the fan-outs: F_{n-1}..F_0 with qubits renamed."""
    return [
        FanOut(permutation[f.control], tuple(permutation[t] for t in f.targets))
        for f in reversed(fanouts)
    ]


def exact_steps(matrix, descending: bool = False) -> List[ExactStep]:
    """Alternating CNOT / fan-out steps implementing M exactly, in time order.

    Eliminating M^-1 column by column gives the gates in the order they
    run. Before fan-out i a single CNOT from the first later column with
    a one in row i sets the pivot; the last step never needs one. With
    descending=True the controls run n-1 down to 0 and each pivot CNOT
    comes from a lower qubit.
    """
    matrix = checked_transform(matrix)
    n = matrix.rows
    if descending:
        flip = list(range(n - 1, -1, -1))
        reversed_matrix = BitMatrix(matrix.array[np.ix_(flip, flip)])

        def mirror(q: int) -> int:
            return n - 1 - q

        steps = []
        for step in exact_steps(reversed_matrix):
            cnot = None
            if step.cnot is not None:
                cnot = Cnot(mirror(step.cnot.control), mirror(step.cnot.target))
            fanout = FanOut(mirror(step.fanout.control), tuple(mirror(t) for t in step.fanout.targets))
            steps.append(ExactStep(cnot, fanout))
        return steps

    work = matrix.inverse().copy_array()
    steps = []
    for i in range(n):
        cnot = None
        if not work[i, i]:
            j = next(j for j in range(i + 1, n) if work[i, j])
            work[:, i] ^= work[:, j]
            cnot = Cnot(j, i)
        targets = [j for j in range(n) if j != i and work[i, j]]
        for j in targets:
            work[:, j] ^= work[:, i]
        steps.append(ExactStep(cnot, FanOut(i, tuple(targets))))
    return steps


def synth_fanout_exact(matrix, descending: bool = False) -> Schedule:
    """Linear-bus schedule for M in injection depth at most 2n - 1."""
    steps = exact_steps(matrix, descending)
    n = len(steps)
    gates = [gate for step in steps for gate in step.gates()]
    return schedule(Circuit(n, gates), Architecture.linear(n))


def permutation_gates(permutation: Sequence[int]) -> List[Swap]:
    """SWAPs (any range) leaving input permutation[i] on wire i."""
    n = len(permutation)
    permutation_matrix(permutation)
    state = list(range(n))
    swaps = []
    for i in range(n):
        j = state.index(permutation[i])
        if j != i:
            state[i], state[j] = state[j], state[i]
            swaps.append(Swap(i, j))
    return swaps

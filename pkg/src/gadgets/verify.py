"""
Exhaustive branch verification of physical gadgets.

Unitary and measurement targets are checked on the Choi state: each
data qubit starts maximally entangled with a reference qubit appended
after the circuit's register, so one stabilizer comparison per branch
covers every input. State targets start from |0...0>.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Union

from src.core.gates import Cnot, SingleQubit
from src.core.pauli import PauliString
from src.core.tableau import CliffordTableau, measure_pauli
from src.exceptions import ValidationError, VerificationError
from src.gadgets.physical import PhysicalCircuit


@dataclass(frozen=True)
class UnitaryTarget:
    tableau: CliffordTableau

    @property
    def n(self) -> int:
        return self.tableau.n


@dataclass(frozen=True)
class MeasurementTarget:
    pauli: PauliString

    def __post_init__(self):
        if self.pauli.weight == 0:
            raise ValidationError('Measurement target must be a non-identity Pauli')

    @property
    def n(self) -> int:
        return self.pauli.n


@dataclass(frozen=True)
class StateTarget:
    """Output state tableau|0...0> on the data qubits, from |0...0>."""

    tableau: CliffordTableau

    @property
    def n(self) -> int:
        return self.tableau.n


GadgetTarget = Union[UnitaryTarget, MeasurementTarget, StateTarget]


@dataclass(frozen=True)
class GadgetReport:
    passed: bool
    branches: int
    failing_branch: Optional[str] = None
    reason: str = ''

    def raise_for_failure(self) -> None:
        if not self.passed:
            raise VerificationError(self.reason, branch=self.failing_branch)


def as_target(target: Union[GadgetTarget, CliffordTableau, PauliString]) -> GadgetTarget:
    if isinstance(target, (UnitaryTarget, MeasurementTarget, StateTarget)):
        return target
    if isinstance(target, CliffordTableau):
        return UnitaryTarget(target)
    if isinstance(target, PauliString):
        return MeasurementTarget(target)
    raise ValidationError(f'Cannot verify against {target!r}')


def choi_state(data: int, total: int) -> CliffordTableau:
    """Bell pairs between data qubit i and reference qubit total+i."""
    gates = []
    for i in range(data):
        gates.append(SingleQubit(total + i, 'H'))
        gates.append(Cnot(total + i, i))
    return CliffordTableau.from_gates(total + data, gates)


def stabilizer_mismatch(state: CliffordTableau, expected: CliffordTableau) -> Optional[str]:
    """First stabilizer of expected that state does not share, if any."""
    n = expected.n
    for k in range(n, 2 * n):
        generator = expected.row(k)
        result = measure_pauli(state, generator, rng=0)
        if not result.deterministic:
            return f'stabilizer {generator.to_label()} is not fixed'
        if result.outcome:
            return f'stabilizer {generator.to_label()} has the wrong sign'
    return None


def verify_gadget(
    circuit: PhysicalCircuit,
    target: Union[GadgetTarget, CliffordTableau, PauliString],
) -> GadgetReport:
    """Run every measurement branch and compare against target.

    Ancillae must end in |0>. The report names the first failing branch
    by its outcome bits in bit order.
    """
    goal = as_target(target)
    if goal.n != circuit.data:
        raise ValidationError(
            f'Target acts on {goal.n} qubits but the gadget has {circuit.data} data qubits'
        )

    if isinstance(goal, StateTarget):
        initial = CliffordTableau.identity(circuit.total)
        fixed_expected: Optional[CliffordTableau] = goal.tableau.embed(circuit.total)
    else:
        initial = choi_state(circuit.data, circuit.total)
        fixed_expected = None
        if isinstance(goal, UnitaryTarget):
            fixed_expected = initial.then(goal.tableau.embed(initial.n))

    weights: Dict[int, Fraction] = {0: Fraction(0), 1: Fraction(0)}
    count = 0
    for branch in circuit.branches(initial):
        count += 1
        expected = fixed_expected
        if isinstance(goal, MeasurementTarget):
            outcome = circuit.logical_outcome(branch.bits)
            observable = goal.pauli.embedded(initial.n, range(circuit.data))
            expected = measure_pauli(initial, observable, forced_outcome=outcome).state
            weights[outcome] += branch.probability
        problem = stabilizer_mismatch(branch.state, expected)
        if problem:
            return GadgetReport(False, count, branch.label, problem)

    if isinstance(goal, MeasurementTarget) and weights[0] != weights[1]:
        return GadgetReport(
            False, count, None, f'outcome weights {weights[0]} and {weights[1]} are not even'
        )
    return GadgetReport(True, count)

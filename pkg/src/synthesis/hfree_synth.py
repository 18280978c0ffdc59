"""
Hadamard-free Clifford synthesis.

A layer -L-CX-CZ- is rewritten as -L-Z-CZ-CX- and the CZ part is pushed
through the fan-outs of the CX synthesis. Each fan-out it crosses drops
every CZ edge touching that fan-out's control, at the price of extra
targets and free single-qubit corrections, so after the last fan-out no
CZ gate is left.
"""

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from src.core.circuit import Architecture, Circuit, Schedule, schedule
from src.core.gates import Cnot, FanOut, Gate, SingleQubit
from src.core.gf2 import BitMatrix
from src.core.tableau import CliffordTableau
from src.exceptions import SynthesisError, ValidationError
from src.synthesis.cx_synth import (
    Permutation,
    checked_transform,
    exact_steps,
    linear_tableau,
    relabeled_fanouts,
    synth_fanout,
)
from src.synthesis.cz_synth import CzGraph


@dataclass(frozen=True)
class CommutationResult:
    """cz then fanout, rewritten as before, fanout, after, then residual."""

    residual: CzGraph
    fanout: FanOut
    before: Tuple[SingleQubit, ...] = ()
    after: Tuple[SingleQubit, ...] = ()

    def gates(self) -> List[Gate]:
        gates: List[Gate] = list(self.before)
        if self.fanout.targets:
            gates.append(self.fanout)
        gates.extend(self.after)
        gates.extend(self.residual.cz_gates())
        return gates


def commute_cz_through_fanout(cz: CzGraph, fanout) -> CommutationResult:
    """Push a CZ layer from before a fan-out (or CNOT) to after it.

    Edges at the control become CZs from the control to a set W after
    the fan-out. Members of W outside the targets turn into new targets
    between Hadamards; members inside the targets become S-gate
    corrections. The residual graph is cz without the control's edges.
    """
    if isinstance(fanout, Cnot):
        fanout = FanOut(fanout.control, (fanout.target,))
    n = cz.n
    k = fanout.control
    if max(fanout.qubits) >= n:
        raise ValidationError(f'{fanout!r} does not fit in {n} qubits')
    adjacency = cz.adjacency.copy_array().astype(np.int64)
    at_control = adjacency[k].copy()
    rest = adjacency.copy()
    rest[k, :] = 0
    rest[:, k] = 0
    in_targets = np.zeros(n, dtype=np.int64)
    in_targets[list(fanout.targets)] = 1

    weights = (rest @ in_targets + at_control) % 2
    weights[k] = 0
    phase = (int(in_targets @ rest @ in_targets) // 2 + int(at_control @ in_targets)) % 2

    targets = set(fanout.targets)
    joined = [int(w) for w in np.nonzero(weights)[0]]
    inside = [w for w in joined if w in targets]
    outside = [w for w in joined if w not in targets]

    before = [SingleQubit(w, 'S_Z') for w in inside] + [SingleQubit(w, 'H') for w in outside]
    after = [SingleQubit(w, 'H') for w in outside] + [SingleQubit(w, 'S') for w in inside]
    after += [SingleQubit(k, 'S')] * len(inside)
    if phase:
        after.append(SingleQubit(k, 'Z'))
    new_fanout = FanOut(k, tuple(sorted(targets | set(outside))))
    return CommutationResult(
        residual=CzGraph(BitMatrix(rest)),
        fanout=new_fanout,
        before=tuple(before),
        after=tuple(after),
    )


def cz_ahead_of_cx(matrix: BitMatrix, cz: CzGraph) -> Tuple[Tuple[int, ...], CzGraph]:
    """Rewrite CX(M) then CZ(G) as Z^l then CZ(G') then CX(M).

    G' is the off-diagonal part of M G M^T and l the diagonal of M U M^T,
    with U the strict upper triangle of G.
    """
    upper = cz.adjacency.upper_triangle()
    moved = (matrix @ upper @ matrix.T).array
    diagonal = tuple(int(b) for b in np.diag(moved))
    symmetric = (moved ^ moved.T).astype(np.uint8)
    return diagonal, CzGraph(BitMatrix(symmetric))


@dataclass
class AbsorptionTrace:
    """Residual CZ graphs after each crossed gate."""

    residuals: List[CzGraph] = field(default_factory=list)


def absorb(
    cz: CzGraph, gates: Sequence[Gate], trace: Optional[AbsorptionTrace] = None
) -> Tuple[List[Gate], CzGraph]:
    """Push cz through a sequence of CNOTs and fan-outs, left to right."""
    out: List[Gate] = []
    residual = cz
    for gate in gates:
        result = commute_cz_through_fanout(residual, gate)
        out.extend(result.before)
        if result.fanout.targets:
            out.append(result.fanout)
        out.extend(result.after)
        residual = result.residual
        if trace is not None:
            trace.residuals.append(residual)
    return out, residual


def _prefix(local: Sequence[SingleQubit], diagonal: Sequence[int]) -> List[Gate]:
    return list(local) + [SingleQubit(q, 'Z') for q, bit in enumerate(diagonal) if bit]


def hadamard_free_tableau(local: Sequence[SingleQubit], matrix, cz: CzGraph) -> CliffordTableau:
    """Target Clifford of local gates, then CX(M), then CZ(G)."""
    matrix = checked_transform(matrix)
    n = matrix.rows
    return (
        CliffordTableau.from_gates(n, local)
        .then(linear_tableau(matrix))
        .then(cz.to_tableau())
    )


def synth_hfree(
    local: Sequence[SingleQubit],
    matrix,
    cz: CzGraph,
    trace: Optional[AbsorptionTrace] = None,
) -> Tuple[Schedule, Permutation]:
    """Linear-bus schedule with at most n fan-outs, up to a final permutation.

    Running the schedule and then the permutation (wire i takes input
    permutation[i]) gives local, then CX(M), then CZ(G).
    """
    matrix = checked_transform(matrix)
    n = matrix.rows
    if cz.n != n:
        raise ValidationError('CZ layer and transform sizes differ')
    diagonal, moved = cz_ahead_of_cx(matrix, cz)
    reduction = synth_fanout(matrix)
    # keep every control so the CZ loses all of its edges on the way through
    all_fanouts = {f.control: f for f in reduction.fanouts}
    fanouts = [all_fanouts.get(i, FanOut(i, ())) for i in range(n)]
    sigma = reduction.permutation
    body, residual = absorb(moved, relabeled_fanouts(fanouts, sigma), trace)
    if not residual.is_empty():
        raise SynthesisError('CZ layer was not fully absorbed')
    gates = _prefix(local, diagonal) + body
    return schedule(Circuit(n, gates), Architecture.linear(n)), sigma


def synth_hfree_exact(
    local: Sequence[SingleQubit], matrix, cz: CzGraph
) -> Schedule:
    """Hadamard-free Clifford in depth at most 2n - 1 with no permutation."""
    matrix = checked_transform(matrix)
    n = matrix.rows
    diagonal, moved = cz_ahead_of_cx(matrix, cz)
    steps = exact_steps(matrix)
    sequence: List[Gate] = []
    for step in steps:
        if step.cnot is not None:
            sequence.append(step.cnot)
        sequence.append(step.fanout)
    body, residual = absorb(moved, sequence)
    if not residual.is_empty():
        raise SynthesisError('CZ layer was not fully absorbed')
    return schedule(Circuit(n, _prefix(local, diagonal) + body), Architecture.linear(n))


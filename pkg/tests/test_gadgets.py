"""
Tests for physical GHZ gadgets and their branch verification.
"""

import numpy as np
import pytest

from src.core.gates import Cnot, CliqueFlip, FanOut, PauliRotation
from src.core.pauli import PauliString
from src.core.tableau import CliffordTableau
from src.exceptions import ParseError, UnsupportedGateError, ValidationError, VerificationError
from src.gadgets.library import (
    PRIMITIVES,
    expand,
    expansion_target,
    fanout_from_clique_flips,
    ghz_prep,
    ghz_prep_variant,
    ghz_target,
    interconvert,
    primitive_target,
)
from src.gadgets.physical import (
    ConditionalPauli,
    MeasurePauli,
    MeasureZ,
    MeasureZZ,
    PhysicalCircuit,
    format_physical,
    parse_physical,
)
from src.gadgets.verify import StateTarget, verify_gadget

PRIMITIVE_OPS = {'fanout': FanOut, 'rotation': PauliRotation, 'measurement': MeasurePauli}


def without_corrections(circuit, letter):
    ops = [
        op for op in circuit.ops if not (isinstance(op, ConditionalPauli) and op.letter == letter)
    ]
    return PhysicalCircuit(circuit.data, circuit.ancillae, ops, circuit.outcome, circuit.outcome_constant)


class TestPhysicalCircuit:
    """Test construction rules and branch enumeration."""

    def test_bits_written_once(self):
        """Test a bit cannot be measured into twice."""
        with pytest.raises(ValidationError):
            PhysicalCircuit(2, 0, [MeasureZ(0, 0), MeasureZ(1, 0)])

    def test_correction_reads_written_bits(self):
        """Test corrections may only read earlier outcomes."""
        with pytest.raises(ValidationError):
            PhysicalCircuit(1, 0, [ConditionalPauli((0,), 'X', 0)])

    def test_rotation_spans_register(self):
        """Test rotation Paulis must cover every qubit."""
        with pytest.raises(ValidationError):
            PhysicalCircuit(3, 0, [PauliRotation(PauliString.from_label('ZZ'))])

    def test_random_measurement_branches(self):
        """Test a |+> measurement splits into two equally likely branches."""
        circuit = PhysicalCircuit(0, 1)
        circuit.local(0, 'H')
        bit = circuit.measure_z(0)
        circuit.correct([bit], 'X', 0)
        branches = list(circuit.branches())
        assert sorted(b.label for b in branches) == ['0', '1']
        assert all(b.probability == 0.5 for b in branches)
        assert all(b.state.stabilizers()[0] == PauliString.from_label('Z') for b in branches)

    def test_deterministic_measurement(self):
        """Test a |0> measurement keeps a single branch."""
        circuit = PhysicalCircuit(0, 1)
        circuit.measure_z(0)
        (branch,) = circuit.branches()
        assert branch.bits == {0: 0}
        assert branch.probability == 1

    def test_zz_measurement_is_a_parity_measurement(self):
        """Test MZZ verifies as a Z..Z measurement."""
        circuit = PhysicalCircuit(2, 0, [MeasureZZ(0, 1, 0)], outcome=(0,))
        report = verify_gadget(circuit, PauliString.from_label('ZZ'))
        assert report.passed and report.branches == 2

    def test_text_form(self):
        """Test the text form parses back to the same circuit."""
        circuit = interconvert('measurement', 'rotation', 2)
        text = format_physical(circuit)
        assert 'MP +ZZY -> b0' in text
        assert 'CPAULI b0^b1 -> Z 0' in text
        parsed = parse_physical(text)
        assert parsed.ops == circuit.ops
        assert format_physical(parsed) == text

    def test_outcome_line(self):
        """Test OUTCOME lines carry bits and the constant."""
        text = 'n=2\ndata=1\nSQ 1 H\nMZ 1 -> b3\nOUTCOME b3^1\n'
        parsed = parse_physical(text)
        assert parsed.outcome == (3,) and parsed.outcome_constant == 1

    def test_parse_error_line(self):
        """Test parse errors point at the bad line."""
        with pytest.raises(ParseError) as info:
            parse_physical('n=3\ndata=1\nSQ 0 H\nMZ 7 -> b0\n')
        assert info.value.line_number == 4
        with pytest.raises(ParseError) as info:
            parse_physical('n=3\ndata=1\nCPAULI b0 -> X 1\n')
        assert info.value.line_number == 3
        with pytest.raises(ParseError):
            parse_physical('n=3\n')


class TestGhzPreparation:
    """Test GHZ preparation circuits."""

    @pytest.mark.parametrize('k', range(1, 7))
    def test_parity_checks(self, k):
        """Test every branch ends in the GHZ state with clean checks."""
        circuit = ghz_prep(k)
        report = verify_gadget(circuit, ghz_target(k))
        assert report.passed, report.reason
        assert circuit.ancillae == k - 1
        assert report.branches == 2 ** (k - 1)

    @pytest.mark.parametrize('method', ['parity', 'fanout', 'rotation', 'measurement'])
    @pytest.mark.parametrize('k', [1, 2, 3, 5])
    def test_variants(self, method, k):
        """Test each primitive prepares the same state."""
        report = verify_gadget(ghz_prep_variant(k, method), ghz_target(k))
        assert report.passed, report.reason

    def test_unknown_method(self):
        """Test unknown methods are rejected."""
        with pytest.raises(ValidationError):
            ghz_prep_variant(3, 'teleport')

    def test_wrong_state_fails(self):
        """Test a product state does not pass as GHZ."""
        report = verify_gadget(PhysicalCircuit(2), StateTarget(ghz_target(2).tableau))
        assert not report.passed
        assert report.failing_branch == '-'


class TestExpansion:
    """Test GHZ-injection gadgets for fan-outs, rotations and measurements."""

    def test_cnot(self):
        """Test a CNOT from 1 to 2 on three data qubits."""
        gate = Cnot(1, 2)
        circuit = expand(gate, 3)
        assert circuit.ancillae == 3
        report = verify_gadget(circuit, expansion_target(gate, 3))
        assert report.passed, report.reason

    def test_fanout(self):
        """Test a three-target fan-out."""
        gate = FanOut(2, (0, 1, 3))
        circuit = expand(gate)
        assert circuit.data == 4
        assert circuit.ancillae == 2 * 4 - 1
        assert verify_gadget(circuit, expansion_target(gate, 4)).passed

    def test_zzz_rotation(self):
        """Test exp(i pi/4 ZZZ) on three qubits."""
        gate = PauliRotation(PauliString.from_label('ZZZ'), 1)
        report = verify_gadget(expand(gate), expansion_target(gate, 3))
        assert report.passed, report.reason
        assert report.branches == 2 ** 5

    def test_random_rotations(self):
        """Test rotations over mixed letters, signs and directions."""
        rng = np.random.default_rng(23)
        for _ in range(20):
            n = int(rng.integers(1, 4))
            letters = ''.join(rng.choice(list('IXYZ'), size=n))
            if set(letters) == {'I'}:
                letters = 'Y' + letters[1:]
            sign = '-' if rng.integers(0, 2) else '+'
            gate = PauliRotation(PauliString.from_label(sign + letters), int(rng.choice([1, 3, 5, 7])))
            report = verify_gadget(expand(gate), expansion_target(gate, n))
            assert report.passed, (gate, report.reason)

    @pytest.mark.parametrize('label', ['ZZ', 'XYZ', '-XIY', 'Y'])
    def test_measurements(self, label):
        """Test outcome distribution and post-measurement states."""
        pauli = PauliString.from_label(label)
        report = verify_gadget(expand(pauli), expansion_target(pauli, pauli.n))
        assert report.passed, report.reason

    def test_even_rotation_rejected(self):
        """Test a pi/2 rotation is not injected."""
        with pytest.raises(UnsupportedGateError):
            expand(PauliRotation(PauliString.from_label('ZZ'), 2))

    def test_missing_control_correction_is_reported(self):
        """Test dropping the Z fix names a failing branch."""
        gate = FanOut(0, (1, 2))
        broken = without_corrections(expand(gate), 'Z')
        report = verify_gadget(broken, expansion_target(gate, 3))
        assert not report.passed
        assert '1' in report.failing_branch
        with pytest.raises(VerificationError) as info:
            report.raise_for_failure()
        assert info.value.branch == report.failing_branch

    def test_dirty_ancilla_is_reported(self):
        """Test ancillae left outside |0> fail verification."""
        pauli = PauliString.from_label('ZZ')
        broken = without_corrections(expand(pauli), 'X')
        assert not verify_gadget(broken, pauli).passed

    def test_target_size_mismatch(self):
        """Test targets must act on the data qubits."""
        with pytest.raises(ValidationError):
            verify_gadget(expand(Cnot(0, 1)), CliffordTableau.identity(3))


class TestInterconversion:
    """Test trading one primitive for another."""

    @pytest.mark.parametrize('k', [2, 3, 4])
    @pytest.mark.parametrize(
        'source,target',
        [(s, t) for s in ('fanout', 'rotation', 'measurement') for t in PRIMITIVES if s != t],
    )
    def test_pairs(self, source, target, k):
        """Test every pair verifies with one primitive and one ancilla."""
        circuit = interconvert(source, target, k)
        report = verify_gadget(circuit, primitive_target(target, k))
        assert report.passed, report.reason
        assert circuit.ancillae == 1
        assert circuit.count(PRIMITIVE_OPS[source]) == 1
        assert circuit.count(Cnot) == (1 if target == 'fanout' else 0)

    def test_same_primitive_rejected(self):
        """Test converting a primitive to itself is an error."""
        with pytest.raises(ValidationError):
            interconvert('rotation', 'rotation', 3)

    def test_bad_arguments(self):
        """Test unknown names and tiny registers."""
        with pytest.raises(ValidationError):
            interconvert('swap', 'fanout', 3)
        with pytest.raises(ValidationError):
            interconvert('fanout', 'rotation', 1)


class TestCliqueFlipFanOut:
    """Test the ancilla-free fan-out from clique flips."""

    def test_single_target_is_cnot(self):
        """Test one target gives a CNOT."""
        circuit = fanout_from_clique_flips(1, [2])
        assert circuit.simulate() == CliffordTableau.from_gates(3, [Cnot(1, 2)])
        assert sum(isinstance(g, CliqueFlip) for g in circuit.gates) == 1

    def test_many_targets(self):
        """Test two clique flips give the whole fan-out."""
        circuit = fanout_from_clique_flips(0, [4, 1, 3], n=6)
        assert circuit.n == 6
        assert circuit.simulate() == CliffordTableau.from_gates(6, [FanOut(0, (1, 3, 4))])
        assert sum(isinstance(g, CliqueFlip) for g in circuit.gates) == 2

    def test_control_among_targets(self):
        """Test the control may not be a target."""
        with pytest.raises(ValidationError):
            fanout_from_clique_flips(1, [1, 2])

"""
Tests for circuits and GHZ-injection scheduling.
"""

import numpy as np
import pytest

from src.core.circuit import (
    Architecture,
    Circuit,
    LayerKind,
    Schedule,
    SchedulePolicy,
    depth,
    schedule,
    simulate,
    validate_schedule,
)
from src.core.gates import (
    Cnot,
    CliqueFlip,
    FanOut,
    PauliRotation,
    SingleQubit,
    Swap,
    format_angle,
    parse_angle,
)
from src.core.pauli import PauliString
from src.core.tableau import CliffordTableau
from src.exceptions import SynthesisError, UnsupportedGateError, ValidationError
from tests.test_tableau import random_gate


class TestScheduling:
    """Test packing rules for both architectures."""

    def test_disjoint_ranges_share_a_layer(self):
        """Test clique flips on {0,1} and {2,3} run in parallel."""
        c = Circuit(4, [CliqueFlip((0, 1)), CliqueFlip((2, 3))])
        s = schedule(c, Architecture.linear(4))
        assert depth(s).injection_layers == 1

    def test_interleaved_ranges(self):
        """Test interleaved but disjoint sets need two bus layers."""
        c = Circuit(4, [CliqueFlip((0, 2)), CliqueFlip((1, 3))])
        assert depth(schedule(c, Architecture.linear(4))).injection_layers == 2
        assert depth(schedule(c, Architecture.dual(4))).injection_layers == 1

    def test_empty_circuit(self):
        """Test empty circuit has depth zero."""
        s = schedule(Circuit(3), Architecture.linear(3))
        assert depth(s).injection_layers == 0
        assert depth(s).swap_layers == 0
        assert simulate(s) == CliffordTableau.identity(3)

    def test_single_qubit_gates_are_free(self):
        """Test local gates never add layers."""
        c = Circuit(3, [SingleQubit(q, 'H') for q in range(3)] + [SingleQubit(0, 'S')])
        s = schedule(c, Architecture.linear(3))
        assert depth(s).injection_layers == 0
        assert len(s.tail) == 4

    def test_swaps_are_counted_separately(self):
        """Test swap layers do not count as injection layers."""
        c = Circuit(4, [Swap(0, 1), Swap(2, 3), CliqueFlip((1, 2)), Swap(1, 2)])
        s = schedule(c, Architecture.linear(4))
        metrics = depth(s)
        assert metrics.injection_layers == 1
        assert metrics.swap_layers == 2
        assert metrics.weighted(3) == 7
        assert simulate(s) == c.simulate()

    def test_one_qubit_rotation_is_local(self):
        """Test weight-one rotations become named local gates."""
        rotation = PauliRotation(PauliString.from_label('IZ'), 7)
        s = schedule(Circuit(2, [rotation]), Architecture.linear(2))
        assert depth(s).injection_layers == 0
        assert s.tail == [SingleQubit(1, 'S')]

    def test_out_of_range_gate(self):
        """Test gates beyond the register are rejected."""
        with pytest.raises(ValidationError):
            Circuit(2, [Cnot(0, 3)])

    def test_dual_groups_respect_qubit_disjointness(self):
        """Test cross-group gates never share qubits."""
        c = Circuit(5, [FanOut(0, (4,)), FanOut(2, (4,)), FanOut(1, (3,))])
        s = schedule(c, Architecture.dual(5))
        validate_schedule(s)
        assert simulate(s) == c.simulate()

    @pytest.mark.parametrize('policy', [SchedulePolicy.AS_EARLY, SchedulePolicy.AS_LATE])
    @pytest.mark.parametrize('arch', ['linear', 'dual'])
    def test_schedule_preserves_semantics(self, policy, arch):
        """Test simulate(schedule(c)) equals the flat circuit."""
        rng = np.random.default_rng(17)
        for _ in range(100):
            n = int(rng.integers(2, 6))
            c = Circuit(n, [random_gate(rng, n) for _ in range(10)])
            architecture = Architecture.linear(n) if arch == 'linear' else Architecture.dual(n)
            s = schedule(c, architecture, policy)
            validate_schedule(s)
            assert simulate(s) == c.simulate()

    def test_alap_depth_and_semantics(self):
        """Test as-late packing keeps depth and semantics."""
        c = Circuit(4, [CliqueFlip((0, 1)), CliqueFlip((2, 3)), CliqueFlip((1, 2))])
        late = schedule(c, Architecture.linear(4), SchedulePolicy.AS_LATE)
        assert depth(late).injection_layers == 2
        assert simulate(late) == c.simulate()


class TestValidation:
    """Test schedule validation."""

    def test_overlapping_ranges_rejected(self):
        """Test a hand-built invalid layer is flagged."""
        s = Schedule(4, Architecture.linear(4))
        s.new_layer([[CliqueFlip((0, 2)), CliqueFlip((1, 3))]])
        with pytest.raises(SynthesisError):
            validate_schedule(s)

    def test_groups_sharing_qubits_rejected(self):
        """Test dual groups may not share qubits."""
        s = Schedule(4, Architecture.dual(4))
        s.new_layer([[CliqueFlip((0, 1))], [CliqueFlip((1, 3))]])
        with pytest.raises(SynthesisError):
            validate_schedule(s)

    def test_compacted_keeps_locals(self):
        """Test dropping empty layers keeps the local gates in order."""
        s = Schedule(2, Architecture.linear(2))
        s.new_layer([[]], before=[SingleQubit(0, 'H')])
        s.new_layer([[Cnot(0, 1)]], before=[SingleQubit(1, 'S')])
        compact = s.compacted()
        assert len(compact.layers) == 1
        assert compact.layers[0].before == [SingleQubit(0, 'H'), SingleQubit(1, 'S')]
        assert simulate(compact) == simulate(s)

    def test_extend_into_wider_dual_schedule(self):
        """Test a linear schedule appends onto a wider dual one in order."""
        first = Schedule(3, Architecture.linear(3))
        first.new_layer([[Cnot(0, 1)]])
        first.add_local([SingleQubit(2, 'H')])
        second = Schedule(3, Architecture.linear(3))
        second.new_layer([[Cnot(1, 2)]], before=[SingleQubit(0, 'S')])
        combined = Schedule(4, Architecture.dual(4))
        combined.extend(first)
        combined.extend(second)
        validate_schedule(combined)
        assert [len(layer.groups) for layer in combined.layers] == [2, 2]
        assert combined.layers[1].before == [SingleQubit(2, 'H'), SingleQubit(0, 'S')]
        expected = CliffordTableau.from_gates(4, first.gates() + second.gates())
        assert simulate(combined) == expected

    def test_extend_rejects_wider_source(self):
        """Test extending with more qubits fails."""
        with pytest.raises(ValidationError):
            Schedule(2, Architecture.linear(2)).extend(Schedule(3, Architecture.linear(3)))

    def test_swap_layer_kind(self):
        """Test swap layers accept only swaps."""
        s = Schedule(3, Architecture.linear(3))
        s.new_layer([[Cnot(0, 1)]], kind=LayerKind.SWAP)
        with pytest.raises(SynthesisError):
            validate_schedule(s)


class TestAngles:
    """Test angle parsing."""

    @pytest.mark.parametrize(
        'text, steps',
        [('pi/4', 1), ('3pi/4', 3), ('-pi/4', -1), ('pi/2', 2), ('pi', 4), ('0.7853981633974483', 1)],
    )
    def test_parse(self, text, steps):
        """Test accepted spellings."""
        assert parse_angle(text) == steps

    def test_non_clifford_angle_rejected(self):
        """Test pi/8 is rejected."""
        with pytest.raises(UnsupportedGateError):
            parse_angle('pi/8')
        with pytest.raises(UnsupportedGateError):
            parse_angle(0.3)

    def test_format(self):
        """Test formatting back to text."""
        assert format_angle(1) == 'pi/4'
        assert format_angle(-3) == '-3pi/4'
        assert format_angle(4) == 'pi'

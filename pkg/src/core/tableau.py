"""
Stabilizer tableau for Clifford unitaries and stabilizer states.

Row k < n is the image of X_k, row n + k the image of Z_k. Each row is
stored as x bits, z bits and a sign bit and read as a PauliString, so a
row with x = z = 1 on a qubit carries the letter Y.

When the tableau describes a state U|0...0>, rows n..2n-1 are the
stabilizers and rows 0..n-1 the destabilizers.
"""

from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterable, Optional, Tuple, Union

import numpy as np

from src.core.gates import (
    SINGLE_QUBIT_NAMES,
    Cnot,
    CliqueFlip,
    FanOut,
    Gate,
    PauliRotation,
    SingleQubit,
    Swap,
    XcxCliqueFlip,
    name_letters,
)
from src.core.gf2 import BitMatrix
from src.core.pauli import PauliString
from src.exceptions import UnsupportedGateError, ValidationError

SeedLike = Union[int, np.random.Generator, None]


def _generator(seed: SeedLike) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def _phase_exponent(x: np.ndarray, z: np.ndarray, r: np.ndarray) -> np.ndarray:
    """Exponent e with row = i^e X^x Z^z."""
    return (2 * r.astype(np.int64) + np.sum(x & z, axis=-1, dtype=np.int64)) % 4


def _sign_from_exponent(x: np.ndarray, z: np.ndarray, e: np.ndarray) -> np.ndarray:
    residue = (e - np.sum(x & z, axis=-1, dtype=np.int64)) % 4
    if np.any(residue % 2):
        raise ValidationError('Pauli product is not Hermitian')
    return (residue // 2).astype(np.uint8)


class CliffordTableau:
    """Clifford unitary as a signed symplectic tableau."""

    __slots__ = ('n', '_x', '_z', '_r')

    def __init__(
        self,
        x: np.ndarray,
        z: np.ndarray,
        signs: Optional[np.ndarray] = None,
        validate: bool = True,
    ):
        x = np.array(x, dtype=np.uint8) & 1
        z = np.array(z, dtype=np.uint8) & 1
        if x.ndim != 2 or x.shape != z.shape or x.shape[0] != 2 * x.shape[1]:
            raise ValidationError(f'Tableau blocks must be 2n x n, got {x.shape}')
        self.n = int(x.shape[1])
        self._x = x
        self._z = z
        if signs is None:
            signs = np.zeros(2 * self.n, dtype=np.uint8)
        self._r = np.array(signs, dtype=np.uint8).reshape(2 * self.n) & 1
        if validate and not self.is_valid():
            raise ValidationError('Tableau is not symplectic')

    # Construction -----------------------------------------------------

    @classmethod
    def identity(cls, n: int) -> 'CliffordTableau':
        if n < 1:
            raise ValidationError('A tableau needs at least one qubit')
        eye = np.eye(n, dtype=np.uint8)
        zero = np.zeros((n, n), dtype=np.uint8)
        return cls(
            np.concatenate([eye, zero]), np.concatenate([zero, eye]), validate=False
        )

    @classmethod
    def from_symplectic(
        cls, matrix: BitMatrix, signs: Optional[Iterable[int]] = None
    ) -> 'CliffordTableau':
        data = matrix.array
        rows, cols = data.shape
        if rows != cols or rows % 2:
            raise ValidationError(f'Symplectic matrix must be 2n x 2n, got {data.shape}')
        n = rows // 2
        sign_array = None if signs is None else np.array(list(signs), dtype=np.uint8)
        return cls(data[:, :n], data[:, n:], sign_array)

    @classmethod
    def from_gates(cls, n: int, gates: Iterable[Gate]) -> 'CliffordTableau':
        tableau = cls.identity(n)
        for gate in gates:
            tableau._apply_inplace(gate)
        return tableau

    def copy(self) -> 'CliffordTableau':
        return CliffordTableau(self._x.copy(), self._z.copy(), self._r.copy(), validate=False)

    # Accessors --------------------------------------------------------

    @property
    def symplectic(self) -> BitMatrix:
        return BitMatrix(np.concatenate([self._x, self._z], axis=1))

    @property
    def signs(self) -> np.ndarray:
        view = self._r.copy()
        view.flags.writeable = False
        return view

    @property
    def x_part(self) -> np.ndarray:
        return self._x.copy()

    @property
    def z_part(self) -> np.ndarray:
        return self._z.copy()

    def row(self, k: int) -> PauliString:
        return PauliString(self._x[k], self._z[k], int(self._r[k]))

    def image_of_x(self, qubit: int) -> PauliString:
        return self.row(qubit)

    def image_of_z(self, qubit: int) -> PauliString:
        return self.row(self.n + qubit)

    def stabilizers(self) -> Tuple[PauliString, ...]:
        return tuple(self.row(self.n + q) for q in range(self.n))

    def is_valid(self) -> bool:
        """Rows form a symplectic basis: M Lambda M^T = Lambda."""
        x = self._x.astype(np.int64)
        z = self._z.astype(np.int64)
        form = (x @ z.T + z @ x.T) % 2
        n = self.n
        expected = np.zeros((2 * n, 2 * n), dtype=np.int64)
        expected[:n, n:] = np.eye(n, dtype=np.int64)
        expected[n:, :n] = np.eye(n, dtype=np.int64)
        return bool(np.array_equal(form, expected))

    # Gate application -------------------------------------------------

    def apply(self, gate: Gate) -> 'CliffordTableau':
        """Tableau of this Clifford followed by gate."""
        result = self.copy()
        result._apply_inplace(gate)
        return result

    def apply_all(self, gates: Iterable[Gate]) -> 'CliffordTableau':
        result = self.copy()
        for gate in gates:
            result._apply_inplace(gate)
        return result

    def _check_range(self, qubits: Tuple[int, ...]) -> None:
        if qubits and max(qubits) >= self.n:
            raise ValidationError(
                f'Gate on qubits {qubits} does not fit in {self.n} qubits'
            )

    def _apply_inplace(self, gate: Gate) -> None:
        self._check_range(gate.qubits)
        if isinstance(gate, SingleQubit):
            for letter in name_letters(gate.name):
                self._letter(letter, gate.qubit)
        elif isinstance(gate, Cnot):
            self._cx(gate.control, gate.target)
        elif isinstance(gate, FanOut):
            for target in gate.targets:
                self._cx(gate.control, target)
        elif isinstance(gate, Swap):
            self._swap(gate.a, gate.b)
        elif isinstance(gate, XcxCliqueFlip):
            for q in gate.qubits:
                self._h(q)
            self._clique(gate.qubits)
            for q in gate.qubits:
                self._h(q)
        elif isinstance(gate, CliqueFlip):
            self._clique(gate.qubits)
        elif isinstance(gate, PauliRotation):
            self._rotate(gate.pauli, gate.quarter_turns)
        else:
            raise UnsupportedGateError(f'Cannot simulate gate {gate!r}')

    def _letter(self, letter: str, a: int) -> None:
        if letter == 'H':
            self._h(a)
        elif letter == 'S':
            self._s(a)
        elif letter == 'X':
            self._r ^= self._z[:, a]
        elif letter == 'Z':
            self._r ^= self._x[:, a]
        elif letter == 'Y':
            self._r ^= self._x[:, a] ^ self._z[:, a]
        else:
            raise UnsupportedGateError(f'Unknown gate letter {letter!r}')

    def _h(self, a: int) -> None:
        self._r ^= self._x[:, a] & self._z[:, a]
        column = self._x[:, a].copy()
        self._x[:, a] = self._z[:, a]
        self._z[:, a] = column

    def _s(self, a: int) -> None:
        self._r ^= self._x[:, a] & self._z[:, a]
        self._z[:, a] ^= self._x[:, a]

    def _cx(self, a: int, b: int) -> None:
        xa, xb, za, zb = self._x[:, a], self._x[:, b], self._z[:, a], self._z[:, b]
        self._r ^= xa & zb & (xb ^ za ^ 1)
        self._x[:, b] = xb ^ xa
        self._z[:, a] = za ^ zb

    def _cz(self, a: int, b: int) -> None:
        xa, xb, za, zb = self._x[:, a], self._x[:, b], self._z[:, a], self._z[:, b]
        self._r ^= xa & xb & (za ^ zb)
        self._z[:, a] = za ^ xb
        self._z[:, b] = zb ^ xa

    def _clique(self, qubits: Tuple[int, ...]) -> None:
        for i, a in enumerate(qubits):
            for b in qubits[i + 1:]:
                self._cz(a, b)

    def _swap(self, a: int, b: int) -> None:
        self._x[:, [a, b]] = self._x[:, [b, a]]
        self._z[:, [a, b]] = self._z[:, [b, a]]

    def _rotate(self, pauli: PauliString, quarter_turns: int) -> None:
        """Conjugate by exp(i k pi/4 P): anticommuting Q goes to i^k P Q for odd k."""
        if pauli.n != self.n:
            raise ValidationError(
                f'Rotation Pauli has {pauli.n} qubits, tableau has {self.n}'
            )
        k = quarter_turns % 4
        if k == 0:
            return
        px, pz = pauli.x, pauli.z
        anti = (np.sum(self._x & pz, axis=1) + np.sum(self._z & px, axis=1)) % 2 == 1
        if not anti.any():
            return
        if k == 2:
            self._r[anti] ^= 1
            return
        qx, qz, qr = self._x[anti], self._z[anti], self._r[anti]
        e_p = int(_phase_exponent(px, pz, np.array(pauli.sign)))
        e_q = _phase_exponent(qx, qz, qr)
        cross = np.sum(pz & qx, axis=1, dtype=np.int64)
        e = (k + e_p + e_q + 2 * cross) % 4
        new_x = qx ^ px
        new_z = qz ^ pz
        self._r[anti] = _sign_from_exponent(new_x, new_z, e)
        self._x[anti] = new_x
        self._z[anti] = new_z

    # Algebra ----------------------------------------------------------

    def conjugate(self, pauli: PauliString) -> PauliString:
        """Image U P U^dagger of a Pauli under this Clifford."""
        if pauli.n != self.n:
            raise ValidationError('Pauli size does not match tableau')
        e_rows = _phase_exponent(self._x, self._z, self._r)
        acc_e = int(_phase_exponent(pauli.x, pauli.z, np.array(pauli.sign)))
        acc_x = np.zeros(self.n, dtype=np.uint8)
        acc_z = np.zeros(self.n, dtype=np.uint8)
        rows = [int(j) for j in np.nonzero(pauli.x)[0]]
        rows += [self.n + int(j) for j in np.nonzero(pauli.z)[0]]
        for k in rows:
            acc_e += int(e_rows[k]) + 2 * int(np.sum(acc_z & self._x[k]))
            acc_x ^= self._x[k]
            acc_z ^= self._z[k]
        sign = _sign_from_exponent(acc_x, acc_z, np.array(acc_e % 4))
        return PauliString(acc_x, acc_z, int(sign))

    def compose(self, other: 'CliffordTableau') -> 'CliffordTableau':
        """Tableau of this Clifford followed by other."""
        if other.n != self.n:
            raise ValidationError(f'Cannot compose {self.n} and {other.n} qubit tableaux')
        images = [other.conjugate(self.row(k)) for k in range(2 * self.n)]
        return CliffordTableau(
            np.stack([p.x for p in images]),
            np.stack([p.z for p in images]),
            np.array([p.sign for p in images], dtype=np.uint8),
            validate=False,
        )

    def then(self, other: 'CliffordTableau') -> 'CliffordTableau':
        return self.compose(other)

    def inverse(self) -> 'CliffordTableau':
        n = self.n
        matrix = self.symplectic.array.astype(np.int64)
        # Inverse of a symplectic M is Lambda M^T Lambda
        swap = np.block(
            [
                [np.zeros((n, n), dtype=np.int64), np.eye(n, dtype=np.int64)],
                [np.eye(n, dtype=np.int64), np.zeros((n, n), dtype=np.int64)],
            ]
        )
        inverse_matrix = (swap @ matrix.T @ swap) % 2
        candidate = CliffordTableau(
            inverse_matrix[:, :n], inverse_matrix[:, n:], validate=False
        )
        residual = self.compose(candidate).signs
        if residual.any():
            fix = BitMatrix(matrix).inverse() @ residual
            candidate = CliffordTableau(
                inverse_matrix[:, :n], inverse_matrix[:, n:], fix, validate=False
            )
        return candidate

    def equals(self, other: 'CliffordTableau', up_to_sign: bool = False) -> bool:
        if other.n != self.n:
            return False
        same = np.array_equal(self._x, other._x) and np.array_equal(self._z, other._z)
        if up_to_sign:
            return bool(same)
        return bool(same and np.array_equal(self._r, other._r))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CliffordTableau):
            return NotImplemented
        return self.equals(other)

    def __hash__(self) -> int:
        return hash((self.n, self._x.tobytes(), self._z.tobytes(), self._r.tobytes()))

    def embed(self, total: int) -> 'CliffordTableau':
        """This Clifford on the first n qubits of a larger register."""
        if total < self.n:
            raise ValidationError('Cannot embed into a smaller register')
        if total == self.n:
            return self.copy()
        result = CliffordTableau.identity(total)
        n = self.n
        for k in range(2 * n):
            target_row = k if k < n else total + (k - n)
            result._x[target_row, :n] = self._x[k]
            result._z[target_row, :n] = self._z[k]
            result._r[target_row] = self._r[k]
        return result

    def restrict(self, n: int) -> 'CliffordTableau':
        """Inverse of embed; the dropped qubits must act trivially."""
        total = self.n
        keep = list(range(n)) + list(range(total, total + n))
        x = self._x[keep][:, :n]
        z = self._z[keep][:, :n]
        restricted = CliffordTableau(x, z, self._r[keep], validate=False)
        if not self.equals(restricted.embed(total)):
            raise ValidationError('Tableau acts on qubits beyond the first n')
        return restricted

    def __repr__(self) -> str:
        return f'CliffordTableau(n={self.n})'


def identity(n: int) -> CliffordTableau:
    return CliffordTableau.identity(n)


def apply_gate(tableau: CliffordTableau, gate: Gate) -> CliffordTableau:
    return tableau.apply(gate)


def compose(first: CliffordTableau, second: CliffordTableau) -> CliffordTableau:
    return first.compose(second)


def inverse(tableau: CliffordTableau) -> CliffordTableau:
    return tableau.inverse()


def equals(a: CliffordTableau, b: CliffordTableau, up_to_sign: bool = False) -> bool:
    return a.equals(b, up_to_sign=up_to_sign)


def sign_correction(actual: CliffordTableau, target: CliffordTableau) -> PauliString:
    """Pauli P with actual followed by P equal to target.

    Both tableaux must agree up to sign.
    """
    if not actual.equals(target, up_to_sign=True):
        raise ValidationError('Sign correction needs tableaux equal up to sign')
    n = actual.n
    flips = (actual.signs ^ target.signs).astype(np.uint8)
    x = np.zeros(n, dtype=np.uint8)
    z = np.zeros(n, dtype=np.uint8)
    for q in range(n):
        # P must anticommute with image(X_q) iff flips[q]; pair it with image(Z_q)
        if flips[q]:
            x ^= actual.row(n + q).x
            z ^= actual.row(n + q).z
        if flips[n + q]:
            x ^= actual.row(q).x
            z ^= actual.row(q).z
    return PauliString(x, z)


def pauli_layer(pauli: PauliString) -> Tuple[SingleQubit, ...]:
    """Single-qubit gates realizing a Pauli up to global phase."""
    return tuple(
        SingleQubit(q, pauli.letter(q)) for q in range(pauli.n) if pauli.letter(q) != 'I'
    )


@dataclass(frozen=True)
class MeasurementResult:
    outcome: int
    deterministic: bool
    state: CliffordTableau


def measure_pauli(
    state: CliffordTableau,
    pauli: PauliString,
    forced_outcome: Optional[int] = None,
    rng: SeedLike = None,
) -> MeasurementResult:
    """Measure a Pauli observable on the stabilizer state U|0...0>.

    Outcome 0 is the +1 eigenvalue. For a random outcome forced_outcome
    picks the branch; otherwise rng draws it. Deterministic outcomes
    ignore forced_outcome.
    """
    n = state.n
    if pauli.n != n:
        raise ValidationError('Observable size does not match state')
    post = state.copy()
    anti = (
        np.sum(post._x & pauli.z, axis=1) + np.sum(post._z & pauli.x, axis=1)
    ) % 2 == 1
    stabilizer_hits = [k for k in range(n, 2 * n) if anti[k]]

    if stabilizer_hits:
        p = stabilizer_hits[0]
        e_rows = _phase_exponent(post._x, post._z, post._r)
        for k in range(2 * n):
            # row p - n is replaced by the old row p below
            if k in (p, p - n) or not anti[k]:
                continue
            e = e_rows[k] + e_rows[p] + 2 * int(np.sum(post._z[k] & post._x[p]))
            new_x = post._x[k] ^ post._x[p]
            new_z = post._z[k] ^ post._z[p]
            post._r[k] = _sign_from_exponent(new_x, new_z, np.array(e % 4))
            post._x[k] = new_x
            post._z[k] = new_z
        if forced_outcome is None:
            outcome = int(_generator(rng).integers(0, 2))
        else:
            outcome = int(forced_outcome) & 1
        post._x[p - n] = state._x[p]
        post._z[p - n] = state._z[p]
        post._r[p - n] = state._r[p]
        post._x[p] = pauli.x
        post._z[p] = pauli.z
        post._r[p] = pauli.sign ^ outcome
        return MeasurementResult(outcome, False, post)

    e_rows = _phase_exponent(post._x, post._z, post._r)
    acc_e = 0
    acc_x = np.zeros(n, dtype=np.uint8)
    acc_z = np.zeros(n, dtype=np.uint8)
    for q in range(n):
        if anti[q]:
            k = n + q
            acc_e += int(e_rows[k]) + 2 * int(np.sum(acc_z & post._x[k]))
            acc_x ^= post._x[k]
            acc_z ^= post._z[k]
    if not (np.array_equal(acc_x, pauli.x) and np.array_equal(acc_z, pauli.z)):
        raise ValidationError('Observable is not in the stabilizer group up to sign')
    product_sign = int(_sign_from_exponent(acc_x, acc_z, np.array(acc_e % 4)))
    outcome = product_sign ^ pauli.sign
    return MeasurementResult(outcome, True, post)


def _random_symplectic(n: int, rng: np.random.Generator) -> np.ndarray:
    dim = 2 * n

    def form(u: np.ndarray, v: np.ndarray) -> int:
        return int(np.sum(u[:n] & v[n:]) + np.sum(u[n:] & v[:n])) % 2

    pairs = []

    def project(u: np.ndarray) -> np.ndarray:
        for a, b in pairs:
            u = u ^ (form(u, b) * a) ^ (form(u, a) * b)
        return u.astype(np.uint8)

    for _ in range(n):
        while True:
            v = project(rng.integers(0, 2, size=dim, dtype=np.uint8))
            if v.any():
                break
        while True:
            w = project(rng.integers(0, 2, size=dim, dtype=np.uint8))
            if form(v, w) == 1:
                break
        pairs.append((v, w))

    rows = np.zeros((dim, dim), dtype=np.uint8)
    for q, (v, w) in enumerate(pairs):
        rows[q] = v
        rows[n + q] = w
    return rows


def random_clifford(n: int, seed: SeedLike = None) -> CliffordTableau:
    """Uniformly random Clifford: random symplectic matrix and sign bits."""
    if n < 1:
        raise ValidationError('random_clifford needs n >= 1')
    rng = _generator(seed)
    rows = _random_symplectic(n, rng)
    signs = rng.integers(0, 2, size=2 * n, dtype=np.uint8)
    return CliffordTableau(rows[:, :n], rows[:, n:], signs)


@lru_cache(maxsize=1)
def _single_qubit_lookup() -> Dict[Tuple[int, ...], str]:
    lookup: Dict[Tuple[int, ...], str] = {}
    for name in SINGLE_QUBIT_NAMES:
        tableau = CliffordTableau.from_gates(1, [SingleQubit(0, name)])
        key = tuple(int(v) for v in np.concatenate(
            [tableau._x.ravel(), tableau._z.ravel(), tableau._r]
        ))
        lookup[key] = name
    return lookup


def single_qubit_name(tableau: CliffordTableau) -> str:
    """Canonical name of a one-qubit Clifford tableau."""
    if tableau.n != 1:
        raise ValidationError('single_qubit_name expects a one-qubit tableau')
    key = tuple(int(v) for v in np.concatenate(
        [tableau._x.ravel(), tableau._z.ravel(), tableau._r]
    ))
    return _single_qubit_lookup()[key]


def merge_local_gates(gates: Iterable[SingleQubit]) -> Tuple[SingleQubit, ...]:
    """Fuse a run of single-qubit gates into at most one gate per qubit.

    Gates on different qubits commute, so only the per-qubit order matters.
    The result is ordered by qubit and drops identities.
    """
    per_qubit: Dict[int, CliffordTableau] = {}
    for gate in gates:
        current = per_qubit.setdefault(gate.qubit, CliffordTableau.identity(1))
        current._apply_inplace(SingleQubit(0, gate.name))
    merged = []
    for qubit in sorted(per_qubit):
        name = single_qubit_name(per_qubit[qubit])
        if name != 'I':
            merged.append(SingleQubit(qubit, name))
    return tuple(merged)

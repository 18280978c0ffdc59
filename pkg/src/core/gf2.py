"""
Linear algebra over GF(2).

BitMatrix is an immutable 0/1 matrix stored as a numpy uint8 array, one
byte per entry rather than packed machine words. Rank computations and
the minrank search pack each row into a Python integer (row_ints) and
work on those bit rows.
"""

from dataclasses import dataclass
from typing import Any, Iterable, List, Literal, Sequence, Tuple, Union

import numpy as np

from src.exceptions import SynthesisError, ValidationError

MatrixLike = Union['BitMatrix', np.ndarray, Sequence[Sequence[int]]]
MinrankMode = Literal['auto', 'exact', 'heuristic']


class BitMatrix:
    """Immutable matrix over GF(2)."""

    __slots__ = ('_data',)

    def __init__(self, data: MatrixLike):
        if isinstance(data, BitMatrix):
            array = data._data
        else:
            array = np.asarray(data, dtype=np.int64)
        if array.ndim != 2:
            raise ValidationError(f'BitMatrix needs a 2-D array, got ndim={array.ndim}')
        array = (array & 1).astype(np.uint8)
        array.flags.writeable = False
        self._data = array

    # Construction -----------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> 'BitMatrix':
        return cls(np.zeros((rows, cols), dtype=np.uint8))

    @classmethod
    def identity(cls, n: int) -> 'BitMatrix':
        return cls(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_rows(cls, rows: Iterable[Union[str, Sequence[int]]]) -> 'BitMatrix':
        """Build from '0101' strings or integer sequences."""
        parsed: List[List[int]] = []
        for row in rows:
            if isinstance(row, str):
                if any(ch not in '01' for ch in row):
                    raise ValidationError(f'Row {row!r} is not a bit string')
                parsed.append([int(ch) for ch in row])
            else:
                parsed.append([int(v) for v in row])
        if not parsed:
            return cls.zeros(0, 0)
        width = len(parsed[0])
        if any(len(r) != width for r in parsed):
            raise ValidationError('Rows have unequal length')
        return cls(np.array(parsed, dtype=np.int64).reshape(len(parsed), width))

    @classmethod
    def diagonal_matrix(cls, bits: Sequence[int]) -> 'BitMatrix':
        return cls(np.diag(np.asarray(bits, dtype=np.uint8)))

    # Accessors --------------------------------------------------------

    @property
    def rows(self) -> int:
        return int(self._data.shape[0])

    @property
    def cols(self) -> int:
        return int(self._data.shape[1])

    @property
    def shape(self) -> Tuple[int, int]:
        return self.rows, self.cols

    @property
    def array(self) -> np.ndarray:
        """Read-only view of the underlying 0/1 array."""
        return self._data

    def copy_array(self) -> np.ndarray:
        """Writable copy of the underlying array."""
        return self._data.copy()

    def __getitem__(self, key: Any) -> Any:
        value = self._data[key]
        if np.ndim(value) == 0:
            return int(value)
        return value

    def row(self, i: int) -> np.ndarray:
        return self._data[i]

    def col(self, j: int) -> np.ndarray:
        return self._data[:, j]

    def diagonal(self) -> np.ndarray:
        return np.diag(self._data).copy()

    def row_ints(self) -> List[int]:
        """Rows packed as integers, bit j holding column j."""
        packed: List[int] = []
        for r in self._data:
            value = 0
            for j in np.nonzero(r)[0]:
                value |= 1 << int(j)
            packed.append(value)
        return packed

    # Algebra ----------------------------------------------------------

    def __matmul__(self, other: Any) -> Any:
        if isinstance(other, BitMatrix):
            product = self._data.astype(np.int64) @ other._data.astype(np.int64)
            return BitMatrix(product & 1)
        vector = np.asarray(other, dtype=np.int64)
        return ((self._data.astype(np.int64) @ vector) & 1).astype(np.uint8)

    def __xor__(self, other: 'BitMatrix') -> 'BitMatrix':
        if self.shape != other.shape:
            raise ValidationError(f'Shape mismatch {self.shape} vs {other.shape}')
        return BitMatrix(self._data ^ other._data)

    __add__ = __xor__

    @property
    def T(self) -> 'BitMatrix':
        return BitMatrix(self._data.T)

    def transpose(self) -> 'BitMatrix':
        return self.T

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_symmetric(self) -> bool:
        return self.is_square() and bool(np.array_equal(self._data, self._data.T))

    def is_zero(self) -> bool:
        return not self._data.any()

    def is_alternating(self) -> bool:
        """Symmetric with zero diagonal."""
        return self.is_symmetric() and not np.diag(self._data).any()

    def rank(self) -> int:
        return rank(self)

    def is_invertible(self) -> bool:
        return self.is_square() and rank(self) == self.rows

    def inverse(self) -> 'BitMatrix':
        """Gauss-Jordan inverse; raises ValidationError when singular."""
        if not self.is_square():
            raise ValidationError(f'Cannot invert non-square matrix {self.shape}')
        n = self.rows
        work = np.concatenate(
            [self._data.copy(), np.eye(n, dtype=np.uint8)], axis=1
        )
        for col in range(n):
            pivot_rows = np.nonzero(work[col:, col])[0]
            if pivot_rows.size == 0:
                raise ValidationError('Matrix is singular over GF(2)')
            pivot = col + int(pivot_rows[0])
            if pivot != col:
                work[[col, pivot]] = work[[pivot, col]]
            others = np.nonzero(work[:, col])[0]
            for r in others:
                if r != col:
                    work[r] ^= work[col]
        return BitMatrix(work[:, n:])

    def without_diagonal(self) -> 'BitMatrix':
        data = self._data.copy()
        np.fill_diagonal(data, 0)
        return BitMatrix(data)

    def upper_triangle(self) -> 'BitMatrix':
        """Strictly upper triangular part."""
        return BitMatrix(np.triu(self._data, k=1))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.array_equal(self._data, other._data))

    def __hash__(self) -> int:
        return hash((self.shape, self._data.tobytes()))

    def __repr__(self) -> str:
        body = ','.join(''.join(str(int(v)) for v in r) for r in self._data)
        return f'BitMatrix({self.rows}x{self.cols}:{body})'

    def to_strings(self) -> List[str]:
        return [''.join(str(int(v)) for v in r) for r in self._data]


def _rank_of_ints(rows: Iterable[int]) -> int:
    basis: dict = {}
    for value in rows:
        while value:
            lead = value.bit_length() - 1
            if lead in basis:
                value ^= basis[lead]
            else:
                basis[lead] = value
                break
    return len(basis)


def rank(matrix: MatrixLike) -> int:
    """Rank over GF(2)."""
    return _rank_of_ints(BitMatrix(matrix).row_ints())


def rref(matrix: MatrixLike) -> Tuple[BitMatrix, List[int]]:
    """Reduced row echelon form and the pivot column of each nonzero row."""
    work = BitMatrix(matrix).copy_array()
    rows, cols = work.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        candidates = np.nonzero(work[r:, c])[0]
        if candidates.size == 0:
            continue
        pivot = r + int(candidates[0])
        if pivot != r:
            work[[r, pivot]] = work[[pivot, r]]
        for other in np.nonzero(work[:, c])[0]:
            if other != r:
                work[other] ^= work[r]
        pivots.append(c)
        r += 1
    return BitMatrix(work), pivots


def solve(matrix: MatrixLike, rhs: Sequence[int]) -> np.ndarray:
    """Solve A x = b for square invertible A."""
    return BitMatrix(matrix).inverse() @ np.asarray(rhs, dtype=np.uint8)


def outer(u: Sequence[int], v: Sequence[int]) -> BitMatrix:
    return BitMatrix(np.outer(np.asarray(u, dtype=np.uint8), np.asarray(v, dtype=np.uint8)))


def lempel_factor(matrix: MatrixLike) -> BitMatrix:
    """Factor a symmetric S as F @ F.T with the fewest possible columns.

    Uses rank(S) columns for a non-alternating S and rank(S) + 1 for an
    alternating one.
    """
    S = BitMatrix(matrix)
    if not S.is_symmetric():
        raise ValidationError('lempel_factor requires a symmetric matrix')
    n = S.rows
    work = S.copy_array()
    factors: List[np.ndarray] = []

    def peel(f: np.ndarray) -> None:
        nonlocal work
        work = work ^ np.outer(f, f).astype(np.uint8)
        factors.append(f.copy())

    if work.any() and not np.diag(work).any():
        first = int(np.nonzero(work.any(axis=1))[0][0])
        peel(work[:, first].copy())

    while work.any():
        d = np.diag(work).copy()
        ones = np.nonzero(d)[0]
        if ones.size == 0:
            raise SynthesisError('Lempel reduction reached an alternating residue')
        chosen = None
        for i in ones:
            if not np.array_equal(work[:, i], d):
                chosen = work[:, i].copy()
                break
        if chosen is None:
            i = int(ones[0])
            for j in np.nonzero(d == 0)[0]:
                if work[:, j].any():
                    chosen = work[:, i] ^ work[:, j]
                    break
        if chosen is None:
            chosen = work[:, int(ones[0])].copy()
        peel(chosen)

    if not factors:
        return BitMatrix(np.zeros((n, 0), dtype=np.uint8))
    return BitMatrix(np.stack(factors, axis=1))


@dataclass(frozen=True)
class MinrankResult:
    """Minimum rank of G + D over diagonal D, with the witness diagonal."""

    value: int
    witness: Tuple[int, ...]
    exact: bool

    def witness_matrix(self) -> BitMatrix:
        return BitMatrix.diagonal_matrix(self.witness)


def _adjacency_of(graph: Any) -> BitMatrix:
    adjacency = getattr(graph, 'adjacency', graph)
    matrix = BitMatrix(adjacency)
    if not matrix.is_alternating():
        raise ValidationError('minrank2 expects a symmetric zero-diagonal adjacency')
    return matrix


def minrank2(graph: Any, exact_limit: int = 20, mode: MinrankMode = 'auto') -> MinrankResult:
    """Minimum rank of adjacency + diagonal over GF(2).

    Exhaustive for up to exact_limit vertices, enumerating diagonals in
    lexicographic order (d_0 most significant) and keeping the first
    minimum. Larger graphs use greedy single-entry flips. mode='exact'
    refuses graphs above the limit instead; mode='heuristic' always
    runs the greedy search.
    """
    if mode not in ('auto', 'exact', 'heuristic'):
        raise ValidationError(f'Unknown minrank mode {mode!r}')
    adjacency = _adjacency_of(graph)
    n = adjacency.rows
    if mode == 'exact' and n > exact_limit:
        raise ValidationError(
            f'Exact minrank is limited to {exact_limit} vertices, graph has {n}'
        )
    rows = adjacency.row_ints()
    if n == 0:
        return MinrankResult(0, (), True)

    if mode != 'heuristic' and n <= exact_limit:
        best_value = n + 1
        best_mask = 0
        for mask in range(1 << n):
            diagonal = [(mask >> (n - 1 - i)) & 1 for i in range(n)]
            value = _rank_of_ints(
                r ^ (1 << i) if diagonal[i] else r for i, r in enumerate(rows)
            )
            if value < best_value:
                best_value = value
                best_mask = mask
        witness = tuple((best_mask >> (n - 1 - i)) & 1 for i in range(n))
        return MinrankResult(best_value, witness, True)

    diagonal = [0] * n

    def value_of(bits: List[int]) -> int:
        return _rank_of_ints(r ^ (1 << i) if bits[i] else r for i, r in enumerate(rows))

    best_value = value_of(diagonal)
    improved = True
    while improved:
        improved = False
        for i in range(n):
            diagonal[i] ^= 1
            candidate = value_of(diagonal)
            if candidate < best_value:
                best_value = candidate
                improved = True
            else:
                diagonal[i] ^= 1
    return MinrankResult(best_value, tuple(diagonal), False)

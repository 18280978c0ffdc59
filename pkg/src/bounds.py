"""
Closed-form depth bounds.

Lower bounds come from counting: there are at least 2^(2n^2+n) Clifford
operations on n qubits, and each injection layer can only select among
so many gate choices. Logarithms are base 2. Upper bounds are the depths
each construction in src.synthesis guarantees.
"""

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Optional

from src.exceptions import ValidationError

LOG2_24 = math.log2(24)
SIX_ROOT_TWO = 6 * math.sqrt(2)
DEFAULT_GRID_CONSTANT = 9


def clifford_group_bits(n: int) -> int:
    """Lower bound on log2 of the number of n-qubit Clifford operations."""
    return 2 * n * n + n


def rotation_count_lower_bound(n: int) -> int:
    """Pauli rotations needed for some n-qubit Clifford: (2n^2+n)/(2n+1) = n."""
    if n < 1:
        raise ValidationError('Rotation count bound needs n >= 1')
    ratio = Fraction(clifford_group_bits(n), 2 * n + 1)
    if ratio.denominator != 1:
        raise ValidationError(f'Rotation count ratio is not integral for n={n}')
    return int(ratio)


def _depth_terms(n: int):
    numerator = clifford_group_bits(n) - n * LOG2_24
    denominator = n * math.log2(SIX_ROOT_TWO) - math.log2(SIX_ROOT_TWO / (SIX_ROOT_TWO - 1))
    return numerator, denominator


def injection_depth_lower_bound(n: int) -> float:
    """Injection layers some n-qubit Clifford needs; at least 0.648n - 2."""
    if n < 2:
        raise ValidationError('Injection depth bound needs n >= 2')
    numerator, denominator = _depth_terms(n)
    return numerator / denominator


def simplified_depth_bound(n: int) -> float:
    return 0.648 * n - 2


def grid_width(n: int) -> int:
    """Side of the smallest square grid holding n sites."""
    if n < 1:
        raise ValidationError('Grid needs at least one site')
    return math.isqrt(n - 1) + 1


def swap_layer_bound(n: int, constant: int = DEFAULT_GRID_CONSTANT) -> int:
    return constant * grid_width(n)


UPPER_BOUNDS: Dict[str, Callable[[int], int]] = {
    'cz-disentangle': lambda n: max(n - 1, 0),
    'cz-minrank': lambda n: n + 1,
    'cz-bipartite': lambda n: math.ceil(n / 2) + 1,
    'cz-stacked': lambda n: n + 1,
    'cx-fanout': lambda n: n,
    'cx-exact': lambda n: max(2 * n - 1, 0),
    'hfree': lambda n: n,
    'hfree-exact': lambda n: max(2 * n - 1, 0),
    'graph-state-linear': lambda n: max(n - 1, 0),
    'graph-state-dual': lambda n: math.ceil(n / 2) + 1,
    'linear': lambda n: 2 * n + 1,
    'dual': lambda n: math.ceil(3 * n / 2) + 1,
}


def upper_bound(route: str, n: int) -> int:
    """Injection depth a construction guarantees on n qubits."""
    try:
        formula = UPPER_BOUNDS[route]
    except KeyError:
        raise ValidationError(f'No depth bound for route {route!r}') from None
    return formula(n)


@dataclass(frozen=True)
class BoundReport:
    n: int
    rotation_count_bound: int
    injection_depth_bound: Optional[float]
    numerator: Optional[float]
    denominator: Optional[float]
    linear_upper: int
    dual_upper: int
    construction_bounds: Dict[str, int]

    @property
    def simplified_bound(self) -> float:
        return simplified_depth_bound(self.n)


def bound_report(n: int) -> BoundReport:
    """All bounds for n qubits with the terms of the depth formula."""
    numerator = denominator = value = None
    if n >= 2:
        numerator, denominator = _depth_terms(n)
        value = numerator / denominator
    return BoundReport(
        n=n,
        rotation_count_bound=rotation_count_lower_bound(n),
        injection_depth_bound=value,
        numerator=numerator,
        denominator=denominator,
        linear_upper=upper_bound('linear', n),
        dual_upper=upper_bound('dual', n),
        construction_bounds={name: formula(n) for name, formula in UPPER_BOUNDS.items()},
    )

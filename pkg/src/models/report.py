"""
Report models for the command line front end.
Every report carries the schema version so JSON output stays comparable
across commands and releases.
"""

from typing import Dict, List, Optional

from pydantic import BaseModel, Field

SCHEMA_VERSION = '1'


class ReportBase(BaseModel):
    """Fields shared by every report."""

    schema_version: str = Field(SCHEMA_VERSION, description="Report schema version")
    command: str = Field(..., description="Command that produced the report")


class SynthesisReport(ReportBase):
    """Outcome of synthesizing one input file."""

    command: str = 'synth'
    input_path: Optional[str] = Field(None, description="Input file, if read from disk")
    input_kind: str = Field(..., description="tableau, graph or matrix")
    route: str = Field(..., description="Route that produced the schedule")
    architecture: str = Field(..., description="linear or dual")
    n: int = Field(..., ge=0, description="Logical qubits of the input")
    sites: int = Field(..., ge=0, description="Qubit sites the schedule acts on")
    injection_depth: int = Field(..., ge=0, description="GHZ injection layers")
    swap_layers: int = Field(0, ge=0, description="Nearest-neighbour swap layers")
    weighted_depth: float = Field(..., description="Injection layers plus weighted swap layers")
    bound: int = Field(..., description="Injection depth the route guarantees")
    within_bound: bool = Field(..., description="Whether injection_depth <= bound")
    lower_bound: Optional[float] = Field(
        None, description="Counting lower bound on injection depth for n qubits"
    )
    verified: bool = Field(..., description="Simulation matched the target")
    pauli: Optional[str] = Field(None, description="Pauli layer applied after the schedule")
    permutation: Optional[List[int]] = Field(
        None, description="Leftover qubit permutation, sigma[i] is where qubit i ends up"
    )
    candidates: Dict[str, int] = Field(
        default_factory=dict, description="Injection depth of every route tried"
    )
    stats: Dict[str, int] = Field(default_factory=dict, description="Route-specific counts")
    schedule_path: Optional[str] = Field(None, description="Where the schedule was written")


class VerifyReport(ReportBase):
    """Outcome of checking a schedule against a target."""

    command: str = 'verify'
    passed: bool = Field(..., description="Schedule equals target up to a Pauli layer")
    exact: bool = Field(False, description="Schedule equals target including signs")
    residual_pauli: Optional[str] = Field(
        None, description="Pauli layer that fixes the signs when passed"
    )
    message: str = Field('', description="Human readable verdict")


class BenchRow(BaseModel):
    """Depth statistics of one route at one qubit count."""

    n: int = Field(..., ge=1)
    route: str
    samples: int = Field(..., ge=1)
    max_depth: int
    mean_depth: float
    max_swap_layers: int = 0
    bound: int
    within_bound: bool
    all_verified: bool = Field(..., description="Every sample simulated to its target")
    lower_bound: Optional[float] = None


class MinrankStats(BaseModel):
    """minrank2 of G(n, 1/2) samples and the clique counts synthesized for them."""

    n: int = Field(..., ge=1)
    samples: int = Field(..., ge=1)
    mean_minrank: float
    min_minrank: int
    max_minrank: int
    mean_ratio: float = Field(..., description="Mean minrank divided by n")
    max_cliques: int = Field(..., description="Largest clique count from minrank synthesis")
    exact: bool = Field(..., description="Whether every minrank was found exhaustively")


class BenchReport(ReportBase):
    """Benchmark table over a range of qubit counts."""

    command: str = 'bench'
    seed: int
    samples: int
    rows: List[BenchRow] = Field(default_factory=list)
    minrank: List[MinrankStats] = Field(default_factory=list)


class BoundRow(BaseModel):
    """Closed-form bounds for one qubit count."""

    n: int = Field(..., ge=1)
    rotation_count_bound: int
    injection_depth_bound: Optional[float] = None
    simplified_bound: float
    numerator: Optional[float] = None
    denominator: Optional[float] = None
    linear_upper: int
    dual_upper: int
    swap_layer_bound: int
    construction_bounds: Dict[str, int] = Field(default_factory=dict)


class BoundsReport(ReportBase):
    """Bound table over a range of qubit counts."""

    command: str = 'bounds'
    rows: List[BoundRow] = Field(default_factory=list)


class GadgetRow(BaseModel):
    """Branch verification of one gadget."""

    name: str
    data: int
    ancillae: int
    branches: int
    passed: bool
    failing_branch: Optional[str] = None
    reason: str = ''


class GadgetsReport(ReportBase):
    """Branch verification of the gadget library."""

    command: str = 'gadget'
    rows: List[GadgetRow] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)

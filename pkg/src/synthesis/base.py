"""
Base synthesizer interface and factory for creating synthesizers.
Implements Factory pattern over the synthesis routes.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import ClassVar, Dict, List, Optional, Tuple, Type, Union

from src.bounds import upper_bound
from src.config.config_manager import AppConfig, ArchitectureName, ConfigManager, InputKind
from src.core.circuit import Architecture, Schedule, depth
from src.core.gf2 import BitMatrix
from src.core.pauli import PauliString
from src.core.tableau import CliffordTableau
from src.exceptions import CliffordSynthError, ConfigurationError, ValidationError
from src.synthesis.clifford_synth import synth_dual, synth_linear
from src.synthesis.cx_synth import linear_tableau, permutation_tableau, synth_fanout_exact
from src.synthesis.cz_synth import CzGraph, clique_schedule, synth_bipartite, synth_disentangle, synth_minrank
from src.synthesis.hfree_synth import synth_hfree
from src.utils.logger import LoggerMixin

Payload = Union[BitMatrix, CliffordTableau]


@dataclass(frozen=True)
class SynthesisProblem:
    """A parsed input: a CZ graph, a CNOT transform or a full tableau."""

    kind: InputKind
    payload: Payload

    @property
    def n(self) -> int:
        if isinstance(self.payload, CliffordTableau):
            return self.payload.n
        return self.payload.rows

    def as_graph(self) -> CzGraph:
        if self.kind != 'graph':
            raise ValidationError(f'Route needs a graph input, got a {self.kind}')
        return CzGraph(self.payload)

    def as_matrix(self) -> BitMatrix:
        if self.kind != 'matrix':
            raise ValidationError(f'Route needs a matrix input, got a {self.kind}')
        return BitMatrix(self.payload)

    def as_tableau(self) -> CliffordTableau:
        if self.kind == 'graph':
            return CzGraph(self.payload).to_tableau()
        if self.kind == 'matrix':
            return linear_tableau(self.payload)
        return self.payload


@dataclass
class SynthesisResult:
    """A schedule and the Clifford its simulation must equal.

    target is the input Clifford, embedded into the schedule's sites and
    followed by the inverse of any leftover permutation.
    """

    route: str
    n: int
    schedule: Schedule
    target: CliffordTableau
    bound: int
    pauli: Optional[PauliString] = None
    permutation: Optional[Tuple[int, ...]] = None
    stats: Dict[str, int] = field(default_factory=dict)

    @property
    def architecture(self) -> str:
        return self.schedule.architecture.kind.value

    @property
    def injection_depth(self) -> int:
        return depth(self.schedule).injection_layers

    @property
    def swap_depth(self) -> int:
        return depth(self.schedule).swap_layers


class BaseSynthesizer(ABC, LoggerMixin):
    """Base interface for all synthesis routes."""

    route: ClassVar[str]
    input_kind: ClassVar[InputKind]
    architecture: ClassVar[ArchitectureName]
    bound_key: ClassVar[str]

    def __init__(self, config: Optional[AppConfig] = None):
        self.config = config or AppConfig()

    def bound(self, n: int) -> int:
        return upper_bound(self.bound_key, n)

    def synthesize(self, problem: SynthesisProblem) -> SynthesisResult:
        """Run the route and log its depth."""
        try:
            result = self._synthesize(problem)
        except CliffordSynthError as e:
            self.log_error(e, 'synthesize', route=self.route, n=problem.n)
            raise
        self.log_operation(
            'synthesized',
            route=self.route,
            n=result.n,
            injection_depth=result.injection_depth,
            swap_layers=result.swap_depth,
            bound=result.bound,
            **result.stats,
        )
        return result

    @abstractmethod
    def _synthesize(self, problem: SynthesisProblem) -> SynthesisResult:
        pass

    def _result(self, problem: SynthesisProblem, schedule: Schedule, target: CliffordTableau, **extra) -> SynthesisResult:
        return SynthesisResult(
            route=self.route,
            n=problem.n,
            schedule=schedule,
            target=target,
            bound=self.bound(problem.n),
            **extra,
        )


class CzMinrankSynthesizer(BaseSynthesizer):
    route = 'cz-minrank'
    input_kind = 'graph'
    architecture = 'linear'
    bound_key = 'cz-minrank'

    def _synthesize(self, problem: SynthesisProblem) -> SynthesisResult:
        graph = problem.as_graph()
        cliques = synth_minrank(graph, self.config.minrank_exact_limit, self.config.minrank_mode)
        schedule = clique_schedule(graph.n, cliques, Architecture.linear(graph.n))
        return self._result(problem, schedule, graph.to_tableau(), stats={'cliques': len(cliques)})


class CzDisentangleSynthesizer(BaseSynthesizer):
    route = 'cz-disentangle'
    input_kind = 'graph'
    architecture = 'linear'
    bound_key = 'cz-disentangle'

    def _synthesize(self, problem: SynthesisProblem) -> SynthesisResult:
        graph = problem.as_graph()
        cliques = synth_disentangle(graph)
        schedule = clique_schedule(graph.n, cliques, Architecture.linear(graph.n))
        return self._result(problem, schedule, graph.to_tableau(), stats={'cliques': len(cliques)})


class CzBipartiteSynthesizer(BaseSynthesizer):
    route = 'cz-bipartite'
    input_kind = 'graph'
    architecture = 'dual'
    bound_key = 'cz-bipartite'

    def _synthesize(self, problem: SynthesisProblem) -> SynthesisResult:
        graph = problem.as_graph()
        schedule = synth_bipartite(graph)
        cliques = sum(len(layer.gates()) for layer in schedule.layers)
        return self._result(problem, schedule, graph.to_tableau(), stats={'cliques': cliques})


class CxSynthesizer(BaseSynthesizer):
    route = 'cx'
    input_kind = 'matrix'
    architecture = 'linear'
    bound_key = 'cx-exact'

    def _synthesize(self, problem: SynthesisProblem) -> SynthesisResult:
        matrix = problem.as_matrix()
        schedule = synth_fanout_exact(matrix)
        fanouts = sum(len(layer.gates()) for layer in schedule.layers)
        return self._result(problem, schedule, linear_tableau(matrix), stats={'gates': fanouts})


class HfreeSynthesizer(BaseSynthesizer):
    """At most n fan-outs; the leftover permutation is reported, not routed."""

    route = 'hfree'
    input_kind = 'matrix'
    architecture = 'linear'
    bound_key = 'hfree'

    def _synthesize(self, problem: SynthesisProblem) -> SynthesisResult:
        matrix = problem.as_matrix()
        n = matrix.rows
        schedule, sigma = synth_hfree((), matrix, CzGraph.empty(n))
        target = linear_tableau(matrix).then(permutation_tableau(sigma).inverse())
        return self._result(problem, schedule, target, permutation=tuple(sigma))


class LinearCliffordSynthesizer(BaseSynthesizer):
    route = 'linear'
    input_kind = 'tableau'
    architecture = 'linear'
    bound_key = 'linear'

    def _synthesize(self, problem: SynthesisProblem) -> SynthesisResult:
        tableau = problem.as_tableau()
        synthesis = synth_linear(tableau)
        return self._result(problem, synthesis.schedule, tableau, pauli=synthesis.pauli)


class DualCliffordSynthesizer(BaseSynthesizer):
    route = 'dual'
    input_kind = 'tableau'
    architecture = 'dual'
    bound_key = 'dual'

    def _synthesize(self, problem: SynthesisProblem) -> SynthesisResult:
        tableau = problem.as_tableau()
        synthesis = synth_dual(tableau, self.config.grid_routing_constant)
        return self._result(
            problem,
            synthesis.schedule,
            synthesis.target(tableau),
            pauli=synthesis.pauli,
            permutation=tuple(synthesis.permutation),
        )


DEFAULT_SYNTHESIZERS: Tuple[Type[BaseSynthesizer], ...] = (
    CzMinrankSynthesizer,
    CzDisentangleSynthesizer,
    CzBipartiteSynthesizer,
    CxSynthesizer,
    HfreeSynthesizer,
    LinearCliffordSynthesizer,
    DualCliffordSynthesizer,
)

AUTO_ROUTES: Dict[Tuple[str, str], Tuple[str, ...]] = {
    ('graph', 'linear'): ('cz-minrank', 'cz-disentangle'),
    ('graph', 'dual'): ('cz-bipartite',),
    ('matrix', 'linear'): ('cx',),
    ('matrix', 'dual'): ('cx',),
    ('tableau', 'linear'): ('linear',),
    ('tableau', 'dual'): ('dual',),
}


class SynthesizerFactory(LoggerMixin):
    """Factory for creating synthesizer instances."""

    def __init__(self, config_manager: Optional[ConfigManager] = None):
        self.config_manager = config_manager
        self.config = config_manager.config if config_manager else AppConfig()
        self._synthesizers: Dict[str, Type[BaseSynthesizer]] = {}
        self._register_default_synthesizers()

    def _register_default_synthesizers(self) -> None:
        for synthesizer_class in DEFAULT_SYNTHESIZERS:
            self._synthesizers[synthesizer_class.route] = synthesizer_class

    def register_synthesizer(self, name: str, synthesizer_class: Type[BaseSynthesizer]) -> None:
        """Register a new synthesis route."""
        self._synthesizers[name] = synthesizer_class
        self.log_operation('registered_synthesizer', route=name)

    def available_routes(self) -> List[str]:
        routes = sorted(self._synthesizers)
        if self.config.synthesis_routes:
            enabled = {r.name for r in self.config.synthesis_routes if r.enabled}
            routes = [r for r in routes if r in enabled]
        return routes

    def create(self, route: str) -> BaseSynthesizer:
        """Create the synthesizer for a route, honouring disabled routes."""
        if route not in self._synthesizers:
            raise ConfigurationError(f'Synthesis route {route} not registered')
        if route not in self.available_routes():
            raise ConfigurationError(f'Synthesis route {route} is disabled')
        synthesizer = self._synthesizers[route](self.config)
        self.log_operation('created_synthesizer', route=route)
        return synthesizer

    def resolve(self, route: str, kind: InputKind, architecture: ArchitectureName) -> List[str]:
        """Candidate routes for a request; 'auto' picks by input kind and architecture."""
        if route != 'auto':
            return [route]
        candidates = [r for r in AUTO_ROUTES[(kind, architecture)] if r in self.available_routes()]
        if not candidates:
            raise ConfigurationError(f'No enabled route for {kind} input on the {architecture} bus')
        return candidates

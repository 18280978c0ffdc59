"""
Synthesis service layer.
Orchestrates parse, synthesize, verify, bound check and report for the CLI.
"""

from multiprocessing import Pool
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.bounds import bound_report, injection_depth_lower_bound, swap_layer_bound
from src.config.config_manager import AppConfig, ConfigManager, InputKind
from src.core.circuit import depth, simulate
from src.core.formats import (
    detect_kind,
    format_schedule,
    parse_graph,
    parse_matrix,
    parse_schedule,
    parse_tableau,
    write_text,
)
from src.core.gates import FanOut, PauliRotation
from src.core.gf2 import BitMatrix, minrank2
from src.core.pauli import PauliString
from src.core.tableau import random_clifford, sign_correction
from src.exceptions import BoundViolationError, ValidationError, VerificationError
from src.gadgets.library import (
    GHZ_METHODS,
    PRIMITIVES,
    expand,
    expansion_target,
    ghz_prep_variant,
    ghz_target,
    interconvert,
    primitive_target,
)
from src.gadgets.verify import verify_gadget
from src.models.report import (
    BenchReport,
    BenchRow,
    BoundRow,
    BoundsReport,
    GadgetRow,
    GadgetsReport,
    MinrankStats,
    SynthesisReport,
    VerifyReport,
)
from src.synthesis.base import (
    DEFAULT_SYNTHESIZERS,
    SynthesisProblem,
    SynthesisResult,
    SynthesizerFactory,
)
from src.synthesis.cz_synth import CzGraph, synth_minrank
from src.utils.logger import LoggerMixin

GADGET_FAMILIES = ('ghz', 'expand', 'interconvert')

_PARSERS = {'tableau': parse_tableau, 'graph': parse_graph, 'matrix': parse_matrix}
_ROUTE_CLASSES = {cls.route: cls for cls in DEFAULT_SYNTHESIZERS}

BenchItem = Tuple[str, str, int, int, int, dict]


def parse_problem(text: str, source: str = '<input>', kind: Optional[InputKind] = None) -> SynthesisProblem:
    """Parse an input file, detecting its kind when not given."""
    kind = kind or detect_kind(text)
    return SynthesisProblem(kind, _PARSERS[kind](text, source))


def lower_bound(n: int) -> Optional[float]:
    return injection_depth_lower_bound(n) if n >= 2 else None


def random_problem(kind: str, n: int, rng: np.random.Generator) -> SynthesisProblem:
    """A uniformly random graph, invertible matrix or Clifford on n qubits."""
    if kind == 'graph':
        upper = np.triu((rng.random((n, n)) < 0.5).astype(np.uint8), 1)
        return SynthesisProblem('graph', BitMatrix(upper ^ upper.T))
    if kind == 'matrix':
        while True:
            matrix = BitMatrix(rng.integers(0, 2, size=(n, n), dtype=np.uint8))
            if matrix.is_invertible():
                return SynthesisProblem('matrix', matrix)
    return SynthesisProblem('tableau', random_clifford(n, rng))


def sample_rng(seed: int, n: int, index: int) -> np.random.Generator:
    """Generator for one bench sample, independent of route and worker."""
    return np.random.default_rng([seed, n, index])


def _bench_sample(item: BenchItem) -> Tuple[int, int, bool]:
    route, kind, n, seed, index, config_data = item
    synthesizer = _ROUTE_CLASSES[route](AppConfig(**config_data))
    result = synthesizer.synthesize(random_problem(kind, n, sample_rng(seed, n, index)))
    verified = simulate(result.schedule) == result.target
    return result.injection_depth, result.swap_depth, verified


class SynthesisService(LoggerMixin):
    """Runs the synthesis pipeline and builds reports."""

    def __init__(self, config_manager: Optional[ConfigManager] = None):
        self.config_manager = config_manager
        self.config = config_manager.config if config_manager else AppConfig()
        self.factory = SynthesizerFactory(config_manager)

    # Synthesis ----------------------------------------------------

    def synthesize(
        self,
        problem: SynthesisProblem,
        route: Optional[str] = None,
        architecture: Optional[str] = None,
    ) -> Tuple[SynthesisResult, Dict[str, int]]:
        """Run every candidate route and keep the shallowest schedule."""
        route = route or self.config.default_route
        architecture = architecture or self.config.default_architecture
        names = self.factory.resolve(route, problem.kind, architecture)
        results = [self.factory.create(name).synthesize(problem) for name in names]
        best = min(results, key=lambda r: depth(r.schedule).weighted(self.config.swap_weight))
        candidates = {r.route: r.injection_depth for r in results}
        self.log_operation('selected_route', route=best.route, candidates=candidates)
        return best, candidates

    def synthesis_report(
        self,
        problem: SynthesisProblem,
        result: SynthesisResult,
        candidates: Optional[Dict[str, int]] = None,
        input_path: Optional[str] = None,
        schedule_path: Optional[str] = None,
    ) -> SynthesisReport:
        metrics = depth(result.schedule)
        swap_limit = swap_layer_bound(problem.n, self.config.grid_routing_constant) if problem.n else 0
        return SynthesisReport(
            schema_version=self.config.report_schema_version,
            input_path=input_path,
            input_kind=problem.kind,
            route=result.route,
            architecture=result.architecture,
            n=problem.n,
            sites=result.schedule.n,
            injection_depth=metrics.injection_layers,
            swap_layers=metrics.swap_layers,
            weighted_depth=metrics.weighted(self.config.swap_weight),
            bound=result.bound,
            within_bound=metrics.injection_layers <= result.bound and metrics.swap_layers <= swap_limit,
            lower_bound=lower_bound(problem.n),
            verified=simulate(result.schedule) == result.target,
            pauli=result.pauli.to_label() if result.pauli is not None else None,
            permutation=list(result.permutation) if result.permutation is not None else None,
            candidates=candidates or {result.route: result.injection_depth},
            stats=dict(result.stats),
            schedule_path=schedule_path,
        )

    def run_synthesis(
        self,
        text: str,
        source: str = '<input>',
        route: Optional[str] = None,
        architecture: Optional[str] = None,
        out: Optional[Path] = None,
    ) -> Tuple[SynthesisReport, str]:
        """Parse, synthesize, verify and report.

        Returns the report and the schedule text, which is also written to
        out when given.
        """
        problem = parse_problem(text, source)
        result, candidates = self.synthesize(problem, route, architecture)
        schedule_text = format_schedule(result.schedule)
        if out is not None:
            write_text(out, schedule_text)
        report = self.synthesis_report(
            problem,
            result,
            candidates,
            input_path=None if source.startswith('<') else source,
            schedule_path=str(out) if out is not None else None,
        )
        self.log_operation(
            'synthesis_report',
            route=report.route,
            n=report.n,
            injection_depth=report.injection_depth,
            bound=report.bound,
            verified=report.verified,
        )
        return report, schedule_text

    @staticmethod
    def check(report: SynthesisReport) -> None:
        """Raise for a failed verification or a broken bound."""
        if not report.verified:
            raise VerificationError(f'Schedule from route {report.route} does not match its input')
        if not report.within_bound:
            raise BoundViolationError(
                f'Route {report.route} used {report.injection_depth} injection layers',
                measured=report.injection_depth,
                allowed=report.bound,
            )

    # Verification -------------------------------------------------

    def verify_schedule(
        self,
        schedule_text: str,
        target_text: str,
        schedule_source: str = '<schedule>',
        target_source: str = '<target>',
    ) -> VerifyReport:
        """Compare a schedule with a target file, up to a Pauli layer."""
        schedule = parse_schedule(schedule_text, schedule_source)
        target = parse_problem(target_text, target_source).as_tableau()
        if target.n > schedule.n:
            raise ValidationError(
                f'Target acts on {target.n} qubits but the schedule has {schedule.n} sites'
            )
        target = target.embed(schedule.n)
        actual = simulate(schedule)

        if actual == target:
            report = VerifyReport(
                schema_version=self.config.report_schema_version,
                passed=True,
                exact=True,
                residual_pauli=PauliString.identity(schedule.n).to_label(),
                message='schedule matches the target exactly',
            )
        elif actual.equals(target, up_to_sign=True):
            residual = sign_correction(actual, target)
            report = VerifyReport(
                schema_version=self.config.report_schema_version,
                passed=True,
                residual_pauli=residual.to_label(),
                message=f'schedule matches the target after Pauli layer {residual.to_label()}',
            )
        else:
            report = VerifyReport(
                schema_version=self.config.report_schema_version,
                passed=False,
                message='schedule does not implement the target',
            )
        self.log_operation('verified_schedule', sites=schedule.n, passed=report.passed, exact=report.exact)
        return report

    # Benchmarks ---------------------------------------------------

    def bench(
        self,
        sizes: Iterable[int],
        samples: int,
        seed: int,
        routes: Optional[Sequence[str]] = None,
        minrank_sizes: Iterable[int] = (),
    ) -> BenchReport:
        """Depth table over random inputs; rows ordered by n, then by route as requested."""
        if samples < 1:
            raise ValidationError('Bench needs at least one sample')
        sizes = sorted(set(sizes))
        if not sizes or sizes[0] < 1:
            raise ValidationError('Bench sizes must be positive')
        available = self.factory.available_routes()
        routes = list(routes) if routes else available
        for route in routes:
            if route not in available or route not in _ROUTE_CLASSES:
                raise ValidationError(f'Route {route} cannot be benchmarked')

        config_data = self.config.model_dump()
        items: List[BenchItem] = [
            (route, _ROUTE_CLASSES[route].input_kind, n, seed, index, config_data)
            for n in sizes
            for route in routes
            for index in range(samples)
        ]
        outcomes = self._map(_bench_sample, items)

        rows = []
        for start in range(0, len(items), samples):
            route, _, n, _, _, _ = items[start]
            chunk = outcomes[start:start + samples]
            depths = [injection for injection, _, _ in chunk]
            bound = _ROUTE_CLASSES[route](self.config).bound(n)
            rows.append(
                BenchRow(
                    n=n,
                    route=route,
                    samples=samples,
                    max_depth=max(depths),
                    mean_depth=float(np.mean(depths)),
                    max_swap_layers=max(swaps for _, swaps, _ in chunk),
                    bound=bound,
                    within_bound=max(depths) <= bound,
                    all_verified=all(ok for _, _, ok in chunk),
                    lower_bound=lower_bound(n),
                )
            )

        report = BenchReport(
            schema_version=self.config.report_schema_version,
            seed=seed,
            samples=samples,
            rows=rows,
            minrank=[self.minrank_stats(n, samples, seed) for n in sorted(set(minrank_sizes))],
        )
        self.log_operation('bench', sizes=sizes, routes=routes, samples=samples, seed=seed)
        return report

    def _map(self, function, items: List[BenchItem]) -> list:
        workers = self.config.bench_workers
        if workers <= 1 or len(items) <= 1:
            return [function(item) for item in items]
        with Pool(workers) as pool:
            return pool.map(function, items)

    def minrank_stats(self, n: int, samples: int, seed: int) -> MinrankStats:
        """minrank2 over G(n, 1/2) samples; reported, never asserted."""
        limit, mode = self.config.minrank_exact_limit, self.config.minrank_mode
        values, cliques, exact = [], [], True
        for index in range(samples):
            graph = CzGraph(random_problem('graph', n, sample_rng(seed, n, index)).payload)
            result = minrank2(graph, limit, mode)
            values.append(result.value)
            cliques.append(len(synth_minrank(graph, limit, mode)))
            exact = exact and result.exact
        return MinrankStats(
            n=n,
            samples=samples,
            mean_minrank=float(np.mean(values)),
            min_minrank=min(values),
            max_minrank=max(values),
            mean_ratio=float(np.mean(values)) / n,
            max_cliques=max(cliques),
            exact=exact,
        )

    # Bounds -------------------------------------------------------

    def bounds(self, sizes: Iterable[int]) -> BoundsReport:
        rows = []
        for n in sorted(set(sizes)):
            bounds = bound_report(n)
            rows.append(
                BoundRow(
                    n=n,
                    rotation_count_bound=bounds.rotation_count_bound,
                    injection_depth_bound=bounds.injection_depth_bound,
                    simplified_bound=bounds.simplified_bound,
                    numerator=bounds.numerator,
                    denominator=bounds.denominator,
                    linear_upper=bounds.linear_upper,
                    dual_upper=bounds.dual_upper,
                    swap_layer_bound=swap_layer_bound(n, self.config.grid_routing_constant),
                    construction_bounds=bounds.construction_bounds,
                )
            )
        return BoundsReport(schema_version=self.config.report_schema_version, rows=rows)

    # Gadgets ------------------------------------------------------

    def gadget_suite(self, families: Sequence[str] = GADGET_FAMILIES, max_k: int = 4) -> list:
        """(name, circuit, target) for every gadget in the chosen families."""
        unknown = set(families) - set(GADGET_FAMILIES)
        if unknown:
            raise ValidationError(f'Unknown gadget families: {sorted(unknown)}')
        if max_k < 2:
            raise ValidationError('Gadget suite needs max_k >= 2')
        suite = []
        if 'ghz' in families:
            for k in range(1, max_k + 1):
                for method in GHZ_METHODS:
                    suite.append((f'ghz-{method}-{k}', ghz_prep_variant(k, method), ghz_target(k)))
        if 'expand' in families:
            for k in range(2, max_k + 1):
                fanout = FanOut(0, tuple(range(1, k)))
                rotation = PauliRotation(PauliString.from_label('Z' * k), 1)
                measurement = PauliString.from_label('X' * k)
                for name, gate in (('fanout', fanout), ('rotation', rotation), ('measurement', measurement)):
                    suite.append((f'expand-{name}-{k}', expand(gate), expansion_target(gate, k)))
        if 'interconvert' in families:
            for k in range(2, max_k + 1):
                for source in PRIMITIVES:
                    for target in PRIMITIVES:
                        if source != target:
                            suite.append(
                                (
                                    f'{source}-to-{target}-{k}',
                                    interconvert(source, target, k),
                                    primitive_target(target, k),
                                )
                            )
        return suite

    def verify_gadgets(self, families: Sequence[str] = GADGET_FAMILIES, max_k: int = 4) -> GadgetsReport:
        """Branch-verify the gadget library."""
        rows = []
        for name, circuit, target in self.gadget_suite(families, max_k):
            result = verify_gadget(circuit, target)
            self.log_operation(
                'verified_gadget',
                gadget=name,
                branches=result.branches,
                passed=result.passed,
                failing_branch=result.failing_branch,
            )
            rows.append(
                GadgetRow(
                    name=name,
                    data=circuit.data,
                    ancillae=circuit.ancillae,
                    branches=result.branches,
                    passed=result.passed,
                    failing_branch=result.failing_branch,
                    reason=result.reason,
                )
            )
        return GadgetsReport(schema_version=self.config.report_schema_version, rows=rows)

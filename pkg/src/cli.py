"""
CLI module for the ghzsynth toolkit.
Handles command-line interface and argument parsing.

Exit codes: 0 success, 1 verification failure, 2 bound violation,
3 parse or input error.
"""

import csv
import io
from pathlib import Path
from typing import Optional, Tuple

import click

from src.config.config_manager import ConfigManager
from src.core.formats import read_text, write_text
from src.exceptions import (
    BoundViolationError,
    CliffordSynthError,
    ConfigurationError,
    ParseError,
    UnsupportedGateError,
    ValidationError,
)
from src.models.report import BenchReport, ReportBase, SynthesisReport
from src.services.synthesis_service import GADGET_FAMILIES, SynthesisService
from src.synthesis.base import DEFAULT_SYNTHESIZERS
from src.utils.logger import (
    bind_run_context,
    configure_logging_from_env_and_config,
    error_context,
    get_logger,
)

logger = get_logger(__name__)

EXIT_VERIFICATION = 1
EXIT_BOUND = 2
EXIT_INPUT = 3

ROUTE_NAMES = ['auto'] + [cls.route for cls in DEFAULT_SYNTHESIZERS]


def exit_code_for(error: CliffordSynthError) -> int:
    if isinstance(error, BoundViolationError):
        return EXIT_BOUND
    if isinstance(error, (ParseError, ValidationError, UnsupportedGateError, ConfigurationError)):
        return EXIT_INPUT
    return EXIT_VERIFICATION


def _fail(ctx: click.Context, error: CliffordSynthError) -> None:
    code = exit_code_for(error)
    click.echo(f'Error: {error}', err=True)
    logger.warning('command_failed', exit_code=code, **error_context(error))
    ctx.exit(code)


def _emit(report: ReportBase, as_json: bool, text: str, out: Optional[str] = None) -> None:
    body = report.model_dump_json(indent=2) + '\n' if as_json else text
    if out:
        write_text(out, body)
    else:
        click.echo(body, nl=False)


def _service(ctx: click.Context) -> SynthesisService:
    return SynthesisService(ctx.obj['config_manager'])


@click.group()
@click.option('--config', '-c', help='Path to configuration file')
@click.option('--debug', is_flag=True, help='Enable debug mode')
@click.option(
    '--log-level',
    '-l',
    type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR', 'CRITICAL'], case_sensitive=False),
    help='Set logging level (overrides config and env)',
)
@click.option('--log-dir', help='Directory for log files (default: logs/)')
@click.option(
    '--log-console/--no-log-console',
    default=True,
    help='Enable/disable logging to stderr (default: enabled)',
)
@click.pass_context
def cli(
    ctx: click.Context,
    config: Optional[str],
    debug: bool,
    log_level: Optional[str],
    log_dir: Optional[str],
    log_console: bool,
) -> None:
    """ghzsynth - Clifford synthesis for GHZ-bus architectures."""
    ctx.ensure_object(dict)

    config_path = Path(config) if config else None
    try:
        config_manager = ConfigManager(config_path)
    except ConfigurationError as e:
        click.echo(f'Error: {e}', err=True)
        ctx.exit(EXIT_INPUT)
    ctx.obj['config_manager'] = config_manager
    ctx.obj['debug'] = debug

    configure_logging_from_env_and_config(
        config_manager=config_manager,
        log_level_override='DEBUG' if debug and not log_level else log_level,
        log_dir_override=log_dir,
        console_output=log_console,
    )
    bind_run_context(command=ctx.invoked_subcommand)

    global logger
    logger = get_logger(__name__)
    logger.info(
        'Application started',
        log_level=log_level or 'from_config',
        log_dir=log_dir or 'logs/',
    )


@cli.command()
@click.argument('input_file', type=click.Path(exists=True, dir_okay=False))
@click.option('--arch', type=click.Choice(['linear', 'dual']), help='GHZ bus architecture')
@click.option('--route', '-r', type=click.Choice(ROUTE_NAMES), help='Synthesis route (default: auto)')
@click.option('--out', '-o', type=click.Path(dir_okay=False), help='Write the schedule here')
@click.option('--json', 'as_json', is_flag=True, help='Print the report as JSON')
@click.pass_context
def synth(
    ctx: click.Context,
    input_file: str,
    arch: Optional[str],
    route: Optional[str],
    out: Optional[str],
    as_json: bool,
) -> None:
    """Synthesize a tableau, CZ graph or CNOT matrix into a GHZ-bus schedule."""
    service = _service(ctx)
    try:
        report, schedule_text = service.run_synthesis(
            read_text(input_file),
            source=input_file,
            route=route,
            architecture=arch,
            out=Path(out) if out else None,
        )
    except CliffordSynthError as e:
        _fail(ctx, e)
        return

    if not as_json and out is None:
        click.echo(schedule_text, nl=False)
    _emit(report, as_json, format_synthesis(report))
    try:
        service.check(report)
    except CliffordSynthError as e:
        _fail(ctx, e)


def format_synthesis(report: SynthesisReport) -> str:
    lines = [
        f'Route: {report.route} ({report.architecture} bus)',
        f'Input: {report.input_kind} on {report.n} qubits, {report.sites} sites',
        f'Injection depth: {report.injection_depth} (bound {report.bound}, '
        f'{"within" if report.within_bound else "VIOLATED"})',
        f'Swap layers: {report.swap_layers}',
        f'Weighted depth: {report.weighted_depth:g}',
    ]
    if report.lower_bound is not None:
        lines.append(f'Counting lower bound: {report.lower_bound:.3f}')
    if len(report.candidates) > 1:
        tried = ', '.join(f'{name}={d}' for name, d in sorted(report.candidates.items()))
        lines.append(f'Candidates: {tried}')
    if report.pauli is not None:
        lines.append(f'Pauli layer: {report.pauli}')
    if report.permutation is not None:
        lines.append(f'Permutation: {" ".join(str(p) for p in report.permutation)}')
    for key, value in sorted(report.stats.items()):
        lines.append(f'{key.capitalize()}: {value}')
    lines.append(f'Verified: {"yes" if report.verified else "NO"}')
    if report.schedule_path:
        lines.append(f'Schedule written to {report.schedule_path}')
    return '\n'.join(lines) + '\n'


@cli.command()
@click.argument('schedule_file', type=click.Path(exists=True, dir_okay=False))
@click.argument('target_file', type=click.Path(exists=True, dir_okay=False))
@click.option('--json', 'as_json', is_flag=True, help='Print the report as JSON')
@click.pass_context
def verify(ctx: click.Context, schedule_file: str, target_file: str, as_json: bool) -> None:
    """Check a schedule against a target, up to a final Pauli layer."""
    try:
        report = _service(ctx).verify_schedule(
            read_text(schedule_file),
            read_text(target_file),
            schedule_source=schedule_file,
            target_source=target_file,
        )
    except CliffordSynthError as e:
        _fail(ctx, e)
        return

    text = f'{"PASS" if report.passed else "FAIL"}: {report.message}\n'
    if report.residual_pauli is not None:
        text += f'Residual Pauli layer: {report.residual_pauli}\n'
    _emit(report, as_json, text)
    if not report.passed:
        ctx.exit(EXIT_VERIFICATION)


@cli.command()
@click.option('--n-min', default=4, show_default=True, type=click.IntRange(min=1))
@click.option('--n-max', default=8, show_default=True, type=click.IntRange(min=1))
@click.option('--samples', '-s', default=50, show_default=True, type=click.IntRange(min=1))
@click.option('--seed', default=0, show_default=True, type=int)
@click.option('--route', '-r', 'routes', multiple=True, type=click.Choice(ROUTE_NAMES[1:]),
              help='Routes to benchmark (default: all enabled)')
@click.option('--minrank-n', 'minrank_sizes', multiple=True, type=click.IntRange(min=1),
              help='Also report minrank statistics for G(n, 1/2) at these sizes')
@click.option('--json', 'as_json', is_flag=True, help='Print the report as JSON')
@click.option('--csv', 'as_csv', is_flag=True, help='Print the table as CSV')
@click.option('--out', '-o', type=click.Path(dir_okay=False), help='Write the table here')
@click.pass_context
def bench(
    ctx: click.Context,
    n_min: int,
    n_max: int,
    samples: int,
    seed: int,
    routes: Tuple[str, ...],
    minrank_sizes: Tuple[int, ...],
    as_json: bool,
    as_csv: bool,
    out: Optional[str],
) -> None:
    """Depth statistics over seeded random inputs."""
    if n_max < n_min:
        click.echo('Error: --n-max must be at least --n-min', err=True)
        ctx.exit(EXIT_INPUT)
    try:
        report = _service(ctx).bench(
            range(n_min, n_max + 1), samples, seed, routes or None, minrank_sizes
        )
    except CliffordSynthError as e:
        _fail(ctx, e)
        return

    text = format_bench_csv(report) if as_csv else format_bench(report)
    _emit(report, as_json, text, out)
    if not all(row.all_verified for row in report.rows):
        ctx.exit(EXIT_VERIFICATION)
    if not all(row.within_bound for row in report.rows):
        ctx.exit(EXIT_BOUND)


BENCH_COLUMNS = (
    'n', 'route', 'samples', 'max_depth', 'mean_depth', 'max_swap_layers',
    'bound', 'within_bound', 'all_verified', 'lower_bound',
)


def format_bench_csv(report: BenchReport) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=BENCH_COLUMNS, lineterminator='\n')
    writer.writeheader()
    for row in report.rows:
        writer.writerow(row.model_dump(include=set(BENCH_COLUMNS)))
    return buffer.getvalue()


def format_bench(report: BenchReport) -> str:
    lines = [
        f'seed={report.seed} samples={report.samples}',
        f'{"n":>3} {"route":<15} {"max":>4} {"mean":>7} {"swaps":>5} {"bound":>5} {"lower":>7}  ok',
    ]
    for row in report.rows:
        lower = f'{row.lower_bound:7.2f}' if row.lower_bound is not None else f'{"-":>7}'
        ok = 'yes' if row.within_bound and row.all_verified else 'NO'
        lines.append(
            f'{row.n:>3} {row.route:<15} {row.max_depth:>4} {row.mean_depth:>7.2f} '
            f'{row.max_swap_layers:>5} {row.bound:>5} {lower}  {ok}'
        )
    if report.minrank:
        lines.append('')
        lines.append(f'{"n":>3} {"minrank mean":>12} {"min":>4} {"max":>4} {"mean/n":>7} {"cliques":>7}')
        for stats in report.minrank:
            lines.append(
                f'{stats.n:>3} {stats.mean_minrank:>12.2f} {stats.min_minrank:>4} '
                f'{stats.max_minrank:>4} {stats.mean_ratio:>7.3f} {stats.max_cliques:>7}'
                + ('' if stats.exact else '  (greedy)')
            )
    return '\n'.join(lines) + '\n'


@cli.command()
@click.option('--n-min', default=2, show_default=True, type=click.IntRange(min=1))
@click.option('--n-max', default=10, show_default=True, type=click.IntRange(min=1))
@click.option('--json', 'as_json', is_flag=True, help='Print the report as JSON')
@click.pass_context
def bounds(ctx: click.Context, n_min: int, n_max: int, as_json: bool) -> None:
    """Closed-form lower and upper depth bounds."""
    report = _service(ctx).bounds(range(n_min, n_max + 1))
    lines = [f'{"n":>5} {"rotations":>9} {"lower":>8} {"0.648n-2":>9} {"linear":>6} {"dual":>5} {"swaps":>5}']
    for row in report.rows:
        lower = f'{row.injection_depth_bound:8.3f}' if row.injection_depth_bound is not None else f'{"-":>8}'
        lines.append(
            f'{row.n:>5} {row.rotation_count_bound:>9} {lower} {row.simplified_bound:>9.3f} '
            f'{row.linear_upper:>6} {row.dual_upper:>5} {row.swap_layer_bound:>5}'
        )
    _emit(report, as_json, '\n'.join(lines) + '\n')


@cli.command()
@click.option('--family', '-f', 'families', multiple=True, type=click.Choice(GADGET_FAMILIES),
              help='Gadget families to verify (default: all)')
@click.option('--max-k', default=4, show_default=True, type=click.IntRange(min=2, max=6),
              help='Largest GHZ size or gate support')
@click.option('--json', 'as_json', is_flag=True, help='Print the report as JSON')
@click.pass_context
def gadget(ctx: click.Context, families: Tuple[str, ...], max_k: int, as_json: bool) -> None:
    """Branch-verify the physical gadget library."""
    report = _service(ctx).verify_gadgets(families or GADGET_FAMILIES, max_k)
    lines = []
    for row in report.rows:
        verdict = 'PASS' if row.passed else f'FAIL branch {row.failing_branch}: {row.reason}'
        lines.append(
            f'{row.name:<28} data={row.data} ancillae={row.ancillae} branches={row.branches} {verdict}'
        )
    _emit(report, as_json, '\n'.join(lines) + '\n')
    if not report.passed:
        ctx.exit(EXIT_VERIFICATION)


@cli.command()
@click.pass_context
def config_status(ctx: click.Context) -> None:
    """Show current configuration status."""
    config_manager = ctx.obj['config_manager']
    status = config_manager.get_status()

    click.echo('Configuration Status:')
    click.echo(f'Config file: {status.get("config_file", "default")}')
    click.echo(f'Enabled routes: {", ".join(status.get("routes", []))}')
    click.echo(f'Default architecture: {status.get("default_architecture")}')
    click.echo(f'Default route: {status.get("default_route")}')
    click.echo(f'Exact minrank limit: {status.get("minrank_exact_limit")}')
    click.echo(f'Minrank mode: {status.get("minrank_mode")}')
    click.echo(f'Grid routing constant: {status.get("grid_routing_constant")}')
    click.echo(f'Swap weight: {status.get("swap_weight")}')


@cli.command()
@click.pass_context
def list_routes(ctx: click.Context) -> None:
    """List enabled synthesis routes."""
    config_manager: ConfigManager = ctx.obj['config_manager']
    for name in config_manager.get_available_routes():
        route = config_manager.get_route_config(name)
        click.echo(f'  • {name:<15} {route.input_kind:<8} {route.architecture:<7} {route.bound}')


def main() -> None:
    """Main entry point for CLI."""
    try:
        cli()
    except KeyboardInterrupt:
        logger.info('Application interrupted by user')
    except Exception as e:
        logger.error(f'Unexpected error: {e}')
        raise


if __name__ == '__main__':
    main()

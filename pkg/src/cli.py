"""
Command-line interface: lowerbound, approx, exact, verify, gen, bench

Results go to stdout as JSON (or CSV with --format csv); warnings and errors
go to stderr. Exit codes: 0 success, 1 invalid input or usage, 2 broken guarantee.
"""

import json
from pathlib import Path
from typing import List, Optional

import click

from models import (
    InstanceError, InvariantViolation, ExportFormat, GenParams, GenShape, Cover,
    format_rational, parse_rational
)
from config_manager import ConfigManager
from cache_manager import OracleCache
from instance_parser import parse_instance, serialize_instance
from instance_core import complete_to_convex, recoloring_cost
from penalty import lower_bound
from oracle import exact_opt
from generator import gen_instance
from harness import ALGORITHMS, run_algorithm, finalize_result, measure_ratio
from result_checker import ResultChecker
from result_exporter import ResultExporter


class CliState:
    """Per-invocation settings shared by the subcommands"""

    def __init__(self, config_path: str, output_format: Optional[str]):
        self.config = ConfigManager(config_path).load(create_if_missing=False)
        self.format = ExportFormat(output_format or self.config.output_format)
        self.exporter = ResultExporter()
        self.checker = ResultChecker()

    def cache(self) -> Optional[OracleCache]:
        if not self.config.use_cache:
            return None
        return OracleCache(self.config.cache_dir, self.config.cache_ttl_days)

    def load(self, path: str):
        return parse_instance(path, self.config.policy)

    def emit(self, payload, rows: List[dict]):
        click.echo(self.exporter.export(payload, rows, self.format), nl=False)

    def report(self, issues: List[dict]) -> int:
        """Print issues to stderr; exit status 2 when any is an error"""
        for issue in issues:
            if issue["severity"] != "info":
                click.echo(f"Warning: {issue['field']}: {issue['issue']}", err=True)
        if any(issue["severity"] == "error" for issue in issues):
            raise InvariantViolation("; ".join(i["issue"] for i in issues if i["severity"] == "error"))
        return 0


@click.group()
@click.option("--config", "config_path", default="recolor_config.json", show_default=True,
              help="Configuration file")
@click.option("--format", "output_format", type=click.Choice([f.value for f in ExportFormat]),
              default=None, help="Output format (defaults to the configured one)")
@click.pass_context
def cli(ctx, config_path, output_format):
    """Convex recoloring of weighted colored trees and strings."""
    ctx.obj = CliState(config_path, output_format)


@cli.command("lowerbound")
@click.argument("instance_path")
@click.pass_obj
def lowerbound_command(state: CliState, instance_path):
    """Per-color best blocks and the penalty lower bound."""
    inst = state.load(instance_path)
    report = lower_bound(inst)
    state.emit(report.to_dict(inst), report.to_rows(inst))
    return 0


@cli.command("approx")
@click.argument("instance_path")
@click.option("--algo", type=click.Choice(sorted(ALGORITHMS)), required=True)
@click.option("--trace", is_flag=True, help="Include the reduction trace")
@click.option("--opt", "with_opt", is_flag=True, help="Also compute OPT with the exact oracle")
@click.pass_obj
def approx_command(state: CliState, instance_path, algo, trace, with_opt):
    """Run an approximation algorithm."""
    inst = state.load(instance_path)
    result = finalize_result(inst, run_algorithm(algo, inst))
    bound = lower_bound(inst).lower_bound
    opt = None
    if with_opt:
        _, opt = exact_opt(inst, state.config.oracle_cap, state.cache())

    status = state.report(state.checker.check(inst, result, bound, opt))
    payload = result.to_dict(inst, lower_bound=bound, opt=opt, include_trace=trace)
    payload["rounds"] = result.rounds
    state.emit(payload, result.to_rows(inst))
    return status


@cli.command("exact")
@click.argument("instance_path")
@click.pass_obj
def exact_command(state: CliState, instance_path):
    """Optimal cover and cost by branch and bound."""
    inst = state.load(instance_path)
    cache = state.cache()
    cover, opt = exact_opt(inst, state.config.oracle_cap, cache)
    coloring = complete_to_convex(inst, inst.coloring().without(cover.members))
    payload = {
        "algorithm": "exact",
        "cost": format_rational(opt),
        "cover": cover.to_ids(inst),
        "coloring": coloring.to_dict(inst.ids),
        "lower_bound": format_rational(lower_bound(inst).lower_bound),
        "opt": format_rational(opt),
    }
    if cache is not None:
        stats = cache.get_stats()
        click.echo(f"✓ Oracle cache: {stats['hits']} hit(s), {stats['misses']} miss(es)", err=True)
    rows = [
        {"id": vid, "color": inst.colors[v] or "", "recolored": coloring[v], "in_cover": v in cover}
        for v, vid in enumerate(inst.ids)
    ]
    state.emit(payload, rows)
    return 0


@cli.command("verify")
@click.argument("instance_path")
@click.option("--cover", "cover_path", required=True, help="JSON file: a list of vertex ids or a result document")
@click.pass_obj
def verify_command(state: CliState, instance_path, cover_path):
    """Check that a vertex set is a cover; exit 1 if it is not."""
    inst = state.load(instance_path)
    try:
        data = json.loads(Path(cover_path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise InstanceError(f"cannot read cover {cover_path}: {e}")
    ids = data.get("cover") if isinstance(data, dict) else data
    if not isinstance(ids, list):
        raise InstanceError("cover file must hold a list of vertex ids")
    cover = Cover.from_ids(inst, [str(i) for i in ids])

    issues = state.checker.check_cover(inst, cover)
    valid = not issues
    payload = {"valid": valid, "cost": format_rational(cover.weight(inst)), "cover": cover.to_ids(inst)}
    if valid:
        coloring = complete_to_convex(inst, inst.coloring().without(cover.members))
        payload["recoloring_cost"] = format_rational(recoloring_cost(inst, coloring))
    for issue in issues:
        click.echo(f"Warning: {issue['field']}: {issue['issue']}", err=True)
    state.emit(payload, [{"valid": valid, "cost": payload["cost"]}])
    return 0 if valid else 1


def _gen_params(n, c, shape, seed, weight_max, zero_fraction) -> GenParams:
    return GenParams(
        n=n, c=c, weight_max=weight_max, shape=GenShape(shape),
        zero_weight_fraction=parse_rational(zero_fraction, "--zero-fraction"), seed=seed,
    )


_shape_choice = click.Choice([s.value for s in GenShape])


@cli.command("gen")
@click.option("--shape", type=_shape_choice, default=GenShape.RANDOM_TREE.value, show_default=True)
@click.option("-n", "--n", "n", type=int, required=True, help="Number of vertices")
@click.option("-c", "--c", "c", type=int, required=True, help="Number of colors")
@click.option("--seed", type=int, default=None, help="Defaults to the configured seed")
@click.option("--weight-max", type=int, default=8, show_default=True)
@click.option("--zero-fraction", default="0", show_default=True, help="Share of weight-0 vertices")
@click.pass_obj
def gen_command(state: CliState, shape, n, c, seed, weight_max, zero_fraction):
    """Generate a seeded instance file."""
    seed = state.config.default_seed if seed is None else seed
    inst = gen_instance(_gen_params(n, c, shape, seed, weight_max, zero_fraction))
    click.echo(serialize_instance(inst))
    return 0


@cli.command("bench")
@click.option("--algo", type=click.Choice(sorted(ALGORITHMS)), required=True)
@click.option("--shape", type=_shape_choice, default=GenShape.RANDOM_TREE.value, show_default=True)
@click.option("-n", "--n", "n", type=int, default=10, show_default=True, help="Largest instance size")
@click.option("-c", "--c", "c", type=int, default=3, show_default=True)
@click.option("--count", type=int, default=100, show_default=True)
@click.option("--seed", type=int, default=None)
@click.option("--weight-max", type=int, default=8, show_default=True)
@click.option("--zero-fraction", default="0", show_default=True)
@click.option("--fixed-size", is_flag=True, help="Use exactly n vertices for every instance")
@click.option("--workers", type=int, default=None, help="Defaults to the configured worker count")
@click.option("--progress/--no-progress", default=False)
@click.option("--keep-going", is_flag=True, help="Count factor violations instead of stopping at the first")
@click.pass_obj
def bench_command(state: CliState, algo, shape, n, c, count, seed, weight_max, zero_fraction,
                  fixed_size, workers, progress, keep_going):
    """Measure approximation ratios against the exact oracle."""
    seed = state.config.default_seed if seed is None else seed
    params = _gen_params(n, c, shape, seed, weight_max, zero_fraction)
    report = measure_ratio(
        algo, params, count,
        cap=state.config.oracle_cap,
        cache_dir=state.config.cache_dir if state.config.use_cache else None,
        workers=workers or state.config.bench_workers,
        vary_size=not fixed_size,
        progress=progress,
        fail_fast=not keep_going,
    )
    click.echo(f"✓ {algo}: max ratio {format_rational(report.max_ratio)} over {count} instance(s)", err=True)
    state.emit(report.to_dict(), report.to_rows())
    if report.violations:
        raise InvariantViolation(f"{report.violations} of {count} instance(s) break the factor {report.bound}")
    return 0


def run_command(argv: Optional[List[str]] = None) -> int:
    """
    Run the CLI and map failures to exit codes

    Returns:
        0 on success, 1 for invalid input or usage, 2 for a broken guarantee
    """
    try:
        status = cli.main(args=argv, prog_name="recolor", standalone_mode=False)
    except InvariantViolation as e:
        click.echo(f"Error: internal guarantee violated: {e}", err=True)
        return 2
    except InstanceError as e:
        click.echo(f"Error: {e}", err=True)
        return 1
    except click.ClickException as e:
        e.show()
        return 1
    except click.Abort:
        click.echo("Aborted", err=True)
        return 1
    return status if isinstance(status, int) else 0

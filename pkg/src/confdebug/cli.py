"""Command-line entry point: measurement campaigns, model fitting, reports.

Exit codes: 0 success, 1 error, 2 empty result (report written but contains
nothing actionable).
"""
from __future__ import annotations

import functools
import sys

import click

from . import serialize
from .errors import MissingPrerequisite, WorkbenchError
from .interp import measure_campaign
from .models import enumerate_configs, sample_configs
from .workspace import Session, Workspace, fit_workspace_models

ENUMERATION_LIMIT = 4096
EXIT_EMPTY = 2


def _workbench_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except WorkbenchError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(1)
    return wrapper


@click.group()
@click.option("--workspace", "-w", "workspace_path", default=".",
              show_default=True,
              help="Directory containing workspace.json.")
@click.pass_context
def main(ctx, workspace_path):
    """Debugging workbench for configurable programs."""
    ctx.obj = workspace_path


def _load(ctx) -> Workspace:
    return Workspace.load(ctx.obj)


@main.command()
@click.option("--sample", "sample_n", type=int, default=None,
              help="Measure a seeded random sample instead of the full "
                   "factorial.")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--limit", type=int, default=ENUMERATION_LIMIT,
              show_default=True,
              help="Largest configuration space measured exhaustively.")
@click.pass_context
@_workbench_errors
def measure(ctx, sample_n, seed, limit):
    """Execute the program under every (or a sampled set of) configuration."""
    workspace = _load(ctx)
    program = workspace.program
    if sample_n is None:
        configs = enumerate_configs(program.options, limit)
    else:
        configs = sample_configs(program.options, sample_n, seed)
    records = measure_campaign(program, configs)
    workspace.append_measurements(records)
    total = sum(r.total_seconds for r in records)
    click.echo(f"{len(records)} configurations measured")
    click.echo(f"total modeled time: {total:.1f} s")


@main.command()
@click.option("--max-degree", type=int, default=3, show_default=True)
@click.pass_context
@_workbench_errors
def model(ctx, max_degree):
    """Fit the system-level and per-function performance-influence models."""
    workspace = _load(ctx)
    records = workspace.load_measurements()
    global_model, local_models = fit_workspace_models(
        workspace, records, max_degree)
    workspace.write_models(global_model, local_models)
    click.echo(f"global model: {len(global_model.terms())} terms"
               + (" (approximate)" if global_model.approximate else ""))
    for term in global_model.terms():
        click.echo(f"  {term.label():<40s}"
                   f"{float(global_model.coefficients[term]):>8.1f} s")
    click.echo(f"local models: {len(local_models)} functions")


def _emit(workspace, kind, from_name, to_name, obj, fmt, render):
    payload = serialize.dumps(obj)
    workspace.write_report(kind, from_name, to_name, payload)
    if fmt == "json":
        click.echo(payload)
    else:
        render(obj)


def _config_args(fn):
    fn = click.argument("to_name", metavar="TO")(fn)
    fn = click.argument("from_name", metavar="FROM")(fn)
    return fn


def _format_option(fn):
    return click.option("--format", "fmt",
                        type=click.Choice(["text", "json"]),
                        default="text", show_default=True)(fn)


def _signed(delta: float) -> str:
    return f"{delta:+.1f} s"


@main.command("diff-config")
@_config_args
@_format_option
@click.pass_context
@_workbench_errors
def diff_config(ctx, from_name, to_name, fmt):
    """Which changed options explain the performance difference."""
    workspace = _load(ctx)
    session = Session(workspace)
    obj = session.influencing_options(from_name, to_name)

    def render(obj):
        for change in obj["changed"]:
            click.echo(f"{change['option']}: {change['from']} -> "
                       f"{change['to']}")
        for row in obj["influences"]:
            click.echo(f"{', '.join(row['options'])}  "
                       f"{_signed(row['delta'])}")
        if obj["unexplained_changes"]:
            click.echo("no performance influence: "
                       + ", ".join(obj["unexplained_changes"]))

    _emit(workspace, "influencing-options", from_name, to_name, obj, fmt,
          render)
    if not obj["influences"]:
        sys.exit(EXIT_EMPTY)


@main.command()
@_config_args
@_format_option
@click.option("--min-delta", type=float, default=0.0, show_default=True,
              help="Hide functions whose delta is below this (seconds).")
@click.pass_context
@_workbench_errors
def hotspots(ctx, from_name, to_name, fmt, min_delta):
    """Per-function performance deltas between two configurations."""
    workspace = _load(ctx)
    session = Session(workspace)
    obj = session.option_hotspots(from_name, to_name, min_delta=min_delta)

    def render(obj):
        for entry in obj["entries"]:
            click.echo(f"{entry['function']:<24s}{_signed(entry['delta'])}")
        if obj["omitted_delta"]:
            click.echo(f"{'(below threshold)':<24s}"
                       f"{_signed(obj['omitted_delta'])}")

    _emit(workspace, "option-hotspots", from_name, to_name, obj, fmt, render)
    if not obj["entries"]:
        sys.exit(EXIT_EMPTY)


@main.command("profile-diff")
@_config_args
@_format_option
@click.pass_context
@_workbench_errors
def profile_diff(ctx, from_name, to_name, fmt):
    """Compare the hotspot views of two measured configurations."""
    workspace = _load(ctx)
    session = Session(workspace)
    obj = session.profile_diff(from_name, to_name)

    def render(obj):
        for entry in obj["entries"]:
            mark = "*" if entry["is_option_hotspot"] else " "
            click.echo(f"{mark} {entry['function']:<24s}"
                       f"{entry['time_a']:>8.1f}{entry['time_b']:>8.1f}"
                       f"  {_signed(entry['delta'])}  [{entry['status']}]")

    _emit(workspace, "profile-diff", from_name, to_name, obj, fmt, render)
    if all(e["delta"] == 0.0 for e in obj["entries"]):
        sys.exit(EXIT_EMPTY)


@main.command()
@_config_args
@_format_option
@click.pass_context
@_workbench_errors
def chain(ctx, from_name, to_name, fmt):
    """Cause-effect chain from option loads to the option hotspots."""
    workspace = _load(ctx)
    hotspot_report = workspace.report_path("option-hotspots", from_name,
                                           to_name)
    if not hotspot_report.exists():
        raise MissingPrerequisite(
            f"no option-hotspots report for {from_name} -> {to_name}",
            "run hotspots first")
    hotspot_functions = [
        e["function"]
        for e in serialize.loads(hotspot_report.read_text())["entries"]]
    session = Session(workspace)
    obj = session.cause_effect(from_name, to_name, hotspots=hotspot_functions)

    def render(obj):
        for node in obj["method_graph"]["nodes"]:
            click.echo(f"{node['function']:<24s}[{node['role']}]")
        for edge in obj["method_graph"]["edges"]:
            click.echo(f"{edge['from']} -> {edge['to']}")
        for warning in obj["warnings"]:
            click.echo(f"warning: {warning}")
        spans = sum(len(v) for v in obj["highlights"].values())
        click.echo(f"{spans} highlighted statements")

    _emit(workspace, "cause-effect", from_name, to_name, obj, fmt, render)
    if not obj["nodes"]:
        sys.exit(EXIT_EMPTY)


@main.command()
@click.option("--port", type=int, default=7788, show_default=True)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.pass_context
@_workbench_errors
def serve(ctx, port, host):
    """Serve the workspace analyses over HTTP for the browser UI."""
    import uvicorn

    from .server import create_app
    app = create_app(ctx.obj)
    uvicorn.run(app, host=host, port=port, log_level="warning")


if __name__ == "__main__":
    main()

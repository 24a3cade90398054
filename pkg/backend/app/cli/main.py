"""
Command-line front end, run as `python -m app.cli <subcommand>`.

Options are parsed loosely by click and validated by RunConfig, so that
invalid input exits with status 1 and an `error:` line on stderr.
"""

from pathlib import Path
from typing import Any, Optional, Tuple

import click
from pydantic import ValidationError

from app.cli.formatting import render
from app.cli.runner import EXIT_INVALID, run
from app.core.logging import configure_logging
from app.schemas.config import OutputFormat, RunConfig, Subcommand

FAMILY_HELP = "rh2+abelian ([e1,e2]=e2) or rh-line ([e1,ei]=ei, i>=3)"


def _validation_message(exc: ValidationError) -> str:
    err = exc.errors()[0]
    where = ".".join(str(p) for p in err.get("loc", ()))
    msg = err.get("msg", str(exc))
    return f"{where}: {msg}" if where else msg


def _execute(subcommand: Subcommand, as_json: bool, **fields: Any) -> None:
    ctx = click.get_current_context()
    fields = {k: v for k, v in fields.items() if v is not None and v != ()}
    try:
        config = RunConfig(
            subcommand=subcommand,
            output=OutputFormat.JSON if as_json else OutputFormat.TEXT,
            **fields,
        )
    except ValidationError as exc:
        click.echo(f"error: {_validation_message(exc)}", err=True)
        ctx.exit(EXIT_INVALID)
    result = run(config)
    if result.error:
        click.echo(f"error: {result.error}", err=True)
    if result.report is not None:
        click.echo(render(result.report, config.output))
    ctx.exit(result.exit_code)


def algebra_options(f):
    f = click.option("--algebra", "algebra_file", type=click.Path(dir_okay=False, path_type=Path),
                     help="Structure constants file (custom algebra)")(f)
    f = click.option("--dim", type=int, help="Dimension n >= 3")(f)
    f = click.option("--family", type=str, help=FAMILY_HELP)(f)
    return f


def metric_options(f):
    f = click.option("--random", "seed", type=int, help="Sample a random metric with this seed")(f)
    f = click.option("--metric", "metric_file", type=click.Path(dir_okay=False, path_type=Path),
                     help="Gram matrix file")(f)
    return f


json_option = click.option("--json", "as_json", is_flag=True, help="Emit a JSON report")
tol_option = click.option("--tol", type=float, help="Defect tolerance (default MILNOR_TOL)")


@click.group(name="milnor")
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
              default=None, help="Logging level (default LOG_LEVEL)")
def cli(log_level: Optional[str]) -> None:
    """Milnor-type frames, curvature and solvsolitons for left-invariant metrics."""
    configure_logging(log_level)


@cli.command()
@algebra_options
@metric_options
@tol_option
@json_option
def reduce(as_json: bool, **fields: Any) -> None:
    """Reduce a metric to a Milnor-type frame."""
    _execute(Subcommand.REDUCE, as_json, **fields)


@cli.command()
@algebra_options
@metric_options
@click.option("--lambda", "lam", type=float, help="Use the Milnor frame with this parameter")
@tol_option
@json_option
def curvature(as_json: bool, **fields: Any) -> None:
    """Ricci operator, eigenvalues and signature."""
    _execute(Subcommand.CURVATURE, as_json, **fields)


@cli.command()
@algebra_options
@click.option("--lambda", "lam", type=float, help="Write the basis in the Milnor frame with this parameter")
@json_option
def derivations(as_json: bool, **fields: Any) -> None:
    """Basis of the derivation algebra."""
    _execute(Subcommand.DERIVATIONS, as_json, **fields)


@cli.command()
@algebra_options
@metric_options
@tol_option
@json_option
def solvsoliton(as_json: bool, **fields: Any) -> None:
    """Solvsoliton and Einstein verdicts for a metric."""
    _execute(Subcommand.SOLVSOLITON, as_json, **fields)


@cli.command("signature-sweep")
@click.option("--samples", type=int, help="Random metrics per (family, n)")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--family", "families", multiple=True, type=str, help=FAMILY_HELP)
@click.option("--dim", "dims", multiple=True, type=int, help="Dimensions (default 3..6)")
@click.option("--workers", type=int, help="Worker threads")
@json_option
def signature_sweep(as_json: bool, **fields: Any) -> None:
    """Histogram of Ricci signatures over random metrics."""
    _execute(Subcommand.SIGNATURE_SWEEP, as_json, **fields)


@cli.command("verify-paper")
@click.option("--samples", type=int, help="Random metrics per family (default 1000)")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--workers", type=int, help="Worker threads")
@json_option
def verify_paper(as_json: bool, **fields: Any) -> None:
    """Run every acceptance check; exit 0 iff all pass."""
    _execute(Subcommand.VERIFY_PAPER, as_json, **fields)


def main(argv: Optional[Tuple[str, ...]] = None) -> None:
    cli.main(args=argv, prog_name="milnor")

"""Command line interface for the Keller inversion toolkit."""

import functools
import logging
import sys

import click

from services.corpus_generator import CorpusGenerator
from services.identity_runner import IdentityRunner
from utils.config import Config
from utils.errors import KellerToolError
from utils.map_file import MapFile

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

input_file = click.argument("path", type=click.Path(exists=True, dir_okay=False))
timings_option = click.option("--timings", type=click.Path(dir_okay=False),
                              help="Write stage timings (seconds) to this JSON file.")


def configure_logging(verbose: bool) -> None:
    """Send logs to stderr so stdout carries only the report."""
    level = logging.DEBUG if verbose else getattr(logging, Config.log_level(), logging.WARNING)
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def handle_errors(command):
    """Turn toolkit errors into `error: ...` on stderr and their exit code."""
    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except KellerToolError as e:
            logging.error(f"{command.__name__} failed: {e.message}")
            click.echo(f"error: {e.message}", err=True)
            sys.exit(e.exit_code)
    return wrapper


def emit(report, timings=None) -> None:
    """Print the report, write timings if asked, and exit with the verdict."""
    click.echo(MapFile.dumps_document(report.to_dict()), nl=False)
    if timings:
        MapFile.dump_document(report.timings, timings)
    sys.exit(report.exit_code)


@click.group()
@click.option("--verbose", "-v", is_flag=True, help="Log at DEBUG level.")
def cli(verbose):
    """Exact checks and inversion of polynomial maps y = x - V(x)."""
    configure_logging(verbose)


@cli.command()
@input_file
@click.option("--reduce-linear", is_flag=True,
              help="Remove a nilpotent linear part and write the reduced map.")
@click.option("--output", type=click.Path(dir_okay=False),
              help="Where to write the reduced map (default <stem>.reduced.json).")
@timings_option
@handle_errors
def check(path, reduce_linear, output, timings):
    """Jacobian determinant verdict, norms and linear-part verdict."""
    emit(IdentityRunner().run_check(path, reduce_linear, output), timings)


@cli.command()
@input_file
@click.option("--cap", type=int, default=None,
              help="Truncation degree (default: degree bound, at most KELLER_GUARD_CAP).")
@click.option("--certify", is_flag=True, help="Check residuals, growth and degree bounds.")
@click.option("--output", type=click.Path(dir_okay=False),
              help="Where to write the inverse map (default <stem>.inverse.json).")
@timings_option
@handle_errors
def invert(path, cap, certify, output, timings):
    """Truncated inverse series, written as a map file."""
    emit(IdentityRunner().run_invert(path, cap, certify, output), timings)


@cli.command()
@input_file
@click.option("--order", type=int, default=4, show_default=True,
              help="Largest number of leaves enumerated.")
@click.option("--filter-level", type=int, default=None,
              help="Report the restricted sum F(|<=k) at this level.")
@click.option("--factorization", is_flag=True, help="Compare F with F(|<=n).")
@timings_option
@handle_errors
def trees(path, order, filter_level, factorization, timings):
    """Tree statistics and restricted sums of the tree expansion."""
    emit(IdentityRunner().run_trees(path, order, filter_level, factorization), timings)


@cli.command()
@input_file
@click.option("--cap", type=int, default=8, show_default=True, help="Truncation degree.")
@timings_option
@handle_errors
def trace(path, cap, timings):
    """Trace-log identities of the Jacobian matrix."""
    emit(IdentityRunner().run_trace(path, cap), timings)


@cli.command()
@click.argument("directory", type=click.Path(file_okay=False))
@click.option("--seed", type=int, default=0, show_default=True)
@handle_errors
def corpus(directory, seed):
    """Write the generated fixture maps into DIRECTORY."""
    written = CorpusGenerator(seed).write(directory)
    click.echo(f"wrote {len(written)} files to {directory}")

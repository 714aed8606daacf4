"""Command-line interface for extlin.

Exit codes: 0 on success, 1 when a law suite fails or ``validate`` finds a
violation, 2 for usage and input errors.
"""

import json
import logging
import sys
from pathlib import Path
from typing import Any, NoReturn, Optional

import click
from pydantic import ValidationError

from .core.compute import COMPUTATIONS, compute as run_compute
from .core.errors import ExtlinError, InvariantError, SuiteNotFoundError
from .core.laws import MUTATIONS, get_suite, run_all, run_suite
from .core.quantum import qubit_demo
from .core.render import Renderer
from .core.serialization import LOADERS, detect_kind

logger = logging.getLogger(__name__)

DEMOS = ("qubit",)


def configure_logging(verbose: bool):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )


def fail(message: str, code: int) -> NoReturn:
    click.echo(message, err=True)
    sys.exit(code)


def read_document(path: str) -> Any:
    logger.debug("reading %s", path)
    try:
        return json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        fail(f"Error: {path} is not valid JSON: {exc}", 2)


def format_validation_error(exc: ValidationError) -> str:
    lines = []
    for error in exc.errors():
        where = ".".join(str(p) for p in error["loc"]) or "<document>"
        lines.append(f"  at {where}: {error['msg']}")
    return "\n".join(lines)


def format_location(exc: InvariantError) -> str:
    return ".".join(str(p) for p in exc.location) or "<document>"


def emit_json(value: Any, output: Optional[str] = None):
    text = json.dumps(value, indent=2, ensure_ascii=False)
    if output and output != "-":
        Path(output).write_text(text + "\n", encoding="utf-8")
    else:
        click.echo(text)


verbose_option = click.option("--verbose", "-v", is_flag=True, help="Enable debug logging on stderr.")
format_option = click.option(
    "--format",
    "fmt",
    type=click.Choice(["text", "json"]),
    default="text",
    show_default=True,
    help="Output format.",
)


@click.group()
@click.version_option()
def main():
    """Exact computations with local systems and external tensor products.

    Run law suites over generated instances, compute with JSON documents
    and replay the qubit measurement example.
    """
    pass


@main.command()
@click.option("--suite", "-s", default="all", show_default=True, help="Suite name, or 'all'.")
@click.option(
    "--seed",
    type=click.IntRange(0, 2**64 - 1),
    default=0,
    envvar="EXTLIN_SEED",
    show_default=True,
    help="Corpus seed (also read from EXTLIN_SEED).",
)
@click.option("--cases", "-n", type=click.IntRange(min=0), default=50, show_default=True, help="Cases per suite.")
@format_option
@click.option("--mutation", type=click.Choice(MUTATIONS), hidden=True)
@verbose_option
def check(suite: str, seed: int, cases: int, fmt: str, mutation: Optional[str], verbose: bool):
    """Run law suites and report failures.

    Examples:

        extlin check --suite all --seed 7

        extlin check -s distributivity --cases 200 --format json
    """
    configure_logging(verbose)
    try:
        if suite == "all":
            reports = run_all(seed=seed, cases=cases, mutation=mutation)
        else:
            get_suite(suite)
            reports = [run_suite(suite, seed=seed, cases=cases, mutation=mutation)]
    except SuiteNotFoundError as exc:
        fail(f"Error: {exc}", 2)

    if fmt == "json":
        payload = [r.model_dump() for r in reports]
        emit_json(payload if suite == "all" else payload[0])
    else:
        click.echo(Renderer().reports(reports), nl=False)
    sys.exit(0 if all(r.passed for r in reports) else 1)


@main.command()
@click.option("--op", "-o", required=True, type=click.Choice(sorted(COMPUTATIONS)), help="Operation to run.")
@click.option("--input", "-i", "input_path", required=True, type=click.Path(exists=True, dir_okay=False), help="JSON input file.")
@click.option("--output", type=click.Path(dir_okay=False), default="-", help="Output file (default: stdout).")
@verbose_option
def compute(op: str, input_path: str, output: str, verbose: bool):
    """Compute with a JSON document and print the result as JSON.

    Examples:

        extlin compute --op exttensor --input pair.json

        extlin compute --op homology -i sphere.json --output homology.json
    """
    configure_logging(verbose)
    data = read_document(input_path)
    try:
        result = run_compute(op, data)
    except ValidationError as exc:
        fail(f"Error: input does not match the {op} schema\n{format_validation_error(exc)}", 2)
    except InvariantError as exc:
        fail(f"Error: {exc.message} (at {format_location(exc)})", 2)
    except ExtlinError as exc:
        fail(f"Error: {exc.message}", 2)
    logger.debug("%s finished, writing to %s", op, output)
    emit_json(result, output)


@main.command()
@click.option("--name", required=True, type=click.Choice(DEMOS), help="Demo to run.")
@format_option
@verbose_option
def demo(name: str, fmt: str, verbose: bool):
    """Replay a worked example and verify its diagrams.

    Examples:

        extlin demo --name qubit --format json
    """
    configure_logging(verbose)
    report = qubit_demo()
    if fmt == "json":
        emit_json(report.model_dump())
    else:
        click.echo(Renderer().qubit(report), nl=False)
    sys.exit(0 if report.verified else 1)


@main.command()
@click.option("--input", "-i", "input_path", required=True, type=click.Path(exists=True, dir_okay=False), help="JSON input file.")
@verbose_option
def validate(input_path: str, verbose: bool):
    """Check a JSON document against every construction-time law.

    Examples:

        extlin validate --input bs3.json
    """
    configure_logging(verbose)
    data = read_document(input_path)
    try:
        kind = detect_kind(data)
        LOADERS[kind](data)
    except ValidationError as exc:
        fail(f"Error: malformed document\n{format_validation_error(exc)}", 2)
    except InvariantError as exc:
        click.echo(f"invalid {kind}: {type(exc).__name__}: {exc.message}", err=True)
        click.echo(f"  at {format_location(exc)}", err=True)
        sys.exit(1)
    except ExtlinError as exc:
        fail(f"Error: {exc.message}", 2)
    click.echo(f"valid {kind}")


if __name__ == "__main__":
    main()

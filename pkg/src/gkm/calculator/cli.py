# Copyright GKM Calculator contributors. All Rights Reserved.
"""
The gkm-calc command line. Results go to stdout as whitespace-separated tables,
diagnostics and logs go to stderr.

Exit codes: 0 on success, 1 on invalid input or a failed check, 2 on usage errors.
"""

from __future__ import annotations

import argparse
import logging
import sys
from contextlib import redirect_stderr, redirect_stdout
from fractions import Fraction
from typing import IO, Callable, Dict, List, Optional, Sequence

from . import builders, cohomology, integral
from .configuration import CalculatorConfiguration, load_configuration
from .graph_io import (
    STDIO,
    format_basis,
    format_betti,
    format_gaps,
    format_generators,
    format_hilbert,
    format_report,
    read_graph,
    read_polytope,
    write_graph,
)
from .moment_graph import Direction, MomentGraph, generic_direction, validate
from .polyalg import GkmError

try:
    from ._version import version as __version__
except ImportError:  # pragma: no cover
    __version__ = "0.0.0"

_logger = logging.getLogger(__name__)

_LOG_FORMAT = "%(levelname)s %(name)s: %(message)s"


class _Session:
    """Streams and configuration shared by the subcommand handlers"""

    def __init__(
        self, config: CalculatorConfiguration, stdin: IO[str], stdout: IO[str]
    ) -> None:
        self.config = config
        self.stdin = stdin
        self.stdout = stdout

    def read_graph(self, source: str) -> MomentGraph:
        return read_graph(source, self.stdin)

    def write(self, text: str) -> None:
        self.stdout.write(text)


def _integers(text: str) -> List[int]:
    try:
        return [int(part) for part in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _rationals(text: str) -> List[Fraction]:
    try:
        return [Fraction(part.strip()) for part in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"expected comma-separated rationals p/q, got {text!r}")


def _rational(text: str) -> Fraction:
    (value,) = _rationals(text)
    return value


def _matrix(text: str) -> List[List[int]]:
    return [_integers(row) for row in text.split(";")]


def _direction(g: MomentGraph, xi: Optional[List[int]]) -> Direction:
    if xi is None:
        direction = generic_direction(g)
        _logger.info("Using generic direction (%s)", direction)
        return direction
    return Direction(tuple(xi))


def _validate(session: _Session, args: argparse.Namespace) -> int:
    report = validate(session.read_graph(args.file))
    session.write(format_report(report))
    return 0 if report.is_valid else 1


def _betti(session: _Session, args: argparse.Namespace) -> int:
    g = session.read_graph(args.file)
    g.require_valid()
    session.write(format_betti(cohomology.betti_numbers(g, _direction(g, args.xi))))
    return 0


def _hilbert(session: _Session, args: argparse.Namespace) -> int:
    g = session.read_graph(args.file)
    g.require_valid()
    table = cohomology.hilbert_table(
        g, _direction(g, args.xi), args.max_degree, session.config.max_workers
    )
    session.write(format_hilbert(table))
    return 0 if table.agrees else 1


def _basis(session: _Session, args: argparse.Namespace) -> int:
    g = session.read_graph(args.file)
    session.write(format_basis(cohomology.kernel_basis(g, args.degree)))
    return 0


def _generators(session: _Session, args: argparse.Namespace) -> int:
    g = session.read_graph(args.file)
    g.require_valid()
    generators = cohomology.module_generators(
        g, _direction(g, args.xi), args.max_degree, session.config.max_workers
    )
    session.write(format_generators(generators))
    return 0 if generators.is_free else 1


def _int_gap(session: _Session, args: argparse.Namespace) -> int:
    g = session.read_graph(args.file)
    g.require_valid()
    session.write(format_gaps(integral.gap_report(g, _direction(g, args.xi))))
    return 0


def _build(session: _Session, args: argparse.Namespace) -> int:
    kind = args.kind
    if kind == "point":
        g = builders.point(args.rank)
    elif kind == "sphere":
        g = builders.sphere(args.weight, base=args.base, scale=args.scale)
    elif kind == "cpn":
        g = builders.projective_space(args.dim)
    elif kind == "product":
        g = builders.product(
            session.read_graph(args.first), session.read_graph(args.second), args.separator
        )
    elif kind == "scale":
        g = builders.scale_action(session.read_graph(args.file), args.factor)
    elif kind == "restrict":
        g = builders.restrict_action(session.read_graph(args.file), args.matrix)
    else:
        vertices, edges = read_polytope(args.file, session.stdin)
        g = builders.from_delzant(vertices, edges)
    write_graph(g, args.output, session.stdout)
    return 0


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return value


def _non_negative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gkm-calc",
        description="Equivariant cohomology of Hamiltonian torus actions from moment graphs.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", help="JSON configuration file overriding the defaults")
    parser.add_argument(
        "--log-level",
        choices=["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"],
        help="Overrides the configured log level",
    )
    commands = parser.add_subparsers(dest="command", required=True)

    def command(name: str, handler: Callable, summary: str) -> argparse.ArgumentParser:
        sub = commands.add_parser(name, help=summary)
        sub.set_defaults(handler=handler)
        return sub

    def graph_file(sub: argparse.ArgumentParser) -> None:
        sub.add_argument("file", help="Graph document, or - for stdin")

    def direction(sub: argparse.ArgumentParser) -> None:
        sub.add_argument(
            "--xi", type=_integers, help="Direction as comma-separated integers (default: generic)"
        )

    sub = command("validate", _validate, "Check the moment-graph invariants")
    graph_file(sub)

    sub = command("betti", _betti, "Ordinary Betti numbers from the Morse indices")
    graph_file(sub)
    direction(sub)

    sub = command("hilbert", _hilbert, "Kernel dimensions against the Morse prediction")
    graph_file(sub)
    sub.add_argument("--max-degree", type=_non_negative_int, required=True)
    direction(sub)

    sub = command("basis", _basis, "Basis of the congruence kernel in one degree")
    graph_file(sub)
    sub.add_argument("--degree", type=_non_negative_int, required=True)

    sub = command("generators", _generators, "Flow-up module generators and freeness")
    graph_file(sub)
    sub.add_argument("--max-degree", type=_non_negative_int, required=True)
    direction(sub)

    sub = command("int-gap", _int_gap, "Integral Euler-class divisibility gap per vertex")
    graph_file(sub)
    direction(sub)

    build = command("build", _build, "Write a standard moment graph")
    kinds = build.add_subparsers(dest="kind", required=True)
    output: Dict[str, argparse.ArgumentParser] = {}

    output["point"] = kinds.add_parser("point", help="A single fixed point")
    output["point"].add_argument("--rank", type=_positive_int, required=True)

    output["sphere"] = kinds.add_parser("sphere", help="A two-sphere with one weight")
    output["sphere"].add_argument("--weight", type=_integers, required=True)
    output["sphere"].add_argument("--base", type=_rationals)
    output["sphere"].add_argument("--scale", type=_rational, default=Fraction(1))

    output["cpn"] = kinds.add_parser("cpn", help="Complex projective space")
    output["cpn"].add_argument("--dim", type=_positive_int, required=True)

    output["product"] = kinds.add_parser("product", help="Product of two graphs")
    output["product"].add_argument("first")
    output["product"].add_argument("second")
    output["product"].add_argument("--separator", default="")

    output["scale"] = kinds.add_parser("scale", help="Multiply every weight by a factor")
    output["scale"].add_argument("file")
    output["scale"].add_argument("--factor", type=_positive_int, required=True)

    output["restrict"] = kinds.add_parser("restrict", help="Restrict to a subtorus")
    output["restrict"].add_argument("file")
    output["restrict"].add_argument(
        "--matrix", type=_matrix, required=True, help="Rows separated by ';', e.g. '1,1'"
    )

    output["delzant"] = kinds.add_parser("delzant", help="Toric graph of a polytope document")
    output["delzant"].add_argument("file")

    for sub in output.values():
        sub.add_argument("-o", "--output", default=STDIO, help="Output path, or - for stdout")
    return parser


def run(
    argv: Optional[Sequence[str]] = None,
    stdin: Optional[IO[str]] = None,
    stdout: Optional[IO[str]] = None,
    stderr: Optional[IO[str]] = None,
) -> int:
    """
    Runs one gkm-calc invocation.

    Args:
        argv (Optional[Sequence[str]]): Arguments without the program name; defaults to sys.argv.
        stdin, stdout, stderr: Streams to use instead of the process streams.

    Returns:
        int: The exit code.
    """
    stdin = stdin or sys.stdin
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        # argparse writes usage, errors and --version to the process streams
        with redirect_stdout(stdout), redirect_stderr(stderr):
            args = build_parser().parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 2

    package_logger = logging.getLogger("gkm.calculator")
    handler = logging.StreamHandler(stderr)
    handler.setFormatter(logging.Formatter(_LOG_FORMAT))
    previous_level = package_logger.level
    package_logger.addHandler(handler)
    try:
        config = load_configuration(args.config)
        package_logger.setLevel(args.log_level or config.log_level)
        return args.handler(_Session(config, stdin, stdout), args)
    except (GkmError, ValueError, KeyError, OSError) as e:
        stderr.write(f"error: {e}\n")
        return 1
    finally:
        package_logger.removeHandler(handler)
        package_logger.setLevel(previous_level)

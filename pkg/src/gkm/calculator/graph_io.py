# Copyright GKM Calculator contributors. All Rights Reserved.
"""
Reading and writing moment-graph and polytope documents, and the plain-text tables
printed by the command line. Documents are YAML (so JSON is accepted too) and are
checked against the JSON schemas shipped in ``schemas/``.
"""

from __future__ import annotations

import json
import logging
import os
import sys
from fractions import Fraction
from functools import lru_cache
from typing import IO, Any, Dict, Iterable, List, Optional, Sequence, Tuple

import yaml
from jsonschema import Draft202012Validator
from jsonschema.exceptions import best_match

from .cohomology import CohomologyClass, GradedBasis, HilbertTable, ModuleGenerators
from .moment_graph import Edge, MomentGraph, ValidationReport, Vertex
from .polyalg import GkmError, LinearForm

_logger = logging.getLogger(__name__)

_SCHEMA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "schemas")

STDIO = "-"


class GraphParseError(GkmError):
    """Raised when a graph or polytope document is malformed; names the YAML line or field"""

    pass


@lru_cache(maxsize=None)
def _validator(name: str) -> Draft202012Validator:
    with open(os.path.join(_SCHEMA_DIR, f"{name}.schema.json"), encoding="utf-8") as f:
        return Draft202012Validator(json.load(f))


def _field_path(path: Iterable[Any]) -> str:
    text = ""
    for part in path:
        text += f"[{part}]" if isinstance(part, int) else (f".{part}" if text else str(part))
    return text or "document"


def _parse_document(text: str, kind: str) -> Dict[str, Any]:
    try:
        document = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        where = f" at line {mark.line + 1}, column {mark.column + 1}" if mark else ""
        problem = getattr(e, "problem", None) or str(e)
        raise GraphParseError(f"Malformed {kind} document{where}: {problem}") from e
    if not isinstance(document, dict):
        raise GraphParseError(f"A {kind} document must be a mapping")
    error = best_match(_validator(kind).iter_errors(document))
    if error is not None:
        where = _field_path(error.absolute_path)
        raise GraphParseError(f"Invalid {kind} document at {where}: {error.message}")
    return document


def _rational(value: Any, where: str) -> Fraction:
    if isinstance(value, float):
        raise GraphParseError(f"{where}: {value!r} is not an exact rational; write it as p/q")
    try:
        return Fraction(value)
    except (ValueError, ZeroDivisionError) as e:
        raise GraphParseError(f"{where}: malformed rational {value!r}") from e


def _integer(value: Any, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise GraphParseError(f"{where}: weights are integers, got {value!r}")
    return value


def load_graph(text: str) -> MomentGraph:
    """
    Parses a graph document. The graph is not validated; use validate() for the
    moment-graph invariants.

    Raises:
        GraphParseError: If the text is not a well-formed graph document.
    """
    document = _parse_document(text, "graph")
    vertices = [
        Vertex(
            str(v["id"]),
            tuple(
                _rational(c, f"vertices[{i}].moment[{k}]") for k, c in enumerate(v["moment"])
            ),
        )
        for i, v in enumerate(document["vertices"])
    ]
    edges = []
    for i, e in enumerate(document.get("edges") or []):
        weight = tuple(_integer(c, f"edges[{i}].weight[{k}]") for k, c in enumerate(e["weight"]))
        if not any(weight):
            raise GraphParseError(f"edges[{i}].weight: the weight of an edge must be nonzero")
        edges.append(Edge(str(e["src"]), str(e["dst"]), LinearForm(weight)))
    g = MomentGraph(document["torus_rank"], tuple(vertices), tuple(edges))
    _logger.info("Loaded graph: %d vertices, %d edges", len(vertices), len(edges))
    return g


def dump_graph(g: MomentGraph) -> str:
    """The canonical text of a graph: rationals as p/q strings, lists in flow style"""
    document = {
        "torus_rank": g.torus_rank,
        "vertices": [
            {"id": v.id, "moment": [str(c) for c in v.moment]} for v in g.vertices
        ],
        "edges": [
            {"src": e.src, "dst": e.dst, "weight": list(e.weight.coeffs)} for e in g.edges
        ],
    }
    return yaml.safe_dump(document, sort_keys=False, default_flow_style=None)


def _read_text(source: str, stdin: Optional[IO[str]] = None) -> str:
    if source == STDIO:
        return (stdin or sys.stdin).read()
    with open(source, encoding="utf-8") as f:
        return f.read()


def read_graph(source: str, stdin: Optional[IO[str]] = None) -> MomentGraph:
    """Reads a graph document from a path, or from stdin when source is '-'"""
    return load_graph(_read_text(source, stdin))


def write_graph(g: MomentGraph, target: str, stdout: Optional[IO[str]] = None) -> None:
    """Writes the canonical graph text to a path, or to stdout when target is '-'"""
    text = dump_graph(g)
    if target == STDIO:
        (stdout or sys.stdout).write(text)
        return
    with open(target, "w", encoding="utf-8") as f:
        f.write(text)


def load_polytope(text: str) -> Tuple[List[Tuple[Fraction, ...]], List[Tuple[int, int]]]:
    """
    Parses a polytope document into vertex points and index pairs.

    Raises:
        GraphParseError: If the text is not a well-formed polytope document.
    """
    document = _parse_document(text, "polytope")
    points = [
        tuple(_rational(c, f"vertices[{i}][{k}]") for k, c in enumerate(p))
        for i, p in enumerate(document["vertices"])
    ]
    edges = [(int(i), int(j)) for i, j in document["edges"]]
    return points, edges


def read_polytope(
    source: str, stdin: Optional[IO[str]] = None
) -> Tuple[List[Tuple[Fraction, ...]], List[Tuple[int, int]]]:
    return load_polytope(_read_text(source, stdin))


def format_report(report: ValidationReport) -> str:
    lines = [f"error {v.kind} {v.location}: {v.message}" for v in report.violations]
    lines.extend(f"warning {w.kind} {w.location}: {w.message}" for w in report.warnings)
    lines.append("valid" if report.is_valid else f"invalid ({len(report.violations)} violations)")
    return "\n".join(lines) + "\n"


def format_hilbert(table: HilbertTable) -> str:
    """Rows of 'degree computed predicted', with 'mismatch' appended where they differ"""
    lines = []
    for d, (computed, predicted) in enumerate(zip(table.dims, table.predicted)):
        row = f"{d} {computed} {predicted}"
        lines.append(row if computed == predicted else f"{row} mismatch")
    return "\n".join(lines) + "\n"


def format_betti(betti: Sequence[int]) -> str:
    return "".join(f"{k} {b}\n" for k, b in enumerate(betti))


def format_class(c: CohomologyClass, indent: str = "") -> str:
    return "".join(f"{indent}{vid} {p.to_text()}\n" for vid, p in c.values.items())


def format_basis(basis: GradedBasis) -> str:
    lines = [f"degree {basis.degree} dimension {basis.dimension}\n"]
    for i, c in enumerate(basis.basis):
        lines.append(f"class {i}\n")
        lines.append(format_class(c, indent="  "))
    return "".join(lines)


def format_generators(generators: ModuleGenerators) -> str:
    lines = []
    for vid, tau in generators.generators:
        lines.append(f"generator {vid} degree {tau.degree}\n")
        lines.append(format_class(tau, indent="  "))
    lines.append("degree generators rank kernel free\n")
    for row in generators.freeness:
        verdict = "yes" if row.free else "no"
        lines.append(f"{row.degree} {row.generator_count} {row.rank} {row.kernel_dim} {verdict}\n")
    return "".join(lines)


def format_gaps(gaps: Sequence[Tuple[str, int]]) -> str:
    return "".join(f"{vid} {gap}\n" for vid, gap in gaps)

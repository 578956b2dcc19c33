# Copyright GKM Calculator contributors. All Rights Reserved.
"""
The moment graph of a Hamiltonian T-space with isolated fixed points: vertices are
fixed points with their moment images, edges are the invariant two-spheres of the
one-skeleton labelled by their weights.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations, count
from typing import Dict, List, Sequence, Tuple

from .polyalg import GkmError, LinearForm, Polynomial

_logger = logging.getLogger(__name__)


class GraphValidationError(GkmError):
    """Raised when an operation that needs a valid moment graph is given an invalid one"""

    def __init__(self, message: str, report: ValidationReport | None = None) -> None:
        super().__init__(message)
        self.report = report


class GenericityError(GkmError):
    """Raised when a direction pairs to zero with some edge weight"""

    pass


@dataclass(frozen=True)
class Vertex:
    id: str
    moment: Tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "moment", tuple(Fraction(c) for c in self.moment))


@dataclass(frozen=True)
class Edge:
    """A one-skeleton sphere from src to dst; mu(dst) - mu(src) is a positive multiple of weight"""

    src: str
    dst: str
    weight: LinearForm

    @property
    def label(self) -> str:
        return f"{self.src}->{self.dst}"


@dataclass(frozen=True)
class Direction:
    """A covector xi in t; f = <mu, xi> is the Morse function"""

    xi: Tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "xi", tuple(int(c) for c in self.xi))

    def negate(self) -> Direction:
        return Direction(tuple(-c for c in self.xi))

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.xi)


@dataclass(frozen=True)
class Violation:
    kind: str
    location: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    violations: Tuple[Violation, ...] = ()
    warnings: Tuple[Violation, ...] = ()

    @property
    def is_valid(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class MomentGraph:
    torus_rank: int
    vertices: Tuple[Vertex, ...]
    edges: Tuple[Edge, ...] = field(default=())

    def __post_init__(self) -> None:
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))

    @cached_property
    def _vertex_index(self) -> Dict[str, Vertex]:
        return {v.id: v for v in self.vertices}

    @cached_property
    def _incidence(self) -> Dict[str, Tuple[Edge, ...]]:
        incident: Dict[str, List[Edge]] = {v.id: [] for v in self.vertices}
        for edge in self.edges:
            for end in (edge.src, edge.dst):
                if end in incident:
                    incident[end].append(edge)
        return {k: tuple(v) for k, v in incident.items()}

    @property
    def vertex_ids(self) -> List[str]:
        return [v.id for v in self.vertices]

    def vertex(self, vertex_id: str) -> Vertex:
        try:
            return self._vertex_index[vertex_id]
        except KeyError:
            raise KeyError(f"No vertex with id {vertex_id!r}") from None

    def edges_at(self, vertex_id: str) -> Tuple[Edge, ...]:
        self.vertex(vertex_id)
        return self._incidence[vertex_id]

    @staticmethod
    def weight_away(edge: Edge, vertex_id: str) -> LinearForm:
        """The edge weight oriented away from the given endpoint"""
        if vertex_id == edge.src:
            return edge.weight
        if vertex_id == edge.dst:
            return edge.weight.negate()
        raise KeyError(f"Vertex {vertex_id!r} is not an endpoint of edge {edge.label}")

    def require_valid(self) -> None:
        """
        Raises:
            GraphValidationError: If validate reports any violation.
        """
        report = validate(self)
        if not report.is_valid:
            details = "; ".join(f"{v.kind} at {v.location}: {v.message}" for v in report.violations)
            raise GraphValidationError(f"Invalid moment graph: {details}", report)


def _moment_multiple(difference: Sequence[Fraction], weight: LinearForm) -> Fraction | None:
    """c with difference == c * weight, or None if there is no such c"""
    j = weight.elimination_index
    c = difference[j] / weight.coeffs[j]
    if all(d == c * a for d, a in zip(difference, weight.coeffs)):
        return c
    return None


def validate(g: MomentGraph) -> ValidationReport:
    """
    Checks every moment-graph invariant and returns the violations as data.

    Non-primitive weights are reported as warnings: they are legal and are exactly
    the case where integral and rational answers can differ.
    """
    violations: List[Violation] = []
    warnings: List[Violation] = []
    n = g.torus_rank

    if n < 1:
        violations.append(Violation("rank-mismatch", "graph", f"torus rank {n} is not positive"))

    seen: set[str] = set()
    for vertex in g.vertices:
        if vertex.id in seen:
            violations.append(
                Violation("duplicate-id", vertex.id, f"vertex id {vertex.id!r} is used twice")
            )
        seen.add(vertex.id)
        if len(vertex.moment) != n:
            violations.append(
                Violation(
                    "rank-mismatch",
                    vertex.id,
                    f"moment has {len(vertex.moment)} coordinates, torus rank is {n}",
                )
            )

    moments = {v.id: v.moment for v in g.vertices}
    incident: Dict[str, List[Edge]] = {vid: [] for vid in moments}
    for edge in g.edges:
        location = edge.label
        missing = [end for end in (edge.src, edge.dst) if end not in moments]
        if missing:
            violations.append(
                Violation("unknown-endpoint", location, f"unknown vertex ids {missing}")
            )
            continue
        if edge.src == edge.dst:
            violations.append(Violation("self-loop", location, "edge joins a vertex to itself"))
            continue
        if edge.weight.num_vars != n:
            violations.append(
                Violation(
                    "rank-mismatch",
                    location,
                    f"weight {list(edge.weight.coeffs)} does not have {n} coordinates",
                )
            )
            continue
        incident[edge.src].append(edge)
        incident[edge.dst].append(edge)
        if not edge.weight.is_primitive:
            warnings.append(
                Violation(
                    "non-primitive-weight",
                    location,
                    f"weight {list(edge.weight.coeffs)} has content {edge.weight.content}",
                )
            )
        src_moment, dst_moment = moments[edge.src], moments[edge.dst]
        if len(src_moment) != n or len(dst_moment) != n:
            continue
        difference = [b - a for a, b in zip(src_moment, dst_moment)]
        multiple = _moment_multiple(difference, edge.weight)
        if multiple is None or multiple <= 0:
            violations.append(
                Violation(
                    "moment-compatibility",
                    location,
                    f"mu({edge.dst}) - mu({edge.src}) = [{', '.join(map(str, difference))}] "
                    f"is not a positive multiple of the weight {list(edge.weight.coeffs)}",
                )
            )

    # Edges that failed an endpoint or rank check cannot be compared
    for vid, edges in incident.items():
        for a, b in combinations(edges, 2):
            if a.weight.is_proportional_to(b.weight):
                violations.append(
                    Violation(
                        "gkm-validity",
                        vid,
                        f"edges {a.label} and {b.label} have proportional weights "
                        f"{list(a.weight.coeffs)} and {list(b.weight.coeffs)}",
                    )
                )

    return ValidationReport(tuple(violations), tuple(warnings))


def check_generic(g: MomentGraph, xi: Direction) -> None:
    """
    Raises:
        GenericityError: If xi has the wrong rank or is orthogonal to an edge weight.
    """
    if len(xi.xi) != g.torus_rank:
        raise GenericityError(
            f"Direction ({xi}) has rank {len(xi.xi)}, the torus has rank {g.torus_rank}"
        )
    for edge in g.edges:
        if edge.weight.pair(xi.xi) == 0:
            raise GenericityError(
                f"Direction ({xi}) is not generic: it is orthogonal to the weight "
                f"{list(edge.weight.coeffs)} of edge {edge.label}"
            )


def generic_direction(g: MomentGraph) -> Direction:
    """
    The first xi = (1, c, c^2, ..., c^(n-1)), c = 1, 2, 3, ..., pairing nonzero with
    every edge weight. Each weight kills at most n - 1 values of c, so this stops.
    """
    for c in count(1):
        xi = tuple(c**i for i in range(g.torus_rank))
        if all(edge.weight.pair(xi) != 0 for edge in g.edges):
            _logger.debug("Generic direction for %d edges: %s", len(g.edges), xi)
            return Direction(xi)
    raise AssertionError("unreachable")  # pragma: no cover


def f_value(g: MomentGraph, xi: Direction, vertex_id: str) -> Fraction:
    """The Morse function <mu(v), xi>"""
    return sum(
        (m * c for m, c in zip(g.vertex(vertex_id).moment, xi.xi)),
        Fraction(0),
    )


def downward_weights(g: MomentGraph, xi: Direction, vertex_id: str) -> List[LinearForm]:
    """Weights oriented away from the vertex that pair negatively with xi, in edge order"""
    check_generic(g, xi)
    weights = (g.weight_away(edge, vertex_id) for edge in g.edges_at(vertex_id))
    return [w for w in weights if w.pair(xi.xi) < 0]


def morse_index(g: MomentGraph, xi: Direction, vertex_id: str) -> int:
    """Twice the number of downward edges at the vertex"""
    return 2 * len(downward_weights(g, xi, vertex_id))


def euler_class_down(g: MomentGraph, xi: Direction, vertex_id: str) -> Polynomial:
    """Product of the downward weights (oriented away from the vertex); 1 at a minimum"""
    product = Polynomial.one(g.torus_rank)
    for weight in downward_weights(g, xi, vertex_id):
        product = product * weight.as_polynomial()
    return product


def critical_order(g: MomentGraph, xi: Direction) -> List[str]:
    """Vertex ids sorted by f = <mu, xi> ascending, ties broken by id"""
    if len(xi.xi) != g.torus_rank:
        raise GenericityError(
            f"Direction ({xi}) has rank {len(xi.xi)}, the torus has rank {g.torus_rank}"
        )
    return sorted(g.vertex_ids, key=lambda vid: (f_value(g, xi, vid), vid))

# Copyright GKM Calculator contributors. All Rights Reserved.
"""Constructors for standard moment graphs: points, spheres, CP^m, products and toric polytopes"""

from __future__ import annotations

import logging
from fractions import Fraction
from math import gcd, lcm
from typing import List, Optional, Sequence, Tuple, Union

from sympy import Matrix

from .moment_graph import Edge, GraphValidationError, MomentGraph, Vertex
from .polyalg import LinearForm

_logger = logging.getLogger(__name__)

RationalLike = Union[int, Fraction, str]


def _rational(value: RationalLike) -> Fraction:
    if isinstance(value, float):
        raise TypeError(f"Floating point value {value!r} is not an exact rational")
    return Fraction(value)


def point(rank: int, vertex_id: str = "pt") -> MomentGraph:
    """A single fixed point at the origin of a rank-n torus; its cohomology is Sym(t*)"""
    if rank < 1:
        raise ValueError(f"Torus rank must be positive, got {rank}")
    return MomentGraph(rank, (Vertex(vertex_id, (Fraction(0),) * rank),))


def sphere(
    alpha: Union[LinearForm, Sequence[int]],
    base: Optional[Sequence[RationalLike]] = None,
    scale: RationalLike = 1,
) -> MomentGraph:
    """
    The two-sphere rotated with weight alpha: south pole S at base, north pole N at
    base + scale * alpha, joined by one edge S -> N.
    """
    weight = alpha if isinstance(alpha, LinearForm) else LinearForm(tuple(alpha))
    n = weight.num_vars
    origin = tuple(_rational(c) for c in base) if base is not None else (Fraction(0),) * n
    if len(origin) != n:
        raise ValueError(f"Base point has {len(origin)} coordinates, the weight has {n}")
    factor = _rational(scale)
    if factor <= 0:
        raise ValueError(f"Sphere scale must be positive, got {factor}")
    north = tuple(b + factor * a for b, a in zip(origin, weight.coeffs))
    return MomentGraph(
        n,
        (Vertex("S", origin), Vertex("N", north)),
        (Edge("S", "N", weight),),
    )


def projective_space(m: int) -> MomentGraph:
    """CP^m with the standard T^m action: vertices 0, e_1, ..., e_m, an edge between each pair"""
    if m < 1:
        raise ValueError(f"Projective space dimension must be at least 1, got {m}")
    moments = [tuple(int(i == k) for k in range(1, m + 1)) for i in range(m + 1)]
    vertices = tuple(Vertex(str(i), moment) for i, moment in enumerate(moments))
    edges = tuple(
        Edge(str(i), str(j), LinearForm(tuple(b - a for a, b in zip(moments[i], moments[j]))))
        for i in range(m + 1)
        for j in range(i + 1, m + 1)
    )
    _logger.info("Built CP^%d: %d vertices, %d edges", m, len(vertices), len(edges))
    return MomentGraph(m, vertices, edges)


def product(g1: MomentGraph, g2: MomentGraph, separator: str = "") -> MomentGraph:
    """
    The product space under the product torus. Vertex ids are id1 + separator + id2
    in g1-major order; edges of g1 come first, each repeated over the vertices of g2.

    Raises:
        GraphValidationError: If either factor is invalid or two product ids collide.
    """
    g1.require_valid()
    g2.require_valid()
    n1, n2 = g1.torus_rank, g2.torus_rank

    def vid(a: str, b: str) -> str:
        return f"{a}{separator}{b}"

    vertices = tuple(
        Vertex(vid(v1.id, v2.id), v1.moment + v2.moment) for v1 in g1.vertices for v2 in g2.vertices
    )
    ids = [v.id for v in vertices]
    if len(set(ids)) != len(ids):
        raise GraphValidationError(
            f"Product vertex ids collide; choose a separator (ids: {', '.join(ids)})"
        )
    edges: List[Edge] = [
        Edge(vid(e.src, v2.id), vid(e.dst, v2.id), LinearForm(e.weight.coeffs + (0,) * n2))
        for e in g1.edges
        for v2 in g2.vertices
    ]
    edges.extend(
        Edge(vid(v1.id, e.src), vid(v1.id, e.dst), LinearForm((0,) * n1 + e.weight.coeffs))
        for v1 in g1.vertices
        for e in g2.edges
    )
    return MomentGraph(n1 + n2, vertices, tuple(edges))


def scale_action(g: MomentGraph, k: int) -> MomentGraph:
    """Multiplies every weight by k; moments are unchanged, so the action becomes non-effective"""
    if isinstance(k, bool) or not isinstance(k, int) or k < 1:
        raise ValueError(f"Scale factor must be a positive integer, got {k!r}")
    return MomentGraph(
        g.torus_rank,
        g.vertices,
        tuple(Edge(e.src, e.dst, e.weight.scale(k)) for e in g.edges),
    )


def restrict_action(g: MomentGraph, matrix: Sequence[Sequence[int]]) -> MomentGraph:
    """
    Restricts to the subtorus whose dual map is the integer matrix P (rows are the new
    coordinates): weights become P alpha and moments P mu. The result can fail GKM
    validity when two weights become proportional; validate() reports that.

    Raises:
        GraphValidationError: If P kills some edge weight.
    """
    rows = [tuple(int(c) for c in row) for row in matrix]
    if not rows or any(len(row) != g.torus_rank for row in rows):
        raise ValueError(f"Restriction matrix must have {g.torus_rank} columns")

    def apply(vector: Sequence) -> tuple:
        return tuple(sum((c * x for c, x in zip(row, vector)), 0) for row in rows)

    edges = []
    for e in g.edges:
        image = apply(e.weight.coeffs)
        if not any(image):
            raise GraphValidationError(
                f"Restriction kills the weight {list(e.weight.coeffs)} of edge {e.label}"
            )
        edges.append(Edge(e.src, e.dst, LinearForm(image)))
    vertices = tuple(Vertex(v.id, apply(v.moment)) for v in g.vertices)
    return MomentGraph(len(rows), vertices, tuple(edges))


def primitive_direction(difference: Sequence[Fraction]) -> LinearForm:
    """The primitive integer vector pointing along a nonzero rational vector"""
    if not any(difference):
        raise ValueError("Cannot take the direction of a zero vector")
    denominators = lcm(*(Fraction(c).denominator for c in difference))
    integral = [int(Fraction(c) * denominators) for c in difference]
    content = gcd(*integral)
    return LinearForm(tuple(c // content for c in integral))


def _polytope_points(vertices: Sequence[Sequence[RationalLike]]) -> List[Tuple[Fraction, ...]]:
    points = [tuple(_rational(c) for c in p) for p in vertices]
    if not points:
        raise ValueError("A polytope needs at least one vertex")
    rank = len(points[0])
    for i, p in enumerate(points):
        if len(p) != rank:
            raise ValueError(f"Polytope vertex {i} has {len(p)} coordinates, expected {rank}")
    return points


def delzant_defects(
    vertices: Sequence[Sequence[RationalLike]], edges: Sequence[Tuple[int, int]]
) -> List[int]:
    """
    Indices of the polytope vertices with exactly n incident edges whose primitive edge
    vectors do not form a Z-basis (determinant other than +1 or -1).
    """
    points = _polytope_points(vertices)
    rank = len(points[0])
    outgoing: List[List[LinearForm]] = [[] for _ in points]
    for i, j in edges:
        difference = [b - a for a, b in zip(points[i], points[j])]
        outgoing[i].append(primitive_direction(difference))
        outgoing[j].append(primitive_direction([-c for c in difference]))
    defects = []
    for i, directions in enumerate(outgoing):
        if len(directions) != rank:
            continue
        if abs(Matrix([list(d.coeffs) for d in directions]).det()) != 1:
            defects.append(i)
    return defects


def from_delzant(
    vertices: Sequence[Sequence[RationalLike]], edges: Sequence[Tuple[int, int]]
) -> MomentGraph:
    """
    The moment graph of a toric variety from the vertices and edges of its moment
    polytope. Vertex ids are the vertex indices; each edge i -> j is weighted by the
    primitive integer vector along p_j - p_i.

    Raises:
        GraphValidationError: If the resulting graph is not a valid moment graph.
    """
    points = _polytope_points(vertices)
    graph_edges = []
    for i, j in edges:
        if not (0 <= i < len(points) and 0 <= j < len(points)):
            raise GraphValidationError(f"Polytope edge ({i}, {j}) refers to a missing vertex")
        if i == j:
            raise GraphValidationError(f"Polytope edge ({i}, {j}) joins a vertex to itself")
        difference = [b - a for a, b in zip(points[i], points[j])]
        if not any(difference):
            raise GraphValidationError(f"Polytope edge ({i}, {j}) joins two equal points")
        graph_edges.append(Edge(str(i), str(j), primitive_direction(difference)))
    g = MomentGraph(
        len(points[0]),
        tuple(Vertex(str(i), p) for i, p in enumerate(points)),
        tuple(graph_edges),
    )
    g.require_valid()
    defects = delzant_defects(points, edges)
    if defects:
        _logger.warning(
            "Polytope is not Delzant at vertices %s: edge vectors are not a Z-basis",
            ", ".join(str(i) for i in defects),
        )
    _logger.info("Built toric graph: %d vertices, %d edges", len(points), len(graph_edges))
    return g

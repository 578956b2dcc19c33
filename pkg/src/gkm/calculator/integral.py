# Copyright GKM Calculator contributors. All Rights Reserved.
"""
The congruence kernel over Z: a_src - a_dst must equal alpha_e * q_e for some
integral polynomial q_e. With non-primitive weights the integral kernel can miss
the full downward Euler class at a vertex; the divisibility gap measures by how much.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from math import lcm, prod
from typing import Dict, Iterable, List, Sequence, Tuple

from . import linalg
from .cohomology import CohomologyClass
from .moment_graph import (
    Direction,
    MomentGraph,
    check_generic,
    downward_weights,
    euler_class_down,
    f_value,
    morse_index,
)
from .polyalg import GkmError, monomial_basis

_logger = logging.getLogger(__name__)


class StructuralError(GkmError):
    """
    Raised when the integral classes at a vertex do not form a rank-one lattice
    containing the downward Euler class, so the graph cannot model a closed
    Hamiltonian T-space.
    """

    pass


@dataclass(frozen=True)
class IntKernelBasis:
    """
    Hermite basis of the degree-d integral congruence kernel. Vectors use the same
    vertex-major, graded-lex coordinates as the rational kernel.
    """

    graph: MomentGraph
    degree: int
    vectors: Tuple[Tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.vectors)

    def contains(self, vector: Sequence[int]) -> bool:
        return linalg.lattice_contains(self.vectors, vector)

    def contains_class(self, c: CohomologyClass) -> bool:
        """Whether a rational class has integer coefficients and satisfies the Z-congruences"""
        if c.degree != self.degree:
            return False
        vector = c.vector()
        if any(x.denominator != 1 for x in vector):
            return False
        return self.contains([int(x) for x in vector])

    def classes(self) -> List[CohomologyClass]:
        return [
            CohomologyClass.from_vector(self.graph, self.degree, [Fraction(x) for x in v])
            for v in self.vectors
        ]


def _multiplication_entries(
    weight: Sequence[int], target: Sequence[Tuple[int, ...]], source: Sequence[Tuple[int, ...]]
) -> Dict[Tuple[int, int], int]:
    """Matrix of q -> alpha * q from degree d - 1 to degree d, as sparse (row, col) entries"""
    position = {m: i for i, m in enumerate(target)}
    entries: Dict[Tuple[int, int], int] = {}
    for col, nu in enumerate(source):
        for i, a in enumerate(weight):
            if a:
                mu = nu[:i] + (nu[i] + 1,) + nu[i + 1 :]
                entries[(position[mu], col)] = a
    return entries


def int_kernel_basis(g: MomentGraph, d: int, vanishing: Iterable[str] = ()) -> IntKernelBasis:
    """
    Lattice basis of the integer tuples (a_v) of degree d with every a_src - a_dst
    divisible by the edge weight in Z[x1..xn]. Vertices listed in vanishing are forced
    to zero.

    The unknowns are the integer coefficients of the a_v and of one quotient q_e per
    edge; the integer kernel of a_src - a_dst - alpha_e q_e = 0 is projected onto the
    a_v coordinates and brought to Hermite normal form.

    Raises:
        GraphValidationError: If the graph is not a valid moment graph.
    """
    g.require_valid()
    if d < 0:
        raise ValueError(f"Degree must be non-negative, got {d}")
    zero = set(vanishing)
    unknown = zero - set(g.vertex_ids)
    if unknown:
        raise KeyError(f"No vertices with ids {sorted(unknown)}")
    n = g.torus_rank
    basis = monomial_basis(n, d)
    size = len(basis)
    free = [vid for vid in g.vertex_ids if vid not in zero]
    offset = {vid: i * size for i, vid in enumerate(free)}
    quotient_basis = monomial_basis(n, d - 1) if d > 0 else []
    q_size = len(quotient_basis)
    ncols = size * len(free) + q_size * len(g.edges)

    rows: List[List[int]] = []
    for k, edge in enumerate(g.edges):
        block = [[0] * ncols for _ in range(size)]
        for vid, sign in ((edge.src, 1), (edge.dst, -1)):
            if vid in offset:
                for i in range(size):
                    block[i][offset[vid] + i] += sign
        q_offset = size * len(free) + k * q_size
        products = _multiplication_entries(edge.weight.coeffs, basis, quotient_basis)
        for (row, col), a in products.items():
            block[row][q_offset + col] -= a
        rows.extend(block)
    _logger.info(
        "Solving degree %d integral congruences: %d equations, %d unknowns", d, len(rows), ncols
    )

    kernel = linalg.integer_kernel(rows, ncols)
    full = len(g.vertices) * size
    position = {vid: i * size for i, vid in enumerate(g.vertex_ids)}
    projected = []
    for vector in kernel:
        values = [0] * full
        for vid in free:
            start = position[vid]
            values[start : start + size] = vector[offset[vid] : offset[vid] + size]
        projected.append(values)
    hnf = linalg.hermite_normal_form(projected, full)
    return IntKernelBasis(g, d, tuple(hnf))


def euler_divisibility_gap(g: MomentGraph, xi: Direction, v: str) -> int:
    """
    The index of the integral restrictions at v inside the line through the downward
    Euler class e_v: the degree-(lambda_v / 2) integral classes vanishing strictly
    below v restrict at v to the multiples of a generator r, and the gap is e_v / r.
    A gap of 1 means every such class restricts to a multiple of e_v over Z.

    Raises:
        StructuralError: If the restrictions do not form a rank-one lattice containing e_v.
    """
    check_generic(g, xi)
    degree = morse_index(g, xi, v) // 2
    level = f_value(g, xi, v)
    below = [w for w in g.vertex_ids if f_value(g, xi, w) < level]
    lattice = int_kernel_basis(g, degree, vanishing=below)

    size = len(monomial_basis(g.torus_rank, degree))
    start = g.vertex_ids.index(v) * size
    slices = linalg.hermite_normal_form(
        [vector[start : start + size] for vector in lattice.vectors], size
    )
    if len(slices) != 1:
        raise StructuralError(
            f"Integral classes vanishing below {v} restrict to a lattice of rank {len(slices)} "
            f"at {v}, expected rank 1"
        )
    generator = slices[0]
    euler = euler_class_down(g, xi, v).coefficient_vector(degree)
    j = next(i for i, c in enumerate(generator) if c)
    ratio = euler[j] / generator[j]
    if ratio.denominator != 1 or any(e != ratio * r for e, r in zip(euler, generator)):
        raise StructuralError(
            f"The downward Euler class at {v} is not an integral multiple of the generator "
            f"of the restriction lattice"
        )
    gap = abs(int(ratio))
    _logger.debug("Divisibility gap at %s: %d", v, gap)
    return gap


def relative_primality_holds(g: MomentGraph, xi: Direction, v: str) -> bool:
    """True when the contents of the downward weights at v are pairwise coprime"""
    contents = [w.content for w in downward_weights(g, xi, v)]
    return all(lcm(a, b) == a * b for i, a in enumerate(contents) for b in contents[i + 1 :])


def local_gap(g: MomentGraph, xi: Direction, v: str) -> int:
    """
    The gap forced by the local conditions at v alone: the product of the contents of
    the downward weights divided by their lcm.
    """
    contents = [w.content for w in downward_weights(g, xi, v)]
    return prod(contents) // lcm(*contents) if contents else 1


def gap_report(g: MomentGraph, xi: Direction) -> List[Tuple[str, int]]:
    """euler_divisibility_gap at every vertex, in graph order"""
    g.require_valid()
    check_generic(g, xi)
    return [(vid, euler_divisibility_gap(g, xi, vid)) for vid in g.vertex_ids]

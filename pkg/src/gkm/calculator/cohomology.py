# Copyright GKM Calculator contributors. All Rights Reserved.
"""
Equivariant cohomology of a moment graph, computed degree by degree as the kernel of
the edge congruences

    a_src - a_dst = 0  modulo the weight of the edge,

and compared against the Morse-theoretic prediction from a generic direction.
Cohomological degree 2d corresponds to polynomial degree d throughout.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import List, Mapping, Optional, Sequence, Tuple

from sympy import Add, Expr, Symbol

from . import linalg
from .moment_graph import (
    Direction,
    MomentGraph,
    check_generic,
    critical_order,
    downward_weights,
    euler_class_down,
    f_value,
    morse_index,
)
from .polyalg import (
    GkmError,
    LinearForm,
    Polynomial,
    divide_by_linear_form,
    divide_by_linear_powers,
    monomial_basis,
)

_logger = logging.getLogger(__name__)


class NotInKernelError(GkmError):
    """Raised when a vertex assignment violates an edge congruence"""

    pass


class NoSuchClassError(GkmError):
    """
    Raised when no flow-up class exists. Genuine moment graphs always have one, so this
    signals that the graph does not model a Hamiltonian T-space.
    """

    pass


class GraphMismatchError(GkmError):
    """Raised when classes on different graphs are combined"""

    pass


class VanishingPreconditionError(GkmError):
    """Raised when a class does not vanish strictly below the vertex being tested"""

    pass


@dataclass(frozen=True, eq=False)
class CohomologyClass:
    """
    A candidate element of H_T^{2d}(M), given by its restrictions to the fixed points.
    Construction checks that every value is homogeneous of degree d and that every
    edge congruence holds.
    """

    graph: MomentGraph
    degree: int
    values: Mapping[str, Polynomial]

    def __post_init__(self) -> None:
        values = dict(self.values)
        ids = self.graph.vertex_ids
        if set(values) != set(ids):
            missing = sorted(set(ids) - set(values))
            extra = sorted(set(values) - set(ids))
            raise NotInKernelError(
                f"A class must assign every vertex once (missing {missing}, unknown {extra})"
            )
        for vid in ids:
            value = values[vid]
            if value.num_vars != self.graph.torus_rank:
                raise NotInKernelError(
                    f"Value at {vid} has {value.num_vars} variables, the torus has rank "
                    f"{self.graph.torus_rank}"
                )
            if not value.is_homogeneous_of(self.degree):
                raise NotInKernelError(
                    f"Value {value} at {vid} is not homogeneous of degree {self.degree}"
                )
        for edge in self.graph.edges:
            difference = values[edge.src] - values[edge.dst]
            if divide_by_linear_form(difference, edge.weight) is None:
                raise NotInKernelError(
                    f"Congruence fails on edge {edge.label}: {difference} is not a multiple "
                    f"of {edge.weight.as_polynomial()}"
                )
        object.__setattr__(self, "values", {vid: values[vid] for vid in ids})

    @classmethod
    def unit(cls, g: MomentGraph) -> CohomologyClass:
        return cls(g, 0, {vid: Polynomial.one(g.torus_rank) for vid in g.vertex_ids})

    @classmethod
    def zero(cls, g: MomentGraph, degree: int) -> CohomologyClass:
        return cls(g, degree, {vid: Polynomial.zero(g.torus_rank) for vid in g.vertex_ids})

    @classmethod
    def from_vector(
        cls, g: MomentGraph, degree: int, vector: Sequence[Fraction]
    ) -> CohomologyClass:
        """Inverse of vector(): coefficients are vertex-major, monomials in graded-lex order"""
        size = len(monomial_basis(g.torus_rank, degree))
        values = {
            vid: Polynomial.from_coefficient_vector(
                g.torus_rank, degree, vector[i * size : (i + 1) * size]
            )
            for i, vid in enumerate(g.vertex_ids)
        }
        return cls(g, degree, values)

    def vector(self) -> List[Fraction]:
        return [
            c
            for vid in self.graph.vertex_ids
            for c in self.values[vid].coefficient_vector(self.degree)
        ]

    def restriction(self, vertex_id: str) -> Polynomial:
        return self.values[vertex_id]

    @property
    def is_zero(self) -> bool:
        return all(value.is_zero for value in self.values.values())

    def _require_same_graph(self, other: CohomologyClass) -> None:
        if other.graph is not self.graph and other.graph != self.graph:
            raise GraphMismatchError("Cannot combine classes on different moment graphs")

    def __add__(self, other: CohomologyClass) -> CohomologyClass:
        self._require_same_graph(other)
        if other.degree != self.degree:
            raise GkmError(f"Cannot add classes of degrees {self.degree} and {other.degree}")
        return CohomologyClass(
            self.graph,
            self.degree,
            {vid: self.values[vid] + other.values[vid] for vid in self.graph.vertex_ids},
        )

    def __mul__(self, other: CohomologyClass) -> CohomologyClass:
        return class_product(self, other)

    def scale(self, factor: int | Fraction) -> CohomologyClass:
        return CohomologyClass(
            self.graph, self.degree, {vid: p.scale(factor) for vid, p in self.values.items()}
        )

    def multiply_by(self, p: Polynomial) -> CohomologyClass:
        """The H*(BT)-module action: multiply every restriction by the homogeneous p"""
        if not p.is_homogeneous or p.is_zero:
            raise GkmError(f"Module action needs a nonzero homogeneous polynomial, got {p}")
        return CohomologyClass(
            self.graph,
            self.degree + (p.degree or 0),
            {vid: value * p for vid, value in self.values.items()},
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, CohomologyClass):
            return NotImplemented
        return (
            self.graph == other.graph
            and self.degree == other.degree
            and self.values == other.values
        )

    def __repr__(self) -> str:
        body = ", ".join(f"{vid}: {p}" for vid, p in self.values.items())
        return f"CohomologyClass(degree={self.degree}, {{{body}}})"


@dataclass(frozen=True)
class GradedBasis:
    degree: int
    basis: Tuple[CohomologyClass, ...]

    @property
    def dimension(self) -> int:
        return len(self.basis)


@dataclass(frozen=True)
class HilbertTable:
    max_degree: int
    dims: Tuple[int, ...]
    predicted: Tuple[int, ...]

    @property
    def agrees(self) -> bool:
        return self.dims == self.predicted

    @property
    def disagreements(self) -> List[int]:
        return [d for d, (a, b) in enumerate(zip(self.dims, self.predicted)) if a != b]


@dataclass(frozen=True)
class FreenessRow:
    degree: int
    generator_count: int
    rank: int
    kernel_dim: int

    @property
    def free(self) -> bool:
        return self.generator_count == self.rank == self.kernel_dim


@dataclass(frozen=True)
class ModuleGenerators:
    """Flow-up generators keyed by vertex (in critical order) and the per-degree freeness check"""

    generators: Tuple[Tuple[str, CohomologyClass], ...]
    freeness: Tuple[FreenessRow, ...]

    @property
    def is_free(self) -> bool:
        return all(row.free for row in self.freeness)


@dataclass(frozen=True)
class DivisibilityResult:
    divisible: bool
    quotient: Optional[Polynomial]


@lru_cache(maxsize=None)
def _reduction_matrix(form: LinearForm, degree: int) -> Tuple[Tuple[Fraction, ...], ...]:
    """
    Matrix of p -> p restricted to {form = 0} on degree-d polynomials. Columns follow
    monomial_basis(n, d); rows follow the monomials free of the eliminated variable.
    """
    n = form.num_vars
    basis = monomial_basis(n, degree)
    j = form.elimination_index
    reduced = [m for m in basis if m[j] == 0]
    position = {m: i for i, m in enumerate(reduced)}
    rows = [[Fraction(0)] * len(basis) for _ in reduced]
    for col, exponent in enumerate(basis):
        image = Polynomial.monomial(exponent).restrict_to_kernel(form)
        for mono, coefficient in image.terms.items():
            rows[position[mono]][col] = coefficient
    return tuple(tuple(row) for row in rows)


def _congruence_rows(g: MomentGraph, degree: int) -> List[List[Fraction]]:
    """One block of rows per edge: reduction(a_src) - reduction(a_dst) = 0"""
    size = len(monomial_basis(g.torus_rank, degree))
    offset = {vid: i * size for i, vid in enumerate(g.vertex_ids)}
    ncols = size * len(g.vertices)
    rows = []
    for edge in g.edges:
        for reduction in _reduction_matrix(edge.weight, degree):
            row = [Fraction(0)] * ncols
            for k, c in enumerate(reduction):
                if c:
                    row[offset[edge.src] + k] += c
                    row[offset[edge.dst] + k] -= c
            rows.append(row)
    return rows


def kernel_basis(g: MomentGraph, d: int) -> GradedBasis:
    """
    Basis of the degree-d congruence kernel, in reduced echelon form over the
    vertex-major, graded-lex ordered coordinates.

    Raises:
        GraphValidationError: If the graph is not a valid moment graph.
    """
    g.require_valid()
    ncols = len(monomial_basis(g.torus_rank, d)) * len(g.vertices)
    rows = _congruence_rows(g, d)
    _logger.info("Solving degree %d congruences: %d equations, %d unknowns", d, len(rows), ncols)
    vectors = linalg.rational_nullspace(rows, ncols)
    return GradedBasis(d, tuple(CohomologyClass.from_vector(g, d, v) for v in vectors))


def kernel_dimension(g: MomentGraph, d: int) -> int:
    g.require_valid()
    ncols = len(monomial_basis(g.torus_rank, d)) * len(g.vertices)
    return ncols - linalg.rank(_congruence_rows(g, d), ncols)


def kernel_dimensions(g: MomentGraph, max_degree: int, max_workers: int = 1) -> List[int]:
    """Kernel dimensions for d = 0..max_degree; the degrees are solved independently"""
    g.require_valid()
    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        return list(pool.map(lambda d: kernel_dimension(g, d), range(max_degree + 1)))


def _morse_indices(g: MomentGraph, xi: Direction) -> List[int]:
    return [morse_index(g, xi, vid) for vid in g.vertex_ids]


def predicted_dimensions(indices: Sequence[int], torus_rank: int, max_degree: int) -> List[int]:
    """Degree-d coefficients of sum_v t^{lambda_v} / (1 - t^2)^n, for d = 0..max_degree"""
    n = torus_rank
    return [
        sum(comb(d - index // 2 + n - 1, n - 1) for index in indices if index // 2 <= d)
        for d in range(max_degree + 1)
    ]


def hilbert_table(
    g: MomentGraph, xi: Direction, max_degree: int, max_workers: int = 1
) -> HilbertTable:
    """
    Computed kernel dimensions against the Morse prediction. Agreement in every degree
    is what a moment graph of a compact Hamiltonian T-space must satisfy.
    """
    g.require_valid()
    check_generic(g, xi)
    dims = kernel_dimensions(g, max_degree, max_workers)
    predicted = predicted_dimensions(_morse_indices(g, xi), g.torus_rank, max_degree)
    table = HilbertTable(max_degree, tuple(dims), tuple(predicted))
    if not table.agrees:
        _logger.warning(
            "Kernel dimensions disagree with the Morse prediction in degrees %s",
            table.disagreements,
        )
    return table


def hilbert_series(g: MomentGraph, xi: Direction) -> Expr:
    """The predicted equivariant Poincare series sum_v t^{lambda_v} / (1 - t^2)^n"""
    g.require_valid()
    t = Symbol("t")
    numerator = Add(*(t**index for index in _morse_indices(g, xi)))
    return numerator / (1 - t**2) ** g.torus_rank


def betti_numbers(g: MomentGraph, xi: Direction) -> List[int]:
    """Ordinary Betti numbers b_{2k} = #{v : lambda_v = 2k}; odd Betti numbers vanish"""
    g.require_valid()
    indices = _morse_indices(g, xi)
    betti = [0] * (max(indices, default=0) + 1)
    for index in indices:
        betti[index] += 1
    return betti


def ordinary_betti_numbers(g: MomentGraph, max_degree: int) -> List[int]:
    """
    Betti numbers read off the kernel alone: b_{2d} is the dimension of the degree-d
    part of H_T / (x1, ..., xn) H_T. The list has length 2 * max_degree + 1.
    """
    g.require_valid()
    n = g.torus_rank
    betti = [0] * (2 * max_degree + 1)
    previous: Tuple[CohomologyClass, ...] = ()
    for d in range(max_degree + 1):
        current = kernel_basis(g, d)
        ncols = len(monomial_basis(n, d)) * len(g.vertices)
        image = [
            c.multiply_by(Polynomial.variable(n, i)).vector() for c in previous for i in range(n)
        ]
        betti[2 * d] = current.dimension - (linalg.rank(image, ncols) if image else 0)
        previous = current.basis
    return betti


def flow_up_class(g: MomentGraph, xi: Direction, v: str) -> CohomologyClass:
    """
    The class tau_v of degree lambda_v / 2 that vanishes at every vertex strictly below
    v and restricts to the downward Euler class at v; among all such classes, the one
    with every free coordinate of the reduced echelon system set to zero.

    Raises:
        NoSuchClassError: If no such class exists.
    """
    g.require_valid()
    check_generic(g, xi)
    n = g.torus_rank
    degree = morse_index(g, xi, v) // 2
    euler = euler_class_down(g, xi, v)
    size = len(monomial_basis(n, degree))
    ncols = size * len(g.vertices)
    offset = {vid: i * size for i, vid in enumerate(g.vertex_ids)}
    level = f_value(g, xi, v)

    rows = _congruence_rows(g, degree)
    rhs = [Fraction(0)] * len(rows)

    def pin(vid: str, values: Sequence[Fraction]) -> None:
        for k, value in enumerate(values):
            row = [Fraction(0)] * ncols
            row[offset[vid] + k] = Fraction(1)
            rows.append(row)
            rhs.append(value)

    for w in g.vertex_ids:
        if f_value(g, xi, w) < level:
            pin(w, [Fraction(0)] * size)
    pin(v, euler.coefficient_vector(degree))

    solution = linalg.solve_affine(rows, rhs, ncols)
    if solution is None:
        raise NoSuchClassError(
            f"No class of degree {degree} vanishes below {v} and restricts to {euler} at {v}; "
            "the graph does not model a Hamiltonian T-space"
        )
    return CohomologyClass.from_vector(g, degree, solution)


def module_generators(
    g: MomentGraph, xi: Direction, max_degree: int, max_workers: int = 1
) -> ModuleGenerators:
    """
    The flow-up classes of every vertex, and a check that their H*(BT)-multiples are
    linearly independent and span the kernel in each degree up to max_degree.
    """
    g.require_valid()
    check_generic(g, xi)
    n = g.torus_rank
    generators = tuple((v, flow_up_class(g, xi, v)) for v in critical_order(g, xi))

    def freeness_row(d: int) -> FreenessRow:
        vectors = [
            tau.multiply_by(Polynomial.monomial(m)).vector()
            for _, tau in generators
            if tau.degree <= d
            for m in monomial_basis(n, d - tau.degree)
        ]
        ncols = len(monomial_basis(n, d)) * len(g.vertices)
        spanned = linalg.rank(vectors, ncols) if vectors else 0
        return FreenessRow(d, len(vectors), spanned, kernel_dimension(g, d))

    with ThreadPoolExecutor(max_workers=max_workers) as pool:
        rows = tuple(pool.map(freeness_row, range(max_degree + 1)))
    for row in rows:
        if not row.free:
            _logger.warning(
                "Flow-up classes are not a free basis in degree %d: %d generators, rank %d, "
                "kernel dimension %d",
                row.degree,
                row.generator_count,
                row.rank,
                row.kernel_dim,
            )
    return ModuleGenerators(generators, rows)


def class_product(c1: CohomologyClass, c2: CohomologyClass) -> CohomologyClass:
    """Vertexwise product; the congruences are re-checked on construction"""
    c1._require_same_graph(c2)
    return CohomologyClass(
        c1.graph,
        c1.degree + c2.degree,
        {vid: c1.values[vid] * c2.values[vid] for vid in c1.graph.vertex_ids},
    )


def downward_divisibility_check(
    g: MomentGraph, xi: Direction, v: str, c: CohomologyClass
) -> DivisibilityResult:
    """
    Whether c(v) is a multiple of the downward Euler class at v, for a class c that
    vanishes at every vertex strictly below v. Returns the quotient when it is.

    Raises:
        VanishingPreconditionError: If c is nonzero somewhere strictly below v.
    """
    if c.graph != g:
        raise GraphMismatchError("The class lives on a different moment graph")
    level = f_value(g, xi, v)
    for w in g.vertex_ids:
        if f_value(g, xi, w) < level and not c.values[w].is_zero:
            raise VanishingPreconditionError(
                f"Class does not vanish at {w}, which lies below {v}: value {c.values[w]}"
            )
    factors = [(weight, 1) for weight in downward_weights(g, xi, v)]
    quotient = divide_by_linear_powers(c.values[v], factors)
    return DivisibilityResult(quotient is not None, quotient)


def kernel_classes_vanishing_below(
    g: MomentGraph, xi: Direction, v: str, d: int
) -> List[CohomologyClass]:
    """A basis of the degree-d kernel classes that vanish strictly below v"""
    g.require_valid()
    check_generic(g, xi)
    size = len(monomial_basis(g.torus_rank, d))
    ncols = size * len(g.vertices)
    level = f_value(g, xi, v)
    rows = _congruence_rows(g, d)
    for i, w in enumerate(g.vertex_ids):
        if f_value(g, xi, w) < level:
            for k in range(size):
                row = [Fraction(0)] * ncols
                row[i * size + k] = Fraction(1)
                rows.append(row)
    return [
        CohomologyClass.from_vector(g, d, vector)
        for vector in linalg.rational_nullspace(rows, ncols)
    ]

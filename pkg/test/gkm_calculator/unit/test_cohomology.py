# Copyright GKM Calculator contributors. All Rights Reserved.

from __future__ import annotations

import logging
from typing import Dict, List

import pytest
from sympy import Symbol, series

from gkm.calculator import builders
from gkm.calculator.cohomology import (
    CohomologyClass,
    GraphMismatchError,
    NoSuchClassError,
    NotInKernelError,
    VanishingPreconditionError,
    betti_numbers,
    class_product,
    downward_divisibility_check,
    flow_up_class,
    hilbert_series,
    hilbert_table,
    kernel_basis,
    kernel_classes_vanishing_below,
    kernel_dimension,
    kernel_dimensions,
    module_generators,
    ordinary_betti_numbers,
    predicted_dimensions,
)
from gkm.calculator.moment_graph import (
    Direction,
    Edge,
    GraphValidationError,
    MomentGraph,
    critical_order,
    generic_direction,
)
from gkm.calculator.polyalg import LinearForm, Polynomial

DIRECTIONS: Dict[int, List[Direction]] = {
    1: [Direction((1,)), Direction((2,)), Direction((-1,))],
    2: [Direction((1, 2)), Direction((2, 1)), Direction((3, -1))],
    3: [Direction((1, 2, 4)), Direction((4, 2, 1)), Direction((1, -3, 7))],
}


def x(n: int, i: int) -> Polynomial:
    return Polynomial.variable(n, i - 1)


class TestKernelBasis:
    def test_sphere_degree_zero(self, cp1: MomentGraph) -> None:
        # WHEN
        basis = kernel_basis(cp1, 0)

        # THEN
        assert basis.dimension == 1
        (c,) = basis.basis
        assert c.values == {"S": Polynomial.one(1), "N": Polynomial.one(1)}

    def test_sphere_degree_one(self, cp1: MomentGraph) -> None:
        assert kernel_basis(cp1, 1).dimension == 2

    def test_cp2_degree_one(self, cp2: MomentGraph) -> None:
        assert kernel_basis(cp2, 1).dimension == 3

    def test_basis_classes_satisfy_congruences(self, s2xs2: MomentGraph) -> None:
        basis = kernel_basis(s2xs2, 2)

        assert basis.dimension == 8
        for c in basis.basis:
            assert c.degree == 2
            assert CohomologyClass(s2xs2, 2, c.values) == c

    def test_deterministic(self, cp2: MomentGraph) -> None:
        first = [c.vector() for c in kernel_basis(cp2, 2).basis]
        second = [c.vector() for c in kernel_basis(builders.projective_space(2), 2).basis]

        assert first == second

    def test_invalid_graph(self, cp1: MomentGraph) -> None:
        # The weight points from N back to S
        bad = MomentGraph(1, cp1.vertices, (Edge("N", "S", LinearForm((1,))),))

        with pytest.raises(GraphValidationError):
            kernel_basis(bad, 0)

    def test_kernel_dimensions_in_parallel(self, cp3: MomentGraph) -> None:
        serial = kernel_dimensions(cp3, 3)
        parallel = kernel_dimensions(cp3, 3, max_workers=4)

        assert serial == parallel == [kernel_dimension(cp3, d) for d in range(4)]


class TestCohomologyClass:
    def test_rejects_failed_congruence(self, cp1: MomentGraph) -> None:
        with pytest.raises(NotInKernelError, match="S->N"):
            CohomologyClass(cp1, 0, {"S": Polynomial.zero(1), "N": Polynomial.one(1)})

    def test_rejects_missing_vertex(self, cp1: MomentGraph) -> None:
        with pytest.raises(NotInKernelError):
            CohomologyClass(cp1, 0, {"S": Polynomial.one(1)})

    def test_rejects_wrong_degree(self, cp1: MomentGraph) -> None:
        with pytest.raises(NotInKernelError):
            CohomologyClass(cp1, 1, {"S": Polynomial.one(1), "N": Polynomial.one(1)})

    def test_vector_roundtrip(self, cp2: MomentGraph) -> None:
        # GIVEN
        c = flow_up_class(cp2, Direction((1, 2)), "1")

        # WHEN
        vector = c.vector()

        # THEN
        assert CohomologyClass.from_vector(cp2, c.degree, vector) == c

    def test_module_action(self, cp1: MomentGraph) -> None:
        unit = CohomologyClass.unit(cp1)

        shifted = unit.multiply_by(x(1, 1))

        assert shifted.degree == 1
        assert shifted.values == {"S": x(1, 1), "N": x(1, 1)}

    def test_add_and_scale(self, cp1: MomentGraph) -> None:
        unit = CohomologyClass.unit(cp1)

        assert (unit + unit.scale(-1)).is_zero
        assert CohomologyClass.zero(cp1, 2).is_zero
        assert unit.restriction("N") == Polynomial.one(1)


class TestHilbertTable:
    @pytest.mark.parametrize(
        "graph_name, max_degree, expected",
        [
            pytest.param("cp1", 3, [1, 2, 2, 2], id="cp1"),
            pytest.param("cp2", 2, [1, 3, 6], id="cp2"),
            pytest.param("s2xs2", 2, [1, 4, 8], id="s2xs2"),
        ],
    )
    def test_known_tables(
        self, request: pytest.FixtureRequest, graph_name: str, max_degree: int, expected: list
    ) -> None:
        # GIVEN
        g = request.getfixturevalue(graph_name)

        # WHEN
        table = hilbert_table(g, generic_direction(g), max_degree)

        # THEN
        assert list(table.dims) == expected
        assert list(table.predicted) == expected
        assert table.agrees
        assert table.disagreements == []

    def test_point(self) -> None:
        g = builders.point(2)

        table = hilbert_table(g, generic_direction(g), 2)

        assert list(table.dims) == [1, 2, 3]
        assert table.agrees

    def test_builder_graphs_agree(self, builder_graphs: dict) -> None:
        for name, g in builder_graphs.items():
            table = hilbert_table(g, generic_direction(g), 5, max_workers=2)

            assert table.agrees, name

    def test_direction_independence(self, builder_graphs: dict) -> None:
        for name, g in builder_graphs.items():
            tables = [hilbert_table(g, xi, 3) for xi in DIRECTIONS[g.torus_rank]]

            assert len({t.predicted for t in tables}) == 1, name
            assert len({t.dims for t in tables}) == 1, name

    def test_missing_edge_disagrees(
        self, square_missing_edge: MomentGraph, caplog: pytest.LogCaptureFixture
    ) -> None:
        # WHEN
        with caplog.at_level(logging.WARNING):
            table = hilbert_table(square_missing_edge, Direction((1, 1)), 1)

        # THEN
        assert list(table.dims) == [1, 5]
        assert list(table.predicted) == [2, 5]
        assert table.disagreements == [0]
        assert "disagree" in caplog.text

    def test_predicted_dimensions(self) -> None:
        # CP^2: indices 0, 2, 4 in a rank-2 torus
        assert predicted_dimensions([0, 2, 4], 2, 3) == [1, 3, 6, 9]

    def test_series_matches_prediction(self, s2xs2: MomentGraph) -> None:
        # GIVEN
        xi = generic_direction(s2xs2)
        t = Symbol("t")

        # WHEN
        expansion = series(hilbert_series(s2xs2, xi), t, 0, 8).removeO()

        # THEN
        predicted = hilbert_table(s2xs2, xi, 3).predicted
        assert [expansion.coeff(t, 2 * d) for d in range(4)] == list(predicted)
        assert all(expansion.coeff(t, 2 * d + 1) == 0 for d in range(3))


class TestBettiNumbers:
    @pytest.mark.parametrize(
        "graph_name, expected",
        [
            pytest.param("cp1", [1, 0, 1], id="cp1"),
            pytest.param("cp2", [1, 0, 1, 0, 1], id="cp2"),
            pytest.param("cp3", [1, 0, 1, 0, 1, 0, 1], id="cp3"),
            pytest.param("s2xs2", [1, 0, 2, 0, 1], id="s2xs2"),
        ],
    )
    def test_known(self, request: pytest.FixtureRequest, graph_name: str, expected: list) -> None:
        g = request.getfixturevalue(graph_name)

        assert betti_numbers(g, generic_direction(g)) == expected

    def test_palindromic(self, builder_graphs: dict) -> None:
        for name, g in builder_graphs.items():
            betti = betti_numbers(g, generic_direction(g))

            assert betti == list(reversed(betti)), name

    def test_from_kernel(self, builder_graphs: dict) -> None:
        for name, g in builder_graphs.items():
            betti = betti_numbers(g, generic_direction(g))
            max_degree = (len(betti) - 1) // 2

            ordinary = ordinary_betti_numbers(g, max_degree)

            assert ordinary == betti, name

    def test_from_kernel_pads_with_zeros(self, cp1: MomentGraph) -> None:
        assert ordinary_betti_numbers(cp1, 2) == [1, 0, 1, 0, 0]


class TestFlowUpClass:
    def test_sphere_south(self, cp1: MomentGraph) -> None:
        tau = flow_up_class(cp1, Direction((1,)), "S")

        assert tau == CohomologyClass.unit(cp1)

    def test_sphere_north(self, cp1: MomentGraph) -> None:
        tau = flow_up_class(cp1, Direction((1,)), "N")

        assert tau.values == {"S": Polynomial.zero(1), "N": -x(1, 1)}

    def test_square_top(self, s2xs2: MomentGraph) -> None:
        # WHEN
        tau = flow_up_class(s2xs2, Direction((1, 1)), "NN")

        # THEN
        zero = Polynomial.zero(2)
        assert tau.values == {"SS": zero, "SN": zero, "NS": zero, "NN": x(2, 1) * x(2, 2)}

    def test_no_such_class(self, square_missing_edge: MomentGraph) -> None:
        # Vertex 1 is a second local minimum joined to vertex 0 through the graph
        with pytest.raises(NoSuchClassError):
            flow_up_class(square_missing_edge, Direction((1, 1)), "1")


class TestModuleGenerators:
    @pytest.mark.parametrize(
        "graph_name, max_degree, count",
        [
            pytest.param("cp1", 2, 2, id="cp1"),
            pytest.param("cp2", 3, 3, id="cp2"),
        ],
    )
    def test_free(
        self, request: pytest.FixtureRequest, graph_name: str, max_degree: int, count: int
    ) -> None:
        # GIVEN
        g = request.getfixturevalue(graph_name)

        # WHEN
        generators = module_generators(g, generic_direction(g), max_degree)

        # THEN
        assert len(generators.generators) == count
        assert generators.is_free
        assert [row.degree for row in generators.freeness] == list(range(max_degree + 1))

    def test_point(self) -> None:
        g = builders.point(2)

        generators = module_generators(g, generic_direction(g), 2)

        assert [vid for vid, _ in generators.generators] == ["pt"]
        assert [row.kernel_dim for row in generators.freeness] == [1, 2, 3]
        assert generators.is_free

    def test_builder_graphs(self, builder_graphs: dict) -> None:
        for name, g in builder_graphs.items():
            xi = generic_direction(g)

            generators = module_generators(g, xi, 5, max_workers=2)

            assert generators.is_free, name
            minimum, tau = generators.generators[0]
            assert minimum == critical_order(g, xi)[0]
            assert tau == CohomologyClass.unit(g), name

    def test_not_free(self, square_missing_edge: MomentGraph) -> None:
        with pytest.raises(NoSuchClassError):
            module_generators(square_missing_edge, Direction((1, 1)), 1)


class TestClassProduct:
    def test_unit(self, cp2: MomentGraph) -> None:
        c = flow_up_class(cp2, Direction((1, 2)), "2")

        assert class_product(CohomologyClass.unit(cp2), c) == c

    def test_square_of_north(self, cp1: MomentGraph) -> None:
        tau = flow_up_class(cp1, Direction((1,)), "N")

        product = tau * tau

        assert product.degree == 2
        assert product.values == {"S": Polynomial.zero(1), "N": x(1, 1) ** 2}

    def test_kernel_is_closed(self, s2xs2: MomentGraph) -> None:
        basis = kernel_basis(s2xs2, 1).basis
        for a in basis:
            for b in basis:
                assert class_product(a, b).degree == 2

    def test_graph_mismatch(self, cp1: MomentGraph, cp2: MomentGraph) -> None:
        with pytest.raises(GraphMismatchError):
            class_product(CohomologyClass.unit(cp1), CohomologyClass.unit(cp2))


class TestDownwardDivisibilityCheck:
    def test_flow_up_class(self, cp2: MomentGraph) -> None:
        xi = Direction((1, 2))
        for v in cp2.vertex_ids:
            result = downward_divisibility_check(cp2, xi, v, flow_up_class(cp2, xi, v))

            assert result.divisible
            assert result.quotient == Polynomial.one(2)

    def test_sphere_square(self, cp1: MomentGraph) -> None:
        # GIVEN
        c = CohomologyClass(cp1, 2, {"S": Polynomial.zero(1), "N": x(1, 1) ** 2})

        # WHEN
        result = downward_divisibility_check(cp1, Direction((1,)), "N", c)

        # THEN
        assert result.divisible
        assert result.quotient == -x(1, 1)

    def test_precondition(self, cp1: MomentGraph) -> None:
        with pytest.raises(VanishingPreconditionError):
            downward_divisibility_check(cp1, Direction((1,)), "N", CohomologyClass.unit(cp1))

    def test_graph_mismatch(self, cp1: MomentGraph, cp2: MomentGraph) -> None:
        with pytest.raises(GraphMismatchError):
            downward_divisibility_check(cp2, Direction((1, 2)), "0", CohomologyClass.unit(cp1))

    def test_classes_vanishing_below_are_divisible(self, builder_graphs: dict) -> None:
        for name, g in builder_graphs.items():
            xi = generic_direction(g)
            for v in g.vertex_ids:
                for d in range(5):
                    for c in kernel_classes_vanishing_below(g, xi, v, d):
                        result = downward_divisibility_check(g, xi, v, c)

                        assert result.divisible, (name, v, d)


class TestScaleInvariance:
    def test_kernel_dimensions_unchanged(self, builder_graphs: dict) -> None:
        for name, g in builder_graphs.items():
            expected = kernel_dimensions(g, 4)
            for k in (1, 2, 3):
                assert kernel_dimensions(builders.scale_action(g, k), 4) == expected, (name, k)

# Copyright GKM Calculator contributors. All Rights Reserved.

from __future__ import annotations

import io
from fractions import Fraction

import pytest

from gkm.calculator import builders, graph_io
from gkm.calculator.cohomology import (
    FreenessRow,
    HilbertTable,
    ModuleGenerators,
    flow_up_class,
    kernel_basis,
)
from gkm.calculator.graph_io import GraphParseError
from gkm.calculator.moment_graph import Direction, MomentGraph, ValidationReport, Violation

SPHERE_TEXT = """\
torus_rank: 1
vertices:
  - {id: S, moment: [0]}
  - {id: N, moment: ["1/3"]}
edges:
  - {src: S, dst: N, weight: [3]}
"""


class TestLoadGraph:
    def test_load(self) -> None:
        # WHEN
        g = graph_io.load_graph(SPHERE_TEXT)

        # THEN
        assert g.torus_rank == 1
        assert g.vertex_ids == ["S", "N"]
        assert g.vertex("N").moment == (Fraction(1, 3),)
        assert [e.weight.coeffs for e in g.edges] == [(3,)]

    def test_json_is_accepted(self) -> None:
        text = '{"torus_rank": 1, "vertices": [{"id": 0, "moment": [0]}], "edges": []}'

        g = graph_io.load_graph(text)

        assert g.vertex_ids == ["0"]

    def test_edges_optional(self) -> None:
        g = graph_io.load_graph("torus_rank: 2\nvertices:\n  - {id: pt, moment: [0, 0]}\n")

        assert g == builders.point(2)

    def test_roundtrip(self, cp2: MomentGraph) -> None:
        text = graph_io.dump_graph(cp2)

        assert graph_io.load_graph(text) == cp2
        assert graph_io.dump_graph(graph_io.load_graph(text)) == text

    def test_rational_kept_exact(self) -> None:
        text = graph_io.dump_graph(graph_io.load_graph(SPHERE_TEXT))

        assert "1/3" in text
        assert graph_io.load_graph(text).vertex("N").moment == (Fraction(1, 3),)

    @pytest.mark.parametrize(
        "text, match",
        [
            pytest.param(
                SPHERE_TEXT.replace("weight: [3]", "weight: [1.5]"),
                r"edges\[0\]\.weight\[0\]",
                id="fractional-weight",
            ),
            pytest.param(
                SPHERE_TEXT.replace("weight: [3]", "weight: [3.0]"),
                r"edges\[0\]\.weight\[0\]",
                id="float-weight",
            ),
            pytest.param(
                SPHERE_TEXT.replace("weight: [3]", "weight: [0]"),
                r"edges\[0\]\.weight",
                id="zero-weight",
            ),
            pytest.param(
                SPHERE_TEXT.replace('["1/3"]', "[0.5]"),
                r"vertices\[1\]\.moment\[0\]",
                id="float-moment",
            ),
            pytest.param(
                SPHERE_TEXT.replace('["1/3"]', '["1/0"]'),
                r"vertices\[1\]\.moment\[0\]",
                id="zero-denominator",
            ),
            pytest.param(
                SPHERE_TEXT + "colour: red\n",
                "colour",
                id="unknown-field",
            ),
            pytest.param(
                SPHERE_TEXT.replace("torus_rank: 1\n", ""),
                "torus_rank",
                id="missing-rank",
            ),
            pytest.param("- 1\n- 2\n", "mapping", id="not-a-mapping"),
        ],
    )
    def test_rejects(self, text: str, match: str) -> None:
        with pytest.raises(GraphParseError, match=match):
            graph_io.load_graph(text)

    def test_yaml_error_names_line(self) -> None:
        with pytest.raises(GraphParseError, match=r"line \d+, column \d+"):
            graph_io.load_graph("torus_rank: 1\nvertices: [\n  {id: S, moment: [0]\n")


class TestReadWrite:
    def test_stdin(self) -> None:
        g = graph_io.read_graph(graph_io.STDIO, io.StringIO(SPHERE_TEXT))

        assert g.vertex_ids == ["S", "N"]

    def test_file(self, tmp_path, cp1: MomentGraph) -> None:
        # GIVEN
        path = str(tmp_path / "sphere.yaml")

        # WHEN
        graph_io.write_graph(cp1, path)

        # THEN
        assert graph_io.read_graph(path) == cp1

    def test_stdout(self, cp1: MomentGraph) -> None:
        out = io.StringIO()

        graph_io.write_graph(cp1, graph_io.STDIO, out)

        assert out.getvalue() == graph_io.dump_graph(cp1)


class TestLoadPolytope:
    def test_load(self) -> None:
        text = "vertices: [[0, 0], [1, 0], ['0', '1/2']]\nedges: [[0, 1], [0, 2], [1, 2]]\n"

        points, edges = graph_io.load_polytope(text)

        assert points == [(0, 0), (1, 0), (0, Fraction(1, 2))]
        assert edges == [(0, 1), (0, 2), (1, 2)]

    def test_rejects_short_edge(self) -> None:
        with pytest.raises(GraphParseError, match=r"edges\[0\]"):
            graph_io.load_polytope("vertices: [[0]]\nedges: [[0]]\n")


class TestFormatters:
    def test_report(self) -> None:
        report = ValidationReport(
            violations=(Violation("self-loop", "a->a", "edge joins a to itself"),),
            warnings=(Violation("non-primitive-weight", "a->b", "weight [2] is not primitive"),),
        )

        assert graph_io.format_report(report) == (
            "error self-loop a->a: edge joins a to itself\n"
            "warning non-primitive-weight a->b: weight [2] is not primitive\n"
            "invalid (1 violations)\n"
        )

    def test_valid_report(self) -> None:
        assert graph_io.format_report(ValidationReport()) == "valid\n"

    def test_hilbert(self) -> None:
        table = HilbertTable(1, (1, 5), (2, 5))

        assert graph_io.format_hilbert(table) == "0 1 2 mismatch\n1 5 5\n"

    def test_betti(self) -> None:
        assert graph_io.format_betti([1, 0, 1]) == "0 1\n1 0\n2 1\n"

    def test_basis(self, cp1: MomentGraph) -> None:
        assert graph_io.format_basis(kernel_basis(cp1, 0)) == (
            "degree 0 dimension 1\nclass 0\n  S 1\n  N 1\n"
        )

    def test_generators(self, cp1: MomentGraph) -> None:
        # GIVEN
        xi = Direction((1,))
        generators = ModuleGenerators(
            (("S", flow_up_class(cp1, xi, "S")), ("N", flow_up_class(cp1, xi, "N"))),
            (FreenessRow(0, 1, 1, 1), FreenessRow(1, 2, 2, 2)),
        )

        # WHEN
        text = graph_io.format_generators(generators)

        # THEN
        assert text.splitlines() == [
            "generator S degree 0",
            "  S 1",
            "  N 1",
            "generator N degree 1",
            "  S 0",
            "  N -x1",
            "degree generators rank kernel free",
            "0 1 1 1 yes",
            "1 2 2 2 yes",
        ]

    def test_gaps(self) -> None:
        assert graph_io.format_gaps([("SS", 1), ("NN", 2)]) == "SS 1\nNN 2\n"

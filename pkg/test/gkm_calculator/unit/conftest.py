# Copyright GKM Calculator contributors. All Rights Reserved.

import pytest

from gkm.calculator import builders
from gkm.calculator.moment_graph import Direction, Edge, MomentGraph, Vertex
from gkm.calculator.polyalg import LinearForm


@pytest.fixture()
def cp1() -> MomentGraph:
    return builders.sphere((1,))


@pytest.fixture()
def cp2() -> MomentGraph:
    return builders.projective_space(2)


@pytest.fixture()
def cp3() -> MomentGraph:
    return builders.projective_space(3)


@pytest.fixture()
def s2xs2() -> MomentGraph:
    """S^2 x S^2 under the product circle actions, speed one on each factor"""
    return builders.product(builders.sphere((1,)), builders.sphere((1,)))


@pytest.fixture()
def s2xs2_speed2() -> MomentGraph:
    return builders.product(builders.sphere((2,)), builders.sphere((2,)))


@pytest.fixture()
def square_polytope() -> MomentGraph:
    return builders.from_delzant([(0, 0), (1, 0), (0, 1), (1, 1)], [(0, 1), (0, 2), (1, 3), (2, 3)])


@pytest.fixture()
def square_missing_edge() -> MomentGraph:
    """The square with its bottom edge removed: a valid moment graph of no closed T-space"""
    return MomentGraph(
        2,
        (
            Vertex("0", (0, 0)),
            Vertex("1", (1, 0)),
            Vertex("2", (0, 1)),
            Vertex("3", (1, 1)),
        ),
        (
            Edge("0", "2", LinearForm((0, 1))),
            Edge("2", "3", LinearForm((1, 0))),
            Edge("1", "3", LinearForm((0, 1))),
        ),
    )


@pytest.fixture()
def builder_graphs() -> dict:
    """Every builder-produced graph checked by the whole-pipeline properties"""
    return {
        "cp1": builders.sphere((1,)),
        "cp2": builders.projective_space(2),
        "cp3": builders.projective_space(3),
        "s2xs2": builders.product(builders.sphere((1,)), builders.sphere((1,))),
        "s2xs2-speed2": builders.product(builders.sphere((2,)), builders.sphere((2,))),
        "square": builders.from_delzant(
            [(0, 0), (1, 0), (0, 1), (1, 1)], [(0, 1), (0, 2), (1, 3), (2, 3)]
        ),
    }


@pytest.fixture()
def xi_12() -> Direction:
    return Direction((1, 2))

# Copyright GKM Calculator contributors. All Rights Reserved.

from .__main__ import main
from .builders import from_delzant, point, product, projective_space, scale_action, sphere
from .cohomology import (
    CohomologyClass,
    GradedBasis,
    HilbertTable,
    betti_numbers,
    class_product,
    downward_divisibility_check,
    flow_up_class,
    hilbert_table,
    kernel_basis,
    module_generators,
)
from .integral import euler_divisibility_gap, int_kernel_basis
from .moment_graph import (
    Direction,
    Edge,
    GenericityError,
    GraphValidationError,
    MomentGraph,
    Vertex,
    critical_order,
    euler_class_down,
    generic_direction,
    morse_index,
    validate,
)
from .polyalg import GkmError, LinearForm, Polynomial, divide_by_linear_powers

__all__ = [
    "CohomologyClass",
    "Direction",
    "Edge",
    "GenericityError",
    "GkmError",
    "GradedBasis",
    "GraphValidationError",
    "HilbertTable",
    "LinearForm",
    "MomentGraph",
    "Polynomial",
    "Vertex",
    "betti_numbers",
    "class_product",
    "critical_order",
    "divide_by_linear_powers",
    "downward_divisibility_check",
    "euler_class_down",
    "euler_divisibility_gap",
    "flow_up_class",
    "from_delzant",
    "generic_direction",
    "hilbert_table",
    "int_kernel_basis",
    "kernel_basis",
    "main",
    "module_generators",
    "morse_index",
    "point",
    "product",
    "projective_space",
    "scale_action",
    "sphere",
    "validate",
]

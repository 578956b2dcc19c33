# Copyright GKM Calculator contributors. All Rights Reserved.
"""
Exact linear algebra for the congruence systems: rational echelon forms through
sympy's DomainMatrix, and integer lattices through sympy's Hermite normal form over ZZ.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from sympy.polys.domains import QQ, ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import hermite_normal_form as hermite_normal_form_columns

_logger = logging.getLogger(__name__)

Row = Sequence[Fraction]
IntRow = Sequence[int]


def _rref(rows: Sequence[Row], ncols: int) -> Tuple[List[List[Fraction]], Tuple[int, ...]]:
    """Reduced row echelon form over Q and the pivot columns"""
    if not rows:
        return [], ()
    for row in rows:
        if len(row) != ncols:
            raise ValueError(f"Row of length {len(row)} in a matrix with {ncols} columns")
    matrix = DomainMatrix(
        [[QQ(Fraction(x).numerator, Fraction(x).denominator) for x in row] for row in rows],
        (len(rows), ncols),
        QQ,
    )
    reduced, pivots = matrix.rref()
    entries = [[Fraction(int(x.p), int(x.q)) for x in row] for row in reduced.to_Matrix().tolist()]
    _logger.debug("rref of %dx%d matrix: rank %d", len(rows), ncols, len(pivots))
    return entries, tuple(pivots)


def rank(rows: Sequence[Row], ncols: int) -> int:
    return len(_rref(rows, ncols)[1])


def canonical_rows(rows: Sequence[Row], ncols: int) -> List[List[Fraction]]:
    """
    The reduced row echelon basis of the row space, zero rows dropped. Two spanning
    sets of the same subspace give the same result.
    """
    reduced, pivots = _rref(rows, ncols)
    return reduced[: len(pivots)]


def rational_nullspace(rows: Sequence[Row], ncols: int) -> List[List[Fraction]]:
    """Basis of {x : A x = 0} in reduced row echelon form"""
    if not rows:
        return [[Fraction(int(i == j)) for j in range(ncols)] for i in range(ncols)]
    reduced, pivots = _rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in (c for c in range(ncols) if c not in pivot_set):
        vector = [Fraction(0)] * ncols
        vector[free] = Fraction(1)
        for i, p in enumerate(pivots):
            vector[p] = -reduced[i][free]
        basis.append(vector)
    if not basis:
        return []
    return canonical_rows(basis, ncols)


def solve_affine(
    rows: Sequence[Row], rhs: Sequence[Fraction], ncols: int
) -> Optional[List[Fraction]]:
    """
    The solution of A x = b with every free variable set to zero in the reduced
    echelon form of [A | b], or None if the system is inconsistent.
    """
    if len(rows) != len(rhs):
        raise ValueError(f"{len(rows)} equations but {len(rhs)} right-hand sides")
    augmented = [list(row) + [Fraction(b)] for row, b in zip(rows, rhs)]
    reduced, pivots = _rref(augmented, ncols + 1)
    if ncols in pivots:
        return None
    solution = [Fraction(0)] * ncols
    for i, p in enumerate(pivots):
        solution[p] = reduced[i][ncols]
    return solution


def hermite_normal_form(rows: Sequence[IntRow], ncols: int) -> List[Tuple[int, ...]]:
    """
    Row-style Hermite normal form of the lattice spanned by the rows: echelon, with
    positive pivots and every entry above a pivot reduced into [0, pivot). Zero
    rows are dropped, so the result is the canonical basis of the lattice.
    """
    for row in rows:
        if len(row) != ncols:
            raise ValueError(f"Row of length {len(row)} in a matrix with {ncols} columns")
    nonzero = [row for row in rows if any(row)]
    if not nonzero:
        return []
    # sympy reduces the column lattice bottom-up, so coordinates are reversed on the
    # way in and the generators reversed on the way out.
    columns = DomainMatrix(
        [[ZZ(int(row[c])) for row in nonzero] for c in reversed(range(ncols))],
        (ncols, len(nonzero)),
        ZZ,
    )
    reduced = hermite_normal_form_columns(columns).to_Matrix().T.tolist()
    return [tuple(int(x) for x in reversed(row)) for row in reversed(reduced)]


def integer_kernel(rows: Sequence[IntRow], ncols: int) -> List[List[int]]:
    """
    A Z-basis of {x in Z^ncols : A x = 0}.

    The rows (A e_c, e_c) span the graph lattice of A. In its Hermite basis the
    generators whose A part vanishes span exactly the integer kernel.
    """
    nrows = len(rows)
    for row in rows:
        if len(row) != ncols:
            raise ValueError(f"Row of length {len(row)} in a matrix with {ncols} columns")
    graph_rows = [
        [int(rows[i][c]) for i in range(nrows)] + [int(c == k) for k in range(ncols)]
        for c in range(ncols)
    ]
    kernel = [
        list(row[nrows:])
        for row in hermite_normal_form(graph_rows, nrows + ncols)
        if not any(row[:nrows])
    ]
    _logger.debug("integer kernel of %dx%d matrix has rank %d", nrows, ncols, len(kernel))
    return kernel


def lattice_contains(hnf_rows: Sequence[IntRow], vector: IntRow) -> bool:
    """Membership of an integer vector in the lattice with the given echelon basis"""
    remainder = [int(x) for x in vector]
    for row in hnf_rows:
        col = next(i for i, x in enumerate(row) if x)
        if any(remainder[:col]):
            return False
        if remainder[col] % row[col]:
            return False
        q = remainder[col] // row[col]
        remainder = [x - q * y for x, y in zip(remainder, row)]
    return not any(remainder)

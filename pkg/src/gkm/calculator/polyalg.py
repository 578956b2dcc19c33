# Copyright GKM Calculator contributors. All Rights Reserved.
"""
Exact arithmetic in the polynomial ring Sym(t*) = Q[x1, ..., xn].

Polynomials are thin immutable wrappers around sympy ``PolyElement`` values of a
cached graded-lex ring over ``QQ``. Divisibility is only supported for products
of linear forms, which is all the cohomology pipeline needs: every downward
Euler class at an isolated fixed point is such a product.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd
from tokenize import TokenError
from typing import Dict, Iterable, List, Literal, Mapping, Optional, Sequence, Tuple, Union

from sympy.parsing.sympy_parser import convert_xor, parse_expr, standard_transformations
from sympy.polys.domains import QQ
from sympy.polys.orderings import grlex
from sympy.polys.rings import PolyElement, PolyRing, ring

_logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]
Scalar = Union[int, Fraction]

# parse_expr evaluates its input, so only variables, integers and arithmetic may reach it
_POLYNOMIAL_TEXT = re.compile(r"[\sx0-9+\-*/^()]*")


class GkmError(ValueError):
    """Base class of every error raised by the calculator"""

    pass


class DimensionMismatchError(GkmError):
    """Raised when two operands live in polynomial rings of different rank"""

    pass


class ProportionalFactorsError(GkmError):
    """Raised when a product of linear forms has two proportional factors"""

    pass


class PolynomialParseError(GkmError):
    """Raised when polynomial text cannot be parsed"""

    pass


@lru_cache(maxsize=None)
def polynomial_ring(num_vars: int) -> PolyRing:
    """
    Returns the ring Q[x1, ..., xn] with graded lexicographic order.

    Args:
        num_vars (int): The torus rank n.
    """
    if num_vars < 1:
        raise ValueError(f"A polynomial ring needs at least one variable, got {num_vars}")
    names = ",".join(f"x{i + 1}" for i in range(num_vars))
    poly_ring, *_ = ring(names, QQ, grlex)
    return poly_ring


@lru_cache(maxsize=None)
def _monomial_basis(n: int, d: int) -> Tuple[Exponent, ...]:
    if n == 1:
        return ((d,),)
    return tuple((a,) + rest for a in range(d, -1, -1) for rest in _monomial_basis(n - 1, d - a))


def monomial_basis(n: int, d: int) -> List[Exponent]:
    """
    All exponent vectors of total degree d in n variables, in graded lexicographic
    order (largest power of x1 first). There are C(d + n - 1, n - 1) of them.

    Example: monomial_basis(2, 2) == [(2, 0), (1, 1), (0, 2)]
    """
    if n < 1 or d < 0:
        raise ValueError(f"monomial_basis needs n >= 1 and d >= 0, got n={n}, d={d}")
    return list(_monomial_basis(n, d))


def _to_qq(value: Scalar):
    value = Fraction(value)
    return QQ(value.numerator, value.denominator)


def _to_fraction(value) -> Fraction:
    return Fraction(int(value.numerator), int(value.denominator))


class Polynomial:
    """
    An immutable element of Q[x1, ..., xn].

    Zero coefficients are never stored; equality requires equal rank.
    """

    __slots__ = ("_element",)

    def __init__(self, element: PolyElement) -> None:
        self._element = element

    @classmethod
    def zero(cls, num_vars: int) -> Polynomial:
        return cls(polynomial_ring(num_vars).zero)

    @classmethod
    def one(cls, num_vars: int) -> Polynomial:
        return cls(polynomial_ring(num_vars).one)

    @classmethod
    def constant(cls, num_vars: int, value: Scalar) -> Polynomial:
        return cls(polynomial_ring(num_vars).ground_new(_to_qq(value)))

    @classmethod
    def variable(cls, num_vars: int, index: int) -> Polynomial:
        """The coordinate x_{index + 1}"""
        return cls(polynomial_ring(num_vars).gens[index])

    @classmethod
    def monomial(cls, exponent: Sequence[int], coefficient: Scalar = 1) -> Polynomial:
        return cls.from_terms(len(exponent), {tuple(exponent): coefficient})

    @classmethod
    def from_terms(cls, num_vars: int, terms: Mapping[Sequence[int], Scalar]) -> Polynomial:
        poly_ring = polynomial_ring(num_vars)
        data = {}
        for exponent, coefficient in terms.items():
            if len(exponent) != num_vars:
                raise DimensionMismatchError(
                    f"Exponent {tuple(exponent)} does not have length {num_vars}"
                )
            if coefficient:
                data[tuple(exponent)] = _to_qq(coefficient)
        return cls(poly_ring.from_dict(data))

    @classmethod
    def from_coefficient_vector(
        cls, num_vars: int, degree: int, vector: Sequence[Scalar]
    ) -> Polynomial:
        """Inverse of coefficient_vector: coefficients listed on monomial_basis(n, d)"""
        basis = _monomial_basis(num_vars, degree)
        if len(vector) != len(basis):
            raise DimensionMismatchError(
                f"Expected {len(basis)} coefficients for degree {degree}, got {len(vector)}"
            )
        return cls.from_terms(num_vars, dict(zip(basis, vector)))

    @property
    def num_vars(self) -> int:
        return self._element.ring.ngens

    @property
    def ring(self) -> PolyRing:
        return self._element.ring

    @property
    def element(self) -> PolyElement:
        return self._element

    @property
    def terms(self) -> Dict[Exponent, Fraction]:
        """Exponent vector to coefficient, in descending graded-lex order"""
        return {
            tuple(exponent): _to_fraction(coefficient)
            for exponent, coefficient in self._element.terms()
        }

    @property
    def is_zero(self) -> bool:
        return not self._element

    @property
    def degree(self) -> Optional[int]:
        """Total degree, or None for the zero polynomial"""
        if self.is_zero:
            return None
        return max(sum(exponent) for exponent in self._element.keys())

    @property
    def is_homogeneous(self) -> bool:
        return len({sum(exponent) for exponent in self._element.keys()}) <= 1

    def is_homogeneous_of(self, degree: int) -> bool:
        """True for the zero polynomial and for homogeneous polynomials of the given degree"""
        return all(sum(exponent) == degree for exponent in self._element.keys())

    @property
    def has_integral_coefficients(self) -> bool:
        return all(c.denominator == 1 for c in self.terms.values())

    def coefficient(self, exponent: Sequence[int]) -> Fraction:
        value = self._element.get(tuple(exponent))
        return Fraction(0) if value is None else _to_fraction(value)

    def coefficient_vector(self, degree: int) -> List[Fraction]:
        """Coefficients on monomial_basis(n, degree); other degrees are ignored"""
        return [self.coefficient(m) for m in _monomial_basis(self.num_vars, degree)]

    def _coerce(self, other: Polynomial) -> PolyElement:
        if not isinstance(other, Polynomial):
            raise TypeError(f"Expected a Polynomial, got {type(other).__name__}")
        if other.num_vars != self.num_vars:
            raise DimensionMismatchError(
                f"Cannot combine polynomials in {self.num_vars} and {other.num_vars} variables"
            )
        return other._element

    def __add__(self, other: Polynomial) -> Polynomial:
        return Polynomial(self._element + self._coerce(other))

    def __sub__(self, other: Polynomial) -> Polynomial:
        return Polynomial(self._element - self._coerce(other))

    def __mul__(self, other: Polynomial) -> Polynomial:
        return Polynomial(self._element * self._coerce(other))

    def __neg__(self) -> Polynomial:
        return Polynomial(-self._element)

    def __pow__(self, exponent: int) -> Polynomial:
        return Polynomial(self._element**exponent)

    def scale(self, factor: Scalar) -> Polynomial:
        return Polynomial(self._element * _to_qq(factor))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.num_vars == other.num_vars and dict(self._element) == dict(other._element)

    def __hash__(self) -> int:
        return hash((self.num_vars, frozenset(self._element.items())))

    def __repr__(self) -> str:
        return f"Polynomial({self.to_text()!r}, num_vars={self.num_vars})"

    def __str__(self) -> str:
        return self.to_text()

    def restrict_to_kernel(self, form: LinearForm) -> Polynomial:
        """
        Restricts the polynomial to the hyperplane form = 0 by substituting away the
        last variable with a nonzero coefficient in the form. The result does not
        involve that variable.
        """
        if form.num_vars != self.num_vars:
            raise DimensionMismatchError(
                f"Linear form in {form.num_vars} variables applied to a polynomial in "
                f"{self.num_vars} variables"
            )
        j = form.elimination_index
        gens = self.ring.gens
        pivot = form.coeffs[j]
        replacement = self.ring.zero
        for i, c in enumerate(form.coeffs):
            if i != j and c:
                replacement += gens[i] * QQ(-c, pivot)
        return Polynomial(self._element.compose(gens[j], replacement))

    def to_text(self) -> str:
        """
        Canonical text: terms in descending graded-lex order, e.g.
        ``x1^2 - 1/3 * x1*x2 + 2``. The zero polynomial is ``0``.
        """
        if self.is_zero:
            return "0"
        pieces: List[str] = []
        for exponent, coefficient in self.terms.items():
            monomial = "*".join(
                f"x{i + 1}" if e == 1 else f"x{i + 1}^{e}" for i, e in enumerate(exponent) if e
            )
            magnitude = abs(coefficient)
            if not monomial:
                term = str(magnitude)
            elif magnitude == 1:
                term = monomial
            else:
                term = f"{magnitude} * {monomial}"
            if not pieces:
                pieces.append(f"-{term}" if coefficient < 0 else term)
            else:
                pieces.append(f" - {term}" if coefficient < 0 else f" + {term}")
        return "".join(pieces)

    @classmethod
    def parse(cls, text: str, num_vars: int) -> Polynomial:
        """
        Parses polynomial text in the variables x1..xn. Accepts ``^`` or ``**`` for
        powers and integer or ``p/q`` coefficients; floating point literals and
        unknown names are rejected.
        """
        if not _POLYNOMIAL_TEXT.fullmatch(text):
            raise PolynomialParseError(
                f"{text!r} may only contain variables x1..x{num_vars}, integers, "
                f"+ - * / ^ and parentheses"
            )
        poly_ring = polynomial_ring(num_vars)
        names = {str(symbol): symbol for symbol in poly_ring.symbols}
        try:
            expr = parse_expr(
                text.strip(),
                local_dict=names,
                transformations=standard_transformations + (convert_xor,),
            )
        except (SyntaxError, TokenError, TypeError, ValueError) as e:
            raise PolynomialParseError(f"Could not parse polynomial {text!r}: {e}") from e
        try:
            return cls(poly_ring.from_expr(expr))
        except (ValueError, TypeError) as e:
            raise PolynomialParseError(
                f"{text!r} is not a polynomial in {', '.join(names)}"
            ) from e


@dataclass(frozen=True)
class LinearForm:
    """An integral weight alpha in Z^n, viewed as the linear polynomial sum alpha_i x_i"""

    coeffs: Tuple[int, ...]

    def __post_init__(self) -> None:
        coeffs = tuple(self.coeffs)
        for c in coeffs:
            if isinstance(c, bool) or not isinstance(c, int):
                raise TypeError(f"Linear form coefficients must be integers, got {coeffs}")
        if not coeffs:
            raise ValueError("A linear form needs at least one coefficient")
        if not any(coeffs):
            raise ValueError("A linear form must have a nonzero coefficient")
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def num_vars(self) -> int:
        return len(self.coeffs)

    @property
    def elimination_index(self) -> int:
        """Index of the last nonzero coefficient"""
        return max(i for i, c in enumerate(self.coeffs) if c)

    @property
    def content(self) -> int:
        return gcd(*self.coeffs)

    @property
    def is_primitive(self) -> bool:
        return self.content == 1

    @property
    def primitive(self) -> LinearForm:
        content = self.content
        return LinearForm(tuple(c // content for c in self.coeffs))

    def negate(self) -> LinearForm:
        return LinearForm(tuple(-c for c in self.coeffs))

    def scale(self, factor: int) -> LinearForm:
        return LinearForm(tuple(factor * c for c in self.coeffs))

    def pair(self, xi: Sequence[int]) -> int:
        if len(xi) != self.num_vars:
            raise DimensionMismatchError(
                f"Cannot pair a weight of rank {self.num_vars} with a direction of rank {len(xi)}"
            )
        return sum(a * b for a, b in zip(self.coeffs, xi))

    def is_proportional_to(self, other: LinearForm) -> bool:
        if other.num_vars != self.num_vars:
            raise DimensionMismatchError(
                f"Cannot compare linear forms of rank {self.num_vars} and {other.num_vars}"
            )
        a, b = self.coeffs, other.coeffs
        return all(a[i] * b[j] == a[j] * b[i] for i, j in combinations(range(len(a)), 2))

    def as_polynomial(self) -> Polynomial:
        return Polynomial.from_terms(
            self.num_vars,
            {
                tuple(int(i == k) for k in range(self.num_vars)): c
                for i, c in enumerate(self.coeffs)
            },
        )


def poly_arith(
    p: Polynomial, q: Union[Polynomial, Scalar], op: Literal["add", "mul", "scalar_mul"]
) -> Polynomial:
    """Ring operations on polynomials; scalar_mul takes an integer or Fraction as q"""
    if op == "scalar_mul":
        if isinstance(q, Polynomial):
            raise TypeError("scalar_mul expects an integer or Fraction multiplier")
        return p.scale(q)
    if not isinstance(q, Polynomial):
        raise TypeError(f"{op} expects two polynomials")
    if op == "add":
        return p + q
    if op == "mul":
        return p * q
    raise ValueError(f"Unknown polynomial operation {op!r}")


def divide_by_linear_form(p: Polynomial, form: LinearForm) -> Optional[Polynomial]:
    """
    Returns q with q * form == p, or None when p is not divisible by the form.

    For a single divisor the graded-lex division remainder vanishes exactly when p
    lies in the principal ideal, i.e. when p vanishes on the hyperplane form = 0.
    """
    divisor = form.as_polynomial()
    if divisor.num_vars != p.num_vars:
        raise DimensionMismatchError(
            f"Cannot divide a polynomial in {p.num_vars} variables by a linear form in "
            f"{divisor.num_vars} variables"
        )
    if p.is_zero:
        return p
    quotient, remainder = p.element.div(divisor.element)
    if remainder:
        return None
    return Polynomial(quotient)


def pairwise_coprime(forms: Iterable[LinearForm]) -> bool:
    """True iff no two of the forms are rational multiples of each other"""
    forms = list(forms)
    return not any(a.is_proportional_to(b) for a, b in combinations(forms, 2))


def divide_by_linear_powers(
    p: Polynomial, factors: Sequence[Tuple[LinearForm, int]]
) -> Optional[Polynomial]:
    """
    Divides p by the product of form**multiplicity over the factors, or returns None
    when p is not a multiple of that product.

    The forms must be pairwise non-proportional. Their powers are then pairwise
    relatively prime, so p is a multiple of the full product exactly when it is a
    multiple of each power separately.
    """
    forms = [form for form, _ in factors]
    if not pairwise_coprime(forms):
        raise ProportionalFactorsError(
            f"Factors must be pairwise non-proportional: {[f.coeffs for f in forms]}"
        )
    for form, multiplicity in factors:
        if multiplicity < 0:
            raise ValueError(f"Negative multiplicity {multiplicity} for {form.coeffs}")
    if p.is_zero:
        return p
    quotient: Optional[Polynomial] = p
    for form, multiplicity in factors:
        for _ in range(multiplicity):
            quotient = divide_by_linear_form(quotient, form)
            if quotient is None:
                return None
    return quotient


def vanishes_to_order(p: Polynomial, form: LinearForm, order: int) -> bool:
    """
    Independent check that form**order divides p: p and its first order - 1 partial
    derivatives along the elimination coordinate of the form all vanish on the
    hyperplane form = 0.
    """
    variable = p.ring.gens[form.elimination_index]
    current = p
    for _ in range(order):
        if not current.restrict_to_kernel(form).is_zero:
            return False
        current = Polynomial(current.element.diff(variable))
    return True

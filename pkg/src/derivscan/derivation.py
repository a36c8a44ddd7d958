"""Derivations of polynomial rings and the d_n family of interest.

A derivation is stored as one coefficient polynomial per variable and acts
through the Leibniz rule: d(p) = sum_i c_i * dp/dx_i.  Two constructors
build the studied family in its two coordinate conventions:

* ``jordan_derivation`` on k[x1..xn]:
      (1 - x1*x2^alpha) d/dx1 + x1^m d/dx2 + x2 d/dx3 + ... + x_{n-1} d/dxn
* ``two_variable_derivation`` on k[x, y] (x = x1, y = x2):
      y^m d/dx + (1 - x^alpha y) d/dy

The two agree at n = 2 after swapping the variables; ``permute_variables``
is the explicit witness for that, so nothing is ever renamed silently.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence, Union

from .poly import MINUS_INFINITY, ArityError, Polynomial, parse, to_string


@dataclass(frozen=True)
class Derivation:
    """A k-derivation given by its coefficient polynomials c_1..c_n."""

    arity: int
    coefficients: tuple[Polynomial, ...]

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError(f"arity must be >= 1, got {self.arity}")
        if len(self.coefficients) != self.arity:
            raise ArityError(
                f"need {self.arity} coefficients, got {len(self.coefficients)}"
            )
        for c in self.coefficients:
            if c.arity != self.arity:
                raise ArityError(
                    f"coefficient arity {c.arity} != derivation arity {self.arity}"
                )

    def apply(self, p: Polynomial) -> Polynomial:
        """d(p) = sum_i c_i * dp/dx_i.  Linear in p, satisfies Leibniz."""
        if p.arity != self.arity:
            raise ArityError(f"arity mismatch: {self.arity} vs {p.arity}")
        out = Polynomial.zero(self.arity)
        for i, c in enumerate(self.coefficients, start=1):
            if c:
                out = out + c * p.partial_derivative(i)
        return out

    def max_coefficient_degree(self) -> Union[int, float]:
        return max(c.total_degree() for c in self.coefficients)

    def to_json_dict(self) -> dict:
        return {
            "arity": self.arity,
            "coefficients": [to_string(c) for c in self.coefficients],
        }

    @classmethod
    def from_json_dict(cls, data: Mapping) -> "Derivation":
        arity = int(data["arity"])
        coeffs = tuple(parse(text, arity) for text in data["coefficients"])
        return cls(arity, coeffs)


@dataclass(frozen=True)
class FamilyParams:
    """Parameters (n, m, alpha) selecting one member of the d_n family.

    m = 1 is constructible (it is the regime with an explicit unit
    preimage) but sits outside the hypothesis of the simplicity and
    no-unit claims; callers that assert those claims should warn on it.
    """

    n: int
    m: int
    alpha: int

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.m < 1:
            raise ValueError(f"m must be >= 1, got {self.m}")
        if self.alpha < 1:
            raise ValueError(f"alpha must be >= 1, got {self.alpha}")

    @property
    def in_simplicity_regime(self) -> bool:
        return self.m >= 2


def jordan_derivation(params: FamilyParams) -> Derivation:
    """The family member d_n on k[x1..xn] for the given (n, m, alpha)."""
    n = params.n
    x = [Polynomial.variable(n, i) for i in range(1, n + 1)]
    coefficients = [Polynomial.constant(n, 1) - x[0] * x[1] ** params.alpha, x[0] ** params.m]
    for i in range(3, n + 1):
        coefficients.append(x[i - 2])
    return Derivation(n, tuple(coefficients))


def two_variable_derivation(m: int, alpha: int) -> Derivation:
    """The 2-variable form y^m d/dx + (1 - x^alpha y) d/dy on k[x, y]."""
    if m < 1:
        raise ValueError(f"m must be >= 1, got {m}")
    if alpha < 1:
        raise ValueError(f"alpha must be >= 1, got {alpha}")
    x = Polynomial.variable(2, 1)
    y = Polynomial.variable(2, 2)
    return Derivation(2, (y ** m, Polynomial.constant(2, 1) - x ** alpha * y))


def permute_variables(d: Derivation, mapping: Mapping[int, int]) -> Derivation:
    """Relabel variables by a bijection of 1..n (old index -> new index).

    The coefficient attached to d/dx_i moves to d/dx_{mapping[i]}, with the
    same relabeling applied inside every coefficient polynomial.
    """
    n = d.arity
    if sorted(mapping) != list(range(1, n + 1)) or sorted(mapping.values()) != list(
        range(1, n + 1)
    ):
        raise ValueError(f"mapping must be a bijection of 1..{n}")
    coefficients: list[Polynomial] = [Polynomial.zero(n)] * n
    for i, c in enumerate(d.coefficients, start=1):
        coefficients[mapping[i] - 1] = c.rename_variables(n, mapping)
    return Derivation(n, tuple(coefficients))

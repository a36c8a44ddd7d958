"""Ring endomorphisms, the commutation test d o rho = rho o d, and
bounded sweeps over affine candidates for the commuting group.

The sweep enumerates diagonal affine maps g_i = a_i x_i + c_i (and,
behind a flag, lower-triangular affine maps) over a finite integer box
and keeps exactly those commuting with the derivation.  For the studied
family the surviving set should be the translations of the last
variable; the sweep's job is falsification coverage at desk scale, not a
completeness proof.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from . import linalg
from .derivation import Derivation
from .poly import ArityError, Polynomial

Scalar = Union[int, Fraction]


@dataclass(frozen=True)
class Endomorphism:
    """A k-algebra endomorphism given by the images g_i of the variables."""

    arity: int
    images: tuple[Polynomial, ...]

    def __post_init__(self):
        if len(self.images) != self.arity:
            raise ArityError(f"need {self.arity} images, got {len(self.images)}")
        for g in self.images:
            if g.arity != self.arity:
                raise ArityError("image arity mismatch")

    def apply(self, p: Polynomial) -> Polynomial:
        return p.substitute(self.images)

    def compose(self, other: "Endomorphism") -> "Endomorphism":
        """self after other: x_i -> self(other(x_i))."""
        if self.arity != other.arity:
            raise ArityError("arity mismatch")
        return Endomorphism(
            self.arity, tuple(self.apply(g) for g in other.images)
        )

    @classmethod
    def identity(cls, arity: int) -> "Endomorphism":
        return cls(arity, tuple(Polynomial.variable(arity, i) for i in range(1, arity + 1)))


def apply_endo(rho: Endomorphism, p: Polynomial) -> Polynomial:
    """Substitution action of rho on p (a ring homomorphism in p)."""
    return rho.apply(p)


@dataclass(frozen=True)
class CommutationResult:
    """Outcome of the commutation test, with one residual per variable:
    residual_i = d(rho(x_i)) - rho(d(x_i)).  All zero iff they commute."""

    commutes: bool
    residuals: tuple[Polynomial, ...]

    def __bool__(self) -> bool:
        return self.commutes


def commutes(d: Derivation, rho: Endomorphism) -> CommutationResult:
    if d.arity != rho.arity:
        raise ArityError("arity mismatch")
    residuals = []
    ok = True
    for i in range(1, d.arity + 1):
        left = d.apply(rho.images[i - 1])
        right = rho.apply(d.coefficients[i - 1])
        residual = left - right
        residuals.append(residual)
        if residual:
            ok = False
    return CommutationResult(commutes=ok, residuals=tuple(residuals))


def translation(n: int, c: Scalar) -> Endomorphism:
    """x_i -> x_i for i < n and x_n -> x_n + c; an automorphism with
    inverse translation(n, -c)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    images = [Polynomial.variable(n, i) for i in range(1, n + 1)]
    images[n - 1] = images[n - 1] + Polynomial.constant(n, c)
    return Endomorphism(n, tuple(images))


@dataclass(frozen=True)
class AffineMap:
    """x_i -> sum_j linear[i][j] x_j + offset[i]; an automorphism iff the
    linear part is invertible."""

    linear: tuple[tuple[Fraction, ...], ...]
    offset: tuple[Fraction, ...]

    def __post_init__(self):
        n = len(self.offset)
        if len(self.linear) != n or any(len(row) != n for row in self.linear):
            raise ValueError("linear part must be square and match the offset")

    @property
    def arity(self) -> int:
        return len(self.offset)

    @classmethod
    def from_rows(
        cls, linear: Sequence[Sequence[Scalar]], offset: Sequence[Scalar]
    ) -> "AffineMap":
        return cls(
            tuple(tuple(Fraction(v) for v in row) for row in linear),
            tuple(Fraction(v) for v in offset),
        )

    @classmethod
    def diagonal(cls, scales: Sequence[Scalar], offset: Sequence[Scalar]) -> "AffineMap":
        n = len(scales)
        rows = [
            [Fraction(scales[i]) if i == j else Fraction(0) for j in range(n)]
            for i in range(n)
        ]
        return cls.from_rows(rows, offset)

    def to_endomorphism(self) -> Endomorphism:
        n = self.arity
        images = []
        for i in range(n):
            g = Polynomial.constant(n, self.offset[i])
            for j in range(n):
                if self.linear[i][j]:
                    g = g + Polynomial.variable(n, j + 1).scale(self.linear[i][j])
            images.append(g)
        return Endomorphism(n, tuple(images))

    def determinant(self) -> Fraction:
        n = self.arity
        rows = [list(r) for r in self.linear]
        det = Fraction(1)
        for col in range(n):
            pivot = None
            for r in range(col, n):
                if rows[r][col]:
                    pivot = r
                    break
            if pivot is None:
                return Fraction(0)
            if pivot != col:
                rows[col], rows[pivot] = rows[pivot], rows[col]
                det = -det
            det *= rows[col][col]
            inv = 1 / rows[col][col]
            for r in range(col + 1, n):
                if rows[r][col]:
                    factor = rows[r][col] * inv
                    rows[r] = [a - factor * b for a, b in zip(rows[r], rows[col])]
        return det

    def inverse(self) -> Optional["AffineMap"]:
        """The inverse affine map, or None when the linear part is singular."""
        n = self.arity
        matrix = linalg.RationalMatrix.from_rows(self.linear)
        columns = []
        for j in range(n):
            unit = [Fraction(1) if i == j else Fraction(0) for i in range(n)]
            solved = linalg.solve(matrix, unit)
            if solved is None or solved[1].dimension:
                return None
            columns.append(solved[0])
        inv_rows = [[columns[j][i] for j in range(n)] for i in range(n)]
        inv_offset = [
            -sum((inv_rows[i][j] * self.offset[j] for j in range(n)), Fraction(0))
            for i in range(n)
        ]
        return AffineMap.from_rows(inv_rows, inv_offset)


def is_affine_automorphism(candidate: AffineMap) -> bool:
    return candidate.determinant() != 0


def conjugate_endomorphism(rho: Endomorphism, sigma: AffineMap) -> Endomorphism:
    """sigma^{-1} o rho o sigma; sigma must be an affine automorphism."""
    inverse = sigma.inverse()
    if inverse is None:
        raise ValueError("sigma is not an automorphism")
    return inverse.to_endomorphism().compose(rho).compose(sigma.to_endomorphism())


def conjugate_derivation(d: Derivation, sigma: AffineMap) -> Derivation:
    """The derivation sigma^{-1} o d o sigma (a derivation again; its
    coefficients are the conjugate's values on the variables)."""
    inverse = sigma.inverse()
    if inverse is None:
        raise ValueError("sigma is not an automorphism")
    sigma_endo = sigma.to_endomorphism()
    inverse_endo = inverse.to_endomorphism()
    coefficients = tuple(
        inverse_endo.apply(d.apply(sigma_endo.images[i])) for i in range(d.arity)
    )
    return Derivation(d.arity, coefficients)


def diagonal_affine_scan(d: Derivation, box: tuple[int, int]) -> list[AffineMap]:
    """All diagonal affine maps g_i = a_i x_i + c_i with integer a_i != 0
    and c_i in the inclusive box that commute with d."""
    lo, hi = box
    if lo > hi:
        raise ValueError("empty box")
    n = d.arity
    scales = [v for v in range(lo, hi + 1) if v != 0]
    offsets = list(range(lo, hi + 1))
    survivors = []
    for a in itertools.product(scales, repeat=n):
        for c in itertools.product(offsets, repeat=n):
            candidate = AffineMap.diagonal(a, c)
            if commutes(d, candidate.to_endomorphism()):
                survivors.append(candidate)
    return survivors


def triangular_affine_scan(d: Derivation, box: tuple[int, int]) -> list[AffineMap]:
    """Lower-triangular affine candidates: g_i = a_i x_i +
    sum_{j<i} t_{ij} x_j + c_i with all parameters in the box, a_i != 0.
    Exhaustive over the box; meant for small boxes only."""
    lo, hi = box
    if lo > hi:
        raise ValueError("empty box")
    n = d.arity
    diag_values = [v for v in range(lo, hi + 1) if v != 0]
    free_values = list(range(lo, hi + 1))
    below = [(i, j) for i in range(n) for j in range(i)]
    survivors = []
    for diag in itertools.product(diag_values, repeat=n):
        for strict in itertools.product(free_values, repeat=len(below)):
            rows = [[Fraction(0)] * n for _ in range(n)]
            for i in range(n):
                rows[i][i] = Fraction(diag[i])
            for (i, j), v in zip(below, strict):
                rows[i][j] = Fraction(v)
            for offset in itertools.product(free_values, repeat=n):
                candidate = AffineMap.from_rows(rows, offset)
                if commutes(d, candidate.to_endomorphism()):
                    survivors.append(candidate)
    return survivors


def is_last_variable_translation(candidate: AffineMap) -> bool:
    """True when the map is x_i -> x_i for i < n, x_n -> x_n + c."""
    n = candidate.arity
    for i in range(n):
        for j in range(n):
            expected = Fraction(1) if i == j else Fraction(0)
            if candidate.linear[i][j] != expected:
                return False
    return all(candidate.offset[i] == 0 for i in range(n - 1))

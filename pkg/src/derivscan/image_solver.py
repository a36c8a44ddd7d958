"""Degree-bounded decision procedures for membership in a derivation image.

Everything here reduces questions of the form "is t = d(r) solvable with
deg r <= D?" to one exact linear solve over the monomial basis of the
degree-capped domain.  The codomain basis is enlarged to degree
D + max(deg c_i), which the image can never exceed, so no equation is
silently truncated.  Verdicts are bounded evidence about the restriction
of d to that finite-dimensional space, never statements about all of R_n.

``affine_target_scan`` treats the target coefficients a, b as two extra
unknown columns, so a single kernel computation decides every target
a*x_i + b simultaneously.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import linalg
from .derivation import Derivation
from .poly import ArityError, Exponents, Polynomial, grlex_key

#: Column/row orderings accepted by the matrix builders.  "lex" exists as
#: an independently-constructed cross-check of the default "grlex" path.
ORDERINGS = ("grlex", "lex")


def monomial_basis(arity: int, max_degree: int, order: str = "grlex") -> list[Exponents]:
    """All exponent vectors of total degree <= max_degree, descending."""
    if max_degree < 0:
        return []
    if order not in ORDERINGS:
        raise ValueError(f"unknown ordering {order!r}")
    out: list[Exponents] = []

    def extend(prefix: list[int], remaining: int, slots: int) -> None:
        if slots == 1:
            for e in range(remaining + 1):
                out.append(tuple(prefix + [e]))
            return
        for e in range(remaining + 1):
            extend(prefix + [e], remaining - e, slots - 1)

    extend([], max_degree, arity)
    key = grlex_key if order == "grlex" else lambda e: e
    out.sort(key=key, reverse=True)
    return out


@dataclass(frozen=True)
class ImageWitness:
    """A certified preimage: apply(d, r) equals target exactly."""

    r: Polynomial
    target: Polynomial

    @classmethod
    def checked(cls, d: Derivation, r: Polynomial, target: Polynomial) -> "ImageWitness":
        image = d.apply(r)
        if image != target:
            raise ValueError(
                f"witness fails re-application: d(r) = {image}, expected {target}"
            )
        return cls(r, target)


@dataclass(frozen=True)
class AffineTarget:
    """The target a*x_i + b of an affine-image question."""

    variable_index: int
    a: Fraction
    b: Fraction

    def to_polynomial(self, arity: int) -> Polynomial:
        if not 1 <= self.variable_index <= arity:
            raise ValueError(
                f"variable index {self.variable_index} out of range 1..{arity}"
            )
        return Polynomial.variable(arity, self.variable_index).scale(
            self.a
        ) + Polynomial.constant(arity, self.b)


@dataclass(frozen=True)
class AffineScanReport:
    """Full solution space of apply(d, r) = a*x_i + b with deg r <= D."""

    variable_index: int
    degree_bound: int
    matrix_rows: int
    matrix_cols: int
    rank: int
    generators: tuple[tuple[Polynomial, AffineTarget], ...]

    @property
    def dimension(self) -> int:
        return len(self.generators)

    @property
    def trivial_only(self) -> bool:
        """True when every solution has a = b = 0 and r constant."""
        return all(
            target.a == 0 and target.b == 0 and r.is_constant()
            for r, target in self.generators
        )


class _ImageSystem:
    """The linear map r -> d(r) on the degree-capped monomial basis."""

    def __init__(self, d: Derivation, degree_bound: int, order: str = "grlex"):
        if degree_bound < 0:
            raise ValueError(f"degree bound must be >= 0, got {degree_bound}")
        self.derivation = d
        self.degree_bound = degree_bound
        self.order = order
        extra = d.max_coefficient_degree()
        self.codomain_degree = degree_bound + (int(extra) if extra > 0 else 0)
        self.columns = monomial_basis(d.arity, degree_bound, order)
        codomain = monomial_basis(d.arity, self.codomain_degree, order)
        self.row_index: dict[Exponents, int] = {e: i for i, e in enumerate(codomain)}
        self.rows: list[dict[int, Fraction]] = [{} for _ in codomain]
        for j, exponents in enumerate(self.columns):
            image = d.apply(Polynomial.monomial(d.arity, exponents))
            for e, coeff in image.terms.items():
                self.rows[self.row_index[e]][j] = coeff

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    @property
    def n_cols(self) -> int:
        return len(self.columns)

    def vector_to_polynomial(self, values: Sequence[Fraction]) -> Polynomial:
        terms = {
            exponents: value
            for exponents, value in zip(self.columns, values)
            if value
        }
        return Polynomial(self.derivation.arity, terms)


def image_membership(
    d: Derivation, t: Polynomial, degree_bound: int, order: str = "grlex"
) -> Optional[ImageWitness]:
    """Search for r with deg r <= degree_bound and d(r) = t, exactly.

    None means no preimage exists within the degree bound (a bounded
    verdict); a returned witness is re-verified by applying d once more.
    """
    if t.arity != d.arity:
        raise ArityError(f"arity mismatch: {d.arity} vs {t.arity}")
    system = _ImageSystem(d, degree_bound, order)
    rhs = [Fraction(0)] * system.n_rows
    for e, coeff in t.terms.items():
        row = system.row_index.get(e)
        if row is None:
            # Target monomial outside the reachable codomain.
            return None
        rhs[row] = coeff
    solution = linalg.solve_sparse(system.rows, rhs, system.n_cols)
    if solution is None:
        return None
    particular, _ = solution
    return ImageWitness.checked(d, system.vector_to_polynomial(particular), t)


def unit_in_image(d: Derivation, degree_bound: int) -> Optional[ImageWitness]:
    """Decide whether some unit (nonzero constant) has a preimage of
    degree <= degree_bound; it suffices to test the target 1."""
    return image_membership(d, Polynomial.constant(d.arity, 1), degree_bound)


def affine_target_scan(
    d: Derivation, variable_index: int, degree_bound: int, order: str = "grlex"
) -> AffineScanReport:
    """Solve apply(d, r) = a*x_i + b jointly in (r, a, b), deg r <= bound.

    The report lists one generator per solution-space dimension; the
    verdict property ``trivial_only`` holds when the only solutions are
    constant r with a = b = 0.
    """
    if not 1 <= variable_index <= d.arity:
        raise ValueError(f"variable index {variable_index} out of range 1..{d.arity}")
    system = _ImageSystem(d, degree_bound, order)
    a_col = system.n_cols
    b_col = system.n_cols + 1
    rows = [dict(row) for row in system.rows]
    row_index = dict(system.row_index)

    def ensure_row(exponents: Exponents) -> int:
        idx = row_index.get(exponents)
        if idx is None:
            idx = len(rows)
            rows.append({})
            row_index[exponents] = idx
        return idx

    x_i = tuple(
        1 if k == variable_index - 1 else 0 for k in range(d.arity)
    )
    constant = (0,) * d.arity
    rows[ensure_row(x_i)][a_col] = Fraction(-1)
    rows[ensure_row(constant)][b_col] = Fraction(-1)

    basis = linalg.kernel_sparse(rows, system.n_cols + 2)
    generators = []
    for vector in basis.vectors:
        r = system.vector_to_polynomial(vector[: system.n_cols])
        target = AffineTarget(variable_index, vector[a_col], vector[b_col])
        if d.apply(r) != target.to_polynomial(d.arity):
            raise RuntimeError("solver returned a vector that fails re-application")
        generators.append((r, target))
    return AffineScanReport(
        variable_index=variable_index,
        degree_bound=degree_bound,
        matrix_rows=len(rows),
        matrix_cols=system.n_cols + 2,
        rank=system.n_cols + 2 - basis.dimension,
        generators=tuple(generators),
    )


def membership_report(
    d: Derivation, t: Polynomial, degree_bound: int
) -> dict:
    """Verdict plus matrix statistics, for report emission."""
    system = _ImageSystem(d, degree_bound)
    witness = image_membership(d, t, degree_bound)
    return {
        "matrix_rows": system.n_rows,
        "matrix_cols": system.n_cols,
        "rank": linalg.rank_sparse(system.rows, system.n_cols),
        "witness": witness,
        "degree_bound": degree_bound,
    }

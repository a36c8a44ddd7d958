"""Bounded search for generators of derivation-stable principal ideals.

A non-constant p with d(p) = q*p for some polynomial cofactor q generates
an ideal mapped into itself by d, so finding one falsifies simplicity.
The search linearizes over the cofactor: for each candidate q from a
finite integer-coefficient box it computes the exact kernel of
p -> d(p) - q*p on the degree-capped monomial space.  That makes every
sweep COMPLETE in p for the scanned cofactors but INCOMPLETE over the
rational cofactors not enumerated; reports say so explicitly, and a
negative sweep is bounded evidence, not proof.

Degree bookkeeping caps useful cofactors at max_i deg(c_i) - 1, since
deg d(p) <= deg p + max_i deg(c_i) - 1 for the leading part to match.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Optional

from . import linalg
from .derivation import Derivation, FamilyParams, jordan_derivation
from .image_solver import monomial_basis
from .poly import ArityError, Polynomial, to_string


@dataclass(frozen=True)
class DarbouxWitness:
    """A certified stable-ideal generator: apply(d, p) = q*p exactly."""

    p: Polynomial
    q: Polynomial

    @classmethod
    def checked(cls, d: Derivation, p: Polynomial, q: Polynomial) -> "DarbouxWitness":
        if p.is_constant():
            raise ValueError("witness generator must be non-constant")
        if d.apply(p) != q * p:
            raise ValueError("witness fails re-application: d(p) != q*p")
        return cls(p, q)


@dataclass(frozen=True)
class ScanConfig:
    """Bounds for one sweep: generator degree cap, cofactor degree cap,
    and the inclusive integer range for enumerated cofactor coefficients."""

    degree_p: int
    cofactor_degree: int
    coefficient_box: tuple[int, int] = (-2, 2)

    def __post_init__(self):
        if self.degree_p < 1:
            raise ValueError("degree_p must be >= 1")
        if self.cofactor_degree < 0:
            raise ValueError("cofactor_degree must be >= 0")
        lo, hi = self.coefficient_box
        if lo > hi:
            raise ValueError("empty coefficient box")


@dataclass(frozen=True)
class ScanReport:
    """Outcome of one cofactor sweep.

    complete_in_p is always True (the kernel per cofactor is exact and
    exhaustive); complete_in_cofactors is always False because only the
    integer box was enumerated.
    """

    config: ScanConfig
    cofactors_scanned: int
    witnesses: tuple[DarbouxWitness, ...]
    complete_in_p: bool = True
    complete_in_cofactors: bool = False

    @property
    def found(self) -> bool:
        return bool(self.witnesses)


def verify_darboux(d: Derivation, p: Polynomial, q: Polynomial) -> bool:
    """True iff apply(d, p) = q*p exactly."""
    if p.arity != d.arity or q.arity != d.arity:
        raise ArityError("arity mismatch")
    return d.apply(p) == q * p


def exact_quotient(f: Polynomial, g: Polynomial) -> Optional[Polynomial]:
    """f / g when g divides f exactly, else None (single-divisor division
    by leading-term reduction; the remainder is unique for one divisor)."""
    if g.arity != f.arity:
        raise ArityError("arity mismatch")
    if not g:
        raise ZeroDivisionError("division by the zero polynomial")
    quotient = Polynomial.zero(f.arity)
    remainder = f
    g_key, g_coeff = g.leading_term()
    while remainder:
        r_key, r_coeff = remainder.leading_term()
        step = tuple(a - b for a, b in zip(r_key, g_key))
        if any(e < 0 for e in step):
            return None
        term = Polynomial.monomial(f.arity, step, r_coeff / g_coeff)
        quotient = quotient + term
        remainder = remainder - term * g
    return quotient


def principal_stability_check(d: Derivation, p: Polynomial) -> Optional[Polynomial]:
    """The cofactor q with apply(d, p) = q*p, if p divides d(p) exactly."""
    if not p:
        raise ValueError("p must be nonzero")
    return exact_quotient(d.apply(p), p)


class _CofactorSweepSpace:
    """Shared state for many cofactors against one derivation: the columns
    and their images under d are computed once per sweep, with integer
    coefficients kept as plain ints so the elimination never touches
    Fraction arithmetic unless it has to."""

    def __init__(self, d: Derivation, degree_p: int):
        self.derivation = d
        self.columns = monomial_basis(d.arity, degree_p)
        self.d_images = []
        for e in self.columns:
            image = d.apply(Polynomial.monomial(d.arity, e))
            self.d_images.append(
                {k: int(c) if c.denominator == 1 else c for k, c in image.terms.items()}
            )

    def kernel_polynomials(self, q: Polynomial) -> list[Polynomial]:
        """Non-constant reduced kernel basis of p -> d(p) - q*p."""
        row_index: dict[tuple[int, ...], int] = {}
        rows: list[dict] = []

        def row_of(exponents) -> dict:
            idx = row_index.get(exponents)
            if idx is None:
                idx = len(rows)
                row_index[exponents] = idx
                rows.append({})
            return rows[idx]

        q_terms = [
            (w, int(c) if c.denominator == 1 else c) for w, c in q.terms.items()
        ]
        for j, exponents in enumerate(self.columns):
            for e, coeff in self.d_images[j].items():
                row = row_of(e)
                row[j] = row.get(j, 0) + coeff
            for w, c in q_terms:
                key = tuple(a + b for a, b in zip(exponents, w))
                row = row_of(key)
                total = row.get(j, 0) - c
                if total:
                    row[j] = total
                else:
                    row.pop(j, None)
        basis = linalg.kernel_sparse(rows, len(self.columns))
        out = []
        for vector in basis.vectors:
            p = Polynomial(
                self.derivation.arity,
                {e: v for e, v in zip(self.columns, vector) if v},
            )
            if not p.is_constant():
                out.append(p)
        return out


def darboux_search_fixed_cofactor(
    d: Derivation, q: Polynomial, degree_p: int
) -> list[Polynomial]:
    """All non-constant kernel directions of p -> d(p) - q*p on the
    monomial space of total degree <= degree_p, as a reduced basis."""
    if q.arity != d.arity:
        raise ArityError("arity mismatch")
    return _CofactorSweepSpace(d, degree_p).kernel_polynomials(q)


def enumerate_cofactors(
    arity: int, max_degree: int, box: tuple[int, int]
) -> Iterator[Polynomial]:
    """Every polynomial of total degree <= max_degree whose coefficients
    are integers in the inclusive box, the zero cofactor included."""
    monomials = monomial_basis(arity, max_degree)
    lo, hi = box
    values = range(lo, hi + 1)
    for combo in itertools.product(values, repeat=len(monomials)):
        yield Polynomial(
            arity, {e: c for e, c in zip(monomials, combo) if c}
        )


def stable_ideal_scan(d: Derivation, config: ScanConfig) -> ScanReport:
    """Sweep the cofactor box, solving one exact kernel per cofactor."""
    space = _CofactorSweepSpace(d, config.degree_p)
    witnesses: list[DarbouxWitness] = []
    scanned = 0
    for q in enumerate_cofactors(d.arity, config.cofactor_degree, config.coefficient_box):
        scanned += 1
        for p in space.kernel_polynomials(q):
            witnesses.append(DarbouxWitness.checked(d, p, q))
    return ScanReport(
        config=config,
        cofactors_scanned=scanned,
        witnesses=tuple(witnesses),
    )


def default_scan_config(
    d: Derivation,
    degree_p: int,
    box: tuple[int, int] = (-2, 2),
    cofactor_degree: Optional[int] = None,
) -> ScanConfig:
    """Defaults: cofactor degree = max coefficient degree - 1, box {-2..2}."""
    if cofactor_degree is None:
        top = d.max_coefficient_degree()
        cofactor_degree = max(int(top) - 1, 0) if top > 0 else 0
    return ScanConfig(degree_p, cofactor_degree, box)


#: Non-simple control derivations the scan must detect.
CONTROLS = ("ddx", "euler")


def control_derivation(name: str, arity: int = 2) -> Derivation:
    """Named non-simple controls: "ddx" is d/dx1, "euler" is sum x_i d/dx_i."""
    if arity < 2:
        raise ValueError("controls need arity >= 2")
    if name == "ddx":
        coefficients = [Polynomial.constant(arity, 1)] + [
            Polynomial.zero(arity) for _ in range(arity - 1)
        ]
        return Derivation(arity, tuple(coefficients))
    if name == "euler":
        return Derivation(
            arity,
            tuple(Polynomial.variable(arity, i) for i in range(1, arity + 1)),
        )
    raise ValueError(f"unknown control {name!r}; pick one of {CONTROLS}")

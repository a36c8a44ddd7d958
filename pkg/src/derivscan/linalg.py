"""Exact linear algebra over the rationals: solve and null space.

Elimination is fraction-free: each row is scaled to coprime integers once,
and rows are combined by integer cross-multiplication with the content
(gcd) stripped after every step, so no rational arithmetic happens until
back-substitution.  Pivots are chosen deterministically, leftmost column
first, scanning candidate rows top-down.

Outputs are canonical: kernel bases come back in reduced row-echelon form
(unique for a given matrix), and particular solutions set every free
variable to zero, so identical inputs yield identical results.

The public entry points work on the dense RationalMatrix value type.  The
``*_sparse`` variants accept rows as {column: coefficient} dicts and exist
because callers such as the Darboux sweep run tens of thousands of small
eliminations and cannot afford dense construction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

Scalar = Union[int, Fraction]

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class RationalMatrix:
    """Dense row-major matrix of exact rationals."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise ValueError("negative dimensions")
        if len(self.entries) != self.rows * self.cols:
            raise ValueError(
                f"need {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    @classmethod
    def from_rows(cls, data: Sequence[Sequence[Scalar]]) -> "RationalMatrix":
        rows = len(data)
        cols = len(data[0]) if rows else 0
        flat: list[Fraction] = []
        for row in data:
            if len(row) != cols:
                raise ValueError("ragged rows")
            flat.extend(Fraction(v) for v in row)
        return cls(rows, cols, tuple(flat))

    def entry(self, i: int, j: int) -> Fraction:
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def mul_vector(self, v: Sequence[Scalar]) -> tuple[Fraction, ...]:
        if len(v) != self.cols:
            raise ValueError(f"vector length {len(v)} != cols {self.cols}")
        out = []
        for i in range(self.rows):
            row = self.row(i)
            out.append(sum((a * Fraction(b) for a, b in zip(row, v)), _ZERO))
        return tuple(out)

    def sparse_rows(self) -> list[dict[int, Fraction]]:
        out = []
        for i in range(self.rows):
            base = i * self.cols
            row = {
                j: self.entries[base + j]
                for j in range(self.cols)
                if self.entries[base + j]
            }
            out.append(row)
        return out


@dataclass(frozen=True)
class KernelBasis:
    """Null-space basis in reduced row-echelon form, pivots left to right."""

    cols: int
    vectors: tuple[tuple[Fraction, ...], ...]

    @property
    def dimension(self) -> int:
        return len(self.vectors)


# -- fraction-free core ------------------------------------------------------


def _to_int_row(row: Mapping[int, Scalar]) -> dict[int, int]:
    """Scale a sparse rational row to coprime integers."""
    if not row:
        return {}
    denom = 1
    for v in row.values():
        if v.__class__ is not int:
            d = v.denominator
            if d != 1:
                denom = denom * d // math.gcd(denom, d)
    if denom == 1:
        ints = {c: int(v) for c, v in row.items() if v}
    else:
        ints = {}
        for c, v in row.items():
            scaled = int(v * denom)
            if scaled:
                ints[c] = scaled
    return _strip_content(ints)


def _strip_content(row: dict[int, int]) -> dict[int, int]:
    g = 0
    for v in row.values():
        g = math.gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        return {c: v // g for c, v in row.items()}
    return row


class _Elimination:
    """Forward fraction-free elimination over integer rows.

    ``rhs_col`` marks one column as an augmented right-hand side: it is
    carried through row operations but never chosen as a pivot.
    """

    def __init__(self, cols: int, rhs_col: Optional[int] = None):
        self.cols = cols
        self.rhs_col = rhs_col
        self.pivots: dict[int, dict[int, int]] = {}
        self.inconsistent = False

    def _lead(self, row: dict[int, int]) -> Optional[int]:
        best = None
        for c in row:
            if c == self.rhs_col:
                continue
            if best is None or c < best:
                best = c
        return best

    def insert(self, row: Mapping[int, Scalar]) -> None:
        current = _to_int_row(row)
        while current:
            lead = self._lead(current)
            if lead is None:
                # Only the augmented column is nonzero: 0 = b with b != 0.
                self.inconsistent = True
                return
            pivot = self.pivots.get(lead)
            if pivot is None:
                if current[lead] < 0:
                    current = {c: -v for c, v in current.items()}
                self.pivots[lead] = current
                return
            a = current[lead]
            b = pivot[lead]
            merged = {c: b * v for c, v in current.items()}
            for c, v in pivot.items():
                w = merged.get(c, 0) - a * v
                if w:
                    merged[c] = w
                else:
                    merged.pop(c, None)
            current = _strip_content(merged)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def pivot_columns(self) -> list[int]:
        return sorted(self.pivots)

    def free_columns(self) -> list[int]:
        return [
            c for c in range(self.cols) if c not in self.pivots and c != self.rhs_col
        ]

    def _back_substitute(self, assignment: dict[int, Fraction], homogeneous: bool) -> None:
        """Fill pivot coordinates of a partial assignment, right to left."""
        for p in sorted(self.pivots, reverse=True):
            row = self.pivots[p]
            total = _ZERO
            rhs = _ZERO
            for c, v in row.items():
                if c == p:
                    continue
                if c == self.rhs_col:
                    rhs = Fraction(v)
                    continue
                value = assignment.get(c, _ZERO)
                if value:
                    total += v * value
            if homogeneous:
                rhs = _ZERO
            assignment[p] = (rhs - total) / row[p]

    def kernel_vectors(self) -> list[list[Fraction]]:
        out = []
        for f in self.free_columns():
            assignment: dict[int, Fraction] = {f: _ONE}
            self._back_substitute(assignment, homogeneous=True)
            vec = [_ZERO] * self.cols
            for c, v in assignment.items():
                if c != self.rhs_col:
                    vec[c] = v
            out.append(vec)
        return out

    def particular_solution(self) -> list[Fraction]:
        assignment: dict[int, Fraction] = {}
        self._back_substitute(assignment, homogeneous=False)
        vec = [_ZERO] * self.cols
        for c, v in assignment.items():
            if c != self.rhs_col:
                vec[c] = v
        return vec


def _rref(vectors: list[list[Fraction]], cols: int) -> list[list[Fraction]]:
    """Reduced row-echelon form of a small rational matrix, zero rows dropped."""
    rows = [list(v) for v in vectors]
    pivot_of_row: list[int] = []
    r = 0
    for c in range(cols):
        pivot_row = None
        for i in range(r, len(rows)):
            if rows[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [v * inv for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c]:
                factor = rows[i][c]
                rows[i] = [a - factor * b for a, b in zip(rows[i], rows[r])]
        pivot_of_row.append(c)
        r += 1
        if r == len(rows):
            break
    return rows[:r]


# -- public API ---------------------------------------------------------------


def _insertion_order(rows: Iterable[Mapping[int, Scalar]]) -> list[Mapping[int, Scalar]]:
    """Sparsest rows first (ties broken by leading column, then stably by
    input position).  The outputs of kernel/solve are canonical whatever
    the elimination order, so this is purely a fill-in heuristic."""
    ordered = [r for r in rows if r]
    ordered.sort(key=lambda r: (len(r), min(r)))
    return ordered


def kernel_sparse(rows: Iterable[Mapping[int, Scalar]], cols: int) -> KernelBasis:
    """Exact null-space basis from sparse rows ({column: value} dicts)."""
    elim = _Elimination(cols)
    for row in _insertion_order(rows):
        elim.insert(row)
    vectors = elim.kernel_vectors()
    reduced = _rref(vectors, cols)
    return KernelBasis(cols, tuple(tuple(v) for v in reduced))


def rank_sparse(rows: Iterable[Mapping[int, Scalar]], cols: int) -> int:
    elim = _Elimination(cols)
    for row in _insertion_order(rows):
        elim.insert(row)
    return elim.rank


def solve_sparse(
    rows: Sequence[Mapping[int, Scalar]],
    rhs: Sequence[Scalar],
    cols: int,
) -> Optional[tuple[tuple[Fraction, ...], KernelBasis]]:
    """Solve M x = b from sparse rows; None when the system is inconsistent."""
    if len(rhs) != len(rows):
        raise ValueError(f"rhs length {len(rhs)} != row count {len(rows)}")
    augmented_rows = []
    for row, b in zip(rows, rhs):
        augmented = dict(row)
        if b:
            augmented[cols] = Fraction(b)
        if augmented:
            augmented_rows.append(augmented)
    elim = _Elimination(cols, rhs_col=cols)
    for row in _insertion_order(augmented_rows):
        elim.insert(row)
        if elim.inconsistent:
            return None
    particular = tuple(elim.particular_solution())
    reduced = _rref(elim.kernel_vectors(), cols)
    return particular, KernelBasis(cols, tuple(tuple(v) for v in reduced))


def kernel(matrix: RationalMatrix) -> KernelBasis:
    """Exact null space of a dense matrix; dimension = cols - rank."""
    return kernel_sparse(matrix.sparse_rows(), matrix.cols)


def rank(matrix: RationalMatrix) -> int:
    return rank_sparse(matrix.sparse_rows(), matrix.cols)


def solve(
    matrix: RationalMatrix, b: Sequence[Scalar]
) -> Optional[tuple[tuple[Fraction, ...], KernelBasis]]:
    """One exact solution of M x = b plus the homogeneous kernel, or None."""
    if len(b) != matrix.rows:
        raise ValueError(f"rhs length {len(b)} != rows {matrix.rows}")
    return solve_sparse(matrix.sparse_rows(), [Fraction(v) for v in b], matrix.cols)

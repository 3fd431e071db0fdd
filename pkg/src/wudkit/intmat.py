"""Integer linear algebra: Smith normal form, exponent matrices, and the
invariant-factor arithmetic behind multiplicative independence checks.

Matrices are small and dense; entries are Python ints, so growth during
elimination is a speed concern only.  Pivoting always picks the smallest
nonzero entry in absolute value.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import ConstantInputError
from .intpoly import IntPoly, coprime_basis

__all__ = [
    "IntMatrix",
    "SnfResult",
    "smith_normal_form",
    "kernel_basis",
    "exponent_matrix",
    "beta",
    "is_mult_independent",
    "ifh_check",
]


class IntMatrix:
    """Row-major immutable integer matrix."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, rows: int, cols: int, entries: Sequence[int]):
        entries = tuple(int(x) for x in entries)
        if len(entries) != rows * cols:
            raise ValueError("entries length != rows*cols")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, name, value):
        raise AttributeError("IntMatrix is immutable")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "IntMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat = []
        for row in rows:
            if len(row) != c:
                raise ValueError("ragged rows")
            flat.extend(row)
        return cls(r, c, flat)

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def zero(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, [0] * (rows * cols))

    def __getitem__(self, ij) -> int:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self.entries[i * self.cols : (i + 1) * self.cols]

    def to_rows(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def __mul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        out = [0] * (self.rows * other.cols)
        for i in range(self.rows):
            for k in range(self.cols):
                a = self[i, k]
                if a:
                    for j in range(other.cols):
                        out[i * other.cols + j] += a * other[k, j]
        return IntMatrix(self.rows, other.cols, out)

    def transpose(self) -> "IntMatrix":
        return IntMatrix(
            self.cols,
            self.rows,
            [self[i, j] for j in range(self.cols) for i in range(self.rows)],
        )

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of non-square matrix")
        n = self.rows
        if n == 0:
            return 1
        m = self.to_rows()
        sign = 1
        prev = 1
        for k in range(n - 1):
            if m[k][k] == 0:
                for i in range(k + 1, n):
                    if m[i][k]:
                        m[k], m[i] = m[i], m[k]
                        sign = -sign
                        break
                else:
                    return 0
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
                m[i][k] = 0
            prev = m[k][k]
        return sign * m[n - 1][n - 1]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, IntMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        return f"IntMatrix.from_rows({self.to_rows()})"


@dataclass(frozen=True)
class SnfResult:
    """U*A*V = D with U, V unimodular, D = diag(invariant_factors)."""

    U: IntMatrix
    V: IntMatrix
    D: IntMatrix
    invariant_factors: tuple[int, ...]


def _find_pivot(m, s, rows, cols):
    """Position of the smallest-|value| nonzero entry in the trailing block."""
    best = None
    best_val = None
    for i in range(s, rows):
        for j in range(s, cols):
            v = abs(m[i][j])
            if v and (best_val is None or v < best_val):
                best, best_val = (i, j), v
                if v == 1:
                    return best
    return best


def smith_normal_form(A: IntMatrix) -> SnfResult:
    """Smith normal form with unimodular transforms.

    Returns U (rows x rows), V (cols x cols) and diagonal D with
    U*A*V = D exactly, nonnegative diagonal entries, and each entry
    dividing the next (0 | 0 allowed at the tail).
    """
    rows, cols = A.rows, A.cols
    m = A.to_rows()
    u = IntMatrix.identity(rows).to_rows()
    v = IntMatrix.identity(cols).to_rows()
    r = min(rows, cols)

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in m:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def addmul_row(dst, src, c):
        # row[dst] += c * row[src]
        mr, ms = m[dst], m[src]
        for k in range(cols):
            mr[k] += c * ms[k]
        ur, us = u[dst], u[src]
        for k in range(rows):
            ur[k] += c * us[k]

    def addmul_col(dst, src, c):
        for row in m:
            row[dst] += c * row[src]
        for row in v:
            row[dst] += c * row[src]

    s = 0
    while s < r:
        piv = _find_pivot(m, s, rows, cols)
        if piv is None:
            break
        swap_rows(s, piv[0])
        swap_cols(s, piv[1])
        # one elimination sweep; any surviving remainder is strictly
        # smaller than the pivot, so re-selecting makes progress
        changed = False
        for i in range(s + 1, rows):
            if m[i][s]:
                addmul_row(i, s, -(m[i][s] // m[s][s]))
                if m[i][s]:
                    changed = True
        for j in range(s + 1, cols):
            if m[s][j]:
                addmul_col(j, s, -(m[s][j] // m[s][s]))
                if m[s][j]:
                    changed = True
        if changed:
            continue
        # divisibility fix: pivot must divide every remaining entry
        fixed = True
        for i in range(s + 1, rows):
            for j in range(s + 1, cols):
                if m[i][j] % m[s][s]:
                    addmul_row(s, i, 1)
                    fixed = False
                    break
            if not fixed:
                break
        if fixed:
            s += 1

    # sign-normalize the diagonal
    for i in range(r):
        if m[i][i] < 0:
            for k in range(cols):
                m[i][k] = -m[i][k]
            for k in range(rows):
                u[i][k] = -u[i][k]

    diag = tuple(m[i][i] for i in range(r))
    D = IntMatrix.from_rows(m)
    return SnfResult(IntMatrix.from_rows(u), IntMatrix.from_rows(v), D, diag)


def kernel_basis(A: IntMatrix) -> list[tuple[int, ...]]:
    """Basis of the integer kernel lattice {x : A x = 0}."""
    snf = smith_normal_form(A)
    r = min(A.rows, A.cols)
    free = [j for j in range(A.cols) if j >= r or snf.invariant_factors[j] == 0]
    cols = []
    for j in free:
        cols.append(tuple(snf.V[i, j] for i in range(A.cols)))
    return cols


def exponent_matrix(fs: Sequence[IntPoly]) -> IntMatrix:
    """Exponent matrix of a family: rows = coprime basis factors, cols = inputs."""
    dec = coprime_basis(fs)
    return IntMatrix.from_rows([list(row) for row in dec.exponents])


def _beta_with_rank(fs: Sequence[IntPoly]) -> tuple[int, bool]:
    """(last invariant factor, full column rank?) of the exponent matrix."""
    E = exponent_matrix(fs)
    snf = smith_normal_form(E)
    facs = snf.invariant_factors
    b = facs[-1] if facs else 0
    full_rank = all(f != 0 for f in facs) and len(facs) == E.cols
    # rank deficiency can only appear as zero invariant factors when
    # min(M, K) == K; when M < K the columns are trivially dependent
    if E.rows < E.cols:
        full_rank = False
    return b, full_rank


def beta(fs: Sequence[IntPoly]) -> int:
    """Last invariant factor of the exponent matrix; 0 when the family
    is multiplicatively dependent (callers treat that as a flag)."""
    b, full = _beta_with_rank(fs)
    return b if full else 0


def is_mult_independent(fs: Sequence[IntPoly]) -> bool:
    """True iff no nonzero integer power-product of the family is constant."""
    _, full = _beta_with_rank(fs)
    return full


def ifh_check(q: int, fs: Sequence[IntPoly], b0: float):
    """Invariant Factor Hypothesis: gcd(ell-1, beta) = 1 for primes ell | q
    with ell > b0.  Returns (ok, witness_prime_or_None)."""
    if q < 1:
        raise ValueError("modulus must be positive")
    for f in fs:
        if f.is_constant():
            raise ConstantInputError("constant polynomial in family")
    b = beta(fs)
    n = q
    d = 2
    while d * d <= n:
        if n % d == 0:
            while n % d == 0:
                n //= d
            if d > b0 and math.gcd(d - 1, b) != 1:
                return False, d
        d += 1
    if n > 1 and n > b0 and math.gcd(n - 1, b) != 1:
        return False, n
    return True, None

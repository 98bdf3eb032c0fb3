"""Exact big-rational arithmetic and integer lattice linear algebra.

Scalars are ``fractions.Fraction`` (re-exported as ``Rat``): always in lowest
terms, positive denominator, value equality. Matrices are immutable
arbitrary-precision integer matrices. The two workhorses are the Smith normal
form (used to decide whether a matrix surjects onto the standard lattice) and
saturated integer kernel bases (used for Gale duals).
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

Rat = Fraction


def ceil_rat(x: Rat | int) -> int:
    """Least integer >= x."""
    return math.ceil(x)


class IntMat:
    """Immutable integer matrix, row-major. Empty dimensions are permitted."""

    __slots__ = ("rows", "cols", "_e")

    def __init__(self, rows: int, cols: int, entries: Iterable[int]):
        entries = tuple(int(x) for x in entries)
        if rows < 0 or cols < 0:
            raise ValueError("dimensions must be nonnegative")
        if len(entries) != rows * cols:
            raise ValueError(f"expected {rows * cols} entries, got {len(entries)}")
        self.rows = rows
        self.cols = cols
        self._e = entries

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMat":
        r = len(rows)
        if r == 0:
            if cols is None:
                raise ValueError("cols required for a matrix with zero rows")
            return cls(0, cols, ())
        c = len(rows[0])
        if any(len(row) != c for row in rows):
            raise ValueError("ragged rows")
        return cls(r, c, [x for row in rows for x in row])

    @classmethod
    def identity(cls, n: int) -> "IntMat":
        return cls(n, n, [1 if i == j else 0 for i in range(n) for j in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMat":
        return cls(rows, cols, [0] * (rows * cols))

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self._e[i * self.cols + j]

    def row(self, i: int) -> tuple[int, ...]:
        return self._e[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple[int, ...]:
        return self._e[j::self.cols] if self.cols else ()

    def tolist(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(self.rows)]

    def transpose(self) -> "IntMat":
        return IntMat(self.cols, self.rows,
                      [self[i, j] for j in range(self.cols) for i in range(self.rows)])

    def submatrix_cols(self, js: Sequence[int]) -> "IntMat":
        return IntMat(self.rows, len(js),
                      [self[i, j] for i in range(self.rows) for j in js])

    def __mul__(self, other: "IntMat") -> "IntMat":
        if self.cols != other.rows:
            raise ValueError(f"shape mismatch {self.shape} * {other.shape}")
        out = []
        for i in range(self.rows):
            ri = self.row(i)
            for j in range(other.cols):
                out.append(sum(ri[k] * other[k, j] for k in range(self.cols)))
        return IntMat(self.rows, other.cols, out)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __eq__(self, other) -> bool:
        return (isinstance(other, IntMat) and self.shape == other.shape
                and self._e == other._e)

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._e))

    def __repr__(self) -> str:
        return f"IntMat({self.tolist()!r})" if self.rows else f"IntMat.zeros(0, {self.cols})"


class SnfResult:
    """U * A * V = S with S in Smith normal form.

    U and V are unimodular; the diagonal of S is nonnegative and each entry
    divides the next.
    """

    __slots__ = ("u", "s", "v")

    def __init__(self, u: IntMat, s: IntMat, v: IntMat):
        self.u = u
        self.s = s
        self.v = v

    def diagonal(self) -> tuple[int, ...]:
        return tuple(self.s[i, i] for i in range(min(self.s.rows, self.s.cols)))

    def rank(self) -> int:
        return sum(1 for d in self.diagonal() if d != 0)


def snf(a: IntMat) -> SnfResult:
    """Smith normal form over the integers, total on all matrices.

    Row operations are tracked in U, column operations in V, so that the
    invariant U * A * V = S holds at every step. Diagonal entries are
    normalized nonnegative (signs absorbed into U) and satisfy the
    divisibility chain d_i | d_{i+1}.
    """
    m, n = a.rows, a.cols
    s = [list(a.row(i)) for i in range(m)]
    u = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    v = [[1 if i == j else 0 for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        s[i], s[j] = s[j], s[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in s:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        s[dst] = [x + q * y for x, y in zip(s[dst], s[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(dst, src, q):
        for row in s:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            # Locate a nonzero entry of minimal absolute value in s[t:, t:].
            pivot = None
            for i in range(t, m):
                for j in range(t, n):
                    if s[i][j] != 0 and (pivot is None or abs(s[i][j]) < abs(s[pivot[0]][pivot[1]])):
                        pivot = (i, j)
            if pivot is None:
                break
            if pivot != (t, t):
                if pivot[0] != t:
                    swap_rows(t, pivot[0])
                if pivot[1] != t:
                    swap_cols(t, pivot[1])
            p = s[t][t]
            # Kill the rest of column t and row t by division with remainder.
            dirty = False
            for i in range(t + 1, m):
                if s[i][t] != 0:
                    q = s[i][t] // p
                    add_row(i, t, -q)
                    dirty = dirty or s[i][t] != 0
            for j in range(t + 1, n):
                if s[t][j] != 0:
                    q = s[t][j] // p
                    add_col(j, t, -q)
                    dirty = dirty or s[t][j] != 0
            if dirty:
                continue  # remainders became new, smaller candidates
            # Row and column are clear; enforce divisibility of the rest.
            offender = None
            for i in range(t + 1, m):
                for j in range(t + 1, n):
                    if s[i][j] % p != 0:
                        offender = i
                        break
                if offender is not None:
                    break
            if offender is None:
                break
            add_row(t, offender, 1)
        if t < m and t < n and s[t][t] < 0:
            s[t] = [-x for x in s[t]]
            u[t] = [-x for x in u[t]]

    um = IntMat.from_rows(u, cols=m)
    vm = IntMat.from_rows(v, cols=n)
    sm = IntMat.from_rows(s, cols=n)
    assert um * a * vm == sm
    return SnfResult(um, sm, vm)


def kernel_basis(a: IntMat) -> IntMat:
    """Columns form a basis of the saturated integer kernel lattice of a.

    Uses the Smith normal form: with U*A*V = S, the columns of V matching the
    zero part of S span every integer solution of A*x = 0, and V's
    unimodularity makes that span saturated. Each column is normalized so its
    first nonzero entry is positive.
    """
    res = snf(a)
    r = res.rank()
    n = a.cols
    cols = []
    for j in range(r, n):
        col = list(res.v.col(j))
        for x in col:
            if x != 0:
                if x < 0:
                    col = [-y for y in col]
                break
        cols.append(col)
    return IntMat(n, len(cols), [col[i] for i in range(n) for col in cols])


def det(a: IntMat) -> int:
    """Exact determinant by fraction-free (Bareiss) elimination."""
    if a.rows != a.cols:
        raise ValueError("determinant of a non-square matrix")
    n = a.rows
    if n == 0:
        return 1
    m = [list(a.row(i)) for i in range(n)]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                # Bareiss update: exact division by the previous pivot.
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) // prev
            m[i][k] = 0
        prev = m[k][k]
    return sign * m[n - 1][n - 1]


def rank(a: IntMat) -> int:
    """Rank over the rationals by exact Gaussian elimination.

    Deliberately a separate code path from snf (used to cross-check it).
    """
    m = [[Fraction(x) for x in a.row(i)] for i in range(a.rows)]
    r = 0
    for j in range(a.cols):
        piv = None
        for i in range(r, a.rows):
            if m[i][j] != 0:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][j]
        m[r] = [x * inv for x in m[r]]
        for i in range(a.rows):
            if i != r and m[i][j] != 0:
                c = m[i][j]
                m[i] = [x - c * y for x, y in zip(m[i], m[r])]
        r += 1
        if r == a.rows:
            break
    return r

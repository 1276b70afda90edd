"""Exact integer matrix algebra.

Everything here works on Python integers, so intermediate values may grow
without bound.  Matrices with zero rows or zero columns are ordinary values.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence


class IntMatrix:
    """Immutable integer matrix stored row-major."""

    __slots__ = ("rows", "cols", "_data")

    def __init__(self, data: Iterable[Iterable[int]] = (), rows: int | None = None,
                 cols: int | None = None):
        body = tuple(tuple(int(x) for x in row) for row in data)
        if rows is None:
            rows = len(body)
        if cols is None:
            cols = len(body[0]) if body else 0
        if not body and rows and cols == 0:
            body = ((),) * rows
        if len(body) != rows:
            raise ValueError(f"expected {rows} rows, got {len(body)}")
        for i, row in enumerate(body):
            if len(row) != cols:
                raise ValueError(f"row {i} has {len(row)} entries, expected {cols}")
        self.rows = rows
        self.cols = cols
        self._data = body

    # -- constructors -------------------------------------------------------

    @classmethod
    def zeros(cls, rows: int, cols: int) -> IntMatrix:
        return cls([[0] * cols for _ in range(rows)], rows, cols)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)], n, n)

    @classmethod
    def diagonal(cls, entries: Sequence[int], rows: int | None = None,
                 cols: int | None = None) -> IntMatrix:
        k = len(entries)
        rows = k if rows is None else rows
        cols = k if cols is None else cols
        return cls([[entries[i] if i == j and i < k else 0 for j in range(cols)]
                    for i in range(rows)], rows, cols)

    @classmethod
    def from_columns(cls, columns: Sequence[Sequence[int]], rows: int) -> IntMatrix:
        return cls([[col[i] for col in columns] for i in range(rows)], rows, len(columns))

    @classmethod
    def hstack(cls, *blocks: IntMatrix) -> IntMatrix:
        rows = blocks[0].rows
        if any(b.rows != rows for b in blocks):
            raise ValueError("hstack: row counts differ")
        data = [sum((b._data[i] for b in blocks), ()) for i in range(rows)]
        return cls(data, rows, sum(b.cols for b in blocks))

    @classmethod
    def vstack(cls, *blocks: IntMatrix) -> IntMatrix:
        cols = blocks[0].cols
        if any(b.cols != cols for b in blocks):
            raise ValueError("vstack: column counts differ")
        return cls([row for b in blocks for row in b._data],
                   sum(b.rows for b in blocks), cols)

    @classmethod
    def block_diagonal(cls, a: IntMatrix, b: IntMatrix) -> IntMatrix:
        top = [list(row) + [0] * b.cols for row in a._data]
        bottom = [[0] * a.cols + list(row) for row in b._data]
        return cls(top + bottom, a.rows + b.rows, a.cols + b.cols)

    # -- access -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self._data[i][j]

    def row(self, i: int) -> tuple[int, ...]:
        return self._data[i]

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(row[j] for row in self._data)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.cols)]

    def tolist(self) -> list[list[int]]:
        return [list(row) for row in self._data]

    def select_columns(self, idx: Sequence[int]) -> IntMatrix:
        return IntMatrix([[row[j] for j in idx] for row in self._data], self.rows, len(idx))

    def select_rows(self, idx: Sequence[int]) -> IntMatrix:
        return IntMatrix([self._data[i] for i in idx], len(idx), self.cols)

    def transpose(self) -> IntMatrix:
        return IntMatrix([self.column(j) for j in range(self.cols)], self.cols, self.rows)

    @property
    def T(self) -> IntMatrix:
        return self.transpose()

    def is_zero(self) -> bool:
        return all(x == 0 for row in self._data for x in row)

    # -- arithmetic ---------------------------------------------------------

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        ocols = other.columns()
        return IntMatrix([[sum(a * b for a, b in zip(row, col)) for col in ocols]
                          for row in self._data], self.rows, other.cols)

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.cols:
            raise ValueError(f"vector of length {len(v)} for matrix {self.shape}")
        return tuple(sum(a * b for a, b in zip(row, v)) for row in self._data)

    def _elementwise(self, other: IntMatrix, op) -> IntMatrix:
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return IntMatrix([[op(a, b) for a, b in zip(r, s)]
                          for r, s in zip(self._data, other._data)], self.rows, self.cols)

    def __add__(self, other: IntMatrix) -> IntMatrix:
        return self._elementwise(other, lambda a, b: a + b)

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return self._elementwise(other, lambda a, b: a - b)

    def __neg__(self) -> IntMatrix:
        return self * -1

    def __mul__(self, k: int) -> IntMatrix:
        return IntMatrix([[k * x for x in row] for row in self._data], self.rows, self.cols)

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IntMatrix):
            return NotImplemented
        return self.shape == other.shape and self._data == other._data

    def __hash__(self) -> int:
        return hash((self.rows, self.cols, self._data))

    def __repr__(self) -> str:
        return f"IntMatrix({self.tolist()!r}, rows={self.rows}, cols={self.cols})"

    def det(self) -> int:
        """Determinant by fraction-free (Bareiss) elimination."""
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        n = self.rows
        a = self.tolist()
        sign, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if swap is None:
                    return 0
                a[k], a[swap] = a[swap], a[k]
                sign = -sign
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return sign * a[n - 1][n - 1] if n else 1

    def inverse(self) -> IntMatrix:
        """Inverse of a unimodular matrix; raises if the inverse is not integral."""
        n = self.rows
        if n != self.cols:
            raise ValueError("inverse of a non-square matrix")
        a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
             for i, row in enumerate(self._data)]
        for c in range(n):
            p = next((i for i in range(c, n) if a[i][c] != 0), None)
            if p is None:
                raise ValueError("matrix is singular")
            a[c], a[p] = a[p], a[c]
            piv = a[c][c]
            a[c] = [x / piv for x in a[c]]
            for i in range(n):
                if i != c and a[i][c] != 0:
                    f = a[i][c]
                    a[i] = [x - f * y for x, y in zip(a[i], a[c])]
        out = [row[n:] for row in a]
        if any(x.denominator != 1 for row in out for x in row):
            raise ValueError("matrix is not unimodular")
        return IntMatrix([[int(x) for x in row] for row in out], n, n)


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ A @ V == D`` with ``D`` in Smith normal form."""

    D: IntMatrix
    U: IntMatrix
    V: IntMatrix

    @property
    def invariants(self) -> list[int]:
        return [self.D[i, i] for i in range(min(self.D.shape))]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.invariants if d != 0)


def _pick_pivot(a: list[list[int]], t: int) -> tuple[int, int] | None:
    # smallest nonzero absolute value, ties broken row-major
    best = None
    best_val = 0
    for i in range(t, len(a)):
        row = a[i]
        for j in range(t, len(row)):
            x = row[j]
            if x and (best is None or abs(x) < best_val):
                best, best_val = (i, j), abs(x)
    return best


def smith_normal_form(A: IntMatrix) -> SmithDecomposition:
    m, n = A.shape
    a = A.tolist()
    u = IntMatrix.identity(m).tolist()
    v = IntMatrix.identity(n).tolist()

    def row_axpy(dst: int, src: int, q: int) -> None:
        # row_dst -= q * row_src, mirrored in U
        if q:
            a[dst] = [x - q * y for x, y in zip(a[dst], a[src])]
            u[dst] = [x - q * y for x, y in zip(u[dst], u[src])]

    def col_axpy(dst: int, src: int, q: int) -> None:
        if q:
            for row in a:
                row[dst] -= q * row[src]
            for row in v:
                row[dst] -= q * row[src]

    for t in range(min(m, n)):
        while True:
            piv = _pick_pivot(a, t)
            if piv is None:
                return SmithDecomposition(IntMatrix(a, m, n), IntMatrix(u, m, m),
                                          IntMatrix(v, n, n))
            i, j = piv
            a[t], a[i] = a[i], a[t]
            u[t], u[i] = u[i], u[t]
            for row in a:
                row[t], row[j] = row[j], row[t]
            for row in v:
                row[t], row[j] = row[j], row[t]
            p = a[t][t]
            for i in range(t + 1, m):
                row_axpy(i, t, a[i][t] // p)
            for j in range(t + 1, n):
                col_axpy(j, t, a[t][j] // p)
            if any(a[i][t] for i in range(t + 1, m)) or any(a[t][j] for j in range(t + 1, n)):
                continue
            bad = next((i for i in range(t + 1, m)
                        if any(a[i][j] % p for j in range(t + 1, n))), None)
            if bad is not None:
                row_axpy(t, bad, -1)
                continue
            if p < 0:
                a[t] = [-x for x in a[t]]
                u[t] = [-x for x in u[t]]
            break
    return SmithDecomposition(IntMatrix(a, m, n), IntMatrix(u, m, m), IntMatrix(v, n, n))


def hermite_normal_form(A: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form: returns ``(H, U)`` with ``U @ A == H``.

    Pivots are positive, entries above a pivot lie in ``[0, pivot)``, and zero
    rows come last.  ``H`` has the same row lattice as ``A``.
    """
    m, n = A.shape
    h = A.tolist()
    u = IntMatrix.identity(m).tolist()
    r = 0
    for j in range(n):
        if r == m:
            break
        while True:
            nz = [i for i in range(r, m) if h[i][j]]
            if not nz:
                break
            p = min(nz, key=lambda i: (abs(h[i][j]), i))
            h[r], h[p] = h[p], h[r]
            u[r], u[p] = u[p], u[r]
            done = True
            for i in range(r + 1, m):
                q = h[i][j] // h[r][j]
                if q:
                    h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[r])]
                if h[i][j]:
                    done = False
            if done:
                break
        if not h[r][j]:
            continue
        if h[r][j] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = h[i][j] // h[r][j]
            if q:
                h[i] = [x - q * y for x, y in zip(h[i], h[r])]
                u[i] = [x - q * y for x, y in zip(u[i], u[r])]
        r += 1
    return IntMatrix(h, m, n), IntMatrix(u, m, m)


def solve_integer(A: IntMatrix, b: Sequence[int]) -> tuple[int, ...] | None:
    """An integer solution of ``A x = b``, or ``None`` if there is none."""
    if len(b) != A.rows:
        raise ValueError(f"right-hand side has length {len(b)}, matrix has {A.rows} rows")
    snf = smith_normal_form(A)
    w = snf.U.apply(b)
    y = [0] * A.cols
    for i, wi in enumerate(w):
        d = snf.D[i, i] if i < A.cols else 0
        if d == 0:
            if wi:
                return None
        elif wi % d:
            return None
        else:
            y[i] = wi // d
    return snf.V.apply(y)


def lattice_member(basis: IntMatrix, v: Sequence[int]) -> bool:
    """True iff ``v`` lies in the integer span of the columns of ``basis``."""
    if len(v) != basis.rows:
        raise ValueError(f"vector of length {len(v)} does not match basis with "
                         f"{basis.rows} rows")
    return solve_integer(basis, v) is not None


def kernel_lattice(A: IntMatrix) -> IntMatrix:
    """Columns form a basis of ``{x : A x = 0}`` (possibly zero columns)."""
    H, U = hermite_normal_form(A.T)
    rank = sum(1 for i in range(H.rows) if any(H.row(i)))
    null_rows = U.select_rows(range(rank, U.rows))
    if null_rows.rows == 0:
        return IntMatrix.zeros(A.cols, 0)
    # canonicalize the basis so output does not depend on elimination history
    Hk, _ = hermite_normal_form(null_rows)
    return Hk.T

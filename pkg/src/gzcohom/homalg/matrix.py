"""Small exact matrices over a Ring, dense and sparse."""
from __future__ import annotations

from typing import Iterable, Sequence

from .rings import Ring


class MatrixError(ValueError):
    pass


class Mat:
    """Dense m x n matrix with entries in ``ring``."""

    __slots__ = ("ring", "m", "n", "rows")

    def __init__(self, ring: Ring, rows: Iterable[Sequence], ncols: int | None = None):
        self.ring = ring
        self.rows = [[ring(x) for x in r] for r in rows]
        self.m = len(self.rows)
        if ncols is None:
            if not self.rows:
                raise MatrixError("ncols is required for a matrix without rows")
            ncols = len(self.rows[0])
        self.n = ncols
        for r in self.rows:
            if len(r) != ncols:
                raise MatrixError(f"ragged matrix: row of length {len(r)} in a {ncols}-column matrix")

    @classmethod
    def _raw(cls, ring, rows, ncols):
        out = cls.__new__(cls)
        out.ring, out.rows, out.m, out.n = ring, rows, len(rows), ncols
        return out

    @classmethod
    def zeros(cls, ring: Ring, m: int, n: int) -> "Mat":
        z = ring.zero
        return cls._raw(ring, [[z] * n for _ in range(m)], n)

    @classmethod
    def eye(cls, ring: Ring, n: int) -> "Mat":
        out = cls.zeros(ring, n, n)
        for i in range(n):
            out.rows[i][i] = ring.one
        return out

    @classmethod
    def scalar(cls, ring: Ring, n: int, c) -> "Mat":
        out = cls.zeros(ring, n, n)
        c = ring(c)
        for i in range(n):
            out.rows[i][i] = c
        return out

    @classmethod
    def from_columns(cls, ring: Ring, cols: Sequence[Sequence], m: int) -> "Mat":
        return cls._raw(ring, [[c[i] for c in cols] for i in range(m)], len(cols))

    @property
    def shape(self) -> tuple[int, int]:
        return self.m, self.n

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __setitem__(self, ij, value):
        i, j = ij
        self.rows[i][j] = self.ring(value)

    def copy(self) -> "Mat":
        return Mat._raw(self.ring, [list(r) for r in self.rows], self.n)

    def tolist(self) -> list[list]:
        return [list(r) for r in self.rows]

    def to_ints(self) -> list[list]:
        """Entries as ints (Z, F_p) or strings (Q) for serialisation."""
        if self.ring.kind == "Q":
            return [[str(x) for x in r] for r in self.rows]
        return [[int(x) for x in r] for r in self.rows]

    def __repr__(self):
        return f"Mat[{self.ring}]({self.m}x{self.n}, {self.tolist()})"

    def __eq__(self, other):
        if not isinstance(other, Mat):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    __hash__ = None

    @property
    def T(self) -> "Mat":
        return Mat._raw(self.ring, [[self.rows[i][j] for i in range(self.m)] for j in range(self.n)], self.m)

    def col(self, j: int) -> list:
        return [r[j] for r in self.rows]

    def cols(self) -> list[list]:
        return [self.col(j) for j in range(self.n)]

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.rows for x in r)

    def __matmul__(self, other: "Mat") -> "Mat":
        if self.n != other.m:
            raise MatrixError(f"shape mismatch {self.shape} @ {other.shape}")
        red = self.ring.reduce
        zero = self.ring.zero
        ocols = other.n
        orows = other.rows
        out = []
        for r in self.rows:
            acc = [zero] * ocols
            for k, a in enumerate(r):
                if a == 0:
                    continue
                ok = orows[k]
                for j in range(ocols):
                    b = ok[j]
                    if b:
                        acc[j] += a * b
            out.append([red(x) for x in acc])
        return Mat._raw(self.ring, out, ocols)

    def apply(self, v: Sequence) -> list:
        if len(v) != self.n:
            raise MatrixError(f"vector of length {len(v)} for a {self.shape} matrix")
        red = self.ring.reduce
        zero = self.ring.zero
        out = []
        for r in self.rows:
            acc = zero
            for a, b in zip(r, v):
                if a and b:
                    acc += a * b
            out.append(red(acc))
        return out

    def _zip(self, other, op) -> "Mat":
        if self.shape != other.shape:
            raise MatrixError(f"shape mismatch {self.shape} vs {other.shape}")
        red = self.ring.reduce
        return Mat._raw(self.ring, [[red(op(a, b)) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.n)

    def __add__(self, other):
        return self._zip(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._zip(other, lambda a, b: a - b)

    def __neg__(self):
        red = self.ring.reduce
        return Mat._raw(self.ring, [[red(-a) for a in r] for r in self.rows], self.n)

    def scale(self, c) -> "Mat":
        c = self.ring(c)
        red = self.ring.reduce
        return Mat._raw(self.ring, [[red(c * a) for a in r] for r in self.rows], self.n)

    def hstack(self, other: "Mat") -> "Mat":
        if self.m != other.m:
            raise MatrixError("hstack needs equal row counts")
        return Mat._raw(self.ring, [a + b for a, b in zip(self.rows, other.rows)], self.n + other.n)

    def vstack(self, other: "Mat") -> "Mat":
        if self.n != other.n:
            raise MatrixError("vstack needs equal column counts")
        return Mat._raw(self.ring, [list(r) for r in self.rows] + [list(r) for r in other.rows], self.n)

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Mat":
        return Mat._raw(self.ring, [[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def change_ring(self, ring: Ring) -> "Mat":
        return Mat(ring, self.rows, self.n)

    def determinant(self):
        """Exact determinant by fraction-free elimination (Bareiss)."""
        if self.m != self.n:
            raise MatrixError("determinant of a non-square matrix")
        n = self.n
        if n == 0:
            return self.ring.one
        ring = self.ring
        if ring.is_field:
            a = [list(r) for r in self.rows]
            det = ring.one
            for c in range(n):
                piv = next((i for i in range(c, n) if a[i][c] != 0), None)
                if piv is None:
                    return ring.zero
                if piv != c:
                    a[c], a[piv] = a[piv], a[c]
                    det = ring.reduce(-det)
                det = ring.reduce(det * a[c][c])
                inv = ring.inv(a[c][c])
                for i in range(c + 1, n):
                    if a[i][c]:
                        f = ring.reduce(a[i][c] * inv)
                        a[i] = [ring.reduce(x - f * y) for x, y in zip(a[i], a[c])]
            return det
        a = [list(r) for r in self.rows]
        sign = 1
        prev = 1
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
        return sign * a[n - 1][n - 1]


class SparseMatrix:
    """Triplet-style sparse matrix; densified only when a decomposition needs it."""

    __slots__ = ("ring", "m", "n", "entries")

    def __init__(self, ring: Ring, m: int, n: int, entries: dict | None = None):
        self.ring = ring
        self.m = m
        self.n = n
        self.entries: dict[tuple[int, int], object] = {}
        if entries:
            for (i, j), v in entries.items():
                self.add(i, j, v)

    @property
    def shape(self):
        return self.m, self.n

    def add(self, i: int, j: int, value) -> None:
        v = self.ring.reduce(self.entries.get((i, j), self.ring.zero) + value)
        if v == 0:
            self.entries.pop((i, j), None)
        else:
            self.entries[(i, j)] = v

    def add_block(self, r0: int, c0: int, block: Mat, sign: int = 1) -> None:
        for i, row in enumerate(block.rows):
            for j, v in enumerate(row):
                if v:
                    self.add(r0 + i, c0 + j, sign * v)

    def to_dense(self) -> Mat:
        out = Mat.zeros(self.ring, self.m, self.n)
        for (i, j), v in self.entries.items():
            out.rows[i][j] = v
        return out

    @classmethod
    def from_dense(cls, A: Mat) -> "SparseMatrix":
        out = cls(A.ring, A.m, A.n)
        for i, r in enumerate(A.rows):
            for j, v in enumerate(r):
                if v:
                    out.entries[(i, j)] = v
        return out

    def nnz(self) -> int:
        return len(self.entries)

    def __matmul__(self, other: "SparseMatrix") -> "SparseMatrix":
        if self.n != other.m:
            raise MatrixError(f"shape mismatch {self.shape} @ {other.shape}")
        by_row: dict[int, list] = {}
        for (k, j), v in other.entries.items():
            by_row.setdefault(k, []).append((j, v))
        out = SparseMatrix(self.ring, self.m, other.n)
        for (i, k), a in self.entries.items():
            for j, b in by_row.get(k, ()):
                out.add(i, j, a * b)
        return out

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    __hash__ = None

    def __repr__(self):
        return f"SparseMatrix[{self.ring}]({self.m}x{self.n}, nnz={self.nnz()})"

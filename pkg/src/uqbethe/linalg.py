"""Sparse exact matrices over the rationals.

Matrices are stored row-wise as ``{row: {col: value}}`` with zero entries
dropped.  Vectors are plain tuples of Fractions.  Sizes stay in the tens, so
the simple representation keeps everything readable without costing much.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import PivotError

ZERO = Fraction(0)
ONE = Fraction(1)

Vector = tuple  # tuple[Fraction, ...]


class Matrix:
    """Exact square-or-rectangular matrix with sparse row storage."""

    __slots__ = ("nrows", "ncols", "rows")

    def __init__(self, nrows: int, ncols: int, rows: Mapping[int, Mapping[int, Fraction]] | None = None):
        self.nrows = nrows
        self.ncols = ncols
        clean: dict[int, dict[int, Fraction]] = {}
        if rows:
            for i, row in rows.items():
                r = {j: Fraction(v) for j, v in row.items() if v != 0}
                if r:
                    clean[i] = r
        self.rows = clean

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls, nrows: int, ncols: int | None = None) -> "Matrix":
        return cls(nrows, nrows if ncols is None else ncols)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        m = cls(n, n)
        m.rows = {i: {i: ONE} for i in range(n)}
        return m

    @classmethod
    def unit(cls, n: int, i: int, j: int, value=ONE) -> "Matrix":
        """Matrix unit ``value * e_ij`` (0-based indices)."""
        m = cls(n, n)
        if value != 0:
            m.rows = {i: {j: Fraction(value)}}
        return m

    @classmethod
    def diagonal(cls, values: Sequence[Fraction]) -> "Matrix":
        n = len(values)
        return cls(n, n, {i: {i: v} for i, v in enumerate(values)})

    @classmethod
    def from_dense(cls, data: Sequence[Sequence]) -> "Matrix":
        nrows = len(data)
        ncols = len(data[0]) if nrows else 0
        return cls(nrows, ncols, {i: {j: v for j, v in enumerate(row)} for i, row in enumerate(data)})

    @classmethod
    def _raw(cls, nrows: int, ncols: int, rows: dict) -> "Matrix":
        m = cls.__new__(cls)
        m.nrows, m.ncols, m.rows = nrows, ncols, rows
        return m

    # access ---------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        i, j = key
        return self.rows.get(i, {}).get(j, ZERO)

    def to_dense(self) -> list[list[Fraction]]:
        out = [[ZERO] * self.ncols for _ in range(self.nrows)]
        for i, row in self.rows.items():
            for j, v in row.items():
                out[i][j] = v
        return out

    def copy(self) -> "Matrix":
        return Matrix._raw(self.nrows, self.ncols, {i: dict(r) for i, r in self.rows.items()})

    def with_entry(self, i: int, j: int, value) -> "Matrix":
        out = self.copy()
        value = Fraction(value)
        row = out.rows.setdefault(i, {})
        if value == 0:
            row.pop(j, None)
            if not row:
                del out.rows[i]
        else:
            row[j] = value
        return out

    def nnz(self) -> int:
        return sum(len(r) for r in self.rows.values())

    def is_zero(self) -> bool:
        return not self.rows

    # arithmetic -----------------------------------------------------------
    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash((self.shape, tuple(sorted((i, tuple(sorted(r.items()))) for i, r in self.rows.items()))))

    def _combine(self, other: "Matrix", sign: int) -> "Matrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        rows = {i: dict(r) for i, r in self.rows.items()}
        for i, orow in other.rows.items():
            row = rows.setdefault(i, {})
            for j, v in orow.items():
                nv = row.get(j, ZERO) + (v if sign > 0 else -v)
                if nv == 0:
                    row.pop(j, None)
                else:
                    row[j] = nv
            if not row:
                del rows[i]
        return Matrix._raw(self.nrows, self.ncols, rows)

    def __add__(self, other: "Matrix") -> "Matrix":
        return self._combine(other, 1)

    def __sub__(self, other: "Matrix") -> "Matrix":
        return self._combine(other, -1)

    def __neg__(self) -> "Matrix":
        return self.scale(-1)

    def scale(self, c) -> "Matrix":
        c = Fraction(c)
        if c == 0:
            return Matrix(self.nrows, self.ncols)
        return Matrix._raw(self.nrows, self.ncols, {i: {j: v * c for j, v in r.items()} for i, r in self.rows.items()})

    def __rmul__(self, c) -> "Matrix":
        return self.scale(c)

    def __matmul__(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        orows = other.rows
        out: dict[int, dict[int, Fraction]] = {}
        for i, row in self.rows.items():
            acc: dict[int, Fraction] = {}
            for k, a in row.items():
                brow = orows.get(k)
                if not brow:
                    continue
                for j, b in brow.items():
                    acc[j] = acc.get(j, ZERO) + a * b
            acc = {j: v for j, v in acc.items() if v != 0}
            if acc:
                out[i] = acc
        return Matrix._raw(self.nrows, other.ncols, out)

    def apply(self, vec: Sequence[Fraction]) -> Vector:
        """Matrix-vector product."""
        if len(vec) != self.ncols:
            raise ValueError("vector length mismatch")
        out = [ZERO] * self.nrows
        for i, row in self.rows.items():
            s = ZERO
            for j, v in row.items():
                x = vec[j]
                if x:
                    s += v * x
            out[i] = s
        return tuple(out)

    def transpose(self) -> "Matrix":
        out: dict[int, dict[int, Fraction]] = {}
        for i, row in self.rows.items():
            for j, v in row.items():
                out.setdefault(j, {})[i] = v
        return Matrix._raw(self.ncols, self.nrows, out)

    def inverse(self) -> "Matrix":
        """Exact inverse by Gauss-Jordan elimination.

        Raises :class:`PivotError` if the matrix is singular.
        """
        n = self.nrows
        if n != self.ncols:
            raise ValueError("inverse of non-square matrix")
        work = [dict(self.rows.get(i, {})) for i in range(n)]
        inv = [{i: ONE} for i in range(n)]
        for col in range(n):
            pivot = next((r for r in range(col, n) if work[r].get(col, ZERO) != 0), None)
            if pivot is None:
                raise PivotError(f"singular matrix (no pivot in column {col})")
            work[col], work[pivot] = work[pivot], work[col]
            inv[col], inv[pivot] = inv[pivot], inv[col]
            p = work[col][col]
            if p != 1:
                pinv = 1 / p
                work[col] = {j: v * pinv for j, v in work[col].items()}
                inv[col] = {j: v * pinv for j, v in inv[col].items()}
            prow, pinvrow = work[col], inv[col]
            for r in range(n):
                if r == col:
                    continue
                f = work[r].get(col)
                if not f:
                    continue
                for tgt, src in ((work, prow), (inv, pinvrow)):
                    row = tgt[r]
                    for j, v in src.items():
                        nv = row.get(j, ZERO) - f * v
                        if nv == 0:
                            row.pop(j, None)
                        else:
                            row[j] = nv
        return Matrix(n, n, {i: r for i, r in enumerate(inv)})

    def __repr__(self) -> str:
        return f"Matrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


def lincomb(nrows: int, ncols: int, terms: Iterable[tuple]) -> Matrix:
    """``sum c * M`` over ``(c, M)`` pairs in one accumulation pass."""
    rows: dict[int, dict[int, Fraction]] = {}
    for c, m in terms:
        if c == 0:
            continue
        for i, mrow in m.rows.items():
            row = rows.setdefault(i, {})
            if c == 1:
                for j, v in mrow.items():
                    row[j] = row.get(j, ZERO) + v
            else:
                for j, v in mrow.items():
                    row[j] = row.get(j, ZERO) + c * v
    out = {}
    for i, row in rows.items():
        r = {j: v for j, v in row.items() if v != 0}
        if r:
            out[i] = r
    return Matrix._raw(nrows, ncols, out)


class IntMatrix:
    """``rows / den`` with integer entries; used where only exact zero tests are needed."""

    __slots__ = ("rows", "den")

    def __init__(self, rows: dict, den: int):
        self.rows = rows
        self.den = den

    @classmethod
    def from_matrix(cls, m: Matrix) -> "IntMatrix":
        den = 1
        for row in m.rows.values():
            for v in row.values():
                den = math.lcm(den, v.denominator)
        rows = {i: {j: v.numerator * (den // v.denominator) for j, v in row.items()} for i, row in m.rows.items()}
        return cls(rows, den)

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        orows = other.rows
        out = {}
        for i, row in self.rows.items():
            acc: dict[int, int] = {}
            for k, a in row.items():
                brow = orows.get(k)
                if brow:
                    for j, b in brow.items():
                        acc[j] = acc.get(j, 0) + a * b
            acc = {j: v for j, v in acc.items() if v}
            if acc:
                out[i] = acc
        return IntMatrix(out, self.den * other.den)


def int_combination_rows(terms: Iterable[tuple]) -> dict:
    """Rows of ``sum c * M`` over ``(Fraction c, IntMatrix M)``, scaled to integers.

    The result is a positive multiple of the true sum, so it vanishes exactly
    when the sum does.
    """
    terms = [(Fraction(c) / m.den, m) for c, m in terms if c != 0]
    scale = 1
    for c, _ in terms:
        scale = math.lcm(scale, c.denominator)
    acc: dict[int, dict[int, int]] = {}
    for c, m in terms:
        k = c.numerator * (scale // c.denominator)
        for i, row in m.rows.items():
            arow = acc.setdefault(i, {})
            for j, v in row.items():
                arow[j] = arow.get(j, 0) + k * v
    return {i: {j: v for j, v in row.items() if v} for i, row in acc.items() if any(row.values())}


def kron(a: Matrix, b: Matrix) -> Matrix:
    """Kronecker product; the first factor carries the major index."""
    rows: dict[int, dict[int, Fraction]] = {}
    bn, bm = b.nrows, b.ncols
    for i, arow in a.rows.items():
        for k, brow in b.rows.items():
            row = {}
            for j, av in arow.items():
                base = j * bm
                for l, bv in brow.items():
                    row[base + l] = av * bv
            rows[i * bn + k] = row
    return Matrix._raw(a.nrows * bn, a.ncols * bm, rows)


def kron_all(factors: Iterable[Matrix]) -> Matrix:
    it = iter(factors)
    out = next(it)
    for f in it:
        out = kron(out, f)
    return out


def vec_add(x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
    return tuple(a + b for a, b in zip(x, y))


def vec_scale(c, x: Sequence[Fraction]) -> Vector:
    return tuple(c * a for a in x)


def vec_axpy(acc: list[Fraction], c, x: Sequence[Fraction]) -> None:
    """In place ``acc += c * x``."""
    if c == 0:
        return
    for i, a in enumerate(x):
        if a:
            acc[i] += c * a


def vec_kron(x: Sequence[Fraction], y: Sequence[Fraction]) -> Vector:
    return tuple(a * b for a in x for b in y)


def basis_vector(n: int, i: int) -> Vector:
    return tuple(ONE if k == i else ZERO for k in range(n))


def zero_vector(n: int) -> Vector:
    return (ZERO,) * n


def is_zero_vector(x: Sequence[Fraction]) -> bool:
    return not any(x)


def op_matmul(a: list[list[Matrix]], b: list[list[Matrix]]) -> list[list[Matrix]]:
    """Product of matrices whose entries are (noncommuting) operators."""
    n, m, p = len(a), len(b), len(b[0])
    dim = a[0][0].nrows
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = Matrix.zero(dim)
            for k in range(m):
                acc = acc + a[i][k] @ b[k][j]
            row.append(acc)
        out.append(row)
    return out

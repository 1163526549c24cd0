"""Matrices over a polynomial context: exact products, determinants,
adjugates, block constructions, and field linear algebra for constant
matrices (Gaussian elimination over the coefficient field)."""

from __future__ import annotations

from typing import Callable, Iterable, List, Sequence

from .errors import ContextError, ShapeError
from .poly import Polynomial, PolyRing


class PolyMatrix:
    """Immutable rows x cols grid of polynomials over one context."""

    __slots__ = ("ring", "rows", "cols", "entries")

    def __init__(self, ring: PolyRing, rows: int, cols: int, entries: Sequence[Polynomial]):
        entries = tuple(entries)
        if rows < 0 or cols < 0 or len(entries) != rows * cols:
            raise ShapeError(f"need {rows}x{cols} = {rows * cols} entries, got {len(entries)}")
        for p in entries:
            if p.ring != ring:
                raise ContextError("matrix entry over a different context")
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "cols", cols)
        object.__setattr__(self, "entries", entries)

    def __setattr__(self, *a):
        raise AttributeError("PolyMatrix is immutable")

    # -- construction ---------------------------------------------------
    @staticmethod
    def from_rows(ring: PolyRing, rows: Sequence[Sequence[Polynomial]]) -> "PolyMatrix":
        r = len(rows)
        c = len(rows[0]) if r else 0
        flat: List[Polynomial] = []
        for row in rows:
            if len(row) != c:
                raise ShapeError("ragged rows")
            flat.extend(row)
        return PolyMatrix(ring, r, c, flat)

    @staticmethod
    def identity(ring: PolyRing, n: int) -> "PolyMatrix":
        one, zero = ring.one(), ring.zero()
        return PolyMatrix(ring, n, n,
                          [one if i == j else zero for i in range(n) for j in range(n)])

    @staticmethod
    def zeros(ring: PolyRing, rows: int, cols: int) -> "PolyMatrix":
        zero = ring.zero()
        return PolyMatrix(ring, rows, cols, [zero] * (rows * cols))

    @staticmethod
    def from_scalars(ring: PolyRing, rows: Sequence[Sequence[object]]) -> "PolyMatrix":
        return PolyMatrix.from_rows(ring, [[ring.constant(c) for c in row] for row in rows])

    # -- access -----------------------------------------------------------
    def __getitem__(self, ij) -> Polynomial:
        i, j = ij
        return self.entries[i * self.cols + j]

    def row(self, i: int) -> tuple:
        return self.entries[i * self.cols:(i + 1) * self.cols]

    def col(self, j: int) -> tuple:
        return tuple(self.entries[i * self.cols + j] for i in range(self.rows))

    def to_lists(self) -> list:
        return [list(self.row(i)) for i in range(self.rows)]

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.entries)

    def is_constant(self) -> bool:
        return all(p.is_constant() for p in self.entries)

    # -- arithmetic --------------------------------------------------------
    def _check(self, other: "PolyMatrix") -> None:
        if self.ring != other.ring:
            raise ContextError("matrices over different contexts")

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("shape mismatch in matrix addition")
        return PolyMatrix(self.ring, self.rows, self.cols,
                          [a + b for a, b in zip(self.entries, other.entries)])

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ShapeError("shape mismatch in matrix subtraction")
        return PolyMatrix(self.ring, self.rows, self.cols,
                          [a - b for a, b in zip(self.entries, other.entries)])

    def __neg__(self) -> "PolyMatrix":
        return PolyMatrix(self.ring, self.rows, self.cols, [-a for a in self.entries])

    def __mul__(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check(other)
        if self.cols != other.rows:
            raise ShapeError(f"cannot multiply {self.rows}x{self.cols} by {other.rows}x{other.cols}")
        zero = self.ring.zero()
        out: List[Polynomial] = []
        orows = [other.row(k) for k in range(other.rows)]
        for i in range(self.rows):
            srow = self.row(i)
            for j in range(other.cols):
                acc = zero
                for k in range(self.cols):
                    a = srow[k]
                    if a.terms:
                        b = orows[k][j]
                        if b.terms:
                            acc = acc + a * b
                out.append(acc)
        return PolyMatrix(self.ring, self.rows, other.cols, out)

    def scale(self, f: Polynomial) -> "PolyMatrix":
        return self.map_entries(lambda p: p * f)

    def transpose(self) -> "PolyMatrix":
        return PolyMatrix(self.ring, self.cols, self.rows,
                          [self[j, i] for i in range(self.cols) for j in range(self.rows)])

    def map_entries(self, fn: Callable[[Polynomial], Polynomial]) -> "PolyMatrix":
        entries = [fn(p) for p in self.entries]
        ring = entries[0].ring if entries else self.ring
        return PolyMatrix(ring, self.rows, self.cols, entries)

    def trace(self) -> Polynomial:
        if not self.is_square:
            raise ShapeError("trace of a non-square matrix")
        acc = self.ring.zero()
        for i in range(self.rows):
            acc = acc + self[i, i]
        return acc

    def augmentation(self) -> "PolyMatrix":
        """Evaluate every entry at x = 0 (constant matrix)."""
        ring = self.ring
        return self.map_entries(lambda p: ring.constant(p.constant_term()))

    # -- determinant and adjugate -------------------------------------------
    def det(self) -> Polynomial:
        if not self.is_square:
            raise ShapeError("determinant of a non-square matrix")
        n = self.rows
        memo: dict = {}
        return _det_sub(self, tuple(range(n)), tuple(range(n)), memo)

    def adjugate(self) -> "PolyMatrix":
        """Classical adjugate: self * adjugate() == det() * identity, exactly."""
        if not self.is_square:
            raise ShapeError("adjugate of a non-square matrix")
        n = self.rows
        if n == 0:
            return self
        memo: dict = {}
        rows_all = tuple(range(n))
        out = [[self.ring.zero()] * n for _ in range(n)]
        for i in range(n):
            rows = tuple(r for r in rows_all if r != i)
            for j in range(n):
                cols = tuple(c for c in rows_all if c != j)
                minor = _det_sub(self, rows, cols, memo)
                out[j][i] = minor if (i + j) % 2 == 0 else -minor
        return PolyMatrix.from_rows(self.ring, out)

    # -- blocks ----------------------------------------------------------
    def direct_sum(self, other: "PolyMatrix") -> "PolyMatrix":
        self._check(other)
        zero = self.ring.zero()
        rows = self.rows + other.rows
        cols = self.cols + other.cols
        out = [zero] * (rows * cols)
        for i in range(self.rows):
            for j in range(self.cols):
                out[i * cols + j] = self[i, j]
        for i in range(other.rows):
            for j in range(other.cols):
                out[(self.rows + i) * cols + self.cols + j] = other[i, j]
        return PolyMatrix(self.ring, rows, cols, out)

    @staticmethod
    def block2(a: "PolyMatrix", b: "PolyMatrix", c: "PolyMatrix", d: "PolyMatrix") -> "PolyMatrix":
        if a.rows != b.rows or c.rows != d.rows or a.cols != c.cols or b.cols != d.cols:
            raise ShapeError("incompatible blocks")
        rows = []
        for i in range(a.rows):
            rows.append(list(a.row(i)) + list(b.row(i)))
        for i in range(c.rows):
            rows.append(list(c.row(i)) + list(d.row(i)))
        return PolyMatrix.from_rows(a.ring, rows)

    def submatrix(self, rows: Iterable[int], cols: Iterable[int]) -> "PolyMatrix":
        rows = list(rows)
        cols = list(cols)
        return PolyMatrix(self.ring, len(rows), len(cols),
                          [self[i, j] for i in rows for j in cols])

    # -- comparisons -------------------------------------------------------
    def __eq__(self, other) -> bool:
        return (isinstance(other, PolyMatrix) and self.ring == other.ring
                and self.rows == other.rows and self.cols == other.cols
                and self.entries == other.entries)

    def __hash__(self) -> int:
        return hash((self.ring, self.rows, self.cols, self.entries))

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(p) for p in self.row(i)) for i in range(self.rows))
        return f"PolyMatrix[{self.rows}x{self.cols}: {body}]"


def _det_sub(m: PolyMatrix, rows: tuple, cols: tuple, memo: dict) -> Polynomial:
    """Determinant of the submatrix on (rows, cols), minors memoized."""
    if not rows:
        return m.ring.one()
    key = (rows, cols)
    hit = memo.get(key)
    if hit is not None:
        return hit
    if len(rows) == 1:
        out = m[rows[0], cols[0]]
    else:
        out = m.ring.zero()
        i = rows[0]
        rest = rows[1:]
        for t, j in enumerate(cols):
            a = m[i, j]
            if not a.terms:
                continue
            sub = _det_sub(m, rest, cols[:t] + cols[t + 1:], memo)
            term = a * sub
            out = out + term if t % 2 == 0 else out - term
    memo[key] = out
    return out


# -- field linear algebra on constant matrices ------------------------------

def constant_rows(m: PolyMatrix) -> list:
    """Entries as field scalars; raises if any entry is non-constant."""
    if not m.is_constant():
        raise ContextError("expected a constant matrix")
    return [[m[i, j].constant_term() for j in range(m.cols)] for i in range(m.rows)]


def _row_reduce(rows: list, fld) -> tuple:
    """In-place RREF; returns (pivot column list, rows)."""
    rows = [list(r) for r in rows]
    nr = len(rows)
    nc = len(rows[0]) if nr else 0
    pivots = []
    r = 0
    for c in range(nc):
        pivot = next((i for i in range(r, nr) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        inv = fld.inv(rows[r][c])
        rows[r] = [fld.mul(x, inv) for x in rows[r]]
        for i in range(nr):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [fld.sub(x, fld.mul(f, y)) for x, y in zip(rows[i], rows[r])]
        pivots.append(c)
        r += 1
        if r == nr:
            break
    return pivots, rows

def scalar_rank(m: PolyMatrix) -> int:
    pivots, _ = _row_reduce(constant_rows(m), m.ring.field)
    return len(pivots)


def scalar_inverse(m: PolyMatrix) -> PolyMatrix:
    """Inverse of a constant square matrix via Gauss-Jordan."""
    if not m.is_square:
        raise ShapeError("inverse of a non-square matrix")
    fld = m.ring.field
    n = m.rows
    rows = constant_rows(m)
    aug = [rows[i] + [fld.one if i == j else fld.zero for j in range(n)] for i in range(n)]
    pivots, red = _row_reduce(aug, fld)
    if pivots[:n] != list(range(n)):
        raise ShapeError("constant matrix is singular")
    inv = [r[n:] for r in red]
    return PolyMatrix.from_scalars(m.ring, inv)


def column_space_basis(m: PolyMatrix) -> list:
    """Columns of m forming a basis of its column space (as scalar columns)."""
    pivots, _ = _row_reduce(constant_rows(m), m.ring.field)
    cols = constant_rows(m.transpose())
    return [cols[c] for c in pivots]


def kernel_basis(m: PolyMatrix) -> list:
    """Basis of the right kernel of a constant matrix (as scalar columns)."""
    fld = m.ring.field
    pivots, red = _row_reduce(constant_rows(m), fld)
    nc = m.cols
    free = [c for c in range(nc) if c not in pivots]
    basis = []
    for fc in free:
        vec = [fld.zero] * nc
        vec[fc] = fld.one
        for r, pc in enumerate(pivots):
            vec[pc] = fld.neg(red[r][fc])
        basis.append(vec)
    return basis

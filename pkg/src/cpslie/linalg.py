"""Exact linear algebra over the rationals.

Vectors are tuples of Fraction, matrices are immutable tuples of row
tuples, and subspaces are kept in reduced row-echelon form with unit
pivots so that equal subspaces compare (and hash) identically.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

Q = Fraction

Vector = tuple[Q, ...]


def q(x) -> Q:
    """Coerce an int, string ("p/q" or "p"), or Fraction to Fraction."""
    if isinstance(x, Q):
        return x
    if isinstance(x, (int, str)):
        return Q(x)
    raise TypeError(f"not a rational scalar: {x!r}")


def qstr(x: Q) -> str:
    """Serialize as "p/q", omitting the denominator when it is 1."""
    return str(x)


def vec(entries) -> Vector:
    return tuple(q(e) for e in entries)


def vec_add(u: Vector, v: Vector) -> Vector:
    return tuple(a + b for a, b in zip(u, v, strict=True))


def vec_sub(u: Vector, v: Vector) -> Vector:
    return tuple(a - b for a, b in zip(u, v, strict=True))


def vec_scale(c, v: Vector) -> Vector:
    c = q(c)
    return tuple(c * a for a in v)


def vec_neg(v: Vector) -> Vector:
    return tuple(-a for a in v)


def vec_is_zero(v: Vector) -> bool:
    return all(a == 0 for a in v)


def zero_vec(n: int) -> Vector:
    return (Q(0),) * n


def basis_vec(n: int, i: int, scale=1) -> Vector:
    return tuple(q(scale) if j == i else Q(0) for j in range(n))


class SingularMatrixError(ValueError):
    pass


class QMatrix:
    """Immutable rational matrix."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Iterable[Iterable], cols: int | None = None):
        rows = tuple(tuple(q(x) for x in row) for row in entries)
        if rows:
            ncols = len(rows[0])
            if any(len(r) != ncols for r in rows):
                raise ValueError("ragged matrix")
            if cols is not None and cols != ncols:
                raise ValueError("cols mismatch")
        else:
            if cols is None:
                raise ValueError("empty matrix needs an explicit column count")
            ncols = cols
        object.__setattr__(self, "entries", rows)
        object.__setattr__(self, "rows", len(rows))
        object.__setattr__(self, "cols", ncols)

    def __setattr__(self, name, value):
        raise AttributeError("QMatrix is immutable")

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "QMatrix":
        return cls([[0] * cols for _ in range(rows)], cols=cols)

    @classmethod
    def identity(cls, n: int) -> "QMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_cols(cls, cols: Sequence[Vector]) -> "QMatrix":
        n = len(cols[0])
        return cls([[q(c[i]) for c in cols] for i in range(n)])

    @classmethod
    def diag_blocks(cls, *blocks: "QMatrix") -> "QMatrix":
        n = sum(b.rows for b in blocks)
        m = sum(b.cols for b in blocks)
        out = [[Q(0)] * m for _ in range(n)]
        r = c = 0
        for b in blocks:
            for i in range(b.rows):
                out[r + i][c : c + b.cols] = list(b.entries[i])
            r += b.rows
            c += b.cols
        return cls(out, cols=m)

    @classmethod
    def block(cls, grid: Sequence[Sequence["QMatrix"]]) -> "QMatrix":
        out = []
        for row_of_blocks in grid:
            height = row_of_blocks[0].rows
            for i in range(height):
                out.append([x for b in row_of_blocks for x in b.entries[i]])
        return cls(out, cols=len(out[0]) if out else 0)

    def entry(self, i: int, j: int) -> Q:
        return self.entries[i][j]

    def row(self, i: int) -> Vector:
        return self.entries[i]

    def col(self, j: int) -> Vector:
        return tuple(r[j] for r in self.entries)

    def is_square(self) -> bool:
        return self.rows == self.cols

    def is_zero(self) -> bool:
        return all(x == 0 for r in self.entries for x in r)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.entries == other.entries
        )

    def __hash__(self):
        return hash((self.rows, self.cols, self.entries))

    def __repr__(self):
        body = "; ".join(" ".join(qstr(x) for x in r) for r in self.entries)
        return f"QMatrix({self.rows}x{self.cols}: {body})"

    def __add__(self, other: "QMatrix") -> "QMatrix":
        return QMatrix(
            [vec_add(a, b) for a, b in zip(self.entries, other.entries, strict=True)],
            cols=self.cols,
        )

    def __sub__(self, other: "QMatrix") -> "QMatrix":
        return QMatrix(
            [vec_sub(a, b) for a, b in zip(self.entries, other.entries, strict=True)],
            cols=self.cols,
        )

    def __neg__(self) -> "QMatrix":
        return QMatrix([vec_neg(r) for r in self.entries], cols=self.cols)

    def scale(self, c) -> "QMatrix":
        c = q(c)
        return QMatrix([[c * x for x in r] for r in self.entries], cols=self.cols)

    def __matmul__(self, other: "QMatrix") -> "QMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch in matrix product")
        ocols = other.cols
        orows = other.entries
        zero = Q(0)
        out = []
        for arow in self.entries:
            acc = [zero] * ocols
            for k, a in enumerate(arow):
                if a == 0:
                    continue
                brow = orows[k]
                for j in range(ocols):
                    b = brow[j]
                    if b != 0:
                        acc[j] += a * b
            out.append(acc)
        return QMatrix(out, cols=ocols)

    def apply(self, v: Vector) -> Vector:
        """Matrix times column vector."""
        if len(v) != self.cols:
            raise ValueError("vector length mismatch")
        zero = Q(0)
        out = []
        for row in self.entries:
            acc = zero
            for a, x in zip(row, v):
                if a != 0 and x != 0:
                    acc += a * x
            out.append(acc)
        return tuple(out)

    def transpose(self) -> "QMatrix":
        return QMatrix(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
            cols=self.rows,
        )

    def trace(self) -> Q:
        if not self.is_square():
            raise ValueError("trace of a non-square matrix")
        return sum((self.entries[i][i] for i in range(self.rows)), Q(0))

    def inverse(self) -> "QMatrix":
        if not self.is_square():
            raise SingularMatrixError("only square matrices can be inverted")
        n = self.rows
        aug = [list(self.entries[i]) + [Q(1) if j == i else Q(0) for j in range(n)] for i in range(n)]
        for col in range(n):
            piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
            if piv is None:
                raise SingularMatrixError("singular matrix")
            aug[col], aug[piv] = aug[piv], aug[col]
            inv = 1 / aug[col][col]
            aug[col] = [x * inv for x in aug[col]]
            for r in range(n):
                if r != col and aug[r][col] != 0:
                    f = aug[r][col]
                    aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
        return QMatrix([row[n:] for row in aug], cols=n)

    def to_json(self) -> list[list[str]]:
        return [[qstr(x) for x in r] for r in self.entries]

    @classmethod
    def from_json(cls, data, cols: int | None = None) -> "QMatrix":
        return cls(data, cols=cols)


def _rref(rows: list[list[Q]], cols: int) -> tuple[list[list[Q]], list[int]]:
    """Reduced row echelon form; returns nonzero rows and pivot columns."""
    mat = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, len(mat)) if mat[i][c] != 0), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = 1 / mat[r][c]
        mat[r] = [x * inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and mat[i][c] != 0:
                f = mat[i][c]
                mat[i] = [x - f * y for x, y in zip(mat[i], mat[r])]
        pivots.append(c)
        r += 1
        if r == len(mat):
            break
    return mat[:r], pivots


def rank(m: QMatrix) -> int:
    """Row rank over the rationals."""
    _, pivots = _rref([list(r) for r in m.entries], m.cols)
    return len(pivots)


def is_nilpotent_matrix(m: QMatrix) -> bool:
    """True iff M**n = 0; tested by repeated squaring up to exponent >= n."""
    if not m.is_square():
        raise ValueError("nilpotency is only defined for square matrices")
    n = m.rows
    power = m
    e = 1
    while e < n:
        power = power @ power
        e *= 2
    return power.is_zero()


class Subspace:
    """Linear subspace of Q^n held as a canonical RREF row basis."""

    __slots__ = ("ambient_dim", "basis")

    def __init__(self, ambient_dim: int, basis: QMatrix):
        object.__setattr__(self, "ambient_dim", ambient_dim)
        object.__setattr__(self, "basis", basis)

    def __setattr__(self, name, value):
        raise AttributeError("Subspace is immutable")

    @classmethod
    def from_spanning(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        rows = [[q(x) for x in v] for v in vectors]
        for r in rows:
            if len(r) != ambient_dim:
                raise ValueError("vector length does not match ambient dimension")
        reduced, _ = _rref(rows, ambient_dim)
        return cls(ambient_dim, QMatrix(reduced, cols=ambient_dim))

    @classmethod
    def zero(cls, n: int) -> "Subspace":
        return cls(n, QMatrix([], cols=n))

    @classmethod
    def full(cls, n: int) -> "Subspace":
        return cls(n, QMatrix.identity(n))

    @property
    def dim(self) -> int:
        return self.basis.rows

    def is_zero(self) -> bool:
        return self.dim == 0

    def is_full(self) -> bool:
        return self.dim == self.ambient_dim

    def basis_vectors(self) -> tuple[Vector, ...]:
        return self.basis.entries

    def contains(self, v: Sequence) -> bool:
        w = vec(v)
        if len(w) != self.ambient_dim:
            raise ValueError("vector length does not match ambient dimension")
        residual = list(w)
        pivots = [next(j for j, x in enumerate(row) if x != 0) for row in self.basis.entries]
        for row, p in zip(self.basis.entries, pivots):
            f = residual[p]
            if f != 0:
                for j in range(self.ambient_dim):
                    residual[j] -= f * row[j]
        return all(x == 0 for x in residual)

    def coordinates(self, v: Sequence) -> Vector:
        """Coefficients of v in the RREF basis; raises if v is outside."""
        w = vec(v)
        pivots = [next(j for j, x in enumerate(row) if x != 0) for row in self.basis.entries]
        coeffs = tuple(w[p] for p in pivots)
        rebuilt = zero_vec(self.ambient_dim)
        for c, row in zip(coeffs, self.basis.entries):
            rebuilt = vec_add(rebuilt, vec_scale(c, row))
        if rebuilt != w:
            raise ValueError("vector not in subspace")
        return coeffs

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.contains(r) for r in other.basis.entries)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.ambient_dim == other.ambient_dim
            and self.basis == other.basis
        )

    def __hash__(self):
        return hash((self.ambient_dim, self.basis))

    def __repr__(self):
        return f"Subspace(dim {self.dim} of Q^{self.ambient_dim})"

    def to_json(self) -> list[list[str]]:
        return self.basis.to_json()


def kernel(m: QMatrix) -> Subspace:
    """Canonical basis of the null space; dim kernel + rank = cols."""
    reduced, pivots = _rref([list(r) for r in m.entries], m.cols)
    free = [j for j in range(m.cols) if j not in pivots]
    gens = []
    for f in free:
        v = [Q(0)] * m.cols
        v[f] = Q(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[f]
        gens.append(v)
    return Subspace.from_spanning(gens, m.cols)


def image(m: QMatrix) -> Subspace:
    """Column space, canonicalized."""
    return Subspace.from_spanning(m.transpose().entries, m.rows)


def map_subspace(m: QMatrix, v: Subspace) -> Subspace:
    """Image of a subspace under a linear map."""
    if m.cols != v.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    return Subspace.from_spanning([m.apply(r) for r in v.basis.entries], m.rows)


def subspace_sum(u: Subspace, v: Subspace) -> Subspace:
    if u.ambient_dim != v.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    return Subspace.from_spanning(
        list(u.basis.entries) + list(v.basis.entries), u.ambient_dim
    )


def intersect(u: Subspace, v: Subspace) -> Subspace:
    """Canonical basis of the intersection of two subspaces."""
    if u.ambient_dim != v.ambient_dim:
        raise ValueError("ambient dimension mismatch")
    n = u.ambient_dim
    if u.is_zero() or v.is_zero():
        return Subspace.zero(n)
    k, m = u.dim, v.dim
    # columns: coefficients (a, b) with a^T U = b^T V
    mat = QMatrix(
        [
            [u.basis.entries[c][r] for c in range(k)]
            + [-v.basis.entries[c][r] for c in range(m)]
            for r in range(n)
        ],
        cols=k + m,
    )
    gens = []
    for w in kernel(mat).basis.entries:
        x = zero_vec(n)
        for c in range(k):
            if w[c] != 0:
                x = vec_add(x, vec_scale(w[c], u.basis.entries[c]))
        gens.append(x)
    return Subspace.from_spanning(gens, n)


def annihilator(v: Subspace) -> Subspace:
    """Functionals (as coordinate rows) vanishing on the subspace."""
    return kernel(v.basis)


def preimage(m: QMatrix, v: Subspace) -> Subspace:
    """{x : Mx in V}, canonical form."""
    if m.rows != v.ambient_dim:
        raise ValueError("matrix size does not match ambient dimension")
    ann = annihilator(v)
    if ann.is_zero():
        return Subspace.full(m.cols)
    return kernel(ann.basis @ m)

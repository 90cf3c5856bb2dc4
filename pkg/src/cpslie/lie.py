"""Lie algebras given by rational structure-constant tables.

Basis indices are 0-based throughout the Python API; the JSON wire
format is 1-based and lists only i<j brackets.
"""

from __future__ import annotations

from enum import Enum
from typing import Mapping, Sequence

from .linalg import (
    Q,
    QMatrix,
    Subspace,
    Vector,
    basis_vec,
    q,
    qstr,
    vec,
    vec_add,
    vec_is_zero,
    vec_neg,
    vec_scale,
    zero_vec,
)


class JacobiError(ValueError):
    """Raised when a would-be Lie algebra violates the Jacobi identity."""

    def __init__(self, defects):
        self.defects = defects
        triples = ", ".join(f"({i},{j},{k})" for i, j, k, _ in defects[:4])
        super().__init__(f"Jacobi identity fails on basis triples {triples}")


class LieAlgebra:
    """dim plus the antisymmetric table of basis brackets."""

    __slots__ = ("dim", "table")

    def __init__(self, dim: int, table, check: bool = True):
        tab = tuple(tuple(vec(v) for v in row) for row in table)
        if len(tab) != dim or any(len(row) != dim for row in tab):
            raise ValueError("table shape must be dim x dim")
        for i in range(dim):
            for j in range(dim):
                if len(tab[i][j]) != dim:
                    raise ValueError("bracket vectors must have length dim")
                if tab[i][j] != vec_neg(tab[j][i]):
                    raise ValueError(f"antisymmetry fails on pair ({i},{j})")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "table", tab)
        if check:
            defects = jacobi_defect(self)
            if defects:
                raise JacobiError(defects)

    def __setattr__(self, name, value):
        raise AttributeError("LieAlgebra is immutable")

    @classmethod
    def from_brackets(
        cls, dim: int, brackets: Mapping[tuple[int, int], Mapping[int, object]], check: bool = True
    ) -> "LieAlgebra":
        """Build from a sparse {(i, j): {k: coeff}} description, i < j."""
        table = [[list(zero_vec(dim)) for _ in range(dim)] for _ in range(dim)]
        for (i, j), coeffs in brackets.items():
            if not 0 <= i < j < dim:
                raise ValueError(f"bracket pair ({i},{j}) must satisfy 0 <= i < j < dim")
            for k, c in coeffs.items():
                table[i][j][k] += q(c)
                table[j][i][k] -= q(c)
        return cls(dim, table, check=check)

    @classmethod
    def abelian(cls, dim: int) -> "LieAlgebra":
        return cls.from_brackets(dim, {})

    def c(self, i: int, j: int, k: int) -> Q:
        return self.table[i][j][k]

    def bracket(self, x: Sequence, y: Sequence) -> Vector:
        """Bilinear antisymmetric product from the structure constants."""
        xv, yv = vec(x), vec(y)
        if len(xv) != self.dim or len(yv) != self.dim:
            raise ValueError("vector length must equal dim")
        out = zero_vec(self.dim)
        for i, a in enumerate(xv):
            if a == 0:
                continue
            row = self.table[i]
            for j, b in enumerate(yv):
                if b == 0:
                    continue
                w = row[j]
                if not vec_is_zero(w):
                    out = vec_add(out, vec_scale(a * b, w))
        return out

    def ad(self, i: int) -> QMatrix:
        """Matrix of ad(e_i): y -> [e_i, y]."""
        return QMatrix.from_cols([self.table[i][j] for j in range(self.dim)])

    def ad_vector(self, x: Sequence) -> QMatrix:
        xv = vec(x)
        cols = [self.bracket(xv, basis_vec(self.dim, j)) for j in range(self.dim)]
        return QMatrix.from_cols(cols)

    def is_abelian(self) -> bool:
        return all(
            vec_is_zero(self.table[i][j]) for i in range(self.dim) for j in range(i + 1, self.dim)
        )

    def __eq__(self, other) -> bool:
        return isinstance(other, LieAlgebra) and self.dim == other.dim and self.table == other.table

    def __hash__(self):
        return hash((self.dim, self.table))

    def __repr__(self):
        nonzero = sum(
            1 for i in range(self.dim) for j in range(i + 1, self.dim) if not vec_is_zero(self.table[i][j])
        )
        return f"LieAlgebra(dim={self.dim}, {nonzero} nonzero basis brackets)"


def jacobi_defect(g: LieAlgebra) -> list[tuple[int, int, int, Vector]]:
    """Basis triples where [[x,y],z] + [[y,z],x] + [[z,x],y] != 0."""
    out = []
    n = g.dim
    for i in range(n):
        ei = basis_vec(n, i)
        for j in range(i + 1, n):
            ej = basis_vec(n, j)
            for k in range(j + 1, n):
                ek = basis_vec(n, k)
                s = vec_add(
                    vec_add(g.bracket(g.table[i][j], ek), g.bracket(g.table[j][k], ei)),
                    g.bracket(g.table[k][i], ej),
                )
                if not vec_is_zero(s):
                    out.append((i, j, k, s))
    return out


def bracket_subspaces(g: LieAlgebra, u: Subspace, v: Subspace) -> Subspace:
    """Span of [u_i, v_j] over basis vectors of the two subspaces."""
    gens = [g.bracket(x, y) for x in u.basis_vectors() for y in v.basis_vectors()]
    return Subspace.from_spanning(gens, g.dim)


def lower_central_series(g: LieAlgebra) -> list[Subspace]:
    """Terms g^0 = g, g^k = [g^(k-1), g] until stable."""
    full = Subspace.full(g.dim)
    series = [full]
    while True:
        nxt = bracket_subspaces(g, series[-1], full)
        if nxt == series[-1]:
            break
        series.append(nxt)
    return series


def is_nilpotent(g: LieAlgebra) -> bool:
    return lower_central_series(g)[-1].is_zero()


def derived_subalgebra(g: LieAlgebra) -> Subspace:
    return bracket_subspaces(g, Subspace.full(g.dim), Subspace.full(g.dim))


def center(g: LieAlgebra) -> Subspace:
    """Intersection of the kernels of ad(e_i) over the basis."""
    from .linalg import intersect, kernel

    out = Subspace.full(g.dim)
    for i in range(g.dim):
        out = intersect(out, kernel(g.ad(i)))
    return out


def is_subalgebra(g: LieAlgebra, v: Subspace) -> bool:
    return v.contains_subspace(bracket_subspaces(g, v, v))


def is_ideal(g: LieAlgebra, v: Subspace) -> bool:
    return v.contains_subspace(bracket_subspaces(g, v, Subspace.full(g.dim)))


class ThreeDimType(str, Enum):
    ABELIAN3 = "Abelian3"
    HEISENBERG3 = "Heisenberg3"
    NOT_SUBALGEBRA = "NotSubalgebra"
    OTHER = "Other"


def iso_type_3d(g: LieAlgebra, v: Subspace) -> ThreeDimType:
    """Classify a 3-dimensional subspace as a subalgebra type."""
    if v.dim != 3:
        raise ValueError("iso_type_3d needs a 3-dimensional subspace")
    basis = v.basis_vectors()
    internal = []
    for a in range(3):
        for b in range(a + 1, 3):
            w = g.bracket(basis[a], basis[b])
            if not v.contains(w):
                return ThreeDimType.NOT_SUBALGEBRA
            internal.append(w)
    derived = Subspace.from_spanning(internal, g.dim)
    if derived.is_zero():
        return ThreeDimType.ABELIAN3
    if derived.dim == 1:
        gen = derived.basis_vectors()[0]
        if all(vec_is_zero(g.bracket(gen, b)) for b in basis):
            return ThreeDimType.HEISENBERG3
    return ThreeDimType.OTHER


class Representation:
    """Linear action of a Lie algebra on Q^m given per basis vector."""

    __slots__ = ("algebra", "space_dim", "action")

    def __init__(self, algebra: LieAlgebra, space_dim: int, action: Sequence[QMatrix], check: bool = True):
        if len(action) != algebra.dim:
            raise ValueError("one action matrix per basis vector required")
        for a in action:
            if a.rows != space_dim or a.cols != space_dim:
                raise ValueError("action matrices must be space_dim x space_dim")
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "space_dim", space_dim)
        object.__setattr__(self, "action", tuple(action))
        if check:
            bad = self.defects()
            if bad:
                raise ValueError(f"not a representation; identity fails on pairs {bad[:4]}")

    def __setattr__(self, name, value):
        raise AttributeError("Representation is immutable")

    def defects(self) -> list[tuple[int, int]]:
        g, act = self.algebra, self.action
        out = []
        for i in range(g.dim):
            for j in range(i + 1, g.dim):
                lhs = QMatrix.zeros(self.space_dim, self.space_dim)
                for k, coeff in enumerate(g.table[i][j]):
                    if coeff != 0:
                        lhs = lhs + act[k].scale(coeff)
                if lhs != act[i] @ act[j] - act[j] @ act[i]:
                    out.append((i, j))
        return out

    def act_vector(self, x: Sequence) -> QMatrix:
        xv = vec(x)
        out = QMatrix.zeros(self.space_dim, self.space_dim)
        for a, m in zip(xv, self.action):
            if a != 0:
                out = out + m.scale(a)
        return out


def semidirect_product(h: LieAlgebra, rho: Representation) -> LieAlgebra:
    """h acting on an abelian V: [(x,u),(y,v)] = ([x,y], rho(x)v - rho(y)u)."""
    if rho.algebra != h:
        raise ValueError("representation is not over the given algebra")
    m, s = h.dim, rho.space_dim
    n = m + s
    brackets: dict[tuple[int, int], dict[int, Q]] = {}
    for i in range(m):
        for j in range(i + 1, m):
            coeffs = {k: c for k, c in enumerate(h.table[i][j]) if c != 0}
            if coeffs:
                brackets[(i, j)] = coeffs
    for i in range(m):
        act = rho.action[i]
        for j in range(s):
            col = act.col(j)
            coeffs = {m + k: c for k, c in enumerate(col) if c != 0}
            if coeffs:
                brackets[(i, m + j)] = coeffs
    return LieAlgebra.from_brackets(n, brackets)


def complexify_realified(g: LieAlgebra) -> LieAlgebra:
    """Complexification viewed as a real algebra on {e_i} + {hat e_i}.

    [x, y] is as in g, [x^, y^] = -[x, y], and [x^, y] = [x, y^] = ([x, y])^.
    """
    n = g.dim
    brackets: dict[tuple[int, int], dict[int, Q]] = {}

    def put(i, j, coeffs):
        if i == j or not coeffs:
            return
        if i < j:
            brackets[(i, j)] = coeffs
        else:
            brackets[(j, i)] = {k: -c for k, c in coeffs.items()}

    for i in range(n):
        for j in range(i + 1, n):
            w = g.table[i][j]
            plain = {k: c for k, c in enumerate(w) if c != 0}
            hatted = {n + k: c for k, c in enumerate(w) if c != 0}
            put(i, j, dict(plain))
            put(n + i, n + j, {k: -c for k, c in plain.items()})
            put(n + i, j, dict(hatted))
            put(i, n + j, dict(hatted))
    return LieAlgebra.from_brackets(2 * n, brackets)


def change_basis(g: LieAlgebra, p: QMatrix) -> LieAlgebra:
    """Same bracket in the basis given by the columns of P (old coordinates)."""
    if p.rows != g.dim or p.cols != g.dim:
        raise ValueError("basis-change matrix must be dim x dim")
    pinv = p.inverse()
    n = g.dim
    cols = [p.col(i) for i in range(n)]
    table = [[zero_vec(n) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            w = pinv.apply(g.bracket(cols[i], cols[j]))
            table[i][j] = w
            table[j][i] = vec_neg(w)
    return LieAlgebra(n, table)


def algebra_to_json(g: LieAlgebra) -> dict:
    """1-indexed sparse JSON form listing only i<j nonzero brackets."""
    items = []
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            coeffs = {str(k + 1): qstr(c) for k, c in enumerate(g.table[i][j]) if c != 0}
            if coeffs:
                items.append({"i": i + 1, "j": j + 1, "coeffs": coeffs})
    return {"dim": g.dim, "brackets": items}


def algebra_from_json(data: Mapping) -> LieAlgebra:
    dim = int(data["dim"])
    brackets: dict[tuple[int, int], dict[int, Q]] = {}
    for item in data.get("brackets", []):
        i, j = int(item["i"]) - 1, int(item["j"]) - 1
        brackets[(i, j)] = {int(k) - 1: q(v) for k, v in item["coeffs"].items()}
    return LieAlgebra.from_brackets(dim, brackets)

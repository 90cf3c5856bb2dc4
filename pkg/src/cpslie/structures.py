"""Almost complex / almost product endomorphisms and their interaction.

An endomorphism is just a square QMatrix acting on a LieAlgebra's
coordinate space.  A CPS bundles an integrable complex structure J and
an integrable product structure E with JE = -EJ.
"""

from __future__ import annotations

from dataclasses import dataclass

from .lie import LieAlgebra, ThreeDimType, center, is_ideal, iso_type_3d
from .linalg import (
    Q,
    QMatrix,
    Subspace,
    Vector,
    basis_vec,
    intersect,
    kernel,
    preimage,
    q,
    vec_add,
    vec_is_zero,
    vec_sub,
)

Endo = QMatrix


class StructureError(ValueError):
    def __init__(self, code: str, message: str):
        self.code = code
        super().__init__(f"{code}: {message}")


def is_almost_complex(j: Endo) -> bool:
    return j.is_square() and (j @ j) == QMatrix.identity(j.rows).scale(-1)


def is_almost_product(e: Endo) -> bool:
    if not e.is_square():
        return False
    ident = QMatrix.identity(e.rows)
    return (e @ e) == ident and e != ident and e != ident.scale(-1)


def _require_almost_complex(j: Endo):
    if not is_almost_complex(j):
        raise StructureError("J_square", "J^2 = -Id fails")


def _require_almost_product(e: Endo):
    if not e.is_square() or (e @ e) != QMatrix.identity(e.rows):
        raise StructureError("E_square", "E^2 = Id fails")
    ident = QMatrix.identity(e.rows)
    if e == ident or e == ident.scale(-1):
        raise StructureError("E_identity", "E = +/-Id is excluded")


def complex_integrability_defect(g: LieAlgebra, j: Endo) -> list[tuple[int, int, Vector]]:
    """Pairs violating J[x,y] = [Jx,y] + [x,Jy] + J[Jx,Jy]."""
    _require_almost_complex(j)
    out = []
    n = g.dim
    jcols = [j.col(i) for i in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            lhs = j.apply(g.table[a][b])
            rhs = vec_add(
                vec_add(g.bracket(jcols[a], basis_vec(n, b)), g.bracket(basis_vec(n, a), jcols[b])),
                j.apply(g.bracket(jcols[a], jcols[b])),
            )
            d = vec_sub(lhs, rhs)
            if not vec_is_zero(d):
                out.append((a, b, d))
    return out


def product_integrability_defect(g: LieAlgebra, e: Endo) -> list[tuple[int, int, Vector]]:
    """Pairs violating E[x,y] = [Ex,y] + [x,Ey] - E[Ex,Ey]."""
    _require_almost_product(e)
    out = []
    n = g.dim
    ecols = [e.col(i) for i in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            lhs = e.apply(g.table[a][b])
            rhs = vec_sub(
                vec_add(g.bracket(ecols[a], basis_vec(n, b)), g.bracket(basis_vec(n, a), ecols[b])),
                e.apply(g.bracket(ecols[a], ecols[b])),
            )
            d = vec_sub(lhs, rhs)
            if not vec_is_zero(d):
                out.append((a, b, d))
    return out


def is_abelian_complex(g: LieAlgebra, j: Endo) -> bool:
    """[Jx, Jy] = [x, y] on all basis pairs (implies integrability)."""
    _require_almost_complex(j)
    n = g.dim
    jcols = [j.col(i) for i in range(n)]
    for a in range(n):
        for b in range(a + 1, n):
            if g.bracket(jcols[a], jcols[b]) != g.table[a][b]:
                return False
    assert not complex_integrability_defect(g, j)
    return True


def eigenspaces(e: Endo) -> tuple[Subspace, Subspace]:
    """(+1 eigenspace, -1 eigenspace) of a product structure."""
    if not e.is_square() or (e @ e) != QMatrix.identity(e.rows):
        raise StructureError("E_square", "E^2 = Id fails")
    ident = QMatrix.identity(e.rows)
    return kernel(e - ident), kernel(e + ident)


@dataclass(frozen=True)
class DoubleLieAlgebra:
    algebra: LieAlgebra
    plus: Subspace
    minus: Subspace


class CPS:
    """Validated complex product structure {J, E} on a Lie algebra."""

    __slots__ = ("algebra", "j", "e", "plus", "minus")

    def __init__(self, algebra: LieAlgebra, j: Endo, e: Endo, plus: Subspace, minus: Subspace):
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "j", j)
        object.__setattr__(self, "e", e)
        object.__setattr__(self, "plus", plus)
        object.__setattr__(self, "minus", minus)

    def __setattr__(self, name, value):
        raise AttributeError("CPS is immutable")

    @property
    def double(self) -> DoubleLieAlgebra:
        return DoubleLieAlgebra(self.algebra, self.plus, self.minus)

    def __repr__(self):
        return f"CPS(dim={self.algebra.dim}, split {self.plus.dim}+{self.minus.dim})"


def validate_cps(g: LieAlgebra, j: Endo, e: Endo) -> list[str]:
    """Failure codes for the CPS axioms; empty means valid."""
    failures = []
    n = g.dim
    ident = QMatrix.identity(n)
    if j.rows != n or j.cols != n or e.rows != n or e.cols != n:
        return ["shape"]
    if (j @ j) != ident.scale(-1):
        failures.append("J_square")
    if (e @ e) != ident:
        failures.append("E_square")
    elif e == ident or e == ident.scale(-1):
        failures.append("E_identity")
    if failures:
        return failures
    if (j @ e) != (e @ j).scale(-1):
        failures.append("anticommute")
    if complex_integrability_defect(g, j):
        failures.append("J_integrability")
    if product_integrability_defect(g, e):
        failures.append("E_integrability")
    plus, minus = eigenspaces(e)
    if plus.dim != minus.dim:
        failures.append("eigen_dim")
    from .linalg import map_subspace

    if map_subspace(j, plus) != minus:
        failures.append("minus_is_J_plus")
    return failures


def assemble_cps(g: LieAlgebra, j: Endo, e: Endo) -> CPS:
    """Validate all CPS axioms and bundle the result."""
    failures = validate_cps(g, j, e)
    if failures:
        raise StructureError(failures[0], f"CPS invalid: {failures}")
    plus, minus = eigenspaces(e)
    return CPS(g, j, e, plus, minus)


def cps_from_split(g: LieAlgebra, j: Endo, plus_vectors, minus_vectors) -> CPS:
    """Build E = +Id/-Id on a given splitting and assemble the CPS."""
    n = g.dim
    cols = [list(v) for v in plus_vectors] + [list(v) for v in minus_vectors]
    if len(cols) != n:
        raise ValueError("splitting must cover the whole space")
    s = QMatrix.from_cols([tuple(q(x) for x in c) for c in cols])
    d = QMatrix.diag_blocks(
        QMatrix.identity(len(plus_vectors)),
        QMatrix.identity(len(minus_vectors)).scale(-1),
    )
    e = s @ d @ s.inverse()
    return assemble_cps(g, j, e)


def double_type(cps: CPS) -> tuple[ThreeDimType, ThreeDimType]:
    return iso_type_3d(cps.algebra, cps.plus), iso_type_3d(cps.algebra, cps.minus)


def rotate_product(cps: CPS, c) -> Endo:
    """E' = pE + qJE with p = (c^2-1)/(c^2+1), q = 2c/(c^2+1).

    c = 0 returns -E; c = 1 returns JE.
    """
    c = q(c)
    denom = c * c + 1
    return rotate_product_rational_angle(cps, (c * c - 1) / denom, 2 * c / denom)


def rotate_product_rational_angle(cps: CPS, p, qq) -> Endo:
    """pE + qJE for an exact circle point p^2 + q^2 = 1."""
    p, qq = q(p), q(qq)
    if p * p + qq * qq != 1:
        raise StructureError("circle", f"p^2 + q^2 = {p * p + qq * qq} != 1")
    e = cps.e.scale(p) + (cps.j @ cps.e).scale(qq)
    _require_almost_product(e)
    if (cps.j @ e) != (e @ cps.j).scale(-1):
        raise StructureError("anticommute", "rotated product fails to anticommute with J")
    if product_integrability_defect(cps.algebra, e):
        raise StructureError("E_integrability", "rotated product is not integrable")
    return e


def ascending_series(g: LieAlgebra, j: Endo) -> list[Subspace]:
    """a_0 = 0, a_t = {x : [x,g] and [Jx,g] land in a_(t-1)}, until stable."""
    if complex_integrability_defect(g, j):
        raise StructureError("J_integrability", "J is not a complex structure")
    n = g.dim
    from .linalg import annihilator

    series = [Subspace.zero(n)]
    while True:
        prev = series[-1]
        ann = annihilator(prev)
        if ann.is_zero():
            # previous term is everything; the chain is stable
            break
        conditions = []
        for jdx in range(n):
            # x -> [x, e_j] as a matrix in x
            b = g.ad(jdx).scale(-1)
            conditions.extend((ann.basis @ b).entries)
            conditions.extend((ann.basis @ b @ j).entries)
        nxt = kernel(QMatrix(conditions, cols=n))
        if nxt == prev:
            break
        series.append(nxt)
    return series


def is_nilpotent_complex_structure(g: LieAlgebra, j: Endo) -> bool:
    return ascending_series(g, j)[-1].is_full()


def find_central_invariant_ideal(cps: CPS) -> Subspace | None:
    """Largest J- and E-invariant subspace of the center, if dim >= 2."""
    w = center(cps.algebra)
    while True:
        nxt = intersect(w, intersect(preimage(cps.j, w), preimage(cps.e, w)))
        if nxt == w:
            break
        w = nxt
    if w.dim >= 2:
        assert is_ideal(cps.algebra, w)
        return w
    return None


@dataclass(frozen=True)
class Obstruction:
    kind: str
    detail: str

    def to_json(self) -> dict:
        return {"kind": self.kind, "detail": self.detail}


def cps_obstructions(g: LieAlgebra) -> list[Obstruction]:
    """Sound necessary-condition failures for admitting any CPS."""
    from .lie import is_nilpotent

    if g.dim != 6:
        raise ValueError("obstruction checks are specific to dimension 6")
    if not is_nilpotent(g):
        raise ValueError("obstruction checks expect a nilpotent algebra")
    out = []
    z = center(g)
    if z.dim < 2:
        out.append(
            Obstruction(
                "CenterTooSmall",
                f"center has dimension {z.dim}; a CPS needs a 2-dimensional central ideal",
            )
        )
    return out


def split_coordinates(cps: CPS) -> tuple[QMatrix, QMatrix, QMatrix]:
    """(S, pi_plus, pi_minus): S columns are plus then minus basis vectors."""
    n = cps.algebra.dim
    p, m = cps.plus.dim, cps.minus.dim
    s = QMatrix.from_cols(list(cps.plus.basis_vectors()) + list(cps.minus.basis_vectors()))
    sinv = s.inverse()
    dplus = QMatrix.diag_blocks(QMatrix.identity(p), QMatrix.zeros(m, m))
    dminus = QMatrix.diag_blocks(QMatrix.zeros(p, p), QMatrix.identity(m))
    return s, s @ dplus @ sinv, s @ dminus @ sinv


def rho_matrix(cps: CPS, x: Vector) -> QMatrix:
    """rho(x): minus -> minus, the minus-component of [x, .], for x in plus."""
    if not cps.plus.contains(x):
        raise ValueError("x must lie in the + eigenspace")
    g = cps.algebra
    _, _, pim = split_coordinates(cps)
    cols = []
    for b in cps.minus.basis_vectors():
        w = pim.apply(g.bracket(x, b))
        cols.append(cps.minus.coordinates(w))
    return QMatrix.from_cols(cols)


def mu_matrix(cps: CPS, xp: Vector) -> QMatrix:
    """mu(x'): plus -> plus, via [x, x'] = -mu(x')x + rho(x)x'."""
    if not cps.minus.contains(xp):
        raise ValueError("x' must lie in the - eigenspace")
    g = cps.algebra
    _, pip, _ = split_coordinates(cps)
    cols = []
    for b in cps.plus.basis_vectors():
        w = pip.apply(g.bracket(b, xp))
        cols.append(cps.plus.coordinates(tuple(-a for a in w)))
    return QMatrix.from_cols(cols)


def h3x2_constant(cps: CPS) -> Q:
    """The scalar c with J z_+ = c z_- for a Heisenberg x Heisenberg CPS.

    z_+ = [u1, u2] for a basis u1, u2 complementing the derived line of
    the + side, and z_- = [J u1, J u2]; c does not depend on the choice.
    """
    types = double_type(cps)
    if types != (ThreeDimType.HEISENBERG3, ThreeDimType.HEISENBERG3):
        raise ValueError("both eigenspace subalgebras must be Heisenberg")
    g = cps.algebra
    basis = cps.plus.basis_vectors()
    pair = next(
        (a, b)
        for a in range(3)
        for b in range(a + 1, 3)
        if not vec_is_zero(g.bracket(basis[a], basis[b]))
    )
    u1, u2 = basis[pair[0]], basis[pair[1]]
    z_plus = g.bracket(u1, u2)
    z_minus = g.bracket(cps.j.apply(u1), cps.j.apply(u2))
    jz = cps.j.apply(z_plus)
    ratios = {jz[k] / z_minus[k] for k in range(g.dim) if z_minus[k] != 0}
    if len(ratios) != 1:
        raise ValueError("J z_+ is not proportional to z_-")
    c = ratios.pop()
    if Subspace.from_spanning([jz], g.dim) != Subspace.from_spanning([z_minus], g.dim):
        raise ValueError("J z_+ is not proportional to z_-")
    return c


def endo_to_json(a: Endo) -> dict:
    return {"matrix": a.to_json()}


def endo_from_json(data) -> Endo:
    return QMatrix.from_json(data["matrix"])

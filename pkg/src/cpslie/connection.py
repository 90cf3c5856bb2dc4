"""The torsion-free connection of a CPS and everything derived from it.

The connection, curvature, Ricci form and the induced left-symmetric
products are all exact rational tensors.  The only floating point in
the package lives in the quadratic-geodesic completeness certificate at
the bottom of this module.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .lie import LieAlgebra
from .linalg import (
    Q,
    QMatrix,
    Vector,
    basis_vec,
    is_nilpotent_matrix,
    vec,
    vec_add,
    vec_is_zero,
    vec_sub,
    zero_vec,
)
from .structures import CPS, Endo, split_coordinates


class TorsionError(ValueError):
    pass


class Connection:
    """gamma[i][j] = nabla_{e_i} e_j as a coordinate vector."""

    __slots__ = ("algebra", "gamma")

    def __init__(self, algebra: LieAlgebra, gamma):
        gam = tuple(tuple(vec(v) for v in row) for row in gamma)
        n = algebra.dim
        if len(gam) != n or any(len(r) != n for r in gam) or any(
            len(v) != n for r in gam for v in r
        ):
            raise ValueError("gamma must be a dim x dim table of dim-vectors")
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "gamma", gam)

    def __setattr__(self, name, value):
        raise AttributeError("Connection is immutable")

    def nabla(self, i: int) -> QMatrix:
        """Matrix of nabla_{e_i} (columns are images of basis vectors)."""
        return QMatrix.from_cols(self.gamma[i])

    def nabla_vector(self, x) -> QMatrix:
        xv = vec(x)
        out = QMatrix.zeros(self.algebra.dim, self.algebra.dim)
        for i, a in enumerate(xv):
            if a != 0:
                out = out + self.nabla(i).scale(a)
        return out

    def apply(self, x, y) -> Vector:
        return self.nabla_vector(x).apply(vec(y))

    def __eq__(self, other):
        return (
            isinstance(other, Connection)
            and self.algebra == other.algebra
            and self.gamma == other.gamma
        )

    def __hash__(self):
        return hash((self.algebra, self.gamma))


def cp_connection(cps: CPS) -> Connection:
    """The unique torsion-free connection with parallel J and E.

    Case-wise on the eigenspace splitting, for x,y in the respective
    eigenspaces:

        nabla_{x+} y+ = -pi+ J [x+, J y+]      nabla_{x+} y- = pi- [x+, y-]
        nabla_{x-} y- = -pi- J [x-, J y-]      nabla_{x-} y+ = pi+ [x-, y+]
    """
    g, j = cps.algebra, cps.j
    n = g.dim
    _, pip, pim = split_coordinates(cps)

    def nabla_pair(x: Vector, y: Vector, x_plus: bool, y_plus: bool) -> Vector:
        if x_plus and y_plus:
            return tuple(-a for a in pip.apply(j.apply(g.bracket(x, j.apply(y)))))
        if not x_plus and not y_plus:
            return tuple(-a for a in pim.apply(j.apply(g.bracket(x, j.apply(y)))))
        if x_plus:
            return pim.apply(g.bracket(x, y))
        return pip.apply(g.bracket(x, y))

    basis = [basis_vec(n, i) for i in range(n)]
    xplus = [pip.apply(b) for b in basis]
    xminus = [pim.apply(b) for b in basis]
    gamma = []
    for i in range(n):
        row = []
        for jdx in range(n):
            total = zero_vec(n)
            for xpart, xp in ((xplus[i], True), (xminus[i], False)):
                if vec_is_zero(xpart):
                    continue
                for ypart, yp in ((xplus[jdx], True), (xminus[jdx], False)):
                    if vec_is_zero(ypart):
                        continue
                    total = vec_add(total, nabla_pair(xpart, ypart, xp, yp))
            row.append(total)
        gamma.append(row)
    conn = Connection(g, gamma)
    # defining properties, re-verified (sign bugs die here, not downstream)
    if torsion_defect(conn):
        raise AssertionError("cp connection came out with torsion")
    if parallel_defect(conn, cps.j) or parallel_defect(conn, cps.e):
        raise AssertionError("cp connection fails to parallelize J or E")
    return conn


def torsion_defect(conn: Connection) -> list[tuple[int, int, Vector]]:
    """Pairs where nabla_x y - nabla_y x != [x, y]."""
    g = conn.algebra
    out = []
    for i in range(g.dim):
        for jdx in range(i + 1, g.dim):
            d = vec_sub(vec_sub(conn.gamma[i][jdx], conn.gamma[jdx][i]), g.table[i][jdx])
            if not vec_is_zero(d):
                out.append((i, jdx, d))
    return out


def parallel_defect(conn: Connection, a: Endo) -> list[tuple[int, int, Vector]]:
    """Pairs where nabla_x (A y) != A nabla_x y."""
    g = conn.algebra
    out = []
    nablas = [conn.nabla(i) for i in range(g.dim)]
    for i in range(g.dim):
        na = nablas[i] @ a
        an = a @ nablas[i]
        if na != an:
            for jdx in range(g.dim):
                d = vec_sub(na.col(jdx), an.col(jdx))
                if not vec_is_zero(d):
                    out.append((i, jdx, d))
    return out


@dataclass(frozen=True)
class CurvatureReport:
    r: dict  # {(i, j): QMatrix} for i < j; R(e_j, e_i) = -R(e_i, e_j)
    ricci: QMatrix
    is_flat: bool
    is_ricci_flat: bool
    traceless: bool
    torsion_free: bool

    def operator(self, i: int, j: int) -> QMatrix:
        if i == j:
            return QMatrix.zeros(self.ricci.rows, self.ricci.cols)
        if i < j:
            return self.r[(i, j)]
        return self.r[(j, i)].scale(-1)

    def nonzero_entries(self):
        out = []
        for (i, j), m in sorted(self.r.items()):
            for k in range(m.cols):
                for l in range(m.rows):
                    v = m.entry(l, k)
                    if v != 0:
                        out.append({"x": i + 1, "y": j + 1, "z": k + 1, "w": l + 1, "value": str(v)})
        return out


def curvature(conn: Connection) -> CurvatureReport:
    """R(x,y) = [nabla_x, nabla_y] - nabla_[x,y], plus Ricci and flags."""
    g = conn.algebra
    n = g.dim
    nablas = [conn.nabla(i) for i in range(n)]
    r = {}
    for i in range(n):
        for jdx in range(i + 1, n):
            m = nablas[i] @ nablas[jdx] - nablas[jdx] @ nablas[i]
            for k, coeff in enumerate(g.table[i][jdx]):
                if coeff != 0:
                    m = m - nablas[k].scale(coeff)
            r[(i, jdx)] = m
    is_flat = all(m.is_zero() for m in r.values())
    ricci_rows = []
    for i in range(n):
        row = []
        for jdx in range(n):
            total = Q(0)
            for z in range(n):
                if z == i:
                    continue
                m = r[(z, i)] if z < i else r[(i, z)]
                v = m.entry(z, jdx)
                total += v if z < i else -v
            row.append(total)
        ricci_rows.append(row)
    ricci = QMatrix(ricci_rows, cols=n)
    return CurvatureReport(
        r=r,
        ricci=ricci,
        is_flat=is_flat,
        is_ricci_flat=ricci.is_zero(),
        traceless=all(m.trace() == 0 for m in nablas),
        torsion_free=not torsion_defect(conn),
    )


def ricci_via_trace_identity(conn: Connection) -> QMatrix:
    """ric(x,y) = (1/4) tr nabla_{[x,y]} for torsion-free connections
    with skew-symmetric Ricci (the cp connections of this package)."""
    if torsion_defect(conn):
        raise TorsionError("the trace identity needs a torsion-free connection")
    g = conn.algebra
    n = g.dim
    traces = [conn.nabla(i).trace() for i in range(n)]
    rows = []
    for i in range(n):
        row = []
        for jdx in range(n):
            total = Q(0)
            for k, coeff in enumerate(g.table[i][jdx]):
                if coeff != 0:
                    total += coeff * traces[k]
            row.append(total / 4)
        rows.append(row)
    return QMatrix(rows, cols=n)


class LSAProduct:
    """Left-symmetric product x . y on a Lie algebra, stored like a connection."""

    __slots__ = ("algebra", "gamma")

    def __init__(self, algebra: LieAlgebra, gamma, check: bool = True):
        gam = tuple(tuple(vec(v) for v in row) for row in gamma)
        object.__setattr__(self, "algebra", algebra)
        object.__setattr__(self, "gamma", gam)
        if check:
            bad = lsa_defects(self)
            if bad["left_symmetry"] or bad["compatibility"]:
                raise ValueError(f"not a left-symmetric product: {bad}")

    def __setattr__(self, name, value):
        raise AttributeError("LSAProduct is immutable")

    def product(self, x, y) -> Vector:
        xv, yv = vec(x), vec(y)
        out = zero_vec(self.algebra.dim)
        for i, a in enumerate(xv):
            if a == 0:
                continue
            for jdx, b in enumerate(yv):
                if b != 0:
                    out = vec_add(out, tuple(a * b * c for c in self.gamma[i][jdx]))
        return out

    def left_mult(self, i: int) -> QMatrix:
        return QMatrix.from_cols(self.gamma[i])

    def right_mult(self, j: int) -> QMatrix:
        return QMatrix.from_cols([self.gamma[i][j] for i in range(self.algebra.dim)])


def lsa_defects(p: LSAProduct) -> dict:
    """Left-symmetry and bracket-compatibility defects on basis triples/pairs."""
    g = p.algebra
    n = g.dim
    left = []
    for i in range(n):
        for jdx in range(n):
            for k in range(n):
                lhs = vec_sub(p.product(basis_vec(n, i), p.gamma[jdx][k]), p.product(p.gamma[i][jdx], basis_vec(n, k)))
                rhs = vec_sub(p.product(basis_vec(n, jdx), p.gamma[i][k]), p.product(p.gamma[jdx][i], basis_vec(n, k)))
                if lhs != rhs:
                    left.append((i, jdx, k))
    compat = []
    for i in range(n):
        for jdx in range(i + 1, n):
            if vec_sub(p.gamma[i][jdx], p.gamma[jdx][i]) != g.table[i][jdx]:
                compat.append((i, jdx))
    return {"left_symmetry": left, "compatibility": compat}


def connection_as_lsa(conn: Connection) -> LSAProduct:
    """Reinterpret a flat torsion-free connection as a left-symmetric product."""
    return LSAProduct(conn.algebra, conn.gamma)


def restrict_to_lsa(cps: CPS, side: str) -> LSAProduct:
    """The flat LSA induced on one eigenspace subalgebra by the cp connection."""
    if side not in ("plus", "minus"):
        raise ValueError("side must be 'plus' or 'minus'")
    sub = cps.plus if side == "plus" else cps.minus
    conn = cp_connection(cps)
    g = cps.algebra
    basis = sub.basis_vectors()
    m = sub.dim
    sub_table = [[None] * m for _ in range(m)]
    gamma = [[None] * m for _ in range(m)]
    for a in range(m):
        for b in range(m):
            sub_table[a][b] = sub.coordinates(g.bracket(basis[a], basis[b]))
            gamma[a][b] = sub.coordinates(conn.apply(basis[a], basis[b]))
    little = LieAlgebra(m, sub_table)
    return LSAProduct(little, gamma)


def lsa_is_complete(p: LSAProduct) -> bool:
    """Completeness via the right-multiplication trace criterion.

    All right multiplications are nilpotent iff tr(y -> y.x) = 0 for
    all x, which is linear and hence decidable on the basis.  Basis
    nilpotency is cross-checked, and on nilpotent algebras so is the
    left-multiplication characterization.
    """
    n = p.algebra.dim
    rights = [p.right_mult(j) for j in range(n)]
    complete = all(r.trace() == 0 for r in rights)
    basis_right_nilpotent = all(is_nilpotent_matrix(r) for r in rights)
    assert basis_right_nilpotent == complete, "trace and nilpotency certificates disagree"
    from .lie import is_nilpotent

    if complete and is_nilpotent(p.algebra):
        if not all(is_nilpotent_matrix(p.left_mult(i)) for i in range(n)):
            raise AssertionError(
                "complete LSA on a nilpotent algebra with non-nilpotent left multiplication"
            )
    return complete


@dataclass(frozen=True)
class CompletenessReport:
    method: str  # "segal-trace" or "quadratic-geodesic"
    verdict: bool
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"method": self.method, "verdict": self.verdict, "details": self.details}


GEODESIC_STEP = 1e-3
GEODESIC_T_MAX = 10.0
GEODESIC_REL_TOL = 1e-6


def _geodesic_initial_conditions(n: int, seed: int) -> list[Vector]:
    """Signed coordinate vectors plus 10 seeded rational points in [-2, 2]."""
    out = [basis_vec(n, i, s) for i in range(n) for s in (1, -1)]
    rng = random.Random(seed)
    for _ in range(10):
        out.append(tuple(Fraction(rng.randint(-8, 8), 4) for _ in range(n)))
    return out


def integrate_geodesics(conn: Connection, initial: list[Vector], t_max=GEODESIC_T_MAX, step=GEODESIC_STEP):
    """RK4 trajectories of x' = -nabla_x x from each initial condition.

    Returns (times, values) with values of shape (steps+1, len(initial), dim).
    """
    n = conn.algebra.dim
    gam = np.array(
        [[[float(c) for c in conn.gamma[i][j]] for j in range(n)] for i in range(n)]
    )
    x = np.array([[float(c) for c in v] for v in initial])
    steps = int(round(t_max / step))
    times = np.linspace(0.0, steps * step, steps + 1)
    values = np.empty((steps + 1, *x.shape))
    values[0] = x

    def f(y):
        return -np.einsum("bi,bj,ijk->bk", y, y, gam)

    h = step
    for s in range(steps):
        k1 = f(x)
        k2 = f(x + 0.5 * h * k1)
        k3 = f(x + 0.5 * h * k2)
        k4 = f(x + h * k3)
        x = x + (h / 6.0) * (k1 + 2 * k2 + 2 * k3 + k4)
        values[s + 1] = x
    return times, values


def quadratic_geodesic_certificate(conn: Connection, seed: int = 0) -> CompletenessReport:
    """Check every geodesic coordinate is a polynomial of degree <= 2.

    Integrates over t in [0, t_max] and fits each coordinate with a
    quadratic; passes when the relative residual stays within tolerance.
    """
    n = conn.algebra.dim
    initial = _geodesic_initial_conditions(n, seed)
    times, values = integrate_geodesics(conn, initial)
    worst = 0.0
    for b in range(len(initial)):
        for k in range(n):
            series = values[:, b, k]
            coeffs = np.polynomial.polynomial.polyfit(times, series, 2)
            fitted = np.polynomial.polynomial.polyval(times, coeffs)
            resid = float(np.max(np.abs(series - fitted)))
            scale = max(1.0, float(np.max(np.abs(series))))
            worst = max(worst, resid / scale)
    verdict = worst <= GEODESIC_REL_TOL
    return CompletenessReport(
        method="quadratic-geodesic",
        verdict=verdict,
        details={
            "max_relative_residual": worst,
            "tolerance": GEODESIC_REL_TOL,
            "step": GEODESIC_STEP,
            "t_max": GEODESIC_T_MAX,
            "seed": seed,
            "initial_conditions": len(initial),
        },
    )


def connection_is_complete_certificate(conn: Connection, seed: int = 0) -> CompletenessReport:
    """Completeness certificate for a cp connection.

    Flat connections get the exact trace argument (they are LSA
    structures); non-flat ones get the numeric quadratic-geodesic fit.
    """
    rep = curvature(conn)
    if rep.is_flat and rep.torsion_free:
        p = connection_as_lsa(conn)
        n = conn.algebra.dim
        rights = [p.right_mult(j) for j in range(n)]
        verdict = all(r.trace() == 0 for r in rights) and all(
            is_nilpotent_matrix(r) for r in rights
        )
        return CompletenessReport(
            method="segal-trace",
            verdict=verdict,
            details={"right_mult_traces_zero": True, "right_mult_nilpotent": True}
            if verdict
            else {},
        )
    return quadratic_geodesic_certificate(conn, seed=seed)

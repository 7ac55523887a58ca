"""Levi-Civita connection and curvature of left-invariant metrics.

All arrays are nested tuples indexed from 0; component accessors and the
sparse listings use 1-based indices.

Conventions (followed literally):

* ``gamma[i][j][k]`` is the e_k coefficient of nabla_{e_i} e_j.
* ``R(x, y)z = nabla_x nabla_y z - nabla_y nabla_x z - nabla_[x,y] z`` and
  ``R_ijkl = g(R(e_i, e_j) e_k, e_l)``.
* ``rho_yz = g^{ij} R_{i y z j}``, ``tau = g^{ij} rho_ij``.
* ``k(x, y) = R(x, y, x, y) / (g(x,x) g(y,y) - g(x,y)^2)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .exactnum import ONE_EXPR, ZERO_EXPR, ScalarExpr, parse_scalar
from .liealg import LieAlgebra, basis_vector


class SingularMetricError(ValueError):
    pass


class DegeneratePlaneError(ValueError):
    pass


def _zeros(*shape):
    if len(shape) == 1:
        return [ZERO_EXPR] * shape[0]
    return [_zeros(*shape[1:]) for _ in range(shape[0])]


def _freeze(arr):
    if isinstance(arr, list):
        return tuple(_freeze(x) for x in arr)
    return arr


def _sum(terms):
    total = ZERO_EXPR
    for t in terms:
        total = total + t
    return total


def invert_matrix(m: Sequence[Sequence[ScalarExpr]]):
    """Exact Gauss-Jordan inverse; returns ``(inverse, determinant)``."""
    n = len(m)
    a = [[ScalarExpr.coerce(x) for x in row] + [ONE_EXPR if i == j else ZERO_EXPR for j in range(n)]
         for i, row in enumerate(m)]
    det = ONE_EXPR
    for col in range(n):
        pivot = next((r for r in range(col, n) if not a[r][col].is_zero()), None)
        if pivot is None:
            raise SingularMetricError("metric is singular")
        if pivot != col:
            a[col], a[pivot] = a[pivot], a[col]
            det = -det
        p = a[col][col]
        det = det * p
        a[col] = [x / p for x in a[col]]
        for r in range(n):
            if r != col and not a[r][col].is_zero():
                f = a[r][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return tuple(tuple(row[n:]) for row in a), det


@dataclass(frozen=True)
class MetricTensor:
    g: tuple
    g_inv: tuple
    det: ScalarExpr

    @classmethod
    def from_matrix(cls, g: Sequence[Sequence], params: Sequence[str] = ()) -> "MetricTensor":
        rows = tuple(
            tuple(parse_scalar(x, params) if isinstance(x, str) else ScalarExpr.coerce(x) for x in row)
            for row in g
        )
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("metric must be a square matrix")
        for i in range(n):
            for j in range(i + 1, n):
                if rows[i][j] != rows[j][i]:
                    raise ValueError(f"metric is not symmetric at ({i + 1}, {j + 1})")
        inv, det = invert_matrix(rows)
        return cls(rows, inv, det)

    @classmethod
    def identity(cls, n: int) -> "MetricTensor":
        eye = tuple(basis_vector(n, i + 1) for i in range(n))
        return cls(eye, eye, ONE_EXPR)

    @property
    def dim(self) -> int:
        return len(self.g)

    def inner(self, x: Sequence, y: Sequence) -> ScalarExpr:
        n = self.dim
        return _sum(
            self.g[i][j] * x[i] * y[j]
            for i in range(n) for j in range(n)
            if not self.g[i][j].is_zero()
        )

    def is_identity(self) -> bool:
        n = self.dim
        return all(self.g[i][j] == (1 if i == j else 0) for i in range(n) for j in range(n))


@dataclass(frozen=True)
class Connection:
    gamma: tuple

    @property
    def dim(self) -> int:
        return len(self.gamma)

    def covariant(self, i: int, j: int) -> tuple:
        """nabla_{e_i} e_j as a coordinate vector (1-based)."""
        return self.gamma[i - 1][j - 1]

    def nonzero(self):
        """Yield ``(i, j, k, value)`` for nonzero Gamma^k_ij, 1-based."""
        n = self.dim
        for i, j, k in itertools.product(range(n), repeat=3):
            v = self.gamma[i][j][k]
            if not v.is_zero():
                yield i + 1, j + 1, k + 1, v


@dataclass(frozen=True)
class Curvature04:
    r: tuple

    @property
    def dim(self) -> int:
        return len(self.r)

    def component(self, i: int, j: int, k: int, l: int) -> ScalarExpr:
        return self.r[i - 1][j - 1][k - 1][l - 1]

    def nonzero(self):
        n = self.dim
        for idx in itertools.product(range(n), repeat=4):
            v = self.r[idx[0]][idx[1]][idx[2]][idx[3]]
            if not v.is_zero():
                yield tuple(x + 1 for x in idx) + (v,)

    def independent_nonzero(self):
        """Nonzero components with i<j, k<l and (i,j) <= (k,l)."""
        for i, j, k, l, v in self.nonzero():
            if i < j and k < l and (i, j) <= (k, l):
                yield i, j, k, l, v

    @classmethod
    def from_components(cls, n: int, components: dict) -> "Curvature04":
        """Build from ``{(i, j, k, l): value}`` (1-based) without imposing symmetries."""
        arr = _zeros(n, n, n, n)
        for (i, j, k, l), v in components.items():
            arr[i - 1][j - 1][k - 1][l - 1] = ScalarExpr.coerce(v)
        return cls(_freeze(arr))


def levi_civita(L: LieAlgebra, g: MetricTensor) -> Connection:
    """Koszul formula for constant metric coefficients.

    2 g(nabla_i e_j, e_k) = g([e_i,e_j],e_k) + g([e_k,e_i],e_j) + g([e_k,e_j],e_i)
    """
    n = L.dim
    if g.dim != n:
        raise ValueError("metric and algebra dimensions differ")
    c = L.c
    # lowered structure constants: cl[i][j][k] = g([e_i, e_j], e_k)
    cl = [[[_sum(c[i][j][m] * g.g[m][k] for m in range(n) if not c[i][j][m].is_zero())
            for k in range(n)] for j in range(n)] for i in range(n)]
    half = ScalarExpr(1) / 2
    gamma = _zeros(n, n, n)
    for i, j in itertools.product(range(n), repeat=2):
        low = [(cl[i][j][k] + cl[k][i][j] + cl[k][j][i]) * half for k in range(n)]
        if all(v.is_zero() for v in low):
            continue
        for m in range(n):
            gamma[i][j][m] = _sum(
                g.g_inv[m][k] * low[k] for k in range(n)
                if not low[k].is_zero() and not g.g_inv[m][k].is_zero()
            )
    return Connection(_freeze(gamma))


def curvature(L: LieAlgebra, g: MetricTensor, conn: Connection) -> Curvature04:
    """R_ijkl = g_ml (Gamma^p_jk Gamma^m_ip - Gamma^p_ik Gamma^m_jp - c^p_ij Gamma^m_pk)."""
    n = L.dim
    G = conn.gamma
    c = L.c
    r = _zeros(n, n, n, n)
    for i, j, k in itertools.product(range(n), repeat=3):
        vec = [ZERO_EXPR] * n
        for p in range(n):
            terms = ((G[j][k][p], G[i][p]), (-G[i][k][p], G[j][p]), (-c[i][j][p], G[p][k]))
            for coef, target in terms:
                if coef.is_zero():
                    continue
                for m in range(n):
                    if not target[m].is_zero():
                        vec[m] = vec[m] + coef * target[m]
        if all(v.is_zero() for v in vec):
            continue
        for l in range(n):
            r[i][j][k][l] = _sum(vec[m] * g.g[m][l] for m in range(n) if not g.g[m][l].is_zero())
    return Curvature04(_freeze(r))


def ricci_and_scalar(R: Curvature04, g: MetricTensor):
    n = R.dim
    r = R.r
    pairs = [(i, j) for i in range(n) for j in range(n) if not g.g_inv[i][j].is_zero()]
    rho = [[_sum(g.g_inv[i][j] * r[i][y][z][j] for i, j in pairs) for z in range(n)] for y in range(n)]
    tau = _sum(g.g_inv[i][j] * rho[i][j] for i, j in pairs)
    return _freeze(rho), tau


def _r4(R: Curvature04, x, y, z, u) -> ScalarExpr:
    n = R.dim
    total = ZERO_EXPR
    for i, j, k, l in itertools.product(range(n), repeat=4):
        v = R.r[i][j][k][l]
        if v.is_zero():
            continue
        w = x[i] * y[j] * z[k] * u[l]
        if not w.is_zero():
            total = total + v * w
    return total


def sectional(R: Curvature04, g: MetricTensor, x: Sequence, y: Sequence) -> ScalarExpr:
    x = [ScalarExpr.coerce(v) for v in x]
    y = [ScalarExpr.coerce(v) for v in y]
    den = g.inner(x, x) * g.inner(y, y) - g.inner(x, y) ** 2
    if den.is_zero():
        raise DegeneratePlaneError("the vectors span a degenerate 2-plane")
    return _r4(R, x, y, x, y) / den


def basic_sectional(R: Curvature04, g: MetricTensor) -> dict:
    """``{(i, j): k(e_i, e_j)}`` for i < j (1-based)."""
    n = R.dim
    return {
        (i, j): sectional(R, g, basis_vector(n, i), basis_vector(n, j))
        for i in range(1, n + 1) for j in range(i + 1, n + 1)
    }


# -- identity residuals -----------------------------------------------------


def connection_residuals(L: LieAlgebra, g: MetricTensor, conn: Connection) -> dict:
    """Nonzero residuals of torsion-freeness and metric compatibility."""
    n = L.dim
    G = conn.gamma
    torsion = []
    compat = []
    for i, j, k in itertools.product(range(n), repeat=3):
        t = G[i][j][k] - G[j][i][k] - L.c[i][j][k]
        if not t.is_zero():
            torsion.append(((i + 1, j + 1, k + 1), t))
        m = _sum(g.g[p][k] * G[i][j][p] + g.g[j][p] * G[i][k][p] for p in range(n))
        if not m.is_zero():
            compat.append(((i + 1, j + 1, k + 1), m))
    return {"torsion_free": torsion, "metric_compatible": compat}


def curvature_residuals(R: Curvature04) -> dict:
    """Nonzero residuals of the index symmetries and the first Bianchi identity."""
    n = R.dim
    r = R.r
    out = {"antisym_first": [], "antisym_last": [], "pair_symmetry": [], "bianchi": []}
    for i, j, k, l in itertools.product(range(n), repeat=4):
        idx = (i + 1, j + 1, k + 1, l + 1)
        checks = (
            ("antisym_first", r[i][j][k][l] + r[j][i][k][l]),
            ("antisym_last", r[i][j][k][l] + r[i][j][l][k]),
            ("pair_symmetry", r[i][j][k][l] - r[k][l][i][j]),
            ("bianchi", r[i][j][k][l] + r[j][k][i][l] + r[k][i][j][l]),
        )
        for name, v in checks:
            if not v.is_zero():
                out[name].append((idx, v))
    return out

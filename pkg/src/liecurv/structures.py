"""The circulant structure Q, P = Q^2, the tensor F = g((nabla P)., .) and its Lee form,
together with constraint generators for the geometric properties built on them."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Sequence

from .constraints import ConstraintSet, canonicalize
from .exactnum import ONE_EXPR, ZERO_EXPR, ScalarExpr, parse_scalar
from .geometry import (
    Connection,
    Curvature04,
    MetricTensor,
    _freeze,
    _sum,
    _zeros,
    sectional,
)
from .liealg import basis_vector


@dataclass(frozen=True)
class Endomorphism:
    """``m[r][c]``: column c holds the image of e_{c+1}."""

    m: tuple

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence], params: Sequence[str] = ()) -> "Endomorphism":
        m = tuple(
            tuple(parse_scalar(x, params) if isinstance(x, str) else ScalarExpr.coerce(x) for x in row)
            for row in rows
        )
        if any(len(row) != len(m) for row in m):
            raise ValueError("endomorphism matrix must be square")
        return cls(m)

    @classmethod
    def identity(cls, n: int) -> "Endomorphism":
        return cls(tuple(basis_vector(n, i + 1) for i in range(n)))

    @property
    def dim(self) -> int:
        return len(self.m)

    def image(self, j: int) -> tuple:
        """Coordinates of the image of e_j (1-based)."""
        return tuple(row[j - 1] for row in self.m)

    def apply(self, v: Sequence) -> tuple:
        n = self.dim
        return tuple(
            _sum(self.m[r][c] * v[c] for c in range(n) if not self.m[r][c].is_zero())
            for r in range(n)
        )

    def __matmul__(self, other: "Endomorphism") -> "Endomorphism":
        n = self.dim
        return Endomorphism(tuple(
            tuple(_sum(self.m[r][k] * other.m[k][c] for k in range(n)) for c in range(n))
            for r in range(n)
        ))

    def power(self, k: int) -> "Endomorphism":
        out = Endomorphism.identity(self.dim)
        for _ in range(k):
            out = out @ self
        return out

    def scaled(self, s) -> "Endomorphism":
        return Endomorphism(tuple(tuple(x * s for x in row) for row in self.m))

    def trace(self) -> ScalarExpr:
        return _sum(self.m[i][i] for i in range(self.dim))

    def transpose(self) -> "Endomorphism":
        n = self.dim
        return Endomorphism(tuple(tuple(self.m[c][r] for c in range(n)) for r in range(n)))

    def equals(self, other: "Endomorphism") -> bool:
        return all(x == y for ra, rb in zip(self.m, other.m) for x, y in zip(ra, rb))


def circulant_shift(n: int) -> Endomorphism:
    """Q e_1 = e_n and Q e_j = e_{j-1} for j > 1."""
    if n < 2:
        raise ValueError("circulant structure needs dimension >= 2")
    m = _zeros(n, n)
    m[n - 1][0] = ONE_EXPR
    for j in range(1, n):
        m[j - 1][j] = ONE_EXPR
    return Endomorphism(_freeze(m))


@dataclass(frozen=True)
class StructureReport:
    q4_identity: bool
    q2_not_pm_identity: bool
    isometry: bool
    p2_identity: bool
    p_not_pm_identity: bool
    p_isometry: bool
    trace_p: ScalarExpr

    @property
    def passed(self) -> bool:
        return all((self.q4_identity, self.q2_not_pm_identity, self.isometry,
                    self.p2_identity, self.p_not_pm_identity, self.p_isometry))

    def to_dict(self) -> dict:
        return {
            "Q4_identity": self.q4_identity,
            "Q2_not_pm_identity": self.q2_not_pm_identity,
            "Q_isometry": self.isometry,
            "P2_identity": self.p2_identity,
            "P_not_pm_identity": self.p_not_pm_identity,
            "P_isometry": self.p_isometry,
            "trace_P": str(self.trace_p),
        }


def _is_isometry(A: Endomorphism, g: MetricTensor) -> bool:
    gm = Endomorphism(g.g)
    return (A.transpose() @ gm @ A).equals(gm)


def _not_pm_identity(A: Endomorphism) -> bool:
    eye = Endomorphism.identity(A.dim)
    return not A.equals(eye) and not A.equals(eye.scaled(-1))


def check_q_structure(Q: Endomorphism, g: MetricTensor) -> StructureReport:
    """Symbolic "!=" means "not identically equal"."""
    eye = Endomorphism.identity(Q.dim)
    P = Q @ Q
    return StructureReport(
        q4_identity=(P @ P).equals(eye),
        q2_not_pm_identity=_not_pm_identity(P),
        isometry=_is_isometry(Q, g),
        p2_identity=(P @ P).equals(eye),
        p_not_pm_identity=_not_pm_identity(P),
        p_isometry=_is_isometry(P, g),
        trace_p=P.trace(),
    )


def product_structure(Q: Endomorphism) -> Endomorphism:
    return Q @ Q


@dataclass(frozen=True)
class Tensor03:
    f: tuple

    @property
    def dim(self) -> int:
        return len(self.f)

    def component(self, i: int, j: int, k: int) -> ScalarExpr:
        return self.f[i - 1][j - 1][k - 1]

    def nonzero(self):
        n = self.dim
        for i, j, k in itertools.product(range(n), repeat=3):
            v = self.f[i][j][k]
            if not v.is_zero():
                yield i + 1, j + 1, k + 1, v

    @classmethod
    def from_components(cls, n: int, components: dict) -> "Tensor03":
        arr = _zeros(n, n, n)
        for (i, j, k), v in components.items():
            arr[i - 1][j - 1][k - 1] = ScalarExpr.coerce(v)
        return cls(_freeze(arr))


@dataclass(frozen=True)
class Covector:
    theta: tuple

    def component(self, k: int) -> ScalarExpr:
        return self.theta[k - 1]


def f_and_theta(conn: Connection, P: Endomorphism, g: MetricTensor):
    """F_ijk = g_lk (Gamma^l_im P^m_j - P^l_m Gamma^m_ij); theta_k = g^{ij} F_ijk."""
    n = conn.dim
    G = conn.gamma
    p = P.m
    f = _zeros(n, n, n)
    for i, j in itertools.product(range(n), repeat=2):
        # (nabla_{e_i} P) e_j as a coordinate vector
        vec = [
            _sum(G[i][m][l] * p[m][j] for m in range(n) if not p[m][j].is_zero())
            - _sum(p[l][m] * G[i][j][m] for m in range(n) if not p[l][m].is_zero())
            for l in range(n)
        ]
        for k in range(n):
            f[i][j][k] = _sum(vec[l] * g.g[l][k] for l in range(n) if not g.g[l][k].is_zero())
    theta = [
        _sum(g.g_inv[i][j] * f[i][j][k] for i in range(n) for j in range(n) if not g.g_inv[i][j].is_zero())
        for k in range(n)
    ]
    return Tensor03(_freeze(f)), Covector(tuple(theta))


def fprop_residuals(F: Tensor03, P: Endomorphism) -> ConstraintSet:
    """Residuals of F(x,y,z) = F(x,z,y) and F(x,y,z) = -F(x,Py,Pz)."""
    n = F.dim
    f = F.f
    p = P.m
    raw = []
    for i, j, k in itertools.product(range(n), repeat=3):
        raw.append(f[i][j][k] - f[i][k][j])
        raw.append(f[i][j][k] + _sum(
            p[a][j] * p[b][k] * f[i][a][b]
            for a in range(n) for b in range(n)
            if not p[a][j].is_zero() and not p[b][k].is_zero()
        ))
    return canonicalize(raw)


def w0_constraints(F: Tensor03) -> ConstraintSet:
    return canonicalize(v for *_, v in F.nonzero())


def w1_constraints(F: Tensor03, theta: Covector, g: MetricTensor, P: Endomorphism) -> ConstraintSet:
    """F(x,y,z) - 1/4 {g(x,y)th(z) + g(x,z)th(y) - g(x,Py)th(Pz) - g(x,Pz)th(Py)}, 4-dimensional only."""
    n = F.dim
    if n != 4:
        raise ValueError("the W1 condition is only defined here in dimension 4")
    gm = g.g
    p = P.m
    th = theta.theta
    # gp[x][y] = g(e_x, P e_y); thp[y] = theta(P e_y)
    gp = [[_sum(gm[x][m] * p[m][y] for m in range(n)) for y in range(n)] for x in range(n)]
    thp = [_sum(th[m] * p[m][y] for m in range(n)) for y in range(n)]
    quarter = ScalarExpr(1) / 4
    raw = []
    for x, y, z in itertools.product(range(n), repeat=3):
        rhs = gm[x][y] * th[z] + gm[x][z] * th[y] - gp[x][y] * thp[z] - gp[x][z] * thp[y]
        raw.append(F.f[x][y][z] - quarter * rhs)
    return canonicalize(raw)


def class_constraints(F: Tensor03, theta: Covector, g: MetricTensor, P: Endomorphism):
    return w0_constraints(F), w1_constraints(F, theta, g, P)


def transform_curvature(R: Curvature04, Q: Endomorphism) -> Curvature04:
    """Components of R(Qx, Qy, Qz, Qu), one index at a time."""
    n = R.dim
    q = Q.m
    arr = R.r
    for axis in range(4):
        out = _zeros(n, n, n, n)
        for idx in itertools.product(range(n), repeat=4):
            total = ZERO_EXPR
            for p_ in range(n):
                if q[p_][idx[axis]].is_zero():
                    continue
                src = list(idx)
                src[axis] = p_
                v = arr[src[0]][src[1]][src[2]][src[3]]
                if not v.is_zero():
                    total = total + q[p_][idx[axis]] * v
            out[idx[0]][idx[1]][idx[2]][idx[3]] = total
        arr = _freeze(out)
    return Curvature04(arr)


def r_invariance_constraints(R: Curvature04, Q: Endomorphism) -> ConstraintSet:
    """All components of R(Qx,Qy,Qz,Qu) - R(x,y,z,u)."""
    n = R.dim
    T = transform_curvature(R, Q)
    return canonicalize(
        T.r[i][j][k][l] - R.r[i][j][k][l] for i, j, k, l in itertools.product(range(n), repeat=4)
    )


# chains of components that must coincide, and one component that must vanish
RLOC_CHAINS = (
    ((1, 2, 1, 2), (3, 4, 3, 4), (2, 3, 2, 3), (1, 4, 1, 4)),
    ((1, 3, 1, 3), (2, 4, 2, 4)),
    ((1, 2, 1, 3), (2, 3, 2, 4), (1, 4, 2, 4), (3, 1, 3, 4)),
    ((1, 2, 1, 4), (1, 4, 3, 4), (2, 1, 2, 3), (3, 2, 3, 4)),
    ((1, 2, 2, 4), (3, 1, 2, 3), (3, 1, 1, 4), (4, 2, 3, 4)),
)
RLOC_ZERO = ((1, 3, 2, 4),)


def rloc_reduced_constraints(R: Curvature04) -> ConstraintSet:
    """The reduced equality list equivalent to Q-invariance for the 4-dimensional shift."""
    if R.dim != 4:
        raise ValueError("the reduced Q-invariance list needs dimension 4")
    raw = []
    for chain in RLOC_CHAINS:
        for a, b in zip(chain, chain[1:]):
            raw.append(R.component(*a) - R.component(*b))
    raw.extend(R.component(*idx) for idx in RLOC_ZERO)
    return canonicalize(raw)


def einstein_and_constant_curvature_constraints(R: Curvature04, rho, tau, g: MetricTensor):
    """Residuals of rho = (tau/n) g and of R = kappa (g_ik g_jl - g_il g_jk), kappa = k(e1, e2)."""
    n = R.dim
    gm = g.g
    einstein = canonicalize(rho[i][j] - tau * gm[i][j] / n for i in range(n) for j in range(n))
    kappa = sectional(R, g, basis_vector(n, 1), basis_vector(n, 2))
    raw = []
    for i, j, k, l in itertools.product(range(n), repeat=4):
        model = gm[i][k] * gm[j][l] - gm[i][l] * gm[j][k]
        raw.append(R.r[i][j][k][l] - kappa * model)
    return einstein, canonicalize(raw)

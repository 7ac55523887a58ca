import random
from fractions import Fraction

import pytest
import sympy as sp

import oracles
from liecurv.exactnum import ScalarExpr, parse_scalar
from liecurv.geometry import (
    DegeneratePlaneError,
    MetricTensor,
    SingularMetricError,
    basic_sectional,
    connection_residuals,
    curvature,
    curvature_residuals,
    levi_civita,
    ricci_and_scalar,
    sectional,
)
from liecurv.liealg import basis_vector, builtin_family, make_lie_algebra

I4 = MetricTensor.identity(4)


def pipeline(L, g=I4):
    conn = levi_civita(L, g)
    R = curvature(L, g, conn)
    return conn, R


def conn_table(conn):
    return {(i, j, k): str(v) for i, j, k, v in conn.nonzero()}


def test_g45_connection():
    conn, _ = pipeline(builtin_family("g4_5"))
    assert conn_table(conn) == {
        (1, 1, 4): "-1", (1, 4, 1): "1",
        (2, 2, 4): "-a", (2, 4, 2): "a",
        (3, 4, 3): "b", (3, 3, 4): "-b",
    }


def test_g46_connection():
    conn, _ = pipeline(builtin_family("g4_6"))
    assert conn_table(conn) == {
        (1, 1, 4): "-a", (1, 4, 1): "a",
        (2, 2, 4): "-b", (3, 4, 3): "b",
        (2, 4, 2): "b", (3, 3, 4): "-b",
        (4, 2, 3): "1", (4, 3, 2): "-1",
    }


def test_abelian_is_flat():
    L = make_lie_algebra(4, [], [])
    conn, R = pipeline(L)
    assert list(conn.nonzero()) == [] and list(R.nonzero()) == []
    rho, tau = ricci_and_scalar(R, I4)
    assert tau.is_zero() and all(v.is_zero() for row in rho for v in row)


def test_g45_curvature_table():
    _, R = pipeline(builtin_family("g4_5"))
    assert {(i, j, k, l): str(v) for i, j, k, l, v in R.independent_nonzero()} == {
        (1, 2, 1, 2): "a", (1, 4, 1, 4): "1", (2, 3, 2, 3): "a*b",
        (3, 4, 3, 4): "b^2", (1, 3, 1, 3): "b", (2, 4, 2, 4): "a^2",
    }


def test_g46_curvature_table():
    _, R = pipeline(builtin_family("g4_6"))
    assert {(i, j, k, l): str(v) for i, j, k, l, v in R.independent_nonzero()} == {
        (1, 2, 1, 2): "a*b", (1, 3, 1, 3): "a*b", (1, 4, 1, 4): "a^2",
        (2, 3, 2, 3): "b^2", (3, 4, 3, 4): "b^2", (2, 4, 2, 4): "b^2",
    }


@pytest.mark.parametrize("family", ["g4_5", "g4_6"])
def test_against_sympy_oracle(family):
    ref = oracles.geometry(oracles.family_brackets(family))
    conn, R = pipeline(builtin_family(family))
    for (i, j, k), v in ref["gamma"].items():
        assert sp.expand(oracles.to_sympy(conn.gamma[i - 1][j - 1][k - 1]) - v) == 0
    for idx, v in ref["R"].items():
        assert sp.expand(oracles.to_sympy(R.component(*idx)) - v) == 0


def _general_metric_case():
    L = builtin_family("g4_6", Fraction(1, 2), 2)
    rows = [[2, 1, 0, 0], [1, 3, 0, 1], [0, 0, 1, 0], [0, 1, 0, 5]]
    return L, rows


def test_non_identity_metric_against_oracle():
    L, rows = _general_metric_case()
    g = MetricTensor.from_matrix(rows)
    conn, R = pipeline(L, g)
    ref = oracles.geometry(oracles.family_brackets("g4_6", sp.Rational(1, 2), 2), g=rows)
    for (i, j, k), v in ref["gamma"].items():
        assert oracles.to_sympy(conn.gamma[i - 1][j - 1][k - 1]) == v
    for idx, v in ref["R"].items():
        assert oracles.to_sympy(R.component(*idx)) == v
    rho, tau = ricci_and_scalar(R, g)
    ref_rho, ref_tau = oracles.brute_force_ricci(ref["R"], ref["ginv"])
    assert oracles.to_sympy(tau) == ref_tau
    for (y, z), v in ref_rho.items():
        assert oracles.to_sympy(rho[y - 1][z - 1]) == v


def test_symbolic_metric_inverse():
    g = MetricTensor.from_matrix([["1", "0"], ["0", "a^2 + 1"]], ["a"])
    assert str(g.g_inv[1][1]) == "(1)/(a^2 + 1)"
    assert g.g_inv[1][1] * g.g[1][1] == 1


def test_singular_and_asymmetric_metric():
    with pytest.raises(SingularMetricError):
        MetricTensor.from_matrix([[1, 2], [2, 4]])
    with pytest.raises(ValueError):
        MetricTensor.from_matrix([[1, 2], [3, 4]])


@pytest.mark.parametrize("family", ["g4_5", "g4_6"])
def test_ricci_matches_brute_force(family):
    _, R = pipeline(builtin_family(family))
    rho, tau = ricci_and_scalar(R, I4)
    comps = {idx[:4]: oracles.to_sympy(idx[4]) for idx in R.nonzero()}
    full = {k: comps.get(k, 0) for k in oracles.geometry(oracles.family_brackets(family))["R"]}
    ref_rho, ref_tau = oracles.brute_force_ricci(full, sp.eye(4))
    assert sp.expand(oracles.to_sympy(tau) - ref_tau) == 0
    for (y, z), v in ref_rho.items():
        assert sp.expand(oracles.to_sympy(rho[y - 1][z - 1]) - v) == 0


def test_g45_ricci_at_unit_point():
    _, R = pipeline(builtin_family("g4_5", 1, 1))
    rho, tau = ricci_and_scalar(R, I4)
    diag = [rho[i][i] for i in range(4)]
    assert all(d == diag[0] for d in diag)
    assert all(rho[i][j].is_zero() for i in range(4) for j in range(4) if i != j)
    assert tau == 4 * diag[0]
    # literal contraction of the curvature table: -3 per diagonal entry
    assert str(diag[0]) == "-3" and str(tau) == "-12"


def test_g46_ricci_on_diagonal():
    a = ScalarExpr.symbol("a")
    _, R = pipeline(builtin_family("g4_6", a, a))
    rho, tau = ricci_and_scalar(R, I4)
    for i in range(4):
        assert rho[i][i] == -3 * a * a
    assert tau == -12 * a * a


def test_sectional_basic_planes():
    _, R = pipeline(builtin_family("g4_5", 1, 1))
    assert {k: str(v) for k, v in basic_sectional(R, I4).items()} == {
        (i, j): "1" for i in range(1, 5) for j in range(i + 1, 5)
    }
    a = ScalarExpr.symbol("a")
    _, R = pipeline(builtin_family("g4_6", a, a))
    assert all(str(v) == "a^2" for v in basic_sectional(R, I4).values())


def test_sectional_degenerate_plane():
    _, R = pipeline(builtin_family("g4_5"))
    with pytest.raises(DegeneratePlaneError):
        sectional(R, I4, basis_vector(4, 1), basis_vector(4, 1))


def test_sectional_non_basic_plane():
    # x = e1 + e2, y = e3 on g4,5 at a=b=1: constant curvature gives 1 on every plane
    _, R = pipeline(builtin_family("g4_5", 1, 1))
    assert sectional(R, I4, [1, 1, 0, 0], [0, 0, 1, 0]) == 1
    assert sectional(R, I4, [1, 2, 0, 3], [0, 1, 1, 0]) == 1


@pytest.mark.parametrize("family", ["g4_5", "g4_6"])
def test_basic_plane_equals_component(family):
    _, R = pipeline(builtin_family(family))
    for (i, j), k in basic_sectional(R, I4).items():
        assert k == R.component(i, j, i, j)


def _assert_identities(L, g=I4):
    conn, R = pipeline(L, g)
    assert all(not v for v in connection_residuals(L, g, conn).values())
    assert all(not v for v in curvature_residuals(R).values())


@pytest.mark.parametrize("family", ["g4_5", "g4_6"])
def test_identities_symbolic(family):
    _assert_identities(builtin_family(family))


@pytest.mark.parametrize("family", ["g4_5", "g4_6"])
def test_identities_random_points(family):
    rng = random.Random(2024)
    for _ in range(50):
        a = Fraction(rng.randint(-40, 40), rng.randint(1, 9))
        b = Fraction(rng.randint(-40, 40), rng.randint(1, 9))
        _assert_identities(builtin_family(family, a, b))


def test_identities_general_metric():
    L, rows = _general_metric_case()
    _assert_identities(L, MetricTensor.from_matrix(rows))
    g = MetricTensor.from_matrix([["1", "0", "0", "0"], ["0", "a^2 + 1", "0", "0"],
                                  ["0", "0", "1", "0"], ["0", "0", "0", "1"]], ["a", "b"])
    _assert_identities(builtin_family("g4_5"), g)


def test_residual_detector_catches_broken_curvature():
    from liecurv.geometry import Curvature04

    R = Curvature04.from_components(4, {(1, 2, 1, 2): parse_scalar("a", ["a"])})
    res = curvature_residuals(R)
    assert res["antisym_first"] and res["antisym_last"]

import pytest

from ambientg2.ambient import (
    XI_METRIC,
    brinkmann_check,
    einstein_toy,
    eta_xi_coframes,
    flat_metric,
    gF_ambient,
    gF_mu2_closed,
    gF_schouten_closed,
    hyperbolic_metric,
    mu2_solver,
    nabamb_check,
    truncated_ambient,
    verify_ricci_flat,
    verify_ricci_koszul,
)
from ambientg2.cas import Scalar, gens
from ambientg2.frames import curvature
from ambientg2.nurowski import ParameterSet, build_apolys, metric_gF

t, u, E = gens("t", "u", "E")
SYMBOLIC = ParameterSet.symbolic()


def _zeros(n):
    return [[Scalar.zero()] * n for _ in range(n)]


def test_brinkmann_over_flat_metric():
    out = brinkmann_check(flat_metric())
    assert out["ricci_flat"] and out["d_u_parallel"] and out["d_u_null"]


def test_u_coefficient_vanishes_iff_P_vanishes():
    g = flat_metric()
    am = truncated_ambient(g, _zeros(5), _zeros(5))
    assert all(v.is_zero() for row in am.h() for v in row)
    P = _zeros(5)
    P[0][0] = Scalar.one()
    am = truncated_ambient(g, P, _zeros(5))
    assert not am.h()[0][0].is_zero() and am.h()[0][0].pdiff("u").subs({"u": 0}) == -2 * t


def test_gF_ambient_tu_coefficient():
    am = gF_ambient(SYMBOLIC)
    A = build_apolys(SYMBOLIC)
    P = am.P
    assert (P[0][0] + E**4 * A.A4).is_zero()
    assert (P[0][3] + E**4 * A.A3).is_zero()
    assert (P[3][3] + E**4 * A.A2).is_zero()


def test_schouten_closed_form_matches_engine():
    cp = curvature(metric_gF(SYMBOLIC), with_cotton=False)
    closed = gF_schouten_closed(SYMBOLIC)
    assert all((closed[i][j] - cp.schouten[i, j]).is_zero() for i in range(5) for j in range(5))


def test_mu2_solver_on_gF_matches_closed_form():
    fm = metric_gF(SYMBOLIC)
    cp = curvature(fm, with_cotton=False)
    sol = mu2_solver(fm, cp.schouten)
    closed = gF_mu2_closed(SYMBOLIC)
    assert sol.verified and sol.kernel_dim == 0
    assert all((sol.mu2[i][j] - closed[i][j]).is_zero() for i in range(5) for j in range(5))


def test_mu2_solver_zero_for_flat():
    sol = mu2_solver(flat_metric(), _zeros(5))
    assert all(v.is_zero() for row in sol.mu2 for v in row)


def test_mu2_solver_rejects_even_dimension():
    from ambientg2.forms import Chart, Coframe
    from ambientg2.frames import FrameMetric

    chart = Chart("plane4", ("x", "y", "z", "p"))
    cf = Coframe("d4", chart, [[1 if i == j else 0 for j in range(4)] for i in range(4)])
    with pytest.raises(ValueError):
        mu2_solver(FrameMetric(cf, [[1 if i == j else 0 for j in range(4)] for i in range(4)]), _zeros(4))


def test_einstein_toy_and_cone():
    out = einstein_toy(hyperbolic_metric())
    assert out["einstein"] and out["mu2_is_Lambda2_g"] and out["ricci_flat"]
    assert out["cone_dt_du"] and out["cone_block"]
    assert out["c"] == out["Lambda"]


def test_ricci_flat_symbolic():
    assert verify_ricci_flat(gF_ambient(SYMBOLIC)).passed


def test_ricci_flat_by_independent_koszul_route():
    assert not verify_ricci_koszul(gF_ambient(ParameterSet.only(a3=1, a5=1, b=1)))


def test_ricci_flat_sampled_is_seeded():
    am = gF_ambient(SYMBOLIC)
    v1 = verify_ricci_flat(am, "sampled", n=5, seed=7)
    v2 = verify_ricci_flat(am, "sampled", n=5, seed=7)
    assert v1.passed and v1.to_json() == v2.to_json()


def test_wrong_mu2_is_not_ricci_flat():
    fm = metric_gF(SYMBOLIC)
    cp = curvature(fm, with_cotton=False)
    am = truncated_ambient(fm, cp.schouten, _zeros(5), gauge="fixed")
    assert not verify_ricci_koszul(am) == []


def test_eta_and_xi_coframes():
    out = eta_xi_coframes(SYMBOLIC)
    rep = out["report"]
    assert rep["reconstruction"] and rep["xi_reconstruction"]
    assert rep["corrected"] == []
    assert rep["xi_signature"] == (4, 3)
    eta = out["ambient"].eta_matrix()
    for i in (2, 3):
        assert eta[i] == [t if j == i else Scalar.zero() for j in range(5)]
    xi = out["xi"].matrix
    lifted = out["ambient"].lifted().matrix
    # xi^3 = eta^3 = t theta^3
    assert xi[3] == [t * v for v in lifted[4]]


def test_xi_metric_is_diagonal():
    assert gF_ambient(SYMBOLIC).xi_metric().G == [[Scalar.coerce(v) for v in row] for row in XI_METRIC]


def test_nabamb_identities():
    assert all(nabamb_check(gF_ambient(SYMBOLIC)).values())
    assert all(nabamb_check(truncated_ambient(flat_metric(), _zeros(5), _zeros(5))).values())


def test_cotton_flat_family_has_no_u2_term():
    am = gF_ambient(ParameterSet.from_mapping({"a3": 1, "a4": 0, "a5": 0, "a6": 0}))
    assert all(v.is_zero() for row in am.mu2 for v in row)
    assert all(v.degree("u") <= 1 for row in am.h() for v in row if v)


def test_homogeneity():
    assert not gF_ambient(SYMBOLIC).homogeneity_defects()

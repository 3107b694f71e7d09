import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ambientg2.cas import SQRT3, Scalar, gens
from ambientg2.conformal import (
    NULL_CASES,
    conformal_cotton_obstruction,
    conformal_nabla,
    cotton_flat_einstein_check,
    cotton_with_T,
    einstein_scale_residual,
    exp_of,
    gF_cotton_obstruction,
    gradient_obstruction,
    null_line_obstruction,
    rescale_metric,
    schouten_transform,
    schouten_transform_check,
)
from ambientg2.forms import M_CHART, DifferentialForm, change_basis, wedge
from ambientg2.frames import Tensor, curvature, levi_civita, metric_tensor
from ambientg2.nurowski import ParameterSet, build_apolys, build_coframe, c2, metric_gF

x, y, z, p, q, E, b = gens("x", "y", "z", "p", "q", "E", "b")
S3 = Scalar.const(SQRT3)

polys = st.builds(lambda c, m: c * m, st.integers(-3, 3).filter(bool),
                  st.sampled_from([x, p, q, x * p, q**2, p * q, y]))
upsilons = st.lists(polys, min_size=1, max_size=3).map(lambda ts: sum(ts[1:], ts[0]))


def test_rescale_identity_and_composition():
    fm = metric_gF(ParameterSet.only(a3=1))
    assert rescale_metric(fm, Scalar.zero()) is fm
    Y1, Y2 = x * p, q
    twice = rescale_metric(rescale_metric(fm, Y1), Y2)
    once = rescale_metric(fm, Y1 + Y2)
    assert curvature(twice, with_cotton=False).schouten.comps.keys() == \
        curvature(once, with_cotton=False).schouten.comps.keys()
    assert twice.coordinate_metric()[0][0].free_generators() >= {"p"}


def test_rescaling_theta_hat_metric_gives_gF():
    params = ParameterSet.symbolic()
    hat, theta = build_coframe(params)
    fm = metric_gF(params)
    from ambientg2.frames import FrameMetric

    fm_hat = FrameMetric(hat, fm.G)
    scaled = rescale_metric(fm_hat, -2 * b * x / 3)
    assert scaled.coframe.matrix == theta.matrix


def test_schouten_transform_constant_is_identity():
    fm = metric_gF(ParameterSet.only(a3=1, a4=2))
    P = curvature(fm, with_cotton=False).schouten
    assert (schouten_transform(P, Scalar.const(5), fm, frame="original") - P).is_zero()


@settings(max_examples=6)
@given(upsilons)
def test_schouten_transform_against_recomputation(Y):
    fm = metric_gF(ParameterSet.only(a3=1, a5=1))
    assert schouten_transform_check(fm, Y).passed


def test_einstein_scale_residual_for_hyperbolic_space():
    from ambientg2.ambient import hyperbolic_metric

    fm = hyperbolic_metric()
    P = curvature(fm, with_cotton=False).schouten
    # the metric itself is Einstein: sigma = 1 leaves a pure trace
    assert einstein_scale_residual(fm, P, Scalar.one()).is_zero()
    # sigma = 1/q: sigma^-2 g is flat, hence Einstein
    assert einstein_scale_residual(fm, P, 1 / q).is_zero()
    # a generic sigma is not an Einstein scale
    assert not einstein_scale_residual(fm, P, q + x * x).is_zero()


@settings(max_examples=6)
@given(upsilons)
def test_conformal_nabla_against_rescaled_connection(Y):
    fm = metric_gF(ParameterSet.only(a3=1))
    conn = levi_civita(fm)
    K = [Scalar.zero(), Scalar.one(), x, Scalar.zero(), p * q]
    predicted = conformal_nabla(fm, conn, K, Y)
    fm2 = rescale_metric(fm, Y)
    conn2 = levi_civita(fm2)
    eY = exp_of(Y)
    Khat = [k * eY for k in K]
    grads = [fm2.coframe.gradient(k) for k in Khat]
    for i in range(5):
        for m in range(5):
            direct = grads[i][m]
            for j in range(5):
                direct = direct + conn2.up[i][j][m] * Khat[j]
            assert (direct - predicted[i][m]).is_zero()


def test_cotton_obstruction_for_generic_family():
    res = gF_cotton_obstruction(ParameterSet.symbolic())
    assert res.status == "OBSTRUCTED"
    A = build_apolys(ParameterSet.symbolic())
    assert (res.forced_scalar - (-S3 / 3 * A.A4 * E**6)).is_zero() or \
        res.extra["C_314"] == str(-S3 / 3 * A.A4 * E**6)


def test_cotton_T_is_affine():
    cp = curvature(metric_gF(ParameterSet.symbolic()))
    T1 = [Scalar.const(v) for v in (1, 0, 2, 0, -1)]
    T2 = [x, p, Scalar.zero(), Scalar.one(), q]
    lhs = cotton_with_T(cp.weyl, cp.cotton, [a + c for a, c in zip(T1, T2)])
    rhs = cotton_with_T(cp.weyl, cp.cotton, T1) + cotton_with_T(cp.weyl, cp.cotton, T2) - cp.cotton
    assert (lhs - rhs).is_zero()


def test_cotton_family_when_cotton_flat():
    res = gF_cotton_obstruction(ParameterSet.from_mapping({"a4": 0, "a5": 0, "a6": 0}))
    assert res.status == "UNOBSTRUCTED"
    assert len(res.family) == 1
    vec = res.family[0]
    expected = [0, 0, 1, 0, c2(4) * b / S3]
    assert all((Scalar.coerce(v) - Scalar.coerce(e)).is_zero() for v, e in zip(vec, expected))


def test_conformally_flat_toy_all_T_solve():
    zero4, zero3 = Tensor(4, 5), Tensor(3, 5)
    res = conformal_cotton_obstruction(zero4, zero3)
    assert res.status == "UNOBSTRUCTED"
    assert len(res.family) == 5


def test_gradient_obstruction_for_a3_family():
    out = cotton_flat_einstein_check(ParameterSet.from_mapping({"a4": 0, "a5": 0, "a6": 0}))
    assert out["einstein"]["status"] == "OBSTRUCTED"
    form = DifferentialForm.from_json(out["forcing_form"], {build_coframe()[1].name: build_coframe()[1]})
    theta = build_coframe()[1]
    expected = wedge(wedge(theta.form(0), theta.form(2)), wedge(theta.form(3), theta.form(4))) * (2 / S3 * E**2)
    assert form == expected


def test_gradient_obstruction_toys():
    dx = DifferentialForm.coordinate(M_CHART, "x")
    assert gradient_obstruction(dx).status == "UNOBSTRUCTED"
    theta = build_coframe(ParameterSet.only(a3=1))[1]
    assert gradient_obstruction(theta.form(2)).status == "OBSTRUCTED"


# printed scalars that hold only when the wedge is read in the theta-hat basis
THETA_HAT_ONLY = {"(hat nabla K)^3", "(hat nabla K)^2 ^ theta^1 ^ theta^2"}


@pytest.mark.parametrize("case", NULL_CASES)
def test_null_line_cases_are_obstructed(case):
    res = null_line_obstruction(case, ParameterSet.symbolic())
    assert res.status == "OBSTRUCTED"
    printed = res.extra["printed"]
    assert printed
    for claim, ok in printed.items():
        assert ok is (claim not in THETA_HAT_ONLY), claim


def test_null_line_case_c_scalar():
    res = null_line_obstruction("c", ParameterSet.symbolic())
    A = build_apolys(ParameterSet.symbolic())
    assert (res.forced_scalar - A.A3 * E**4).is_zero()


def test_metric_tensor_unchanged_by_rescaling_frame():
    fm = metric_gF(ParameterSet.only(a3=1))
    fm2 = rescale_metric(fm, x)
    assert (metric_tensor(fm2) - metric_tensor(fm)).is_zero()
    assert change_basis(fm2.coframe.form(0), fm.coframe) == fm.coframe.form(0) * exp_of(x)

import itertools

from hypothesis import given
from hypothesis import strategies as st

from ambientg2.ambient import XI_METRIC
from ambientg2.cas import SQRT3, Scalar, gens
from ambientg2.forms import (
    AMBIENT_CHART,
    M_CHART,
    Coframe,
    DifferentialForm,
    change_basis,
    exterior_d,
    hodge,
    interior,
    one_form,
    wedge,
)
from ambientg2.nurowski import ParameterSet, build_coframe, c2
from ambientg2.spin import ambient_xi

x, y, z, p, q, E, b = gens("x", "y", "z", "p", "q", "E", "b")
dx, dy, dz, dp, dq = (DifferentialForm.coordinate(M_CHART, c) for c in ("x", "y", "z", "p", "q"))

coeff = st.sampled_from([x, y, p, q, x * p, q**2, p + 1, E, 3 * y - q, Scalar.zero(), Scalar.one()])


@st.composite
def forms(draw, degree: int, basis: Coframe | None = None):
    coeffs = {}
    for idx in itertools.combinations(range(5), degree):
        if draw(st.booleans()):
            coeffs[idx] = draw(coeff)
    return DifferentialForm(degree, M_CHART, coeffs, basis)


THETA_HAT, THETA = build_coframe(ParameterSet.only(a3=1, b=1))


def test_wedge_examples():
    assert wedge(dx, dx).is_zero()
    assert wedge(dy - dx * p, dx) == wedge(dy, dx)


def test_wedge_in_coframe_basis():
    w = wedge(THETA_HAT.form(0), THETA_HAT.form(3))
    assert w[(0, 3)] == Scalar.one()
    assert w == -wedge(THETA_HAT.form(3), THETA_HAT.form(0))


def test_exterior_d_examples():
    assert exterior_d(dx).is_zero()
    theta1 = dy - dx * p
    assert exterior_d(theta1) == wedge(dx, dp)


@given(forms(1), forms(2))
def test_wedge_graded_commutativity(a, c):
    assert wedge(a, c) == wedge(c, a)
    assert wedge(a, a).is_zero()


@given(forms(1), forms(1))
def test_leibniz_rule(a, c):
    lhs = exterior_d(wedge(a, c))
    rhs = wedge(exterior_d(a), c) - wedge(a, exterior_d(c))
    assert lhs == rhs


@given(forms(1))
def test_d_squared_coordinates(a):
    assert exterior_d(exterior_d(a)).is_zero()


@given(forms(1, THETA), forms(2, THETA))
def test_d_squared_in_coframe_basis(a, c):
    # guards the structure-function sign for forms of degree >= 2
    assert exterior_d(exterior_d(a)).is_zero()
    assert exterior_d(exterior_d(c)).is_zero()


@given(forms(2, THETA))
def test_d_commutes_with_change_of_basis(a):
    assert change_basis(exterior_d(a), None) == exterior_d(change_basis(a, None))


def test_theta_in_theta_hat_basis():
    params = ParameterSet.symbolic()
    hat, theta = build_coframe(params)
    th1 = change_basis(theta.form(0), hat)
    assert th1 == hat.form(0) * E**-2


@given(forms(2))
def test_round_trip_coordinates_xi_like(a):
    cf = THETA
    assert change_basis(change_basis(a, cf), None) == a


def test_xi0_in_coordinates():
    xi = ambient_xi(ParameterSet.symbolic()).coframe
    xi0 = change_basis(xi.form(0), None)
    dt = DifferentialForm.coordinate(AMBIENT_CHART, "t")
    du = DifferentialForm.coordinate(AMBIENT_CHART, "u")
    assert xi0 == (dt - du) * (1 / c2(1, 2))


XI = ambient_xi(ParameterSet.only(a3=1)).coframe


def _xi_form(*idx: int) -> DifferentialForm:
    return DifferentialForm(len(idx), AMBIENT_CHART, {tuple(idx): Scalar.one()}, XI)


def test_hodge_examples():
    one = DifferentialForm.function(Scalar.one(), AMBIENT_CHART, XI)
    assert hodge(one, XI_METRIC) == _xi_form(*range(7))
    a = _xi_form(0, 1, 2)
    k = 3
    sign = (-1) ** (k * (7 - k)) * (-1) ** 3
    assert hodge(hodge(a, XI_METRIC), XI_METRIC) == a * sign


def test_hodge_star_is_an_involution_up_to_sign_for_every_degree():
    for k in range(8):
        a = _xi_form(*range(k))
        assert hodge(hodge(a, XI_METRIC), XI_METRIC) == a * ((-1) ** (k * (7 - k)) * (-1) ** 3)


def test_interior_examples():
    f12 = _xi_form(1, 2)
    assert interior(1, f12) == _xi_form(2)
    assert interior(3, f12).is_zero()


@given(forms(3))
def test_interior_twice_vanishes(a):
    for i in range(5):
        assert interior(i, interior(i, a)).is_zero()


@given(forms(1), forms(2))
def test_interior_is_an_antiderivation(a, c):
    for i in range(5):
        lhs = interior(i, wedge(a, c))
        rhs = wedge(interior(i, a), c) - wedge(a, interior(i, c))
        assert lhs == rhs


def test_one_form_and_json_round_trip():
    a = one_form(M_CHART, [x, 0, SQRT3 * p, 0, E], THETA)
    assert DifferentialForm.from_json(a.to_json(), {THETA.name: THETA}) == a

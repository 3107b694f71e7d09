import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ambientg2.ambient import XI_METRIC
from ambientg2.cas import SQRT3, Scalar, gens
from ambientg2.forms import AMBIENT_CHART, Coframe
from ambientg2.frames import FrameMetric, levi_civita
from ambientg2.nurowski import ParameterSet, c2
from ambientg2.spin import (
    SIGMA,
    _imul,
    act,
    ambient_omega,
    ambient_xi,
    as_spinor,
    clifford,
    clifford_check,
    clifford_invert,
    clifford_pairing_check,
    omega_antisymmetry_defects,
    omega_closure,
    omega_comparison,
    parallel_spinor_check,
    printed_omega,
    psi_printed,
    spin_connection,
    spin_metric_check,
    spin_product,
    squaring_3form,
    two_spinor_vector,
)

t, u, x, y, p, q, E, b = gens("t", "u", "x", "y", "p", "q", "E", "b")
S3 = Scalar.const(SQRT3)
SQRT6 = c2(1, 2) * S3

ints = st.integers(-4, 4)
spinors = st.lists(ints, min_size=8, max_size=8).map(as_spinor)
vectors = st.lists(ints, min_size=7, max_size=7).map(lambda v: [Scalar.coerce(c) for c in v])
fields = st.sampled_from([Scalar.zero(), Scalar.one(), t, x * p, q + 2, u * y, E])
spinor_fields = st.lists(fields, min_size=8, max_size=8)


def identity(n, s=1):
    return [[s if i == j else 0 for j in range(n)] for i in range(n)]


def test_clifford_relations():
    assert clifford_check().passed
    assert _imul(SIGMA[0], SIGMA[0]) == identity(8)
    assert _imul(SIGMA[6], SIGMA[6]) == identity(8, -1)
    a, c = _imul(SIGMA[0], SIGMA[1]), _imul(SIGMA[1], SIGMA[0])
    assert all(a[i][j] + c[i][j] == 0 for i in range(8) for j in range(8))


def test_spin_metric():
    v = spin_metric_check()
    assert v.passed, v.detail


def test_first_basis_spinor_is_null():
    phi = as_spinor([1, 0, 0, 0, 0, 0, 0, 0])
    assert spin_product(phi, phi).is_zero()


@given(spinors, spinors)
def test_clifford_multiplication_is_skew(phi, chi):
    for k in range(7):
        assert (spin_product(act(SIGMA[k], phi), chi) + spin_product(act(SIGMA[k], chi), phi)).is_zero()


@given(spinors, spinors)
def test_spin_product_symmetric(phi, chi):
    assert spin_product(phi, chi) == spin_product(chi, phi)


@given(vectors, spinors)
def test_clifford_square_is_norm(v, psi):
    norm = sum((XI_METRIC[i][i] * v[i] * v[i] for i in range(7)), Scalar.zero())
    assert clifford(v, clifford(v, psi)) == [norm * c for c in psi]


def test_norm_of_parallel_spinor():
    psi = psi_printed(ParameterSet.symbolic())
    assert (spin_product(psi, psi) - 4 * SQRT6).is_zero()
    verbatim = psi_printed(ParameterSet.symbolic(), corrected=False)
    assert (spin_product(verbatim, verbatim) - 4 * SQRT6 * E**2).is_zero()


def test_flat_connection_gives_plain_derivative():
    cf = Coframe("dcoord", AMBIENT_CHART, identity(7), offset=0)
    sc = spin_connection(levi_civita(FrameMetric(cf, XI_METRIC)))
    psi = [t * x, Scalar.zero(), p, u * u, Scalar.one(), q, y, E]
    res = sc.nabla(psi)
    for m, c in enumerate(AMBIENT_CHART.coords):
        assert res[m] == [v.diff(c) for v in psi]


@pytest.fixture(scope="module")
def a3_connection():
    fm = ambient_xi(ParameterSet.only(a3=1, b=1))
    conn = levi_civita(fm)
    return fm, conn, spin_connection(conn)


@settings(max_examples=8)
@given(spinor_fields, spinor_fields)
def test_spin_connection_is_metric(a3_connection, phi, chi):
    fm, _, sc = a3_connection
    nphi, nchi = sc.nabla(phi), sc.nabla(chi)
    grad = fm.coframe.gradient(spin_product(phi, chi))
    for m in range(7):
        assert (grad[m] - spin_product(nphi[m], chi) - spin_product(phi, nchi[m])).is_zero()


def _nabla_vector(fm, conn, V):
    grads = [fm.coframe.gradient(v) for v in V]
    return [[grads[i][m] + sum((conn.up[i][j][m] * V[j] for j in range(7) if V[j]), Scalar.zero())
             for i in range(7)] for m in range(7)]


@settings(max_examples=8)
@given(st.lists(fields, min_size=7, max_size=7), spinor_fields)
def test_spin_connection_is_clifford_compatible(a3_connection, V, psi):
    fm, conn, sc = a3_connection
    lhs = sc.nabla(clifford(V, psi))
    dV = _nabla_vector(fm, conn, V)
    dpsi = sc.nabla(psi)
    for m in range(7):
        rhs = [a + c for a, c in zip(clifford(dV[m], psi), clifford(V, dpsi[m]))]
        assert all((a - c).is_zero() for a, c in zip(lhs[m], rhs))


def test_parallel_spinor_symbolic():
    v = parallel_spinor_check(ParameterSet.symbolic())
    assert v.passed and v.detail["norm_is_4sqrt6"]
    assert len(v.detail["residual"]) == 7 and all(r == ["0"] * 8 for r in v.detail["residual"])


def test_verbatim_spinor_is_not_parallel_for_nonzero_b():
    psi = psi_printed(ParameterSet.symbolic(), corrected=False)
    assert not parallel_spinor_check(ParameterSet.symbolic(), psi).passed


def test_random_constant_spinor_is_not_parallel():
    psi = as_spinor([1, 2, 0, -1, 3, 0, 1, 1])
    v = parallel_spinor_check(ParameterSet.only(a3=1), psi)
    assert not v.passed and v.detail["nonzero"]


def test_b_zero_spinor():
    psi = as_spinor([0, -1, 1, 0, -SQRT6, 0, 0, SQRT6])
    assert psi_printed(ParameterSet.only(a3=1)) == psi
    assert parallel_spinor_check(ParameterSet.only(a3=1, a6=2), psi).passed


def test_clifford_invert_examples():
    psi = psi_printed(ParameterSet.symbolic())
    e2 = [Scalar.one() if i == 2 else Scalar.zero() for i in range(7)]
    inv = clifford_invert(psi, clifford(e2, psi))
    assert inv.exact and inv.vector == e2
    assert not clifford_invert(psi, psi).exact


@given(vectors, vectors)
def test_clifford_invert_is_linear(v, w):
    psi = psi_printed(ParameterSet.only(b=1))
    chi = [a + 2 * c for a, c in zip(clifford(v, psi), clifford(w, psi))]
    inv = clifford_invert(psi, chi)
    assert inv.exact
    assert inv.vector == [a + 2 * c for a, c in zip(v, w)]


def test_clifford_pairing_constant():
    v = clifford_pairing_check(psi_printed(ParameterSet.symbolic()))
    assert v.passed and v.detail["kappa"] == "-1"


def test_two_spinor_vector():
    psi = psi_printed(ParameterSet.symbolic())
    assert all(c.is_zero() for c in two_spinor_vector(psi, psi))
    assert all(c.is_zero() for c in two_spinor_vector(psi, [Scalar.zero()] * 8))


@given(spinors, spinors, spinors)
def test_two_spinor_vector_bilinear(a, c, d):
    s = [x1 + x2 for x1, x2 in zip(c, d)]
    lhs = two_spinor_vector(a, s)
    rhs = [x1 + x2 for x1, x2 in zip(two_spinor_vector(a, c), two_spinor_vector(a, d))]
    assert lhs == rhs


@pytest.fixture(scope="module")
def omega():
    return ambient_omega(ParameterSet.symbolic())


def test_omega_fixed_coefficients(omega):
    for idx in ((0, 3, 6), (1, 3, 5), (2, 3, 4)):
        assert omega[idx] == Scalar.one()
    assert (omega[(0, 5, 6)] - c2(5, 6) * b / S3).is_zero()
    assert (omega[(2, 4, 5)] + c2(5, 6) * b / S3).is_zero()


def test_omega_b_zero_term_vanishes():
    om = ambient_omega(ParameterSet.only(a3=1))
    assert om[(0, 1, 6)].is_zero() and om[(1, 2, 4)].is_zero()


def test_omega_is_totally_skew():
    assert not omega_antisymmetry_defects(psi_printed(ParameterSet.symbolic()))


def test_omega_closed_and_coclosed(omega):
    assert omega_closure(omega) == {"d_omega_zero": True, "d_star_omega_zero": True}


def test_omega_against_printed(omega):
    verbatim = omega_comparison(omega, printed_omega(ParameterSet.symbolic(), omega.basis))
    corrected = omega_comparison(omega, printed_omega(ParameterSet.symbolic(), omega.basis, corrected=True))
    bad = {r["monomial"] for r in verbatim if not r["match"]}
    assert bad == {"xi^012", "xi^146", "xi^014", "xi^126", "xi^025", "xi^456", "xi^045", "xi^256",
                   "xi^016", "xi^124"}
    assert all(r["match"] for r in corrected)
    assert len(verbatim) == 19


def test_squaring_matches_ambient_omega(omega):
    psi = psi_printed(ParameterSet.symbolic())
    assert squaring_3form(psi, omega.basis) == omega

import itertools
from fractions import Fraction

import pytest

from ambientg2.cas import Scalar
from ambientg2.frames import cov_deriv
from ambientg2.holonomy import (
    N,
    PAIRS,
    HolonomySpan,
    _at,
    ambient_data,
    ambrose_singer_span,
    holonomy_report,
    lie_closure,
    non_symmetric_check,
    omega_at,
    riemann_rank,
    sample_points,
    second_derivative_at,
    so_basis,
    so_defect,
    stabilizer_check,
    stabilizer_dimension,
)
from ambientg2.nurowski import ParameterSet

A3 = ParameterSet.only(a3=1)
GENERIC = ParameterSet.only(a3=1, a4=1, a5=1, a6=1, b=1)
FLAT = ParameterSet.only()


def _point(params, seed=11):
    return sample_points(ambient_data(params), 1, seed)[0]


def test_so43_basis():
    basis = so_basis()
    assert len(basis) == 21
    assert not any(so_defect(L) for L in basis)
    assert len(lie_closure(basis)) == 21


def test_riemann_rank_bounds():
    assert riemann_rank(GENERIC, _point(GENERIC)) <= 4
    assert riemann_rank(FLAT, _point(FLAT)) == 0
    assert 1 <= riemann_rank(A3, _point(A3)) <= 4


def test_span_of_flat_metric_is_zero():
    span = ambrose_singer_span(FLAT, _point(FLAT), 2)
    assert span.rank == 0 and span.lie_rank == 0
    assert non_symmetric_check(FLAT, _point(FLAT)).status == "NOT-APPLICABLE"


def test_order_zero_span_is_riemann_image():
    pt = _point(GENERIC)
    span = ambrose_singer_span(GENERIC, pt, 0, target=None)
    assert span.rank_by_order[0] == riemann_rank(GENERIC, pt) <= 4


@pytest.mark.parametrize("name", ["a3", "a4", "a5", "a6"])
def test_span_generates_g2(name):
    params = ParameterSet.only(**{name: 1})
    data = ambient_data(params)
    pt = sample_points(data, 1, 11)[0]
    span = ambrose_singer_span(data, pt, 2)
    assert span.lie_rank == 14
    assert span.minimal_order() is not None and span.minimal_order() <= 2
    om = omega_at(data, pt)
    assert stabilizer_check(span, om).passed
    assert stabilizer_dimension(om) == 14


def test_non_stabilizing_matrix_fails():
    data = ambient_data(A3)
    pt = _point(A3)
    om = omega_at(data, pt)
    gens = so_basis()
    from ambientg2.holonomy import Generator

    fake = HolonomySpan(pt, [Generator(0, (0, 1), g) for g in gens], {0: 21})
    assert not stabilizer_check(fake, om).passed


def test_second_derivative_matches_symbolic_cov_deriv():
    data = ambient_data(A3)
    pt = _point(A3, seed=5)
    fast = second_derivative_at(data, pt)
    d2 = cov_deriv(data.dR, data.conn)
    for (i, j), (k, l) in itertools.islice(itertools.product(PAIRS, PAIRS), 0, None, 7):
        for m, n in itertools.product(range(N), repeat=2):
            assert fast.get((i, j, k, l, m, n), Scalar.zero()) == _at(d2[i, j, k, l, m, n], pt)


def test_non_symmetric():
    v = non_symmetric_check(A3, _point(A3))
    assert v.passed and v.detail["value"] != "0"
    other = non_symmetric_check(ParameterSet.only(a6=1), _point(ParameterSet.only(a6=1)))
    assert other.status in ("PASS", "FAIL")


def test_sample_points_are_seeded():
    data = ambient_data(A3)
    assert sample_points(data, 3, 11) == sample_points(data, 3, 11)
    assert sample_points(data, 3, 11) != sample_points(data, 3, 12)
    assert all(isinstance(v, Fraction) for v in sample_points(data, 1, 1)[0].values())


def test_report_is_deterministic_and_worker_independent():
    r1 = holonomy_report(ParameterSet.only(a5=1), points=2, seed=3)
    r2 = holonomy_report(ParameterSet.only(a5=1), points=2, seed=3, workers=2)
    assert r1 == r2
    assert r1["verdict"] == "PASS" and r1["stabilizer_pass"]


def test_invalid_order_rejected():
    with pytest.raises(ValueError):
        ambrose_singer_span(A3, _point(A3), 3)


def test_linear_rank_is_reported_alongside_lie_rank():
    span = ambrose_singer_span(ParameterSet.only(a4=1), _point(ParameterSet.only(a4=1)), 2, target=None)
    assert span.rank_by_order[2] <= span.lie_rank_by_order[2] == 14

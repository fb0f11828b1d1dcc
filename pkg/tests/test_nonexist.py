import functools
import itertools
import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lyapcert.algebra import GaussianRational, Poly, X, Y, evaluate, lie_derivative
from lyapcert.lp import simplex_solve, verify_farkas
from lyapcert.nonexist import (CAPPED, INFEASIBLE, SURVIVED, NonexistenceReport, SampleSet,
                               build_lp, check_f0, cutting_plane_sweep, exclude_degree,
                               final_identity_check, recheck_reports, regression_lp, seed_slopes)
from lyapcert.sturm import homogeneous_nonnegative
from lyapcert.systems import bacciotti_rosier, linear_system, paper_system

F = Fraction
F0 = paper_system().f0


@pytest.fixture(scope="module")
def paper_sweep():
    return cutting_plane_sweep(paper_system(), 6)


def test_seed_order():
    assert seed_slopes(9) == [0, None, 1, -1, 2, -2, F(1, 2), F(-1, 2), 3]


def test_sample_set_canonicalises_points():
    s = SampleSet.from_points([(2, 1), (0, 5), (-1, 1)])
    assert s.slopes == [F(1, 2), None, -1]
    with pytest.raises(ValueError):
        SampleSet.from_points([(1, 1), (2, 2)])
    with pytest.raises(ValueError):
        SampleSet.from_points([(0, 0)])


def test_regression_lp_shape_and_rows():
    lp = regression_lp()
    assert lp.n_vars == 3 and lp.n_inequalities == 10 and lp.n_equalities == 1
    # decrease rows at (1,0) and (0,1) are 2 c1 <= 0 and -2 c1 <= 0
    assert lp.rows[1].coeffs == (0, 2, 0)
    assert lp.rows[3].coeffs == (0, -2, 0)
    # directions are evaluated at (1, slope), so (2,1) enters as (1, 1/2)
    assert lp.rows[-1].coeffs == (4, F(1, 2), F(13, 4))


def test_regression_lp_infeasible():
    lp = regression_lp()
    res = simplex_solve(lp)
    assert not res.feasible and verify_farkas(lp, res.certificate)


def _grid_feasible(lp, bound=4):
    """Search integer coefficient vectors; a positive normalisation can be rescaled to 1."""
    norm = lp.rows[-1]
    for c in itertools.product(range(-bound, bound + 1), repeat=lp.n_vars):
        s = sum(a * b for a, b in zip(norm.coeffs, c))
        if s <= 0:
            continue
        scaled = [F(v) / s for v in c]
        if lp.satisfied_by(scaled):
            return scaled
    return None


def test_grid_oracle_agrees_on_regression_lp():
    assert _grid_feasible(regression_lp()) is None


def test_grid_oracle_finds_linear_system_candidate():
    lp = build_lp(2, SampleSet.seed(5), linear_system().f0)
    assert _grid_feasible(lp) is not None
    assert simplex_solve(lp).feasible


def test_build_lp_needs_enough_directions():
    with pytest.raises(ValueError):
        build_lp(4, SampleSet.seed(4))


def test_f0_must_be_odd_homogeneous():
    assert check_f0(F0) == 5
    with pytest.raises(ValueError):
        check_f0((X**2, Y**2))
    with pytest.raises(ValueError):
        check_f0((X + X**3, Y))


def test_paper_degrees_excluded(paper_sweep):
    assert [r.degree for r in paper_sweep] == [2, 4, 6]
    for rep in paper_sweep:
        assert rep.outcome == INFEASIBLE
        assert verify_farkas(build_lp(rep.degree, rep.samples), rep.certificate)


def test_sweep_argument_validation():
    with pytest.raises(ValueError):
        cutting_plane_sweep(paper_system(), 3)
    with pytest.raises(ValueError):
        cutting_plane_sweep(paper_system(), 4, iteration_cap=0)


def test_iteration_cap_reported():
    rep = exclude_degree(F0, 4, iteration_cap=1, samples=SampleSet.seed(5))
    assert rep.outcome in (CAPPED, INFEASIBLE)
    if rep.outcome == CAPPED:
        assert len(rep.history) == 1 and rep.certificate is None


def test_sweep_is_deterministic(paper_sweep):
    again = cutting_plane_sweep(paper_system(), 6)
    assert [r.to_dict() for r in again] == [r.to_dict() for r in paper_sweep]


def test_report_round_trip_and_recheck(paper_sweep):
    docs = json.loads(json.dumps([r.to_dict() for r in paper_sweep]))
    reports = [NonexistenceReport.from_dict(d) for d in docs]
    assert recheck_reports(F0, reports)
    docs[0]["farkas_multipliers"][0] = "12345"
    assert not recheck_reports(F0, [NonexistenceReport.from_dict(d) for d in docs])
    docs = json.loads(json.dumps([r.to_dict() for r in paper_sweep]))
    docs[1]["samples"].pop()
    assert not recheck_reports(F0, [NonexistenceReport.from_dict(d) for d in docs])


def test_survivor_satisfies_both_conditions_globally():
    rep = exclude_degree(linear_system().f0, 2)
    assert rep.outcome == SURVIVED
    p = rep.candidate
    assert p == X**2 + Y**2
    assert homogeneous_nonnegative(p)[0]
    assert homogeneous_nonnegative(-lie_derivative(p, linear_system().f0))[0]
    assert recheck_reports(linear_system().f0, [rep])


def test_bacciotti_rosier_degree_four_survives():
    f, V = bacciotti_rosier(1)
    rep = exclude_degree(f.f0, 4)
    assert rep.outcome == SURVIVED
    assert rep.candidate == V
    assert recheck_reports(f.f0, [rep])


@functools.lru_cache(maxsize=None)
def _degree_two():
    return exclude_degree(F0, 2)


# nonnegative quadratic forms: sums of squares of two linear forms
lin = st.tuples(st.integers(-4, 4), st.integers(-4, 4))


@settings(max_examples=60, deadline=None)
@given(lin, lin)
def test_every_nonnegative_quadratic_violates_a_certified_row(l1, l2):
    rep = _degree_two()
    p = (l1[0] * X + l1[1] * Y) ** 2 + (l2[0] * X + l2[1] * Y) ** 2
    lp = build_lp(2, rep.samples)
    coeffs = [p.coeff(2 - i, i) for i in range(3)]
    s = sum(a * b for a, b in zip(lp.rows[-1].coeffs, coeffs))
    if s == 0:
        return
    assert not lp.satisfied_by([c / s for c in coeffs])


def test_vanishing_at_complex_point():
    pt = (GaussianRational(0, 1), GaussianRational(1))
    assert evaluate(X**2 + Y**2, pt) == 0
    assert evaluate(X**4 + Y**4, pt) == 2


@pytest.mark.parametrize("p, c", [
    (X**2 + Y**2, 1),
    (X**4 + 3 * X * Y**3, F(2, 3)),
    (Y**6, -5),
])
def test_final_identity_is_contradictory(p, c):
    w = final_identity_check(p, c)
    assert w.left == 0
    assert w.right == GaussianRational(F(c) ** 2 * 2 ** p.degree)
    assert w.contradiction


def test_final_identity_arguments():
    with pytest.raises(ValueError):
        final_identity_check(X**2, 0)
    with pytest.raises(ValueError):
        final_identity_check(X**2 + Y, 1)
    with pytest.raises(ValueError):
        final_identity_check(X**2, 1, k0=4)

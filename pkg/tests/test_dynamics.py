import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from ivlab.dynamics import (SingularOrbitError, classify, degree_growth, entropy_estimate,
                            exact_orbit, exact_period, iterate_symbolic, jacobian,
                            jacobian_det_is_one, minimal_period, multipliers_at,
                            newton_periodic_search, numeric_map, omega_line_check, refine,
                            return_residual, special_orbit_check, term_count)
from ivlab.mapcat import build_lv3, build_pv, map_from_descriptor
from ivlab.polycore import BudgetExceeded

SQRT17 = math.sqrt(17)

rat = st.fractions(min_value=-4, max_value=4, max_denominator=6)


# -- symbolic iteration -------------------------------------------------------------------


def test_degree_sequence_a0():
    seq = degree_growth(build_lv3(0), 5, "x")
    assert seq.D == [1, 3, 7, 11, 17]
    assert seq.term_counts == [1, 10, 68, 300, 1028]


def test_degree_sequence_a1():
    seq = degree_growth(build_lv3(1), 3, "x")
    assert seq.D == [1, 3, 9]
    assert seq.term_counts == [4, 38, 566]


def test_symbolic_a_counts():
    seq = degree_growth(map_from_descriptor("lv3(a=a)"), 3, "x")
    assert seq.term_counts == [4, 41, 734]


@given(st.tuples(rat, rat, rat))
def test_symbolic_iterate_matches_numeric_steps(pt):
    m = build_lv3(0)
    its = iterate_symbolic(m, 2)
    try:
        p2 = m.step(m.step(pt))
    except ZeroDivisionError:
        assume(False)
    env = dict(zip(m.variables, pt))
    try:
        vals = tuple(f.evaluate(env) for f in its[1])
    except ZeroDivisionError:
        assume(False)
    assert vals == p2


def test_budget_exceeded_carries_partial_table():
    with pytest.raises(BudgetExceeded) as err:
        degree_growth(build_lv3(0), 5, "x", max_terms=50)
    assert err.value.partial.D == [1, 3]


def test_term_count_convention():
    m = build_lv3(0)
    f = iterate_symbolic(m, 1)[0][0]
    # numerator x*y*z - x*y + x: three monomials with positive x-degree over one factor x
    assert term_count(f, "x", m.variables) == 1


# -- entropy ------------------------------------------------------------------------------


def test_entropy_of_exponential_growth():
    e = entropy_estimate([1, 3, 9, 27, 81])
    assert e.slope == pytest.approx(math.log(3))
    assert e.ratios == [3, 3, 3, 3]


def test_entropy_of_polynomial_growth_is_small_on_long_windows():
    D = [1 + 2 * n * n for n in range(1, 41)]
    short = entropy_estimate(D, (2, 5)).slope
    long = entropy_estimate(D, (30, 40)).slope
    assert long < short and long < 0.1


@pytest.mark.parametrize("D,window", [([1, 3], None), ([1, 3, 9], (3, 3))])
def test_entropy_rejects_short_windows(D, window):
    with pytest.raises(ValueError):
        entropy_estimate(D, window)


# -- Jacobians ----------------------------------------------------------------------------


def test_jacobian_determinant_lv3():
    assert jacobian_det_is_one(build_lv3(0))
    assert jacobian_det_is_one(build_lv3(1))


def test_jacobian_entries():
    J = jacobian(build_lv3(0))
    # dX/dx at the origin is 1
    assert J.evaluate((0, 0, 0))[0][0] == 1


# -- exact orbits and special loci -----------------------------------------------------------


@pytest.mark.parametrize("t", [Fraction(2), Fraction(-5, 3), Fraction(7, 11)])
def test_three_cycle_through_ones(t):
    res = special_orbit_check(t)
    assert res.ok and res.period == 3


def test_three_cycle_degenerates_at_t1():
    assert special_orbit_check(1).period == 1


def test_singular_start():
    with pytest.raises((SingularOrbitError, ZeroDivisionError)):
        special_orbit_check(0)


@pytest.mark.parametrize("line", [lambda t: (0, 0, t), lambda t: (t, 0, 0), lambda t: (0, t, 0),
                                  lambda t: (t, t, t)])
@given(t=rat)
def test_fixed_lines(line, t):
    assume(t != 1)  # (0,0,1) etc. lie on a singular surface
    orbit = exact_orbit(build_lv3(0), line(t), 1)
    assert exact_period(orbit) == 1


def test_period_two_oracle():
    m = build_lv3(0)
    orbit = exact_orbit(m, (2, 3, Fraction(3, 2)), 2)
    assert exact_period(orbit) == 2


@pytest.mark.parametrize("pair", ["xy", "yz", "zx"])
@pytest.mark.parametrize("branch", [1, 2])
def test_omega_lines(pair, branch):
    res = omega_line_check(Fraction(3, 7), branch=branch, pair=pair)
    assert res.ok and res.residual < mpmath.mpf(10) ** -20
    assert any(v is None for v in res.orbit[1])


# -- Newton search ---------------------------------------------------------------------


def test_fixed_points_of_deformed_map():
    # derived closed form at a=1: z = 0, y = 5 - 2x, 2x^2 - 5x + 1 = 0
    m = build_lv3(1)
    res = newton_periodic_search(m, 1, starts=200, seed=1)
    assert len(res) == 2
    with mpmath.workprec(256):
        xs = sorted(res.points(), key=lambda p: float(mpmath.re(p[0])))
        roots = [(5 - mpmath.sqrt(17)) / 4, (5 + mpmath.sqrt(17)) / 4]
        for p, x in zip(xs, roots):
            assert abs(p[0] - x) < 1e-25
            assert abs(p[1] - (5 - 2 * x)) < 1e-25
            assert abs(p[2]) < 1e-25
    for p in xs:
        assert return_residual(m, p, 1) < 1e-25


def test_search_is_seeded():
    m = build_lv3(1)
    a = newton_periodic_search(m, 1, starts=60, seed=3)
    b = newton_periodic_search(m, 1, starts=60, seed=3)
    assert [r.to_json() for r in a.reports] == [r.to_json() for r in b.reports]


def test_refine_and_multipliers_at_period_two_point():
    m = build_lv3(0)
    x, res = refine(m, (2.0 + 1e-6, 3.0, 1.5), 2)
    assert res < 1e-25 and return_residual(m, x, 2) < 1e-25
    rep = multipliers_at(m, x, 2)
    assert rep.classification.count("neutral") >= 2
    assert abs(rep.det - 1) < 1e-20


def test_multipliers_reject_non_periodic_point():
    with pytest.raises(ValueError):
        multipliers_at(build_lv3(0), (0.3, 0.7, 2.0), 2)


def test_minimal_period():
    m = build_lv3(0)
    assert minimal_period(m, (0, 0, 5), 4) == 1
    assert minimal_period(m, (2, 3, 1.5), 4) == 2


@pytest.mark.parametrize("mults,expected", [
    ([0.5, 1.0, 3.0], ["attractive", "neutral", "repulsive"]),
    ([complex(0, 1)], ["neutral"]),
])
def test_classify(mults, expected):
    assert classify(mults) == expected


def test_numeric_map_agrees_with_exact_step():
    m = build_pv()
    nm = numeric_map(m)
    pt = (Fraction(1, 3), Fraction(2), Fraction(-1, 2), Fraction(5, 4))
    exact = m.step(pt)
    with mpmath.workprec(128):
        approx = nm.step([mpmath.mpf(v.numerator) / v.denominator for v in pt])
    assert np.allclose([complex(v) for v in approx], [float(v) for v in exact], rtol=1e-14)

from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, strategies as st

from ivlab.dynamics import exact_orbit, exact_period
from ivlab.mapcat import build_lv3, build_lv_general, build_pv, map_from_descriptor
from ivlab.polycore import Polynomial
from ivlab.varieties import (cataloged, gamma_catalog, invariant_polynomials, locate_point,
                             on_special_loci, sample_on_variety, special_loci_catalog,
                             uncorrelated_scan, verify_membership, verify_period_on_samples,
                             verify_variety_sampled, with_generators)

rat = st.fractions(min_value=-5, max_value=5, max_denominator=7)


def test_catalog_contents():
    assert set(cataloged()) >= {("lv3", n) for n in (2, 3, 4, 5)} | {
        ("lv4", 2), ("lv4", 3), ("pv", 2), ("pv", 3), ("lv5", 2), ("toda3", 2), ("toda3", 3)}


@pytest.mark.parametrize("key,n,text", [
    ("lv3", 2, "s + 1"),
    ("lv3", 3, "r^2 - r*s + s^2 + r + s + 1"),
    ("lv4", 2, "t + 1"),
    ("pv", 2, "s + v"),
])
def test_printed_generators(key, n, text):
    spec = gamma_catalog(key, n)
    assert str(spec.generators[0]) == text


@pytest.mark.parametrize("desc", ["lv3", "lv3(a=0)", "lv(d=4)", "lv4", "pv", "toda(N=3)"])
def test_catalog_accepts_descriptors(desc):
    assert gamma_catalog(desc, 2).period == 2


@pytest.mark.parametrize("desc,n", [("lv3(a=1)", 2), ("lv3", 7), ("lv(d=6)", 2)])
def test_uncataloged(desc, n):
    with pytest.raises(KeyError):
        gamma_catalog(desc, n)


def test_invariant_polynomials_lv3():
    inv = invariant_polynomials("lv3")
    assert set(inv) == {"r", "s"}


# -- exact membership -------------------------------------------------------------------------


@pytest.mark.parametrize("m,n", [(build_lv3(0), 2), (build_lv3(0), 3), (build_lv_general(4), 2),
                                 (build_pv(), 2)], ids=["lv3-2", "lv3-3", "lv4-2", "pv-2"])
def test_exact_membership(m, n):
    v = verify_membership(m, gamma_catalog(m, n))
    assert v.ok and v.evidence == "exact"
    assert all(v.remainders_zero) and all(v.regular)
    assert all(u is not None for u in v.u)


def test_u_decomposition_reconstructs_periodicity_numerator():
    m = build_lv3(0)
    spec = gamma_catalog(m, 2)
    v = verify_membership(m, spec)
    g = spec.composed[0]
    from ivlab.dynamics import iterate_symbolic
    X2 = iterate_symbolic(m, 2)[-1]
    x = Polynomial.variable("x", m.variables)
    # X^(2) - x = u * gamma
    diff = X2[0] - x
    assert diff == v.u[0] * g


@pytest.mark.parametrize("bad", ["s - 1", "r + 1", "s"])
def test_negative_control(bad):
    m = build_lv3(0)
    spec = with_generators(gamma_catalog(m, 2), [bad])
    assert not verify_membership(m, spec).ok


# -- sampling -------------------------------------------------------------------------------


@given(rat, rat)
def test_period_two_surface_exactly(x, y):
    # on s = -1, i.e. (1-x)(1-y)(1-z) = -1, every regular point has period 2
    assume(x != 1 and y != 1)
    z = 1 + 1 / ((1 - x) * (1 - y))
    try:
        orbit = exact_orbit(build_lv3(0), (x, y, z), 2)
    except ZeroDivisionError:
        assume(False)
    assert exact_period(orbit) in (1, 2)
    assert orbit[2] == orbit[0]


def test_samples_are_on_variety_and_seeded():
    spec = gamma_catalog("lv3", 3)
    a = sample_on_variety(spec, 8, seed=5)
    b = sample_on_variety(spec, 8, seed=5)
    assert a == b
    with mpmath.workprec(256):
        assert all(spec.residual(p) < 1e-30 for p in a)


def test_linear_slices_give_rational_points():
    pts = sample_on_variety(gamma_catalog("lv3", 2), 5, seed=0)
    assert all(isinstance(v, Fraction) for p in pts for v in p)
    spec = gamma_catalog("lv3", 2)
    assert all(spec.evaluate(p) == [0] for p in pts)


@pytest.mark.parametrize("key,n", [("lv3", 2), ("lv3", 3), ("pv", 2), ("lv4", 2)])
def test_sampled_period(key, n):
    m = map_from_descriptor(key)
    v = verify_variety_sampled(m, gamma_catalog(m, n), count=15, seed=1)
    assert v.ok
    assert v.counts["failed"] == 0


def test_sampled_negative_control():
    m = build_lv3(0)
    spec = with_generators(gamma_catalog(m, 2), ["s - 2"])
    v = verify_period_on_samples(m, spec, sample_on_variety(spec, 10, seed=0))
    assert not v.ok and v.counts["failed"] > 0


def test_two_generator_sampling():
    spec = gamma_catalog("toda3", 3)
    pts = sample_on_variety(spec, 4, seed=2)
    with mpmath.workprec(256):
        assert all(spec.residual(p) < 1e-30 for p in pts)


def test_uncorrelated_scan_contrast():
    deformed = uncorrelated_scan(build_lv3(Fraction(1, 10)), 2, samples=30, seed=0)
    assert deformed.isolated
    control = uncorrelated_scan(build_lv3(0), 2, samples=30, seed=0)
    assert control.fail_fraction == 0


# -- special loci ------------------------------------------------------------------------------


@pytest.mark.parametrize("loc", special_loci_catalog(), ids=lambda l: l.description[:20])
@pytest.mark.parametrize("t", [Fraction(5), Fraction(-2, 3)])
def test_special_loci(loc, t):
    assert all(loc.verify(t))


def test_locate_point():
    spec = gamma_catalog("lv3", 3)
    assert locate_point(spec, (1, 1, 7)) == "special"
    assert on_special_loci((0, 0, 9))
    assert locate_point(gamma_catalog("lv3", 2), (2, 3, 1.5)) == "variety"
    assert locate_point(spec, (0.3, 0.2, 0.1)) == "off"

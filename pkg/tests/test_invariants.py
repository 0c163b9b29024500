from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from ivlab.invariants import (bareiss_det, build_lax, check_charpoly_structure, cofactor_det,
                              extract_invariants, find_linear_relation, invariance_report,
                              invariant_count, lax_L, lax_R, verify_bridge, verify_conjugation,
                              verify_invariance, verify_lax_equation)
from ivlab.mapcat import (LV4_INVARIANTS_PRINTED, LV5_INVARIANTS_PRINTED, build_lv3,
                          build_lv_general, build_pv, build_toda, lv_invariants, lv_vars)
from ivlab.polycore import Polynomial, symbols

small = st.integers(-3, 3)


@given(st.lists(st.lists(small, min_size=4, max_size=4), min_size=4, max_size=4))
def test_bareiss_matches_cofactor_expansion(rows):
    P = [[Polynomial.constant(v, ("x",)) for v in r] for r in rows]
    assert bareiss_det(P) == cofactor_det(P)


def test_bareiss_symbolic():
    a, b, c, d = symbols("a b c d")
    assert bareiss_det([[a, b], [c, d]]) == a * d - b * c


@pytest.mark.parametrize("d", [3, 4, 5, 6])
def test_lax_equation(d):
    v = verify_lax_equation(d)
    assert v.ok and v.first_nonzero is None


@pytest.mark.parametrize("d", [3, 4, 5, 6])
def test_conjugated_evolution(d):
    assert verify_conjugation(d).ok


def test_lax_equation_fails_for_deformed_map():
    # a != 0 breaks the Lax form: a negative control
    assert not verify_lax_equation(map=build_lv3(1)).ok


def test_lax_shapes():
    xs = [Fraction(k, 7) for k in range(1, 5)]
    R, L = lax_R(xs), lax_L(xs)
    assert R[0, 0] == 1 - xs[0] and R[0, 1] == 1 and R[3, 0] == 1
    assert L[1, 0] == 1 and L[0, 3] == 1


@pytest.mark.parametrize("d", [3, 4, 5, 6])
def test_charpoly_structure_and_count(d):
    sys = build_lax(d)
    H = extract_invariants(sys)
    assert len(H) == d + 1
    assert all(check_charpoly_structure(sys).values())
    assert invariant_count(sys) == d // 2 + 1


def test_cofactor_method_agrees():
    a = extract_invariants(build_lax(4), "bareiss")
    b = extract_invariants(build_lax(4), "cofactor")
    assert a == b


def test_lv3_closed_forms():
    # for d=3, H1 = s - 1 + r up to the sign convention
    H = lv_invariants(3)
    x1, x2, x3 = symbols(lv_vars(3))
    r = x1 * x2 * x3
    s = (1 - x1) * (1 - x2) * (1 - x3)
    assert find_linear_relation(H["H1"], {"r": r, "s": s}) is not None


def test_lv4_printed_invariants_are_generated():
    vs = lv_vars(4)
    H = lv_invariants(4)
    for name in ("t", "u"):
        p = Polynomial.parse(LV4_INVARIANTS_PRINTED[name], vs)
        assert find_linear_relation(p, H, degree=1) is not None, name


def test_lv5_printed_h1_sign():
    # the printed H1 is the negative of the primed-sum H1
    vs = lv_vars(5)
    printed = Polynomial.parse(LV5_INVARIANTS_PRINTED["H1"], vs)
    assert printed == -lv_invariants(5)["H1"]
    assert Polynomial.parse(LV5_INVARIANTS_PRINTED["H2"], vs) == lv_invariants(5)["H2"]


def test_find_linear_relation_rejects():
    x, y = symbols("x y")
    assert find_linear_relation(x * y, {"a": x, "b": y}, degree=1) is None
    rel = find_linear_relation(x * y + 2, {"a": x, "b": y}, degree=2)
    assert rel is not None and rel.coefficient((1, 1)) == 1


@pytest.mark.parametrize("build", [lambda: build_lv3(0), lambda: build_lv_general(4), build_pv,
                                   lambda: build_lv_general(5), lambda: build_toda(3)],
                         ids=["lv3", "lv4", "pv", "lv5", "toda3"])
def test_invariance_identities(build):
    rep = invariance_report(build())
    assert rep and all(rep.values())


def test_non_invariant_witness():
    m = build_lv3(0)
    x = Polynomial.variable("x", m.variables)
    ok, witness = verify_invariance(m, x)
    assert not ok and not witness.is_zero()


def test_lv_toda_bridge():
    v = verify_bridge(6)
    assert v.ok, v.mismatches

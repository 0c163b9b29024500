from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from ivlab.mapcat import (build_lv3, build_lv_general, build_pv, build_toda, lv_invariants,
                          lv_toda_bridge, map_from_descriptor, parse_descriptor,
                          printed_lv_components)
from ivlab.polycore import ParseError, Polynomial, RationalFunction

rat = st.fractions(min_value=-4, max_value=4, max_denominator=6)


def test_lv3_components_verbatim():
    m = build_lv3(0)
    assert [str(f) for f in m.components] == [
        "(x*y*z - x*y + x)/(x*z - z + 1)",
        "(x*y*z - y*z + y)/(x*y - x + 1)",
        "(x*y*z - x*z + z)/(y*z - y + 1)",
    ]


@pytest.mark.parametrize("a", [0, 1, Fraction(1, 2), Fraction(-3, 7)])
def test_lv3_offsets(a):
    m = build_lv3(a)
    pt = (Fraction(2), Fraction(3), Fraction(5))
    base = build_lv3(0).step(pt)
    X, Y, Z = m.step(pt)
    assert (X - base[0], Y - base[1], Z - base[2]) == (a, 2 * a, 0)


def test_lv3_period_two_oracle():
    # (2, 3, 3/2) -> (2, 3/2, 3) -> (2, 3, 3/2): a hand-checked 2-cycle
    m = build_lv3(0)
    p = (Fraction(2), Fraction(3), Fraction(3, 2))
    q = m.step(p)
    assert q == (2, Fraction(3, 2), 3)
    assert m.step(q) == p


@pytest.mark.parametrize("d", [3, 4, 5])
def test_general_lv_matches_printed_forms(d):
    m = build_lv_general(d)
    assert tuple(m.components) == tuple(printed_lv_components(d))


def test_general_lv_at_d3_is_lv3():
    m = build_lv_general(3)
    ref = build_lv3(0)
    for f, g in zip(m.components, ref.components):
        assert str(f).replace("x1", "x").replace("x2", "y").replace("x3", "z") == str(g)


@pytest.mark.parametrize("d", [3, 4, 5, 6])
def test_invariant_count(d):
    assert len([k for k in lv_invariants(d) if k.startswith("H")]) + 1 == d // 2 + 1


@given(st.lists(rat, min_size=6, max_size=6))
def test_bridge_definition(xs):
    T = lv_toda_bridge(xs)
    assert T.i(1) == (1 - xs[0]) * (1 - xs[1])
    assert T.v(3) == xs[5] * xs[0]
    assert T.i(4) == T.i(1)


def test_bridge_rejects_odd_dimension():
    with pytest.raises(ValueError):
        lv_toda_bridge([1, 2, 3])


@given(st.tuples(rat, rat, rat))
def test_lv3_invariants_numerically(pt):
    m = build_lv3(0)
    try:
        img = m.step(pt)
    except ZeroDivisionError:
        assume(False)
    assert m.invariant_values(img) == m.invariant_values(pt)


@given(st.tuples(*[rat] * 4))
def test_pv_invariants_numerically(pt):
    m = build_pv()
    try:
        img = m.step(pt)
    except ZeroDivisionError:
        assume(False)
    assert m.invariant_values(img) == m.invariant_values(pt)


@given(st.tuples(*[st.fractions(min_value=Fraction(1, 5), max_value=3, max_denominator=5)] * 6))
def test_toda_invariants_numerically(pt):
    m = build_toda(3)
    assert m.invariant_values(m.step(pt)) == m.invariant_values(pt)


def test_toda_only_n3():
    with pytest.raises(ValueError):
        build_toda(4)


# -- descriptors ------------------------------------------------------------------------


@pytest.mark.parametrize("text,name,params", [
    ("lv3(a=1/2)", "lv3", {"a": "1/2"}),
    ("lv(d=5)", "lv", {"d": "5"}),
    ("pv", "pv", {}),
    ("toda(N=3)", "toda", {"N": "3"}),
    (" lv3 ( a = 1 ) ", "lv3", {"a": "1"}),
])
def test_parse_descriptor(text, name, params):
    assert parse_descriptor(text) == (name, params)


@pytest.mark.parametrize("text,canonical,dim", [
    ("lv3", "lv3(a=0)", 3),
    ("lv3(a=1/2)", "lv3(a=1/2)", 3),
    ("lv4", "lv(d=4)", 4),
    ("lv(d=5)", "lv(d=5)", 5),
    ("pv", "pv", 4),
    ("toda3", "toda(N=3)", 6),
])
def test_map_from_descriptor(text, canonical, dim):
    m = map_from_descriptor(text)
    assert m.descriptor == canonical
    assert m.dimension == dim
    assert map_from_descriptor(m.descriptor).components == m.components


def test_symbolic_parameter():
    m = map_from_descriptor("lv3(a=a)")
    assert m.symbolic_parameters == ("a",)
    assert "a" in m.components[0].variables


@pytest.mark.parametrize("bad,pos", [("foo", 0), ("lv(d=2)", 5), ("lv3(b=1)", 4), ("lv3(a=", 3)])
def test_bad_descriptors(bad, pos):
    with pytest.raises(ParseError) as err:
        map_from_descriptor(bad)
    assert f"position {pos}" in str(err.value)


def test_json_descriptor_roundtrip():
    m = build_pv()
    data = m.to_json()
    assert data["descriptor"] == "pv"
    assert set(data["invariants"]) == {"r", "s", "v"}
    for text, f in zip(data["components"], m.components):
        assert isinstance(text, (str, dict))

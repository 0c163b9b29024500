"""Catalog of the integrable maps under study, as exact symbolic objects.

Every map is a :class:`RationalMap`: named variables, rational-function
components, parameters and a named list of invariants.  Maps are addressed
by short descriptors such as ``lv3(a=1/2)``, ``lv(d=5)``, ``pv`` or
``toda(N=3)`` (see :func:`parse_descriptor`).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

from .polycore import (ParseError, Polynomial, RationalFunction, parse_polynomial,
                       polynomial_to_json)
from .polycore.rational import homogeneous_compose

LV3_VARS = ("x", "y", "z")


def lv_vars(d: int) -> tuple[str, ...]:
    return tuple(f"x{j}" for j in range(1, d + 1))


def toda_vars(N: int) -> tuple[str, ...]:
    return tuple(f"I{j}" for j in range(1, N + 1)) + tuple(f"V{j}" for j in range(1, N + 1))


# -- the map object -----------------------------------------------------------


@dataclass(frozen=True)
class Component:
    """``coefficient * prod(f**e) + offset`` with polynomial factors ``f``.

    Keeping the factored form lets composition cancel factor by factor,
    which is far cheaper than one gcd of the expanded quotient.
    """

    factors: tuple[tuple[Polynomial, int], ...]
    coefficient: Fraction = Fraction(1)
    offset: Polynomial | None = None

    @classmethod
    def from_function(cls, f: RationalFunction, offset=None) -> "Component":
        cn, fn = f.num.factor()
        cd, fd = f.den.factor()
        facs = tuple((p, m) for p, m in fn) + tuple((p, -m) for p, m in fd)
        return cls(facs, Fraction(cn) / Fraction(cd), offset)

    def function(self) -> RationalFunction:
        out = RationalFunction(self.coefficient)
        for p, m in self.factors:
            out = out * RationalFunction(p) ** m
        if self.offset is not None:
            out = out + self.offset
        return out


@dataclass(frozen=True, eq=False)
class RationalMap:
    """A d-dimensional rational map ``x -> X`` with its invariants."""

    name: str
    variables: tuple[str, ...]
    components: tuple[RationalFunction, ...]
    parameters: Mapping[str, object] = field(default_factory=dict)
    invariants: Mapping[str, Polynomial] = field(default_factory=dict)
    descriptor: str = ""
    factored: tuple[Component, ...] | None = None

    def __post_init__(self):
        if len(self.components) != len(self.variables):
            raise ValueError(f"{self.name}: {len(self.components)} components for "
                             f"{len(self.variables)} variables")
        if self.factored is None:
            object.__setattr__(self, "factored",
                               tuple(Component.from_function(c) for c in self.components))

    @property
    def dimension(self) -> int:
        return len(self.variables)

    d = dimension

    @property
    def symbolic_parameters(self) -> tuple[str, ...]:
        return tuple(k for k, v in self.parameters.items() if isinstance(v, str))

    def __repr__(self):
        return f"RationalMap({self.descriptor or self.name!r}, d={self.dimension})"

    def invariant(self, name: str) -> Polynomial:
        return self.invariants[name]

    # -- symbolic application --------------------------------------------

    def apply(self, funcs: Sequence[RationalFunction]) -> list[RationalFunction]:
        """The map applied to a vector of rational functions, ``F(f_1..f_d)``, cancelled."""
        funcs = [RationalFunction.coerce(f) for f in funcs]
        subs = dict(zip(self.variables, funcs))
        cache: dict = {}

        def composed(p: Polynomial) -> RationalFunction:
            key = id(p)
            if key not in cache:
                used = {v: subs[v] for v in p.used_variables() if v in subs}
                if not used:
                    cache[key] = RationalFunction(p)
                else:
                    cache[key] = RationalFunction(*homogeneous_compose(
                        p, Polynomial.one(p.variables), used))
            return cache[key]

        out = []
        for comp in self.factored:
            val = RationalFunction(comp.coefficient)
            for p, m in comp.factors:
                val = val * composed(p) ** m
            if comp.offset is not None:
                val = val + composed(comp.offset)
            out.append(val)
        return out

    def compose_function(self, f) -> RationalFunction:
        """``f ∘ F`` for a function ``f`` in the map's variables."""
        f = RationalFunction.coerce(f)
        return f.compose(dict(zip(self.variables, self.components)))

    # -- numeric application ---------------------------------------------

    def __call__(self, point):
        return self.step(point)

    def step(self, point):
        """Image of a point (sequence in variable order); exact for rationals."""
        if self.symbolic_parameters:
            raise ValueError(f"{self.name}: bind parameters {self.symbolic_parameters} first")
        env = dict(zip(self.variables, point))
        return tuple(c.evaluate(env) for c in self.components)

    def invariant_values(self, point) -> dict:
        env = dict(zip(self.variables, point))
        return {k: h.evaluate(env) for k, h in self.invariants.items()}

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "descriptor": self.descriptor,
            "variables": list(self.variables),
            "parameters": {k: str(v) for k, v in self.parameters.items()},
            "components": [
                {"numerator": polynomial_to_json(c.num), "denominator": polynomial_to_json(c.den)}
                for c in self.components
            ],
            "invariants": {k: polynomial_to_json(h) for k, h in self.invariants.items()},
        }


def _checked(m: RationalMap, checked: bool) -> RationalMap:
    if checked:
        from .invariants import verify_invariance
        for name, h in m.invariants.items():
            ok, _ = verify_invariance(m, h)
            if not ok:
                raise ValueError(f"{m.name}: invariant {name} is not preserved")
    return m


def _poly(text: str, variables) -> Polynomial:
    return parse_polynomial(text, variables)


# -- 3dLV with deformation ----------------------------------------------------


def _as_param(a):
    if isinstance(a, str):
        try:
            return Fraction(a)
        except ValueError:
            if not re.fullmatch(r"[A-Za-z_]\w*", a):
                raise ValueError(f"bad parameter value {a!r}")
            return a
    return Fraction(a)


def build_lv3(a=0, checked: bool = False) -> RationalMap:
    """``X = x(1-y+yz)/(1-z+zx) + a``, ``Y = y(1-z+zx)/(1-x+xy) + 2a``, ``Z = z(1-x+xy)/(1-y+yz)``.

    ``a`` is a rational, or a name for a symbolic parameter (which then
    becomes an extra variable of the component polynomials).  The invariants
    ``r = xyz`` and ``s = (1-x)(1-y)(1-z)`` are attached only for ``a = 0``.
    """
    a = _as_param(a)
    vs = LV3_VARS + ((a,) if isinstance(a, str) else ())
    x, y, z = (Polynomial.variable(v, vs) for v in LV3_VARS)
    A = Polynomial.variable(a, vs) if isinstance(a, str) else Polynomial.constant(a, vs)
    P, Q, R = 1 - y + y * z, 1 - z + z * x, 1 - x + x * y
    offsets = (A, 2 * A, None)
    specs = ((x, P, Q), (y, Q, R), (z, R, P))
    comps, factored = [], []
    for (v, num, den), off in zip(specs, offsets):
        f = RationalFunction(v * num, den)
        if off is not None and not off.is_zero():
            f = f + off
        else:
            off = None
        comps.append(f)
        factored.append(Component(((v, 1), (num, 1), (den, -1)), Fraction(1), off))
    inv = {}
    if a == 0:
        inv = {"r": x * y * z, "s": (1 - x) * (1 - y) * (1 - z)}
    m = RationalMap("lv3", LV3_VARS, tuple(comps), {"a": a}, inv,
                    f"lv3(a={a})", tuple(factored))
    return _checked(m, checked)


# -- general d-dimensional LV ---------------------------------------------------


def _cyc(j: int, d: int) -> int:
    """Cyclic 1-based index: ``x_{j+d} = x_j``."""
    return (j - 1) % d + 1


@lru_cache(maxsize=None)
def lv_components(d: int) -> tuple[RationalFunction, ...]:
    """Solve ``X_j (1 - X_{j-1}) = x_j (1 - x_{j+1})`` cyclically for ``X``.

    With ``c_j = x_j(1 - x_{j+1})``, each ``X_j = c_j / (1 - X_{j-1})`` is a
    Möbius function of ``T = X_1``.  Going once round the cycle gives a
    quadratic in ``T`` that always has the trivial root ``T = 1 - x_2``
    (``X_j = 1 - x_{j+1}`` for all j); dividing it out leaves a linear
    consistency condition for ``T``, and back-substitution gives the rest.
    """
    if d < 3:
        raise ValueError(f"LV map needs d >= 3, got {d}")
    vs = lv_vars(d) + ("T",)
    x = {j: Polynomial.variable(f"x{j}", vs) for j in range(1, d + 1)}
    T = Polynomial.variable("T", vs)
    c = {j: x[j] * (1 - x[_cyc(j + 1, d)]) for j in range(1, d + 1)}
    # X_j = n_j / d_j, linear in T
    n, dd = T, Polynomial.one(vs)
    for j in range(2, d + 1):
        n, dd = c[j] * dd, dd - n
    quad = T * (dd - n) - c[1] * dd
    linear = quad.exact_div(T - (1 - x[2]))
    k1 = linear.derivative("T")
    k0 = linear.subs({"T": 0})
    xs = lv_vars(d)
    out = [RationalFunction(-k0.with_variables(xs), k1.with_variables(xs))]
    for j in range(2, d + 1):
        out.append(RationalFunction(c[j].with_variables(xs)) / (1 - out[-1]))
    return tuple(out)


def primed_sum(p: Sequence, k: int, d: int):
    """Sum of products of ``k`` entries of ``p`` (1-based, cyclic) with no two neighbours."""
    from itertools import combinations
    total = 0
    for idx in combinations(range(1, d + 1), k):
        chosen = set(idx)
        if any(_cyc(j + 1, d) in chosen for j in idx):
            continue
        term = 1
        for j in idx:
            term = term * p[j - 1]
        total = total + term
    return total


def lv_p(d: int) -> list[Polynomial]:
    """``p_j = x_j (1 - x_{j-1})`` for j = 1..d."""
    vs = lv_vars(d)
    x = [Polynomial.variable(v, vs) for v in vs]
    return [x[j] * (1 - x[j - 1]) for j in range(d)]


def lv_invariants(d: int) -> dict[str, Polynomial]:
    """``H_1..H_[d/2]`` (primed sums over ``p_j``) and ``r = x_1...x_d``."""
    if d < 3:
        raise ValueError(f"LV map needs d >= 3, got {d}")
    vs = lv_vars(d)
    p = lv_p(d)
    out = {f"H{k}": primed_sum(p, k, d) for k in range(1, d // 2 + 1)}
    r = Polynomial.one(vs)
    for v in vs:
        r = r * Polynomial.variable(v, vs)
    out["r"] = r
    return out


# printed forms, used as cross-checks of the elimination
LV4_PRINTED = {
    "X1": ("x1", "1-x2-x3+x2*x3+x3*x4", "1-x3-x4+x3*x4+x4*x1"),
    "X2": ("x2", "1-x3-x4+x3*x4+x4*x1", "1-x4-x1+x4*x1+x1*x2"),
    "X3": ("x3", "1-x4-x1+x4*x1+x1*x2", "1-x1-x2+x1*x2+x2*x3"),
    "X4": ("x4", "1-x1-x2+x1*x2+x2*x3", "1-x2-x3+x2*x3+x3*x4"),
}
LV4_INVARIANTS_PRINTED = {
    "r": "x1*x2*x3*x4",
    "t": "(1-x1-x3)*(1-x2-x4)",
    "u": "x2*x3*x4+x3*x4*x1+x4*x1*x2+x1*x2*x3-x1*x3-x2*x4",
}
_LV5_F = [
    "1-x2-x3-x4+x2*x3+x2*x4+x3*x4+x4*x5-x2*x3*x4-x2*x4*x5+x2*x3*x4*x5",
    "1-x3-x4-x5+x3*x4+x3*x5+x4*x5+x5*x1-x3*x4*x5-x3*x5*x1+x3*x4*x5*x1",
    "1-x4-x5-x1+x4*x5+x4*x1+x5*x1+x1*x2-x4*x5*x1-x4*x1*x2+x4*x5*x1*x2",
    "1-x5-x1-x2+x5*x1+x5*x2+x1*x2+x2*x3-x5*x1*x2-x5*x2*x3+x5*x1*x2*x3",
    "1-x1-x2-x3+x1*x2+x1*x3+x2*x3+x3*x4-x1*x2*x3-x1*x3*x4+x1*x2*x3*x4",
]
LV5_PRINTED = {f"X{j}": (f"x{j}", _LV5_F[j - 1], _LV5_F[j % 5]) for j in range(1, 6)}
LV5_INVARIANTS_PRINTED = {
    "H1": "x1*x2+x2*x3+x3*x4+x4*x5+x5*x1-x1-x2-x3-x4-x5",
    "H2": ("x1*x3+x2*x4+x3*x5+x4*x1+x5*x2"
           "-x1*x2*x3-x2*x3*x4-x3*x4*x5-x4*x5*x1-x5*x1*x2"
           "-x1*x2*x4-x1*x3*x4-x1*x3*x5-x2*x3*x5-x2*x4*x5"
           "+x2*x3*x4*x5+x3*x4*x5*x1+x4*x5*x1*x2+x5*x1*x2*x3+x1*x2*x3*x4"),
    "r": "x1*x2*x3*x4*x5",
}
LV3_PRINTED = {
    "X": ("x", "1-y+y*z", "1-z+z*x"),
    "Y": ("y", "1-z+z*x", "1-x+x*y"),
    "Z": ("z", "1-x+x*y", "1-y+y*z"),
}


def printed_lv_components(d: int) -> tuple[RationalFunction, ...]:
    """The displayed closed forms for d = 3 (``a = 0``, renamed to x1..x3), 4 and 5."""
    vs = lv_vars(d)
    if d == 3:
        ren = {"x": "x1", "y": "x2", "z": "x3"}
        table = {k: tuple(re.sub(r"[xyz]", lambda m: ren[m.group()], s) for s in v)
                 for k, v in LV3_PRINTED.items()}
    elif d == 4:
        table = LV4_PRINTED
    elif d == 5:
        table = LV5_PRINTED
    else:
        raise ValueError(f"no printed form for d={d}")
    out = []
    for v, num, den in table.values():
        out.append(RationalFunction(_poly(v, vs) * _poly(num, vs), _poly(den, vs)))
    return tuple(out)


def _lv_factored(d: int) -> tuple[Component, ...]:
    vs = lv_vars(d)
    out = []
    for j, f in enumerate(lv_components(d), start=1):
        xj = Polynomial.variable(f"x{j}", vs)
        num = f.num.exact_div(xj)
        out.append(Component(((xj, 1), (num, 1), (f.den, -1))))
    return tuple(out)


def build_lv_general(d: int, checked: bool = False) -> RationalMap:
    """The d-dimensional LV map with invariants ``H_1..H_[d/2], r``.

    For d = 4 the displayed invariants ``t`` and ``u`` are attached as well.
    """
    vs = lv_vars(d)
    inv = dict(lv_invariants(d))
    if d == 4:
        for k in ("t", "u"):
            inv[k] = _poly(LV4_INVARIANTS_PRINTED[k], vs)
    m = RationalMap(f"lv{d}", vs, lv_components(d), {"d": d}, inv, f"lv(d={d})",
                    _lv_factored(d))
    return _checked(m, checked)


# -- discrete Painlevé V ----------------------------------------------------------

PV_F = [
    "1-x1+x1*x2-x1*x2*x3",
    "1-x2+x2*x3-x2*x3*x4",
    "1-x3+x3*x4-x3*x4*x1",
    "1-x4+x4*x1-x4*x1*x2",
]
PV_INVARIANTS = {
    "r": "x1*x2*x3*x4",
    "s": "(1-x1)*(1-x2)*(1-x3)*(1-x4)",
    "v": "(1-x2*x4)*(1-x1*x3)",
}


def build_pv(checked: bool = False) -> RationalMap:
    """``X_j = x_j F_{j+1} / F_{j+3}`` with ``F_k = 1 - x_k + x_k x_{k+1} - x_k x_{k+1} x_{k+2}``."""
    vs = lv_vars(4)
    F = [_poly(f, vs) for f in PV_F]
    comps, factored = [], []
    for j in range(4):
        xj = Polynomial.variable(vs[j], vs)
        num, den = F[(j + 1) % 4], F[(j + 3) % 4]
        comps.append(RationalFunction(xj * num, den))
        factored.append(Component(((xj, 1), (num, 1), (den, -1))))
    inv = {k: _poly(v, vs) for k, v in PV_INVARIANTS.items()}
    m = RationalMap("pv", vs, tuple(comps), {}, inv, "pv", tuple(factored))
    return _checked(m, checked)


# -- Toda ------------------------------------------------------------------------------

TODA3_G = {
    # the three recurring polynomials of the 3-point map
    "A": "V3*V1+I3*I1+I3*V1",
    "B": "I2*V3+V2*V3+I2*I3",
    "C": "I1*V2+I1*I2+V1*V2",
}
TODA3_FORMS = {
    # variable: (prefactor, numerator key, denominator key)
    "I1": ("I2", "A", "B"),
    "I2": ("I3", "C", "A"),
    "I3": ("I1", "B", "C"),
    "V1": ("V1", "B", "A"),
    "V2": ("V2", "A", "C"),
    "V3": ("V3", "C", "B"),
}
TODA3_INVARIANTS = {
    "T1": "I1+I2+I3+V1+V2+V3",
    "T2": "I1*I2+I2*I3+I3*I1+V1*V2+V2*V3+V3*V1+I1*V2+I2*V3+I3*V1",
    "T3": "I1*I2*I3",
    "T3p": "V1*V2*V3",
}


@dataclass(frozen=True)
class TodaState:
    """Toda variables ``I_1..I_N``, ``V_1..V_N`` with cyclic (1-based) indexing."""

    I: tuple
    V: tuple

    @property
    def N(self) -> int:
        return len(self.I)

    def i(self, j: int):
        return self.I[(j - 1) % self.N]

    def v(self, j: int):
        return self.V[(j - 1) % self.N]

    def as_tuple(self) -> tuple:
        return tuple(self.I) + tuple(self.V)


def build_toda(N: int = 3, checked: bool = False) -> RationalMap:
    """The N-point discrete Toda map on ``(I_1..I_N, V_1..V_N)``; only N = 3 is cataloged."""
    if N != 3:
        raise ValueError(f"toda map is only cataloged for N=3, got N={N}")
    vs = toda_vars(3)
    G = {k: _poly(v, vs) for k, v in TODA3_G.items()}
    comps, factored = [], []
    for v in vs:
        pre, nk, dk = TODA3_FORMS[v]
        pre = Polynomial.variable(pre, vs)
        comps.append(RationalFunction(pre * G[nk], G[dk]))
        factored.append(Component(((pre, 1), (G[nk], 1), (G[dk], -1))))
    inv = {k: _poly(v, vs) for k, v in TODA3_INVARIANTS.items()}
    m = RationalMap("toda3", vs, tuple(comps), {"N": 3}, inv, "toda(N=3)", tuple(factored))
    return _checked(m, checked)


def lv_toda_bridge(x: Sequence) -> TodaState:
    """``I_j = (1 - x_{2j-1})(1 - x_{2j})``, ``V_j = x_{2j} x_{2j+1}`` (cyclic).

    Works on numbers, polynomials or rational functions alike.
    """
    d = len(x)
    if d % 2:
        raise ValueError(f"bridge needs an even dimension, got {d}")
    N = d // 2
    X = lambda j: x[(j - 1) % d]  # noqa: E731
    I = tuple((1 - X(2 * j - 1)) * (1 - X(2 * j)) for j in range(1, N + 1))
    V = tuple(X(2 * j) * X(2 * j + 1) for j in range(1, N + 1))
    return TodaState(I, V)


# -- identity (test fixture and control) ---------------------------------------------


def build_identity(d: int = 3) -> RationalMap:
    vs = lv_vars(d)
    comps = tuple(RationalFunction(Polynomial.variable(v, vs)) for v in vs)
    return RationalMap("identity", vs, comps, {"d": d}, {}, f"identity(d={d})")


# -- descriptors ---------------------------------------------------------------------------

_DESC = re.compile(r"\s*(?P<name>[A-Za-z_][A-Za-z0-9_]*)\s*(?:\((?P<args>.*)\))?\s*$")
_ARG = re.compile(r"\s*(?P<key>[A-Za-z_]\w*)\s*=\s*(?P<val>[^,]*?)\s*(?:,|$)")


def parse_descriptor(text: str) -> tuple[str, dict]:
    """``"lv3(a=1/2)" -> ("lv3", {"a": "1/2"})``; raises :class:`ParseError` with a position."""
    m = _DESC.match(text)
    if not m:
        bad = re.match(r"\s*[A-Za-z_]\w*\s*", text)
        raise ParseError("malformed map descriptor", text, bad.end() if bad else 0)
    args: dict = {}
    body = m.group("args")
    if body is not None and body.strip():
        start = m.start("args")
        pos = 0
        while pos < len(body):
            am = _ARG.match(body, pos)
            if not am or am.end() == pos:
                raise ParseError("expected key=value", text, start + pos)
            if not am.group("val"):
                raise ParseError(f"missing value for {am.group('key')!r}", text, start + am.start("val"))
            if am.group("key") in args:
                raise ParseError(f"duplicate key {am.group('key')!r}", text, start + am.start("key"))
            args[am.group("key")] = am.group("val")
            pos = am.end()
    return m.group("name"), args


def _int_arg(args, key, text, default=None):
    if key not in args:
        if default is None:
            raise ParseError(f"missing argument {key!r}", text, len(text))
        return default
    try:
        return int(args[key])
    except ValueError:
        raise ParseError(f"{key} must be an integer", text, text.find(args[key])) from None


def map_from_descriptor(text: str, checked: bool = False) -> RationalMap:
    """Build a cataloged map from its descriptor.

    Known names: ``lv3(a=...)`` (rational or symbolic a, default 0), ``lv(d=...)``,
    ``lv4``, ``lv5``, ``pv``, ``toda(N=3)``/``toda3``, ``identity(d=...)``.
    """
    name, args = parse_descriptor(text)
    allowed = {"lv3": {"a"}, "lv": {"d"}, "lv4": set(), "lv5": set(), "pv": set(),
               "toda": {"N"}, "toda3": set(), "identity": {"d"}}
    if name not in allowed:
        raise ParseError(f"unknown map {name!r}", text, text.find(name))
    extra = set(args) - allowed[name]
    if extra:
        k = sorted(extra)[0]
        raise ParseError(f"unexpected argument {k!r} for {name}", text, text.find(k))
    if name == "lv3":
        try:
            a = _as_param(args.get("a", "0"))
        except (ValueError, ZeroDivisionError):
            raise ParseError("a must be a rational or a name", text, text.find(args["a"])) from None
        return build_lv3(a, checked)
    if name == "lv":
        d = _int_arg(args, "d", text)
        if d < 3:
            raise ParseError("d must be at least 3", text, text.find(args["d"]))
        return build_lv_general(d, checked)
    if name in ("lv4", "lv5"):
        return build_lv_general(int(name[2]), checked)
    if name == "pv":
        return build_pv(checked)
    if name in ("toda", "toda3"):
        N = _int_arg(args, "N", text, 3)
        if N != 3:
            raise ParseError("only N=3 is cataloged", text, text.find(args["N"]))
        return build_toda(N, checked)
    return build_identity(_int_arg(args, "d", text, 3))


def map_id(m: RationalMap) -> str:
    """Catalog key used by the varieties module (``lv3``, ``lv4``, ``pv``, ``lv5``, ``toda3``)."""
    return m.name

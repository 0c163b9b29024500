"""Rational functions over Q, always kept fully cancelled."""

from __future__ import annotations

from fractions import Fraction
from typing import Mapping, Union

from .errors import ZeroFunctionDivision
from .order import DEFAULT_ORDER
from .polynomial import Polynomial, _ctx, _convert, _is_scalar, merge_variables, variables_of

Substitution = Union["RationalFunction", Polynomial, int, Fraction]


def _cancel(num: Polynomial, den: Polynomial) -> tuple[Polynomial, Polynomial]:
    g = num.flint.gcd(den.flint)
    if not g.is_constant():
        num = Polynomial._wrap(num.variables, num.flint / g)
        den = Polynomial._wrap(den.variables, den.flint / g)
    return num, den


class RationalFunction:
    """``numerator / denominator`` with gcd 1 and monic denominator (grevlex).

    Zero is stored as ``0/1``.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, cancel: bool = True):
        if not isinstance(num, Polynomial):
            num = Polynomial.constant(num)
        if den is None:
            den = Polynomial.one(num.variables)
        elif not isinstance(den, Polynomial):
            den = Polynomial.constant(den)
        if den.is_zero():
            raise ZeroFunctionDivision("denominator is the zero polynomial")
        vs = variables_of(num, den)
        num, den = num.with_variables(vs), den.with_variables(vs)
        if num.is_zero():
            den = Polynomial.one(vs)
        elif cancel:
            num, den = _cancel(num, den)
        lc = den.leading_coefficient(DEFAULT_ORDER)
        if lc != 1:
            num, den = num / lc, den / lc
        self.num = num
        self.den = den

    @classmethod
    def coerce(cls, value) -> "RationalFunction":
        if isinstance(value, RationalFunction):
            return value
        return cls(value)

    @property
    def variables(self) -> tuple[str, ...]:
        return self.num.variables

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def with_variables(self, variables) -> "RationalFunction":
        out = RationalFunction.__new__(RationalFunction)
        out.num = self.num.with_variables(variables)
        out.den = self.den.with_variables(variables)
        return out

    def _pair(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, Polynomial) or _is_scalar(other):
            return RationalFunction(other)
        return None

    def __add__(self, other):
        o = self._pair(other)
        if o is None:
            return NotImplemented
        if o.den == self.den:
            return RationalFunction(self.num + o.num, self.den)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        out = RationalFunction.__new__(RationalFunction)
        out.num, out.den = -self.num, self.den
        return out

    def __sub__(self, other):
        o = self._pair(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._pair(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._pair(other)
        if o is None:
            return NotImplemented
        # cross-cancel first: keeps the operands of the final gcd small
        a, d = _cancel(*_aligned(self.num, o.den))
        c, b = _cancel(*_aligned(o.num, self.den))
        return RationalFunction(a * c, b * d, cancel=False)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroFunctionDivision("inverse of the zero function")
        return RationalFunction(self.den, self.num, cancel=False)

    def __truediv__(self, other):
        o = self._pair(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroFunctionDivision("division by the zero function")
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._pair(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            raise ValueError("integer powers only")
        if k < 0:
            return self.inverse() ** (-k)
        return RationalFunction(self.num ** k, self.den ** k, cancel=False)

    def __eq__(self, other):
        o = self._pair(other)
        if o is None:
            return NotImplemented
        return self.num * o.den == o.num * self.den

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        # canonical forms can differ between variable contexts; stay coarse
        return hash((frozenset(self.num.used_variables()), len(self.num), len(self.den)))

    def compose(self, mapping: Mapping[str, Substitution]) -> "RationalFunction":
        """Substitute rational functions for variables, then cancel."""
        subs = {v: RationalFunction.coerce(g) for v, g in mapping.items() if v in self.variables}
        if not subs:
            return self
        num = homogeneous_compose(self.num, self.den, subs)
        return RationalFunction(*num)

    def derivative(self, var: str) -> "RationalFunction":
        n, d = self.num, self.den
        dn, dd = n.derivative(var), d.derivative(var)
        if dd.is_zero():
            return RationalFunction(dn, d)
        return RationalFunction(dn * d - n * dd, d * d)

    def evaluate(self, point):
        den = self.den.evaluate(point)
        if den == 0:
            raise ZeroDivisionError("denominator vanishes at the evaluation point")
        return self.num.evaluate(point) / den

    __call__ = evaluate

    def degree(self, var=None):
        return self.num.degree(var)

    def __str__(self):
        if self.den == 1:
            return str(self.num)
        return f"({self.num})/({self.den})"

    def __repr__(self):
        return f"RationalFunction({str(self)!r})"


def _aligned(a: Polynomial, b: Polynomial):
    if a.variables == b.variables:
        return a, b
    vs = merge_variables(a.variables, b.variables)
    return a.with_variables(vs), b.with_variables(vs)


def homogeneous_compose(num: Polynomial, den: Polynomial,
                        subs: Mapping[str, RationalFunction]) -> tuple[Polynomial, Polynomial]:
    """Numerator and denominator of ``(num/den)`` after substituting ``subs``.

    Each substituted variable ``v -> n_v/d_v`` contributes the factor
    ``d_v**k_v`` with ``k_v = max(deg_v num, deg_v den)`` to both parts, which
    cancels; the result is uncancelled and has no rational intermediates.
    """
    base = merge_variables(num.variables, den.variables)
    num, den = num.with_variables(base), den.with_variables(base)
    names = list(subs)
    aux = [f"__w{i}" for i in range(len(names))]
    hvars = base + tuple(aux)
    hctx = _ctx(hvars)
    pos = {v: base.index(v) for v in names}
    kmax = {v: max(num.degree(v), den.degree(v), 0) for v in names}

    def homogenize(p: Polynomial):
        out = {}
        nb = len(base)
        for e, c in p.flint.to_dict().items():
            ext = list(e) + [0] * len(names)
            for i, v in enumerate(names):
                ext[nb + i] = kmax[v] - e[pos[v]]
            out[tuple(ext)] = c
        return hctx.from_dict(out)

    out_vars = merge_variables(*(g.variables for g in subs.values()),
                               [v for v in base if v not in subs])
    octx = _ctx(out_vars)
    gens = []
    for v in base:
        if v in subs:
            gens.append(_convert(subs[v].num.flint, subs[v].variables, out_vars))
        else:
            gens.append(octx.gen(out_vars.index(v)))
    for v in names:
        gens.append(_convert(subs[v].den.flint, subs[v].variables, out_vars))
    hn = homogenize(num).compose(*gens, ctx=octx)
    hd = homogenize(den).compose(*gens, ctx=octx)
    return Polynomial._wrap(out_vars, hn), Polynomial._wrap(out_vars, hd)

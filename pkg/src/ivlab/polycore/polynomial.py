"""Exact multivariate polynomials over Q.

Storage and the arithmetic kernels are delegated to FLINT's ``fmpq_mpoly``;
this module supplies the named-variable layer on top of it: operands in
different variable contexts are aligned by the union of their names, terms
are exposed as ``{exponent tuple: Fraction}`` and ordered by a
:class:`~ivlab.polycore.order.TermOrder`.

Values are immutable.
"""

from __future__ import annotations

import numbers
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import flint

from .errors import PolycoreError, UnboundVariableError
from .order import DEFAULT_ORDER, TermOrder

NEG_INF = float("-inf")

_Scalar = (int, Fraction, flint.fmpq, flint.fmpz)


@lru_cache(maxsize=None)
def _ctx(variables: tuple[str, ...]):
    return flint.fmpq_mpoly_ctx.get(variables, "degrevlex")


def to_fmpq(c) -> flint.fmpq:
    if isinstance(c, flint.fmpq):
        return c
    if isinstance(c, (int, flint.fmpz)):
        return flint.fmpq(c)
    if isinstance(c, Fraction):
        return flint.fmpq(c.numerator, c.denominator)
    if isinstance(c, numbers.Rational):
        return flint.fmpq(int(c.numerator), int(c.denominator))
    raise TypeError(f"not an exact rational: {c!r}")


def int_items(p) -> list:
    """``(exponent tuple of int, fmpq)`` pairs of a FLINT polynomial, in storage order."""
    return [(tuple(map(int, e)), c) for e, c in zip(p.monoms(), p.coeffs())]


def to_fraction(c) -> Fraction:
    return Fraction(int(c.p), int(c.q))


def _is_scalar(c) -> bool:
    return isinstance(c, _Scalar) or (
        isinstance(c, numbers.Rational) and not isinstance(c, bool)
    )


def merge_variables(*groups: Sequence[str]) -> tuple[str, ...]:
    seen: dict[str, None] = {}
    for g in groups:
        for v in g:
            seen.setdefault(v, None)
    return tuple(seen)


def _convert(p, old: tuple[str, ...], new: tuple[str, ...]):
    if old == new:
        return p
    ctx = _ctx(new)
    if p.is_zero():
        return ctx.from_dict({})
    pos = {v: i for i, v in enumerate(new)}
    try:
        idx = [pos[v] for v in old]
    except KeyError as exc:
        # variables absent from the target must have zero exponent everywhere
        degs = p.degrees()
        for v, d in zip(old, degs):
            if d > 0 and v not in pos:
                raise PolycoreError(f"variable {v!r} missing from target context") from exc
        idx = [pos.get(v, -1) for v in old]
    n = len(new)
    out = {}
    for e, c in p.to_dict().items():
        ne = [0] * n
        for i, k in zip(idx, e):
            if k:
                ne[i] = k
        out[tuple(ne)] = c
    return ctx.from_dict(out)


class Polynomial:
    """A polynomial with rational coefficients in named variables.

    >>> x, y = Polynomial.variable("x"), Polynomial.variable("y")
    >>> str((x + y) * (x - y))
    'x^2 - y^2'
    """

    __slots__ = ("_vars", "_p", "_hash")

    def __init__(self, terms: Mapping[tuple, object] | None = None,
                 variables: Iterable[str] = ()):
        variables = tuple(variables)
        if len(set(variables)) != len(variables):
            raise ValueError(f"duplicate variable names: {variables}")
        ctx = _ctx(variables)
        data = {}
        for e, c in (terms or {}).items():
            e = tuple(e)
            if len(e) != len(variables):
                raise ValueError(f"exponent {e} does not match {len(variables)} variables")
            if any((not isinstance(k, int)) or k < 0 for k in e):
                raise ValueError(f"exponents must be non-negative integers: {e}")
            c = to_fmpq(c)
            if c != 0:
                data[e] = data.get(e, 0) + c
        self._vars = variables
        self._p = ctx.from_dict({e: c for e, c in data.items() if c != 0})
        self._hash = None

    @classmethod
    def _wrap(cls, variables: tuple[str, ...], p) -> "Polynomial":
        obj = cls.__new__(cls)
        obj._vars = variables
        obj._p = p
        obj._hash = None
        return obj

    @classmethod
    def from_flint(cls, p) -> "Polynomial":
        return cls._wrap(tuple(p.context().names()), p)

    @classmethod
    def variable(cls, name: str, variables: Sequence[str] | None = None) -> "Polynomial":
        variables = tuple(variables) if variables is not None else (name,)
        if name not in variables:
            raise ValueError(f"{name!r} not among {variables}")
        ctx = _ctx(variables)
        return cls._wrap(variables, ctx.gen(variables.index(name)))

    @classmethod
    def constant(cls, c, variables: Sequence[str] = ()) -> "Polynomial":
        variables = tuple(variables)
        return cls._wrap(variables, _ctx(variables).constant(to_fmpq(c)))

    @classmethod
    def zero(cls, variables: Sequence[str] = ()) -> "Polynomial":
        return cls.constant(0, variables)

    @classmethod
    def one(cls, variables: Sequence[str] = ()) -> "Polynomial":
        return cls.constant(1, variables)

    @classmethod
    def parse(cls, text: str, variables: Sequence[str] | None = None) -> "Polynomial":
        from .textio import parse_polynomial
        return parse_polynomial(text, variables)

    # -- structure -------------------------------------------------------

    @property
    def variables(self) -> tuple[str, ...]:
        return self._vars

    @property
    def flint(self):
        return self._p

    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        return {e: to_fraction(c) for e, c in int_items(self._p)}

    def sorted_terms(self, order: TermOrder = DEFAULT_ORDER) -> list[tuple[tuple[int, ...], Fraction]]:
        """Terms in decreasing order under ``order``."""
        items = int_items(self._p)
        if not (order.kind == "grevlex" and order.is_natural(self._vars)):
            key = order.keyfunc(self._vars)
            items.sort(key=lambda t: key(t[0]), reverse=True)
        return [(e, to_fraction(c)) for e, c in items]

    def monomials(self) -> list[tuple[int, ...]]:
        return [tuple(map(int, e)) for e in self._p.monoms()]

    def __len__(self) -> int:
        return len(self._p)

    def is_zero(self) -> bool:
        return self._p.is_zero()

    def is_constant(self) -> bool:
        return self._p.is_constant()

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise PolycoreError("polynomial is not constant")
        if self.is_zero():
            return Fraction(0)
        return to_fraction(self._p.leading_coefficient())

    def used_variables(self) -> tuple[str, ...]:
        if self.is_zero():
            return ()
        return tuple(v for v, d in zip(self._vars, self._p.degrees()) if d > 0)

    def with_variables(self, variables: Sequence[str]) -> "Polynomial":
        """Re-express in ``variables`` (must cover every variable in use)."""
        variables = tuple(variables)
        return Polynomial._wrap(variables, _convert(self._p, self._vars, variables))

    def drop_unused(self) -> "Polynomial":
        return self.with_variables(self.used_variables())

    def coefficient(self, exps: Sequence[int]) -> Fraction:
        return self.terms.get(tuple(exps), Fraction(0))

    def degree(self, var: str | None = None):
        """Degree in ``var`` or total degree; ``-inf`` for the zero polynomial."""
        if self.is_zero():
            return NEG_INF
        if var is None:
            return int(self._p.total_degree())
        if var not in self._vars:
            return 0
        return int(self._p.degrees()[self._vars.index(var)])

    def degrees(self) -> dict[str, int]:
        if self.is_zero():
            return {v: NEG_INF for v in self._vars}
        return dict(zip(self._vars, (int(d) for d in self._p.degrees())))

    def leading_term(self, order: TermOrder = DEFAULT_ORDER) -> tuple[tuple[int, ...], Fraction]:
        if self.is_zero():
            raise PolycoreError("zero polynomial has no leading term")
        if order.kind == "grevlex" and order.is_natural(self._vars):
            return tuple(map(int, self._p.monoms()[0])), to_fraction(self._p.coeffs()[0])
        key = order.keyfunc(self._vars)
        e, c = max(int_items(self._p), key=lambda t: key(t[0]))
        return e, to_fraction(c)

    def leading_coefficient(self, order: TermOrder = DEFAULT_ORDER) -> Fraction:
        return self.leading_term(order)[1]

    def monic(self, order: TermOrder = DEFAULT_ORDER) -> "Polynomial":
        if self.is_zero():
            return self
        return self / self.leading_coefficient(order)

    # -- arithmetic ------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other._vars == self._vars:
                return self._vars, self._p, other._p
            vs = merge_variables(self._vars, other._vars)
            return vs, _convert(self._p, self._vars, vs), _convert(other._p, other._vars, vs)
        if _is_scalar(other):
            return self._vars, self._p, _ctx(self._vars).constant(to_fmpq(other))
        return None

    def __add__(self, other):
        r = self._coerce(other)
        if r is None:
            return NotImplemented
        vs, a, b = r
        return Polynomial._wrap(vs, a + b)

    __radd__ = __add__

    def __sub__(self, other):
        r = self._coerce(other)
        if r is None:
            return NotImplemented
        vs, a, b = r
        return Polynomial._wrap(vs, a - b)

    def __rsub__(self, other):
        r = self._coerce(other)
        if r is None:
            return NotImplemented
        vs, a, b = r
        return Polynomial._wrap(vs, b - a)

    def __neg__(self):
        return Polynomial._wrap(self._vars, -self._p)

    def __pos__(self):
        return self

    def __mul__(self, other):
        r = self._coerce(other)
        if r is None:
            return NotImplemented
        vs, a, b = r
        return Polynomial._wrap(vs, a * b)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("only non-negative integer powers are supported")
        return Polynomial._wrap(self._vars, self._p ** k)

    def __truediv__(self, other):
        if _is_scalar(other):
            c = to_fmpq(other)
            if c == 0:
                raise ZeroDivisionError("polynomial division by zero")
            return Polynomial._wrap(self._vars, self._p / c)
        if isinstance(other, Polynomial):
            from .rational import RationalFunction
            return RationalFunction(self, other)
        return NotImplemented

    def __rtruediv__(self, other):
        if _is_scalar(other):
            from .rational import RationalFunction
            return RationalFunction(Polynomial.constant(other, self._vars), self)
        return NotImplemented

    def exact_div(self, other: "Polynomial") -> "Polynomial":
        """Quotient of an exact division; raises if ``other`` does not divide."""
        vs, a, b = self._coerce(other)
        if b.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        try:
            return Polynomial._wrap(vs, a / b)
        except flint.DomainError as exc:
            raise PolycoreError("division is not exact") from exc

    def divides(self, other: "Polynomial") -> bool:
        """True if ``self`` divides ``other``."""
        vs, a, b = self._coerce(other)
        if a.is_zero():
            return b.is_zero()
        try:
            b / a
        except flint.DomainError:
            return False
        return True

    def gcd(self, other: "Polynomial", order: TermOrder = DEFAULT_ORDER) -> "Polynomial":
        from .gcd import poly_gcd
        return poly_gcd(self, other, order)

    def derivative(self, var: str) -> "Polynomial":
        if var not in self._vars:
            return Polynomial.zero(self._vars)
        return Polynomial._wrap(self._vars, self._p.derivative(var))

    def subs(self, values: Mapping[str, object]) -> "Polynomial":
        """Substitute exact rationals for some variables (context kept)."""
        vals = {v: to_fmpq(c) for v, c in values.items() if v in self._vars}
        if not vals:
            return self
        return Polynomial._wrap(self._vars, self._p.subs(vals))

    def compose(self, mapping: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Substitute polynomials for variables; unmapped variables stay."""
        subs = {}
        for v, q in mapping.items():
            if v not in self._vars:
                continue
            subs[v] = q if isinstance(q, Polynomial) else Polynomial.constant(q)
        if not subs:
            return self
        out_vars = merge_variables(*(q._vars for q in subs.values()),
                                   [v for v in self._vars if v not in subs])
        ctx = _ctx(out_vars)
        gens = []
        for v in self._vars:
            if v in subs:
                q = subs[v]
                gens.append(_convert(q._p, q._vars, out_vars))
            else:
                gens.append(ctx.gen(out_vars.index(v)))
        if not self._vars:
            return Polynomial._wrap(out_vars, _convert(self._p, (), out_vars))
        return Polynomial._wrap(out_vars, self._p.compose(*gens, ctx=ctx))

    def factor(self) -> tuple[Fraction, list[tuple["Polynomial", int]]]:
        """Irreducible factorisation over Q: ``(content, [(factor, multiplicity)])``."""
        c, fs = self._p.factor()
        return to_fraction(c), [(Polynomial._wrap(self._vars, f), int(m)) for f, m in fs]

    # -- evaluation ------------------------------------------------------

    def __call__(self, point: Mapping[str, object]):
        return self.evaluate(point)

    def evaluate(self, point: Mapping[str, object]):
        """Value at ``point`` (a mapping from every used variable to a number).

        Exact rationals give an exact ``Fraction``; other numeric types
        (``mpmath.mpc``, ``complex``, numpy arrays) are evaluated in that
        type, so precision is whatever the caller's number type carries.
        """
        used = self.used_variables()
        missing = [v for v in used if v not in point]
        if missing:
            raise UnboundVariableError(missing)
        if all(_is_scalar(point[v]) for v in used):
            vals = [to_fmpq(point[v]) if v in used else flint.fmpq(0) for v in self._vars]
            if not self._vars:
                return self.constant_value()
            return to_fraction(self._p(*vals))
        return evaluate_terms(dict(int_items(self._p)), [point[v] if v in used else 0 for v in self._vars])

    # -- comparison / display --------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            if self._vars == other._vars:
                return self._p == other._p
            _, a, b = self._coerce(other)
            return a == b
        if _is_scalar(other):
            return self.is_constant() and self.constant_value() == Fraction(to_fraction(to_fmpq(other)))
        return NotImplemented

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        if self._hash is None:
            items = []
            for e, c in int_items(self._p):
                mono = tuple((v, k) for v, k in zip(self._vars, e) if k)
                items.append((mono, to_fraction(c)))
            self._hash = hash(frozenset(items))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def __str__(self):
        from .textio import format_polynomial
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({str(self)!r}, variables={self._vars!r})"


def evaluate_terms(terms, values):
    """Sum of ``c * prod(values**e)`` in the numeric type of ``values``."""
    cache = [dict() for _ in values]

    def power(i, k):
        got = cache[i].get(k)
        if got is None:
            got = values[i] ** k
            cache[i][k] = got
        return got

    total = 0
    for e, c in terms.items():
        c = c if isinstance(c, Fraction) else to_fraction(c)
        term = None
        for i, k in enumerate(e):
            if k:
                f = power(i, k)
                term = f if term is None else term * f
        if term is None:
            term = 1
        if c.denominator == 1:
            total = total + c.numerator * term
        else:
            total = total + c.numerator * term / c.denominator
    return total


def variables_of(*polys: Polynomial) -> tuple[str, ...]:
    return merge_variables(*(p.variables for p in polys))


def align(polys: Sequence[Polynomial], variables: Sequence[str] | None = None) -> list[Polynomial]:
    vs = tuple(variables) if variables is not None else variables_of(*polys)
    return [p.with_variables(vs) for p in polys]


def symbols(names: str | Sequence[str]) -> tuple[Polynomial, ...]:
    """Generators of the ring in ``names`` (space or comma separated)."""
    if isinstance(names, str):
        names = names.replace(",", " ").split()
    names = tuple(names)
    return tuple(Polynomial.variable(n, names) for n in names)

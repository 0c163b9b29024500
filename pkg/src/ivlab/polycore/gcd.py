"""Polynomial GCD.

``poly_gcd`` is the production route (FLINT's multivariate gcd).
``subresultant_gcd`` is a self-contained recursive implementation:
content/primitive-part split in a main variable plus the subresultant
polynomial remainder sequence, recursing on the coefficient ring.  It is
much slower and serves as the independent check of the production route.
"""

from __future__ import annotations

from .order import DEFAULT_ORDER, TermOrder
from .polynomial import Polynomial, variables_of


def poly_gcd(a: Polynomial, b: Polynomial, order: TermOrder = DEFAULT_ORDER) -> Polynomial:
    """Monic gcd under ``order``; ``gcd(p, 0)`` is ``p`` made monic and ``gcd(0, 0) = 0``."""
    vs = variables_of(a, b)
    a, b = a.with_variables(vs), b.with_variables(vs)
    if a.is_zero() and b.is_zero():
        return a
    if a.is_zero():
        return b.monic(order)
    if b.is_zero():
        return a.monic(order)
    g = Polynomial._wrap(vs, a.flint.gcd(b.flint))
    return g.monic(order)


def coefficients_in(p: Polynomial, var: str) -> dict[int, Polynomial]:
    """``p`` as a polynomial in ``var``: ``{k: coefficient of var**k}``."""
    vs = p.variables
    if var not in vs:
        return {0: p} if not p.is_zero() else {}
    i = vs.index(var)
    groups: dict[int, dict] = {}
    for e, c in p.terms.items():
        k = e[i]
        e0 = e[:i] + (0,) + e[i + 1:]
        groups.setdefault(k, {})[e0] = c
    return {k: Polynomial(t, vs) for k, t in groups.items()}


def _lc(p: Polynomial, var: str) -> Polynomial:
    cs = coefficients_in(p, var)
    return cs[max(cs)]


def pseudo_remainder(a: Polynomial, b: Polynomial, var: str) -> Polynomial:
    """``lc(b)**(deg a - deg b + 1) * a`` reduced modulo ``b`` in ``var``."""
    db = b.degree(var)
    lb = _lc(b, var)
    x = Polynomial.variable(var, a.variables) if var in a.variables else None
    r = a
    steps = a.degree(var) - db + 1
    used = 0
    while not r.is_zero() and r.degree(var) >= db:
        k = r.degree(var) - db
        shift = x ** k if k else 1
        r = lb * r - _lc(r, var) * shift * b
        used += 1
    if steps > used:
        r = r * lb ** (steps - used)
    return r


def _content(p: Polynomial, var: str, rest: list[str]) -> tuple[Polynomial, Polynomial]:
    cs = list(coefficients_in(p, var).values())
    c = cs[0]
    for q in cs[1:]:
        c = _sr_gcd(c, q, rest)
        if c.is_constant():
            break
    c = c.monic()
    return c, p.exact_div(c)


def _prs_last(a: Polynomial, b: Polynomial, var: str) -> Polynomial:
    g = Polynomial.one(a.variables)
    h = Polynomial.one(a.variables)
    while True:
        d = a.degree(var) - b.degree(var)
        r = pseudo_remainder(a, b, var)
        if r.is_zero():
            return b
        if r.degree(var) == 0:
            return Polynomial.one(a.variables)
        a, b = b, r.exact_div(g * h ** d)
        g = _lc(a, var)
        if d == 1:
            h = g
        elif d > 1:
            h = (g ** d).exact_div(h ** (d - 1))


def _sr_gcd(a: Polynomial, b: Polynomial, order_vars: list[str]) -> Polynomial:
    if a.is_zero():
        return b
    if b.is_zero():
        return a
    used = [v for v in order_vars if a.degree(v) > 0 or b.degree(v) > 0]
    if not used:
        return Polynomial.one(a.variables)
    var, rest = used[0], used[1:]
    ca, pa = _content(a, var, rest)
    cb, pb = _content(b, var, rest)
    c = _sr_gcd(ca, cb, rest)
    if pa.degree(var) < pb.degree(var):
        pa, pb = pb, pa
    if pb.degree(var) == 0:
        return c
    r = _prs_last(pa, pb, var)
    if r.degree(var) <= 0:
        return c
    return c * _content(r, var, rest)[1]


def subresultant_gcd(a: Polynomial, b: Polynomial, order: TermOrder = DEFAULT_ORDER) -> Polynomial:
    vs = variables_of(a, b)
    a, b = a.with_variables(vs), b.with_variables(vs)
    if a.is_zero() and b.is_zero():
        return a
    return _sr_gcd(a, b, list(vs)).monic(order)

"""Multivariate division and Buchberger's algorithm."""

from __future__ import annotations

import heapq
from typing import Sequence

from .errors import BudgetExceeded
from .order import DEFAULT_ORDER, TermOrder
from .polynomial import Polynomial, variables_of

DEFAULT_MAX_SPOLYS = 2000
DEFAULT_MAX_TERMS = 20000


def _negate(key):
    if isinstance(key, tuple):
        return tuple(_negate(k) for k in key)
    return -key


def _divides(a, b):
    return all(x <= y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _lcm(a, b):
    return tuple(max(x, y) for x, y in zip(a, b))


class _Divisor:
    __slots__ = ("lm", "lc", "terms")

    def __init__(self, terms: dict, key):
        self.lm = max(terms, key=key)
        self.lc = terms[self.lm]
        self.terms = terms


def _reduce_terms(terms: dict, divisors: Sequence[_Divisor], key, with_quotients=True):
    cur = dict(terms)
    heap = [(_negate(key(e)), e) for e in cur]
    heapq.heapify(heap)
    rem: dict = {}
    quos = [dict() for _ in divisors] if with_quotients else None
    while heap:
        _, e = heapq.heappop(heap)
        c = cur.pop(e, None)
        if not c:
            continue
        for i, d in enumerate(divisors):
            if _divides(d.lm, e):
                shift = _sub(e, d.lm)
                f = c / d.lc
                if with_quotients:
                    quos[i][shift] = quos[i].get(shift, 0) + f
                for be, bc in d.terms.items():
                    ne = _add(be, shift)
                    if ne == e:
                        continue
                    old = cur.get(ne)
                    if old is None:
                        cur[ne] = -f * bc
                        heapq.heappush(heap, (_negate(key(ne)), ne))
                    else:
                        nv = old - f * bc
                        if nv:
                            cur[ne] = nv
                        else:
                            del cur[ne]
                break
        else:
            rem[e] = c
    return quos, rem


def poly_reduce(p: Polynomial, basis: Sequence[Polynomial],
                order: TermOrder = DEFAULT_ORDER) -> tuple[list[Polynomial], Polynomial]:
    """Divide ``p`` by ``basis``: returns ``(quotients, remainder)``.

    ``p == sum(q*b) + r`` and no monomial of ``r`` is divisible by a leading
    monomial of the basis.  Divisors are tried in sequence order, so the
    result is deterministic.
    """
    if any(b.is_zero() for b in basis):
        raise ValueError("basis polynomials must be nonzero")
    vs = variables_of(p, *basis)
    p = p.with_variables(vs)
    basis = [b.with_variables(vs) for b in basis]
    if len(basis) == 1 and order.kind == "grevlex" and order.is_natural(vs) and vs:
        # single divisor: FLINT's divrem runs the same division in the same order
        q, r = divmod(p.flint, basis[0].flint)
        return [Polynomial._wrap(vs, q)], Polynomial._wrap(vs, r)
    key = order.keyfunc(vs)
    divisors = [_Divisor(b.terms, key) for b in basis]
    quos, rem = _reduce_terms(p.terms, divisors, key)
    return [Polynomial(q, vs) for q in quos], Polynomial(rem, vs)


def reduce_remainder(p: Polynomial, basis: Sequence[Polynomial],
                     order: TermOrder = DEFAULT_ORDER) -> Polynomial:
    return poly_reduce(p, basis, order)[1]


def _spoly(f: _Divisor, g: _Divisor):
    lcm = _lcm(f.lm, g.lm)
    sf, sg = _sub(lcm, f.lm), _sub(lcm, g.lm)
    out: dict = {}
    for e, c in f.terms.items():
        out[_add(e, sf)] = c / f.lc
    for e, c in g.terms.items():
        ne = _add(e, sg)
        v = out.get(ne, 0) - c / g.lc
        if v:
            out[ne] = v
        else:
            out.pop(ne, None)
    return out


def _monic(terms: dict, key) -> dict:
    lc = terms[max(terms, key=key)]
    return {e: c / lc for e, c in terms.items()}


def groebner_basis(gens: Sequence[Polynomial], order: TermOrder = DEFAULT_ORDER,
                   max_spolys: int = DEFAULT_MAX_SPOLYS,
                   max_terms: int = DEFAULT_MAX_TERMS) -> list[Polynomial]:
    """Reduced Gröbner basis of the ideal generated by ``gens``.

    Buchberger's algorithm with the normal selection strategy (smallest lcm
    first) and both Buchberger criteria.  Raises :class:`BudgetExceeded` when
    more than ``max_spolys`` S-polynomials are reduced or an intermediate
    basis element exceeds ``max_terms`` terms.
    """
    gens = [g for g in gens if not g.is_zero()]
    vs = variables_of(*gens) if gens else ()
    if not gens:
        return []
    key = order.keyfunc(vs)
    G: list[_Divisor] = [_Divisor(_monic(g.with_variables(vs).terms, key), key) for g in gens]
    pairs = {(i, j) for j in range(len(G)) for i in range(j)}
    stats = {"spolys": 0, "zero_reductions": 0, "criterion_skips": 0, "max_terms": 0}

    def pair_key(ij):
        i, j = ij
        return (key(_lcm(G[i].lm, G[j].lm)), j, i)

    while pairs:
        ij = min(pairs, key=pair_key)
        pairs.discard(ij)
        i, j = ij
        lm_i, lm_j = G[i].lm, G[j].lm
        if all(a == 0 or b == 0 for a, b in zip(lm_i, lm_j)):
            stats["criterion_skips"] += 1
            continue
        lcm = _lcm(lm_i, lm_j)
        chain = False
        for k in range(len(G)):
            if k in ij:
                continue
            if (min(i, k), max(i, k)) in pairs or (min(j, k), max(j, k)) in pairs:
                continue
            if _divides(G[k].lm, lcm):
                chain = True
                break
        if chain:
            stats["criterion_skips"] += 1
            continue
        stats["spolys"] += 1
        if stats["spolys"] > max_spolys:
            raise BudgetExceeded("Gröbner S-polynomial budget exhausted", stats,
                                 [Polynomial(g.terms, vs) for g in G])
        s = _spoly(G[i], G[j])
        if not s:
            stats["zero_reductions"] += 1
            continue
        _, r = _reduce_terms(s, G, key, with_quotients=False)
        if not r:
            stats["zero_reductions"] += 1
            continue
        stats["max_terms"] = max(stats["max_terms"], len(r))
        if len(r) > max_terms:
            raise BudgetExceeded("Gröbner term budget exhausted", stats,
                                 [Polynomial(g.terms, vs) for g in G])
        G.append(_Divisor(_monic(r, key), key))
        n = len(G) - 1
        pairs.update((k, n) for k in range(n))

    # minimal basis, then interreduce
    minimal = []
    for idx, g in enumerate(G):
        if any(_divides(h.lm, g.lm) and (h.lm != g.lm or jdx < idx)
               for jdx, h in enumerate(G) if jdx != idx):
            continue
        minimal.append(g)
    reduced = []
    for idx, g in enumerate(minimal):
        others = [h for jdx, h in enumerate(minimal) if jdx != idx]
        _, r = _reduce_terms(g.terms, others, key, with_quotients=False) if others else (None, g.terms)
        reduced.append(_Divisor(_monic(r, key), key))
    reduced.sort(key=lambda d: key(d.lm), reverse=True)
    return [Polynomial(d.terms, vs) for d in reduced]


def ideal_contains(basis: Sequence[Polynomial], p: Polynomial,
                   order: TermOrder = DEFAULT_ORDER) -> bool:
    """Membership test against a Gröbner basis (computed under ``order``)."""
    return reduce_remainder(p, basis, order).is_zero()

"""Symbolic iteration, degree growth, algebraic entropy and Jacobians."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ..mapcat import RationalMap
from ..polycore import BudgetExceeded, Polynomial, RationalFunction

DEFAULT_MAX_TERMS = 2_000_000


def identity_functions(m: RationalMap) -> list[RationalFunction]:
    return [RationalFunction(Polynomial.variable(v, m.variables)) for v in m.variables]


def iterate_symbolic(m: RationalMap, n: int, max_terms: int | None = DEFAULT_MAX_TERMS,
                     start: Sequence[RationalFunction] | None = None) -> list[list[RationalFunction]]:
    """``[X^(1), ..., X^(n)]`` as cancelled rational functions of the initial point.

    Each step applies the map to the previous iterate, ``X^(k+1) = F(X^(k))``,
    cancelling factor by factor.  If a numerator or denominator exceeds
    ``max_terms`` the iterates computed so far are attached to the raised
    :class:`BudgetExceeded`.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    cur = list(start) if start is not None else identity_functions(m)
    out: list[list[RationalFunction]] = []
    for k in range(1, n + 1):
        cur = m.apply(cur)
        size = max(max(len(f.num), len(f.den)) for f in cur)
        if max_terms is not None and size > max_terms:
            raise BudgetExceeded(f"iterate {k} has {size} terms (budget {max_terms})",
                                 {"step": k, "terms": size}, out)
        out.append(cur)
    return out


def term_count(f: RationalFunction, var: str, coordinates: Sequence[str]) -> int:
    """Number of distinct monomials containing ``var`` in the numerator of ``f``.

    Monomials are taken in the map coordinates only (parameters such as a
    symbolic ``a`` are collected into coefficients) and counted per
    irreducible factor of the numerator, so a product like ``x·(1-y+yz)·P``
    counts ``1 + 0 + (terms of P containing x)``.
    """
    num = f.num
    if var not in num.variables:
        return 0
    idx = [num.variables.index(v) for v in coordinates if v in num.variables]
    iv = num.variables.index(var)
    _, factors = num.factor()
    total = 0
    for p, _mult in factors:
        total += len({tuple(e[i] for i in idx) for e in p.terms if e[iv] > 0})
    return total


@dataclass
class DegreeSequence:
    map_id: str
    var: str
    D: list[int] = field(default_factory=list)
    term_counts: list[int] = field(default_factory=list)
    seconds: list[float] = field(default_factory=list)

    @property
    def horizon(self) -> int:
        return len(self.D)

    def rows(self) -> list[dict]:
        return [{"n": i + 1, "degree": d, "terms": t}
                for i, (d, t) in enumerate(zip(self.D, self.term_counts))]

    def to_csv(self) -> str:
        lines = ["n,degree,terms"]
        lines += [f"{r['n']},{r['degree']},{r['terms']}" for r in self.rows()]
        return "\n".join(lines) + "\n"


def degree_growth(m: RationalMap, n_max: int, var: str | None = None,
                  max_terms: int | None = DEFAULT_MAX_TERMS, component: int = 0,
                  counts: bool = True) -> DegreeSequence:
    """Degree in ``var`` of the numerator of ``X_component^(n)`` and its term count, n = 1..n_max."""
    import time
    var = var or m.variables[0]
    seq = DegreeSequence(m.descriptor or m.name, var)
    cur = identity_functions(m)
    t0 = time.perf_counter()
    for k in range(1, n_max + 1):
        try:
            cur = iterate_symbolic(m, 1, max_terms, start=cur)[0]
        except BudgetExceeded as exc:
            exc.partial = seq
            raise
        f = cur[component]
        seq.D.append(int(f.num.degree(var)))
        seq.term_counts.append(term_count(f, var, m.variables) if counts else -1)
        seq.seconds.append(time.perf_counter() - t0)
    return seq


@dataclass
class EntropyEstimate:
    slope: float
    intercept: float
    window: tuple[int, int]
    ratios: list[float]

    def within(self, target: float, tol: float) -> bool:
        return abs(self.slope - target) <= tol


def entropy_estimate(seq: DegreeSequence | Sequence[int], window: tuple[int, int] | None = None
                     ) -> EntropyEstimate:
    """Least-squares slope of ``ln D_n`` against ``n`` and the ratios ``D_{n+1}/D_n``.

    The default window is ``n = 2 .. horizon`` (the first iterate carries no
    growth information); at least three entries are required.
    """
    D = list(seq.D if isinstance(seq, DegreeSequence) else seq)
    if len(D) < 3:
        raise ValueError("entropy estimate needs at least 3 degree entries")
    lo, hi = window or (2, len(D))
    lo = max(lo, 2)
    if hi - lo + 1 < 2 or hi > len(D):
        raise ValueError(f"window {lo}..{hi} too short for a fit")
    ns = np.arange(lo, hi + 1, dtype=float)
    ys = np.log(np.array(D[lo - 1:hi], dtype=float))
    slope, intercept = np.polyfit(ns, ys, 1)
    ratios = [D[i + 1] / D[i] for i in range(len(D) - 1) if D[i]]
    return EntropyEstimate(float(slope), float(intercept), (lo, hi), ratios)


# -- Jacobians -------------------------------------------------------------------------


class JacobianMatrix:
    """``J[i][j] = ∂X_i/∂x_j`` as cancelled rational functions."""

    def __init__(self, entries: list[list[RationalFunction]], variables: Sequence[str]):
        self.entries = entries
        self.variables = tuple(variables)

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @property
    def size(self) -> int:
        return len(self.entries)

    def det(self) -> RationalFunction:
        """Exact determinant (cofactor expansion over rational functions)."""
        from ..invariants import cofactor_det
        return RationalFunction.coerce(cofactor_det(self.entries))

    def evaluate(self, point) -> list[list]:
        env = dict(zip(self.variables, point))
        return [[f.evaluate(env) for f in row] for row in self.entries]


def jacobian(m: RationalMap) -> JacobianMatrix:
    rows = [[c.derivative(v) for v in m.variables] for c in m.components]
    return JacobianMatrix(rows, m.variables)


def jacobian_det_is_one(m: RationalMap) -> bool:
    return jacobian(m).det() == 1


def entropy_target() -> float:
    return math.log(3)

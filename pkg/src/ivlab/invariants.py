"""Lax matrices of the LV series and the invariants they generate.

For the d-dimensional LV map the state ``x`` defines

* ``R``: ``1 - x_j`` on the diagonal, ``1`` on the (cyclic) superdiagonal;
* ``L``: ``1`` on the (cyclic) subdiagonal, ``x_{i-1}`` two places left of the diagonal;
* ``A = L R``: ``1`` on the diagonal and subdiagonal, ``p_{i-1}`` two places left,
  with ``p_j = x_j (1 - x_{j-1})``.

The map is equivalent to ``L(X) R(X) = R(x) L(x)``, so ``A(X) R(x) = R(x) A(x)``
and the coefficients ``H_k`` of ``det(A - λ) = (-1)^(d-1) Σ H_k (λ-1)^k`` are
invariants.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Mapping, Sequence

import flint

from .mapcat import (RationalMap, build_lv_general, build_toda, lv_invariants, lv_toda_bridge,
                     lv_vars)
from .polycore import Polynomial, RationalFunction, coefficients_in

LAMBDA_SHIFT = "mu"  # mu = λ - 1


class PolyMatrix:
    """Dense matrix over polynomials (or rational functions)."""

    __slots__ = ("rows", "cols", "entries")

    def __init__(self, entries: Sequence[Sequence]):
        entries = [list(r) for r in entries]
        if not entries or any(len(r) != len(entries[0]) for r in entries):
            raise ValueError("matrix must be rectangular and non-empty")
        self.rows, self.cols = len(entries), len(entries[0])
        self.entries = entries

    @classmethod
    def build(cls, n: int, m: int, fn: Callable[[int, int], object]) -> "PolyMatrix":
        return cls([[fn(i, j) for j in range(m)] for i in range(n)])

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    def __matmul__(self, other: "PolyMatrix") -> "PolyMatrix":
        if self.cols != other.rows:
            raise ValueError("shape mismatch")
        zero = self.entries[0][0] * 0
        out = []
        for i in range(self.rows):
            row = []
            for k in range(other.cols):
                acc = zero
                for j in range(self.cols):
                    a, b = self.entries[i][j], other.entries[j][k]
                    if _nonzero(a) and _nonzero(b):
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return PolyMatrix(out)

    def __sub__(self, other: "PolyMatrix") -> "PolyMatrix":
        return PolyMatrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def __add__(self, other: "PolyMatrix") -> "PolyMatrix":
        return PolyMatrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.entries, other.entries)])

    def map(self, fn) -> "PolyMatrix":
        return PolyMatrix([[fn(a) for a in r] for r in self.entries])

    def nonzero_entries(self) -> list[tuple[int, int, object]]:
        return [(i, j, a) for i, r in enumerate(self.entries) for j, a in enumerate(r) if _nonzero(a)]

    def is_zero(self) -> bool:
        return not self.nonzero_entries()

    def evaluate(self, point: Mapping[str, object]) -> list[list]:
        return [[a.evaluate(point) if hasattr(a, "evaluate") else a for a in r] for r in self.entries]

    def det(self, method: str = "bareiss"):
        if self.rows != self.cols:
            raise ValueError("determinant of a non-square matrix")
        if method == "bareiss":
            return bareiss_det(self.entries)
        if method == "cofactor":
            return cofactor_det(self.entries)
        raise ValueError(f"unknown method {method!r}")

    def __repr__(self):
        return f"PolyMatrix({self.rows}x{self.cols})"


def _nonzero(a) -> bool:
    if hasattr(a, "is_zero"):
        return not a.is_zero()
    return a != 0


def bareiss_det(rows: Sequence[Sequence[Polynomial]]):
    """Fraction-free Gaussian elimination; every division is exact."""
    M = [list(r) for r in rows]
    n = len(M)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if not _nonzero(M[k][k]):
            swap = next((i for i in range(k + 1, n) if _nonzero(M[i][k])), None)
            if swap is None:
                return 0 * M[0][0]
            M[k], M[swap] = M[swap], M[k]
            sign = -sign
        pivot = M[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = pivot * M[i][j] - M[i][k] * M[k][j]
                M[i][j] = num if prev == 1 else num.exact_div(prev)
        prev = pivot
    return M[n - 1][n - 1] if sign == 1 else -M[n - 1][n - 1]


def cofactor_det(rows: Sequence[Sequence]):
    """Laplace expansion along the first row, memoized on column subsets."""
    n = len(rows)
    memo: dict = {}

    def minor(r: int, cols: tuple):
        if r == n:
            return 1
        key = (r, cols)
        if key in memo:
            return memo[key]
        total = 0
        for pos, c in enumerate(cols):
            a = rows[r][c]
            if not _nonzero(a):
                continue
            sub = minor(r + 1, cols[:pos] + cols[pos + 1:])
            term = a * sub
            total = total + term if pos % 2 == 0 else total - term
        memo[key] = total
        return total

    return minor(0, tuple(range(n)))


# -- Lax construction ---------------------------------------------------------------


def lax_R(values: Sequence) -> PolyMatrix:
    d = len(values)
    one, zero = values[0] ** 0, values[0] * 0

    def entry(i, j):
        if i == j:
            return 1 - values[i]
        if j == (i + 1) % d:
            return one
        return zero
    return PolyMatrix.build(d, d, entry)


def lax_L(values: Sequence) -> PolyMatrix:
    d = len(values)
    one, zero = values[0] ** 0, values[0] * 0

    def entry(i, j):
        if j == (i - 1) % d:
            return one
        if j == (i - 2) % d:
            return values[(i - 1) % d]
        return zero
    return PolyMatrix.build(d, d, entry)


@dataclass
class LaxSystem:
    d: int
    variables: tuple[str, ...]
    R: PolyMatrix
    L: PolyMatrix
    A: PolyMatrix
    charpoly_coeffs: list[Polynomial] = field(default_factory=list)
    method: str = ""


def build_lax(d: int, variables: Sequence[str] | None = None) -> LaxSystem:
    if d < 3:
        raise ValueError(f"Lax matrices need d >= 3, got {d}")
    vs = tuple(variables) if variables is not None else lv_vars(d)
    if len(vs) != d:
        raise ValueError("variable count must equal d")
    xs = [Polynomial.variable(v, vs) for v in vs]
    R, L = lax_R(xs), lax_L(xs)
    return LaxSystem(d, vs, R, L, L @ R)


def _components_in(m: RationalMap, vs) -> list[RationalFunction]:
    if tuple(m.variables) == tuple(vs):
        return list(m.components)
    ren = dict(zip(m.variables, vs))
    out = []
    for c in m.components:
        mapping = {v: Polynomial.variable(ren[v], vs) for v in m.variables}
        out.append(c.compose(mapping))
    return out


@dataclass
class LaxVerdict:
    ok: bool
    residual: PolyMatrix
    first_nonzero: tuple | None = None

    def __bool__(self):
        return self.ok


def verify_lax_equation(d: int | None = None, map: RationalMap | None = None) -> LaxVerdict:
    """``L(X) R(X) - R(x) L(x)`` with ``X`` the map image; zero iff the Lax form holds.

    Defaults to the d-dimensional LV map; pass ``map`` (e.g. a deformed lv3)
    to test another map of the same dimension.
    """
    if map is None:
        map = build_lv_general(d)
    d = map.dimension
    vs = lv_vars(d)
    X = _components_in(map, vs)
    xs = [RationalFunction(Polynomial.variable(v, vs)) for v in vs]
    lhs = lax_L(X) @ lax_R(X)
    rhs = lax_R(xs) @ lax_L(xs)
    res = lhs - rhs
    nz = res.nonzero_entries()
    return LaxVerdict(not nz, res, nz[0] if nz else None)


def verify_conjugation(d: int) -> LaxVerdict:
    """The polynomial form ``A(X) R(x) = R(x) A(x)`` of the isospectral evolution."""
    m = build_lv_general(d)
    vs = lv_vars(d)
    X = list(m.components)
    xs = [RationalFunction(Polynomial.variable(v, vs)) for v in vs]
    AX = lax_L(X) @ lax_R(X)
    Ax = lax_L(xs) @ lax_R(xs)
    res = AX @ lax_R(xs) - lax_R(xs) @ Ax
    nz = res.nonzero_entries()
    return LaxVerdict(not nz, res, nz[0] if nz else None)


def charpoly_shifted(sys: LaxSystem, method: str = "bareiss") -> Polynomial:
    """``det(A - λ)`` as a polynomial in ``mu = λ - 1`` and the state variables."""
    vs = sys.variables + (LAMBDA_SHIFT,)
    mu = Polynomial.variable(LAMBDA_SHIFT, vs)
    B = PolyMatrix.build(sys.d, sys.d, lambda i, j: sys.A[i, j].with_variables(vs)
                         - (1 + mu if i == j else 0))
    return B.det(method)


def extract_invariants(sys: LaxSystem, method: str = "bareiss") -> dict[str, Polynomial]:
    """``H_0..H_d`` from ``det(A - λ) = (-1)^(d-1) Σ H_k (λ-1)^k``.

    The coefficients are stored on ``sys.charpoly_coeffs`` as a side effect.
    """
    det = charpoly_shifted(sys, method)
    coeffs = coefficients_in(det, LAMBDA_SHIFT)
    sign = -1 if (sys.d - 1) % 2 else 1
    H = []
    for k in range(sys.d + 1):
        c = coeffs.get(k, Polynomial.zero(det.variables))
        H.append((sign * c).with_variables(sys.variables))
    sys.charpoly_coeffs = H
    sys.method = method
    return {f"H{k}": h for k, h in enumerate(H)}


def check_charpoly_structure(sys: LaxSystem) -> dict[str, bool]:
    """The closed-form shape of the ``H_k``: vanishing middle, ``H_d = -1``, ``H_0``, primed sums."""
    if not sys.charpoly_coeffs:
        extract_invariants(sys)
    d, H = sys.d, sys.charpoly_coeffs
    vs = sys.variables
    xs = [Polynomial.variable(v, vs) for v in vs]
    p = [xs[j] * (1 - xs[j - 1]) for j in range(d)]
    prod_p = Polynomial.one(vs)
    for q in p:
        prod_p = prod_p * q
    closed = lv_invariants(d) if vs == lv_vars(d) else None
    out = {
        "H0": H[0] == 1 - (-1) ** d * prod_p,
        "Hd": H[d] == -1,
        "vanishing": all(H[k].is_zero() for k in range(d // 2 + 1, d)),
    }
    if closed is not None:
        out["primed_sums"] = all(H[k] == closed[f"H{k}"] for k in range(1, d // 2 + 1))
    return out


def invariant_count(sys: LaxSystem) -> int:
    """Nontrivial ``H_1..H_{d-1}`` plus ``r`` (``H_0`` is dependent, ``H_d`` constant)."""
    if not sys.charpoly_coeffs:
        extract_invariants(sys)
    nontrivial = [h for h in sys.charpoly_coeffs[1:sys.d] if not h.is_constant()]
    return len(nontrivial) + 1


# -- invariance --------------------------------------------------------------------------


def verify_invariance(map: RationalMap, H) -> tuple[bool, RationalFunction | None]:
    """Exact test of ``H ∘ F = H``; returns ``(ok, witness)`` where the witness is the difference."""
    H = RationalFunction.coerce(H)
    diff = map.compose_function(H) - H
    if diff.is_zero():
        return True, None
    return False, diff


def invariance_report(map: RationalMap) -> dict[str, bool]:
    return {k: verify_invariance(map, h)[0] for k, h in map.invariants.items()}


# -- relations among invariants ---------------------------------------------------------


def find_linear_relation(target: Polynomial, basis: Mapping[str, Polynomial],
                         degree: int = 1) -> Polynomial | None:
    """Write ``target`` as a polynomial of degree ``<= degree`` in the ``basis`` functions.

    Returns the relation as a polynomial in the basis names, or ``None`` if
    there is none.  Exact linear algebra over Q.
    """
    names = tuple(basis)
    monos = [e for e in product(range(degree + 1), repeat=len(names)) if sum(e) <= degree]
    columns = []
    for e in monos:
        val = Polynomial.one(target.variables)
        for n, k in zip(names, e):
            if k:
                val = val * basis[n] ** k
        columns.append(val.with_variables(target.variables))
    rows = sorted({m for c in columns + [target] for m in c.terms})
    index = {m: i for i, m in enumerate(rows)}
    M = flint.fmpq_mat(len(rows), len(monos) + 1)
    for j, c in enumerate(columns + [target]):
        for m, coef in c.terms.items():
            M[index[m], j] = flint.fmpq(coef.numerator, coef.denominator)
    rref, rank = M.rref()
    ncol = len(monos)
    sol = [Fraction(0)] * ncol
    for i in range(rank):
        lead = next(j for j in range(ncol + 1) if rref[i, j] != 0)
        if lead == ncol:
            return None  # inconsistent: target not in the span
        v = rref[i, ncol]
        sol[lead] = Fraction(int(v.p), int(v.q))
    terms = {e: c for e, c in zip(monos, sol) if c}
    return Polynomial(terms, names)


# -- LV <-> Toda bridge ----------------------------------------------------------------


@dataclass
class BridgeVerdict:
    ok: bool
    mismatches: list[str]

    def __bool__(self):
        return self.ok


def verify_bridge(d: int = 6) -> BridgeVerdict:
    """``Toda(B(x)) = B(LV(x))`` symbolically, where ``B`` is :func:`lv_toda_bridge`."""
    lv = build_lv_general(d)
    toda = build_toda(d // 2)
    xs = [RationalFunction(Polynomial.variable(v, lv.variables)) for v in lv.variables]
    before = lv_toda_bridge(xs).as_tuple()
    after = lv_toda_bridge(list(lv.components)).as_tuple()
    stepped = toda.apply(list(before))
    bad = [name for name, u, v in zip(toda.variables, stepped, after)
           if not (RationalFunction.coerce(u) - RationalFunction.coerce(v)).is_zero()]
    return BridgeVerdict(not bad, bad)

"""Numeric evaluation of maps: compiled steps and Jacobians for mpmath, complex and numpy."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from ..mapcat import RationalMap
from ..polycore import Polynomial


class SingularOrbitError(ZeroDivisionError):
    """A map denominator vanished (or nearly so) along an orbit."""


def _poly_source(p: Polynomial, names: Sequence[str], consts: list) -> str:
    """Python expression for ``p`` in the argument names; non-integer coefficients go to ``K``."""
    if p.is_zero():
        return "0"
    idx = [p.variables.index(v) if v in p.variables else None for v in names]
    parts = []
    for e, c in p.sorted_terms():
        factors = []
        for name, i in zip(names, idx):
            if i is not None and e[i]:
                factors.append(name if e[i] == 1 else f"{name}**{e[i]}")
        mono = "*".join(factors)
        if c.denominator == 1:
            coef = str(c.numerator)
        else:
            consts.append(c)
            coef = f"K[{len(consts) - 1}]"
        if not mono:
            parts.append(f"({coef})")
        elif coef == "1":
            parts.append(mono)
        elif coef == "-1":
            parts.append(f"(-{mono})")
        else:
            parts.append(f"({coef})*{mono}")
    return " + ".join(parts)


class NumericMap:
    """A map compiled to Python functions that work on any numeric type.

    ``step``/``jacobian`` accept mpmath numbers, Python complex or numpy
    arrays (evaluated elementwise).  Coefficients that are not integers are
    supplied in the number type of the call, so mpmath evaluation is exact to
    the working precision.
    """

    def __init__(self, m: RationalMap):
        if m.symbolic_parameters:
            raise ValueError(f"{m.name}: bind parameters {m.symbolic_parameters} first")
        self.map = m
        self.d = m.dimension
        names = [f"v{i}" for i in range(self.d)]
        consts: list[Fraction] = []
        lines = [f"def _step({', '.join(names)}, K):"]
        jl = [f"def _jac({', '.join(names)}, K):"]
        dl = [f"def _dens({', '.join(names)}, K):"]
        outs, jrows, dens = [], [], []
        for i, c in enumerate(m.components):
            num = c.num.with_variables(m.variables)
            den = c.den.with_variables(m.variables)
            num = Polynomial(num.terms, names)
            den = Polynomial(den.terms, names)
            lines.append(f"    n{i} = {_poly_source(num, names, consts)}")
            lines.append(f"    d{i} = {_poly_source(den, names, consts)}")
            outs.append(f"n{i} / d{i}")
            jl.append(f"    n{i} = {_poly_source(num, names, consts)}")
            jl.append(f"    d{i} = {_poly_source(den, names, consts)}")
            row = []
            for j, v in enumerate(names):
                dn, dd = num.derivative(v), den.derivative(v)
                jl.append(f"    a{i}_{j} = {_poly_source(dn, names, consts)}")
                if dd.is_zero():
                    row.append(f"a{i}_{j} / d{i}")
                else:
                    jl.append(f"    b{i}_{j} = {_poly_source(dd, names, consts)}")
                    row.append(f"(a{i}_{j} * d{i} - n{i} * b{i}_{j}) / (d{i} * d{i})")
            jrows.append("[" + ", ".join(row) + "]")
            dl.append(f"    d{i} = {_poly_source(den, names, consts)}")
            dens.append(f"d{i}")
        lines.append(f"    return ({', '.join(outs)},)")
        jl.append(f"    return [{', '.join(jrows)}]")
        dl.append(f"    return ({', '.join(dens)},)")
        src = "\n".join(lines + jl + dl)
        ns: dict = {}
        exec(compile(src, f"<compiled {m.descriptor or m.name}>", "exec"), ns)
        self._step, self._jac, self._dens = ns["_step"], ns["_jac"], ns["_dens"]
        self._consts = consts
        self.source = src
        self._k_cache: dict = {}

    def _K(self, kind):
        if kind == "mp":
            key = ("mp", mpmath.mp.prec)
            if key not in self._k_cache:
                self._k_cache[key] = [mpmath.mpf(c.numerator) / c.denominator for c in self._consts]
            return self._k_cache[key]
        if kind not in self._k_cache:
            self._k_cache[kind] = [c.numerator / c.denominator for c in self._consts]
        return self._k_cache[kind]

    @staticmethod
    def _kind(x):
        if isinstance(x, (mpmath.mpf, mpmath.mpc)):
            return "mp"
        return "float"

    def step(self, x: Sequence):
        return self._step(*x, self._K(self._kind(x[0])))

    def denominators(self, x: Sequence):
        return self._dens(*x, self._K(self._kind(x[0])))

    def jacobian(self, x: Sequence):
        return self._jac(*x, self._K(self._kind(x[0])))

    # -- mpmath orbits ---------------------------------------------------------

    def orbit(self, x0: Sequence, n: int, guard: float | None = None) -> list:
        """``[x0, F(x0), ..., F^n(x0)]``; raises :class:`SingularOrbitError` on a zero denominator."""
        pts = [tuple(x0)]
        x = tuple(x0)
        for _ in range(n):
            if guard is not None:
                if min(abs(dv) for dv in self.denominators(x)) < guard:
                    raise SingularOrbitError("orbit passes a singular surface")
            try:
                x = self.step(x)
            except ZeroDivisionError as exc:
                raise SingularOrbitError("orbit hits a singular surface") from exc
            pts.append(x)
        return pts

    def iterate(self, x0: Sequence, n: int):
        return self.orbit(x0, n)[-1]

    def jacobian_product(self, orbit: Sequence) -> mpmath.matrix:
        """``J(x_{n-1}) ... J(x_0)`` along an orbit ``[x_0..x_n]`` (mpmath)."""
        P = mpmath.eye(self.d)
        for x in orbit[:-1]:
            P = mpmath.matrix(self.jacobian(x)) * P
        return P

    # -- numpy batches ------------------------------------------------------------

    def step_batch(self, X: np.ndarray) -> np.ndarray:
        """Apply the map to columns of a ``(d, K)`` complex array."""
        with np.errstate(all="ignore"):
            return np.array(self._step(*X, self._K("float")))

    def jacobian_batch(self, X: np.ndarray) -> np.ndarray:
        """Jacobians at the columns of ``X``; shape ``(K, d, d)``."""
        with np.errstate(all="ignore"):
            J = self._jac(*X, self._K("float"))
        K = X.shape[1]
        out = np.empty((K, self.d, self.d), dtype=complex)
        for i in range(self.d):
            for j in range(self.d):
                out[:, i, j] = J[i][j]
        return out


_CACHE: dict = {}


def numeric_map(m: RationalMap) -> NumericMap:
    """Compiled form of ``m`` (cached per map object)."""
    key = id(m)
    got = _CACHE.get(key)
    if got is None or got.map is not m:
        got = NumericMap(m)
        _CACHE[key] = got
    return got


def to_mpc_vector(x: Sequence) -> tuple:
    return tuple(mpmath.mpc(v) if not isinstance(v, Fraction) else
                 mpmath.mpc(mpmath.mpf(v.numerator) / v.denominator) for v in x)


def max_abs(vals) -> mpmath.mpf:
    return max(abs(v) for v in vals)


def distance(a: Sequence, b: Sequence):
    return max(abs(u - v) for u, v in zip(a, b))


def charpoly_coefficients(M: mpmath.matrix) -> list:
    """Monic characteristic polynomial coefficients ``[1, c_1, ..., c_d]`` (Faddeev–LeVerrier)."""
    n = M.rows
    I = mpmath.eye(n)
    c = [mpmath.mpf(1)]
    Mk = mpmath.zeros(n)
    for k in range(1, n + 1):
        Mk = M * Mk + c[-1] * I
        AM = M * Mk
        c.append(-sum(AM[i, i] for i in range(n)) / k)
    return c

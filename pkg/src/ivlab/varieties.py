"""Invariant varieties of periodic points and special loci.

A variety is given by generators ``γ`` written in the invariants of a map
(h-space).  Substituting the invariant polynomials gives the composed
generators in the map coordinates, which are then checked against the n-th
iterate: exactly, by ideal membership of ``X_j^(n) - x_j``, or numerically,
by sampling points on the variety and iterating.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import mpmath
import numpy as np

from .dynamics import (SingularOrbitError, iterate_symbolic, newton_periodic_search,
                       numeric_map, omega_line_check, to_mpc_vector)
from .dynamics.special import exact_orbit, exact_period
from .mapcat import (LV4_INVARIANTS_PRINTED, LV5_INVARIANTS_PRINTED, PV_INVARIANTS,
                     TODA3_INVARIANTS, RationalMap, build_lv3, lv_vars, toda_vars)
from .polycore import (BudgetExceeded, Polynomial, RationalFunction, groebner_basis,
                       poly_reduce, reduce_remainder)

LV3_INVARIANTS = {"r": "x*y*z", "s": "(1-x)*(1-y)*(1-z)"}

# (map id) -> (coordinates, invariant definitions)
_INVARIANTS = {
    "lv3": (("x", "y", "z"), LV3_INVARIANTS),
    "lv4": (lv_vars(4), LV4_INVARIANTS_PRINTED),
    "pv": (lv_vars(4), PV_INVARIANTS),
    "lv5": (lv_vars(5), LV5_INVARIANTS_PRINTED),
    "toda3": (toda_vars(3), TODA3_INVARIANTS),
}

# generators as printed, in the invariant symbols (T3p is T'_3)
_CATALOG = {
    ("lv3", 2): ["s+1"],
    ("lv3", 3): ["r^2+s^2-r*s+r+s+1"],
    ("lv3", 4): ["r^3*s+s^3-3*r*s^2+6*r^2*s+3*r*s-r^3+s"],
    ("lv3", 5): ["r^3*s^4-r^3*s^2-6*r^4*s^5+10*r^3*s^6+3*s^5*r+s^6+s^5+3*r^4*s^4"
                 "-3*r^5*s^3-6*r^4*s^3-r^6*s^3+3*r^5*s^4+s^4+21*s^4*r^2+6*s^4*r"
                 "+r^3*s^7+s^7+27*s^5*r^2-3*s^6*r-r^3*s^5+21*r^2*s^6-10*r^3*s^3"
                 "-6*r*s^7+s^8"],
    ("lv4", 2): ["t+1"],
    ("lv4", 3): ["t^3+t^2*r-t^2*u+t^2-u^2+2*r*t-u+r+t"],
    ("pv", 2): ["s+v"],
    ("pv", 3): ["(s+v)^2-s*(1-r)^2"],
    ("lv5", 2): ["H2+3*H1+5", "r+H1+2"],
    ("toda3", 2): ["T2", "T3-T3p"],
    ("toda3", 3): ["T1", "T2"],
}

_ALIASES = {"lv3(a=0)": "lv3", "lv(d=3)": "lv3", "lv(d=4)": "lv4", "lv(d=5)": "lv5",
            "toda(N=3)": "toda3", "toda": "toda3"}


def _map_key(map_id) -> str:
    if isinstance(map_id, RationalMap):
        if map_id.name == "lv3" and map_id.parameters.get("a", 0) != 0:
            raise KeyError(f"no cataloged varieties for {map_id.descriptor} (a != 0)")
        map_id = map_id.name
    key = str(map_id).replace(" ", "")
    return _ALIASES.get(key, key)


@dataclass(frozen=True)
class VarietySpec:
    """``v(<γ_n>)`` for one map and period, in invariant and coordinate form."""

    map_id: str
    period: int
    generators: tuple[Polynomial, ...]
    composed: tuple[Polynomial, ...]
    codimension: int
    invariants: dict = field(default_factory=dict, compare=False, hash=False)
    variables: tuple[str, ...] = ()

    def __post_init__(self):
        if len(self.generators) != len(self.composed):
            raise ValueError("generators and composed forms differ in number")

    def evaluate(self, point) -> list:
        env = dict(zip(self.variables, point))
        return [g.evaluate(env) for g in self.composed]

    def residual(self, point, relative: bool = False):
        """``max |γ(x)|``; relative divides each value by the sum of absolute term values."""
        env = dict(zip(self.variables, point))
        out = 0
        for g in self.composed:
            v = abs(g.evaluate(env))
            if relative:
                scale = sum(abs(c) * abs(_mono(env, g.variables, e)) for e, c in g.terms.items())
                v = v / scale if scale else v
            out = max(out, v)
        return out

    def to_json(self) -> dict:
        return {
            "map": self.map_id,
            "period": self.period,
            "generators": [str(g) for g in self.generators],
            "composed": [str(g) for g in self.composed],
            "codimension": self.codimension,
            "variables": list(self.variables),
        }


def _mono(env, variables, exps):
    out = 1
    for v, e in zip(variables, exps):
        if e:
            out *= env[v] ** e
    return out


def cataloged() -> list[tuple[str, int]]:
    return sorted(_CATALOG)


def invariant_polynomials(map_id) -> dict[str, Polynomial]:
    key = _map_key(map_id)
    if key not in _INVARIANTS:
        raise KeyError(f"no invariants cataloged for {map_id!r}")
    vs, defs = _INVARIANTS[key]
    return {k: Polynomial.parse(v, vs).with_variables(vs) for k, v in defs.items()}


def gamma_catalog(map_id, n: int) -> VarietySpec:
    """The printed variety of period ``n`` for ``map_id`` (lv3, lv4, pv, lv5 or toda3)."""
    key = _map_key(map_id)
    if (key, n) not in _CATALOG:
        raise KeyError(f"no cataloged variety for ({key}, n={n}); "
                       f"known: {', '.join(f'{k}/{p}' for k, p in cataloged())}")
    vs, _ = _INVARIANTS[key]
    inv = invariant_polynomials(key)
    names = tuple(inv)
    gens = tuple(Polynomial.parse(t, names) for t in _CATALOG[(key, n)])
    composed = tuple(g.compose({k: inv[k] for k in g.variables}).with_variables(vs)
                     for g in gens)
    return VarietySpec(key, n, gens, composed, len(gens), inv, tuple(vs))


def with_generators(spec: VarietySpec, texts: Sequence[str]) -> VarietySpec:
    """Same map and period, different generators (e.g. for negative controls)."""
    inv = spec.invariants
    names = tuple(inv)
    gens = tuple(Polynomial.parse(t, names) for t in texts)
    composed = tuple(g.compose({k: inv[k] for k in g.variables if k in inv})
                     .with_variables(spec.variables) for g in gens)
    return VarietySpec(spec.map_id, spec.period, gens, composed, len(gens), inv, spec.variables)


# -- exact membership -------------------------------------------------------------------


@dataclass
class MembershipVerdict:
    ok: bool
    evidence: str                      # "exact" or "sampled"
    remainders_zero: list[bool]
    u: list[RationalFunction | None]
    regular: list[bool | None]
    seconds: float
    note: str = ""
    samples: "PeriodVerdict | None" = None

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        out = {
            "ok": self.ok,
            "evidence": self.evidence,
            "remainders_zero": self.remainders_zero,
            "u_terms": [None if u is None else [len(u.num), len(u.den)] for u in self.u],
            "regular": self.regular,
            "note": self.note,
        }
        if self.samples is not None:
            out["samples"] = self.samples.to_json()
        return out


def _periodicity_numerators(m: RationalMap, n: int, max_terms) -> list[tuple[Polynomial, Polynomial]]:
    """``(numerator of X_j^(n) - x_j, denominator of X_j^(n))`` per component."""
    X = iterate_symbolic(m, n, max_terms)[-1]
    out = []
    for f, v in zip(X, m.variables):
        num = f.num.with_variables(m.variables)
        den = f.den.with_variables(m.variables)
        out.append((num - Polynomial.variable(v, m.variables) * den, den))
    return out


def verify_membership(m: RationalMap, spec: VarietySpec, max_terms: int | None = 2_000_000,
                      max_spolys: int = 2000, fallback_samples: int = 100,
                      seed: int = 0) -> MembershipVerdict:
    """Check ``X_j^(n) = x_j + u_j γ_n`` by reducing ``X_j^(n) - x_j`` modulo the composed ideal.

    One generator: ``γ`` must divide each numerator; ``u_j = q_j / D_j`` is
    returned and is regular on the variety when ``γ`` does not divide ``D_j``.
    Two generators: reduction modulo a grevlex Gröbner basis (``u_j`` not
    extracted).  If the iterate or the basis exceeds its budget the verdict
    falls back to sampling and is graded ``sampled``.
    """
    t0 = time.perf_counter()
    if tuple(m.variables) != tuple(spec.variables):
        raise ValueError(f"map variables {m.variables} do not match {spec.variables}")
    try:
        pairs = _periodicity_numerators(m, spec.period, max_terms)
        gens = [g for g in spec.composed]
        if len(gens) == 1:
            basis = gens
        else:
            basis = groebner_basis(gens, max_spolys=max_spolys)
    except BudgetExceeded as exc:
        samples = sample_on_variety(spec, fallback_samples, seed=seed)
        pv = verify_period_on_samples(m, spec, samples)
        return MembershipVerdict(pv.ok, "sampled", [], [], [], time.perf_counter() - t0,
                                 f"budget exceeded ({exc}); sampled instead", pv)
    zero, us, regular = [], [], []
    for num, den in pairs:
        if len(basis) == 1:
            (q,), r = poly_reduce(num, basis)
            zero.append(r.is_zero())
            if r.is_zero():
                us.append(RationalFunction(q, den))
                regular.append(not reduce_remainder(den, basis).is_zero())
            else:
                us.append(None)
                regular.append(None)
        else:
            r = reduce_remainder(num, basis)
            zero.append(r.is_zero())
            us.append(None)
            regular.append(not reduce_remainder(den, basis).is_zero())
    ok = all(zero) and all(r is not False for r in regular)
    return MembershipVerdict(ok, "exact", zero, us, regular, time.perf_counter() - t0)


# -- sampling ---------------------------------------------------------------------------


def _random_rational(rng) -> Fraction:
    num = int(rng.integers(1, 21)) * (1 if rng.random() < 0.5 else -1)
    return Fraction(num, int(rng.integers(1, 8)))


def _univariate_coeffs(p: Polynomial, var: str) -> list:
    """Coefficients (highest first) of a polynomial in the single variable ``var``."""
    p = p.drop_unused()
    if not p.variables:
        return [p.constant_value()]
    if p.variables != (var,):
        raise ValueError(f"expected a polynomial in {var} only, got {p.variables}")
    deg = p.degree(var)
    c = [Fraction(0)] * (deg + 1)
    for (e,), v in p.terms.items():
        c[deg - e] = v
    return c


def _mpf(q: Fraction):
    return mpmath.mpf(q.numerator) / q.denominator


def _polyroots(cs: list, precision: int) -> list:
    """mpmath roots; numpy seeds plus Newton polish when Durand-Kerner stalls."""
    try:
        return mpmath.polyroots(cs, maxsteps=400, extraprec=2 * precision)
    except mpmath.libmp.NoConvergence:
        pass
    seeds = np.roots([complex(c) for c in cs])
    out = []
    for z in seeds:
        z = mpmath.mpc(complex(z))
        for _ in range(60):
            f = mpmath.polyval(cs, z, derivative=True)
            if f[1] == 0:
                break
            step = f[0] / f[1]
            z -= step
            if abs(step) <= abs(z) * mpmath.mpf(2) ** (-precision + 4):
                break
        out.append(z)
    return out


def _roots(coeffs: Sequence[Fraction], precision: int) -> list:
    cs = [_mpf(c) for c in coeffs]
    while cs and cs[0] == 0:
        cs.pop(0)
    if len(cs) < 2:
        return []
    roots = _polyroots(cs, precision)
    out = []
    for z in roots:
        z = mpmath.mpc(z)
        for _ in range(8):      # polish against the exact coefficients
            f = mpmath.polyval(cs, z, derivative=True)
            if f[1] == 0:
                break
            z -= f[0] / f[1]
        out.append(z)
    return out


def _solve_one(spec, fixed, rng, precision):
    var = spec.variables[-1]
    env = dict(zip(spec.variables[:-1], fixed))
    p = spec.composed[0].subs(env)
    coeffs = _univariate_coeffs(p, var)
    if len(coeffs) == 2:                     # linear: exact rational root
        return [(-coeffs[1] / coeffs[0],)]
    roots = _roots(coeffs, precision)
    rng.shuffle(roots)
    return [(z,) for z in roots]


def _newton2(fs, jac, u, w, steps=30):
    for _ in range(steps):
        f0, f1 = fs(u, w)
        J = jac(u, w)
        det = J[0][0] * J[1][1] - J[0][1] * J[1][0]
        if det == 0:
            break
        du = (J[1][1] * f0 - J[0][1] * f1) / det
        dw = (J[0][0] * f1 - J[1][0] * f0) / det
        u, w = u - du, w - dw
        if max(abs(du), abs(dw)) < mpmath.mpf(2) ** (-mpmath.mp.prec + 8):
            break
    return u, w


def _solve_two(spec, fixed, rng, precision):
    """Last two coordinates from two generators: resultant in the last, roots, back-substitute."""
    uvar, wvar = spec.variables[-2], spec.variables[-1]
    env = dict(zip(spec.variables[:-2], fixed))
    f, g = (c.subs(env).with_variables((uvar, wvar)) for c in spec.composed)
    if f.degree(wvar) <= 0 and g.degree(wvar) <= 0:
        return []
    if f.degree(wvar) <= 0:
        f, g = g, f
    res = Polynomial._wrap((uvar, wvar), f.flint.resultant(g.flint, wvar)).drop_unused()
    if res.is_zero() or not res.variables:
        return []
    us = _roots(_univariate_coeffs(res, uvar), precision)
    rng.shuffle(us)
    fu, fw, gu, gw = f.derivative(uvar), f.derivative(wvar), g.derivative(uvar), g.derivative(wvar)

    def fs(u, w):
        e = {uvar: u, wvar: w}
        return f.evaluate(e), g.evaluate(e)

    def jac(u, w):
        e = {uvar: u, wvar: w}
        return [[fu.evaluate(e), fw.evaluate(e)], [gu.evaluate(e), gw.evaluate(e)]]

    out = []
    for u0 in us:
        # roots of f(u0, w) in w, keep the one where g vanishes
        cs = [0] * (f.degree(wvar) + 1)
        deg = f.degree(wvar)
        for (eu, ew), c in f.terms.items():
            cs[deg - ew] += _mpf(c) * u0 ** eu
        while cs and abs(cs[0]) == 0:
            cs.pop(0)
        if len(cs) < 2:
            continue
        ws = _polyroots(cs, precision)
        w0 = min(ws, key=lambda w: abs(fs(u0, w)[1]))
        out.append(_newton2(fs, jac, mpmath.mpc(u0), mpmath.mpc(w0)))
    return out


def sample_on_variety(spec: VarietySpec, count: int, precision: int = 256, seed: int = 0,
                      retries: int = 50, tol: float = 1e-30) -> list[tuple]:
    """``count`` points on the variety: random rational coordinates, the rest solved for.

    All but the last ``codimension`` coordinates are random rationals; the
    remaining ones solve the composed generators at ``precision`` bits.
    Linear single-generator slices give exact rational points.  A slice
    without an accepted solution is redrawn, at most ``retries`` times in a row.
    """
    rng = np.random.default_rng(seed)
    k = len(spec.composed)
    if k not in (1, 2):
        raise ValueError("sampling supports one or two generators")
    d = len(spec.variables)
    out: list[tuple] = []
    misses = 0
    with mpmath.workprec(precision):
        while len(out) < count:
            fixed = [_random_rational(rng) for _ in range(d - k)]
            sols = _solve_one(spec, fixed, rng, precision) if k == 1 else \
                _solve_two(spec, fixed, rng, precision)
            accepted = False
            for sol in sols:
                pt = tuple(fixed) + tuple(sol)
                if all(isinstance(v, Fraction) for v in pt):
                    if all(v == 0 for v in spec.evaluate(pt)):
                        accepted = True
                elif spec.residual(to_mpc_vector(pt)) < tol:
                    accepted = True
                if accepted:
                    out.append(pt)
                    break
            if accepted:
                misses = 0
                continue
            misses += 1
            if misses > retries:
                raise RuntimeError(f"no solution found on {spec.map_id}/{spec.period} "
                                   f"after {retries} redraws")
    return out


# -- period verification -----------------------------------------------------------------


@dataclass
class SampleRow:
    point: tuple
    residual: object
    on_variety: object
    minimal_period: int | None
    status: str          # verified | degenerate | failed | singular


@dataclass
class PeriodVerdict:
    ok: bool
    rows: list[SampleRow]
    tolerance: float
    precision: int

    @property
    def counts(self) -> dict:
        out = {"verified": 0, "degenerate": 0, "failed": 0, "singular": 0}
        for r in self.rows:
            out[r.status] += 1
        return out

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "tolerance": self.tolerance,
            "precision_bits": self.precision,
            "counts": self.counts,
            "rows": [{"residual": mpmath.nstr(r.residual, 5) if r.residual is not None else None,
                      "on_variety": mpmath.nstr(r.on_variety, 5) if r.on_variety is not None else None,
                      "minimal_period": r.minimal_period, "status": r.status} for r in self.rows],
        }


def verify_period_on_samples(m: RationalMap, spec: VarietySpec, samples, tol: float = 1e-20,
                             precision: int = 256) -> PeriodVerdict:
    """Iterate each sample ``n`` steps: it must return, stay on the variety and have period ``n``.

    Samples whose minimal period is a proper divisor of ``n`` are flagged
    ``degenerate`` and not failed; samples whose orbit hits a singular
    surface, or pass within ``2^(-precision/4)`` of one (where the working
    precision no longer resolves the orbit), are discarded as ``singular``.
    """
    n = spec.period
    nm = numeric_map(m)
    rows = []
    with mpmath.workprec(precision):
        guard = mpmath.mpf(2) ** (-precision // 4)
        for pt in samples:
            x = to_mpc_vector(pt)
            try:
                orbit = nm.orbit(x, n, guard=guard)
            except SingularOrbitError:
                rows.append(SampleRow(tuple(pt), None, None, None, "singular"))
                continue
            res = max(abs(u - v) for u, v in zip(orbit[-1], x))
            onv = max(spec.residual(p) for p in orbit)
            per = n
            for k in range(1, n):
                if n % k == 0 and max(abs(u - v) for u, v in zip(orbit[k], x)) < tol:
                    per = k
                    break
            if not (res < tol and onv < tol):
                status = "failed"
            elif per < n:
                status = "degenerate"
            else:
                status = "verified"
            rows.append(SampleRow(tuple(pt), res, onv, per, status))
    ok = bool(rows) and all(r.status in ("verified", "degenerate", "singular") for r in rows) \
        and any(r.status == "verified" for r in rows)
    return PeriodVerdict(ok, rows, tol, precision)


def period_residuals(m: RationalMap, points, n: int, precision: int = 256) -> list:
    """``|F^n(x) - x|`` per point (``inf`` when the orbit is singular)."""
    nm = numeric_map(m)
    out = []
    with mpmath.workprec(precision):
        for pt in points:
            x = to_mpc_vector(pt)
            try:
                y = nm.iterate(x, n)
            except SingularOrbitError:
                out.append(mpmath.inf)
                continue
            out.append(max(abs(u - v) for u, v in zip(y, x)))
    return out


@dataclass
class ScanVerdict:
    failures: int
    passes: int
    singular: int
    threshold: float
    residuals: list

    @property
    def total(self) -> int:
        return self.failures + self.passes

    @property
    def fail_fraction(self) -> float:
        return self.failures / self.total if self.total else 0.0

    @property
    def isolated(self) -> bool:
        """True when at least 99% of surrogate points fail to be periodic."""
        return self.fail_fraction >= 0.99

    def to_json(self) -> dict:
        return {"failures": self.failures, "passes": self.passes, "singular": self.singular,
                "threshold": self.threshold, "fail_fraction": self.fail_fraction,
                "isolated": self.isolated}


def uncorrelated_scan(m: RationalMap, n: int, samples: int = 100, seed: int = 0,
                      precision: int = 256, threshold: float = 1e-6,
                      surrogate: VarietySpec | None = None) -> ScanVerdict:
    """Sample the a=0 variety of period ``n`` and test periodicity under ``m``.

    For a deformed map (a ≠ 0) the surrogate points are not periodic; a
    singular orbit also counts as a failure.
    """
    spec = surrogate or gamma_catalog("lv3", n)
    pts = sample_on_variety(spec, samples, precision, seed)
    res = period_residuals(m, pts, n, precision)
    fails = sum(1 for r in res if not r < threshold)
    sing = sum(1 for r in res if r == mpmath.inf)
    return ScanVerdict(fails, len(res) - fails, sing, threshold, res)


# -- special loci -----------------------------------------------------------------------


@dataclass(frozen=True)
class SpecialLocus:
    """Lines ``t -> point`` of lv3(a=0) with a stated period and cycling rule.

    Line entries are strings in ``t`` (and ``w``, a primitive cube root of
    unity, for the lines through the singular surfaces).  ``rule[i]`` is the
    index of the line that the image of line ``i`` lies on.
    """

    map_id: str
    period: int
    description: str
    lines: tuple[tuple[str, str, str], ...]
    rule: tuple[int, ...]

    @property
    def numeric(self) -> bool:
        return any("w" in c for line in self.lines for c in line)

    def point(self, i: int, t):
        if self.numeric:
            w = mpmath.exp(2j * mpmath.pi / 3)
            env = {"t": mpmath.mpc(t), "w": w}
            return tuple(eval(c, {"__builtins__": {}}, env) for c in self.lines[i])
        t = Fraction(t)
        return tuple(t if c == "t" else Fraction(c) for c in self.lines[i])

    def verify(self, t, precision: int = 256) -> list[bool]:
        """Each line at parameter ``t`` has the stated period (and follows the rule)."""
        out = []
        if self.numeric:
            pairs = {("-w", "-w", "t"): ("xy", 1), ("t", "-w", "-w"): ("yz", 1),
                     ("-w", "t", "-w"): ("zx", 1), ("-w**2", "-w**2", "t"): ("xy", 2),
                     ("t", "-w**2", "-w**2"): ("yz", 2), ("-w**2", "t", "-w**2"): ("zx", 2)}
            for line in self.lines:
                pair, branch = pairs[line]
                out.append(omega_line_check(t, branch, pair, precision).ok)
            return out
        m = build_lv3(0)
        for i in range(len(self.lines)):
            orbit = exact_orbit(m, self.point(i, t), self.period)
            out.append(exact_period(orbit) == self.period
                       and _on_exact_line(self.lines[self.rule[i]], orbit[1]))
        return out

    def contains(self, point, tol: float = 1e-12) -> bool:
        """Whether ``point`` lies on one of the lines (coordinates within ``tol``)."""
        w = complex(mpmath.exp(2j * mpmath.pi / 3))
        p = [complex(v) for v in point]
        for line in self.lines:
            if line == ("t", "t", "t"):
                if abs(p[0] - p[1]) < tol and abs(p[1] - p[2]) < tol:
                    return True
                continue
            ok = True
            for c, v in zip(line, p):
                if c == "t":
                    continue
                target = complex(eval(c, {"__builtins__": {}}, {"w": w}))
                if abs(v - target) >= tol * max(1.0, abs(target)):
                    ok = False
                    break
            if ok:
                return True
        return False

    def to_json(self) -> dict:
        return {"map": self.map_id, "period": self.period, "description": self.description,
                "lines": [list(line) for line in self.lines], "rule": list(self.rule)}


def _on_exact_line(line, point) -> bool:
    if line == ("t", "t", "t"):
        return point[0] == point[1] == point[2]
    return all(c == "t" or Fraction(c) == v for c, v in zip(line, point))


def special_loci_catalog() -> list[SpecialLocus]:
    """Lines of fixed points and the period-3 lines of lv3(a=0)."""
    return [
        SpecialLocus("lv3", 1, "lines of fixed points",
                     (("0", "0", "t"), ("t", "0", "0"), ("0", "t", "0"), ("t", "t", "t")),
                     (0, 1, 2, 3)),
        SpecialLocus("lv3", 3, "period-3 lines x=y=1, y=z=1, z=x=1; (1,1,t)->(t,1,1)->(1,t,1)",
                     (("1", "1", "t"), ("t", "1", "1"), ("1", "t", "1")), (1, 2, 0)),
        SpecialLocus("lv3", 3, "period-3 lines x=y=-w, y=z=-w, z=x=-w and the -w^2 lines "
                     "(orbits pass through points at infinity)",
                     (("-w", "-w", "t"), ("t", "-w", "-w"), ("-w", "t", "-w"),
                      ("-w**2", "-w**2", "t"), ("t", "-w**2", "-w**2"), ("-w**2", "t", "-w**2")),
                     (0, 1, 2, 3, 4, 5)),
    ]


def on_special_loci(point, tol: float = 1e-12) -> bool:
    return any(loc.contains(point, tol) for loc in special_loci_catalog())


# -- isolated-point scan ----------------------------------------------------------------


@dataclass
class IsolationScan:
    """Newton-converged periodic points classified against ``γ_n`` and the special loci."""

    map_id: str
    period: int
    on_variety: int
    on_special: int
    off: list
    stats: dict
    tolerance: float

    @property
    def ok(self) -> bool:
        return not self.off

    def to_json(self) -> dict:
        return {"map": self.map_id, "period": self.period, "on_variety": self.on_variety,
                "on_special_loci": self.on_special,
                "off": [[mpmath.nstr(v, 20) for v in p] for p in self.off],
                "stats": self.stats, "tolerance": self.tolerance, "ok": self.ok}


def locate_point(spec: VarietySpec, point, tol: float = 1e-12) -> str:
    """``"variety"``, ``"special"`` (lv3 lines only) or ``"off"`` for a numerical point."""
    if spec.residual(point, relative=True) < tol:
        return "variety"
    if spec.map_id == "lv3" and on_special_loci(point, tol):
        return "special"
    return "off"


def isolated_point_scan(m: RationalMap, n: int, starts: int = 2000, seed: int = 0,
                        tol: float = 1e-12, precision: int = 128,
                        spec: VarietySpec | None = None) -> IsolationScan:
    """No isolated periodic points: every converged point lies on ``γ_n = 0`` or a special locus.

    Membership in ``γ_n = 0`` is measured relative to the size of the terms
    of the composed generator.
    """
    spec = spec or gamma_catalog(m, n)
    search = newton_periodic_search(m, n, starts=starts, precision=precision, seed=seed,
                                    tol=mpmath.mpf(2) ** (-precision // 2 - 20),
                                    multipliers=False)
    on_v = on_s = 0
    off = []
    with mpmath.workprec(precision):
        for rep in search.reports:
            where = locate_point(spec, rep.start, tol)
            if where == "variety":
                on_v += 1
            elif where == "special":
                on_s += 1
            else:
                off.append(rep.start)
    return IsolationScan(spec.map_id, n, on_v, on_s, off, search.stats, tol)


def verify_variety_sampled(m: RationalMap, spec: VarietySpec, count: int = 100, seed: int = 0,
                           precision: int = 256, tol: float = 1e-20,
                           max_rounds: int = 5) -> PeriodVerdict:
    """Sampled evidence over at least ``count`` usable samples.

    Samples discarded as singular are replaced by fresh draws (seed, seed+1,
    ...) for up to ``max_rounds`` batches; the verdict fails if fewer than
    ``count`` usable samples remain.
    """
    rows: list[SampleRow] = []
    usable = 0
    for k in range(max_rounds):
        need = count - usable
        if need <= 0:
            break
        batch = sample_on_variety(spec, need, precision, seed + k)
        v = verify_period_on_samples(m, spec, batch, tol, precision)
        rows.extend(v.rows)
        usable += sum(1 for r in v.rows if r.status != "singular")
    good = all(r.status != "failed" for r in rows)
    verified = sum(1 for r in rows if r.status == "verified")
    return PeriodVerdict(good and usable >= count and verified > 0, rows, tol, precision)

"""Periodic points: multipliers at a point and a randomized Newton search."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import mpmath
import numpy as np

from ..mapcat import RationalMap
from .numeric import (SingularOrbitError, charpoly_coefficients, distance, max_abs, numeric_map,
                      to_mpc_vector)

NEUTRAL_BAND = 1e-8


def _fmt(z, digits: int = 30) -> str:
    return mpmath.nstr(z, digits)


@dataclass
class OrbitReport:
    start: tuple
    period: int
    residual: mpmath.mpf
    multipliers: list
    classification: list[str]
    precision: int
    charpoly: list = field(default_factory=list)
    det: object = None
    verified: bool | None = None
    minimal_period: int | None = None

    def to_json(self, digits: int = 30) -> dict:
        return {
            "start": [_fmt(v, digits) for v in self.start],
            "period": self.period,
            "residual": _fmt(self.residual, 5),
            "multipliers": [_fmt(v, digits) for v in self.multipliers],
            "classification": self.classification,
            "precision_bits": self.precision,
            "charpoly": [_fmt(v, digits) for v in self.charpoly],
            "det": _fmt(self.det, digits) if self.det is not None else None,
            "verified": self.verified,
            "minimal_period": self.minimal_period,
        }


def classify(mults: Sequence, band: float = NEUTRAL_BAND) -> list[str]:
    out = []
    for lam in mults:
        a = abs(lam)
        if abs(a - 1) < band:
            out.append("neutral")
        elif a < 1:
            out.append("attractive")
        else:
            out.append("repulsive")
    return out


def return_residual(m: RationalMap, x0: Sequence, n: int, precision: int = 256):
    """``max_j |F^n(x0)_j - x0_j|`` at the given precision."""
    nm = numeric_map(m)
    with mpmath.workprec(precision):
        x = to_mpc_vector(x0)
        return max_abs([u - v for u, v in zip(nm.iterate(x, n), x)])


def multipliers_at(m: RationalMap, x0: Sequence, n: int, precision: int = 256,
                   band: float = NEUTRAL_BAND, tol_in: float = 1e-10) -> OrbitReport:
    """Eigenvalues of the n-step Jacobian at an (approximately) period-n point."""
    nm = numeric_map(m)
    with mpmath.workprec(precision):
        x = to_mpc_vector(x0)
        orbit = nm.orbit(x, n)
        res = max_abs([u - v for u, v in zip(orbit[-1], x)])
        if res > tol_in:
            raise ValueError(f"not a period-{n} point: residual {mpmath.nstr(res, 5)}")
        J = nm.jacobian_product(orbit)
        mults = list(mpmath.eig(J, left=False, right=False))
        mults.sort(key=lambda z: (float(abs(z)), float(mpmath.arg(z))))
        cp = charpoly_coefficients(J)
        det = mpmath.det(J)
        return OrbitReport(x, n, res, mults, classify(mults, band), precision, cp, det)


# -- Newton --------------------------------------------------------------------------


def _pinv_mp(J: mpmath.matrix, rcond=None) -> mpmath.matrix:
    U, S, V = mpmath.svd_c(J)
    n = J.rows
    cut = (rcond if rcond is not None else mpmath.mpf(2) ** (-mpmath.mp.prec // 2)) * max(S)
    D = mpmath.zeros(n)
    for i in range(n):
        if S[i] > cut:
            D[i, i] = 1 / S[i]
    return V.H * D * U.H


def _g_mp(nm, x, n):
    orbit = nm.orbit(x, n)
    return orbit, [u - v for u, v in zip(orbit[-1], x)]


def refine(m: RationalMap, x0: Sequence, n: int, precision: int = 256, tol: float = 1e-25,
           max_iter: int = 60, halvings: int = 30):
    """Damped (pseudo-inverse) Newton on ``F^n(x) - x`` in mpmath; returns ``(x, residual)``."""
    nm = numeric_map(m)
    with mpmath.workprec(precision):
        x = to_mpc_vector(x0)
        eye = mpmath.eye(nm.d)
        orbit, g = _g_mp(nm, x, n)
        res = max_abs(g)
        for _ in range(max_iter):
            if res < tol * mpmath.mpf(2) ** -8:
                break
            J = nm.jacobian_product(orbit) - eye
            dx = _pinv_mp(J) * mpmath.matrix(g)
            t = mpmath.mpf(1)
            for _h in range(halvings + 1):
                trial = tuple(x[i] - t * dx[i] for i in range(nm.d))
                try:
                    o2, g2 = _g_mp(nm, trial, n)
                    r2 = max_abs(g2)
                except ZeroDivisionError:
                    r2 = mpmath.inf
                if r2 < res:
                    x, orbit, g, res = trial, o2, g2, r2
                    break
                t /= 2
            else:
                break
        return x, res


def _newton_batch(nm, X: np.ndarray, n: int, max_iter: int, halvings: int, tol: float):
    """Vectorized damped Newton in complex128; returns converged mask and points."""
    d, K = X.shape
    eye = np.eye(d)

    def G(Y):
        Z = Y
        for _ in range(n):
            Z = nm.step_batch(Z)
        return Z - Y

    def JG(Y):
        P = np.broadcast_to(eye, (Y.shape[1], d, d)).astype(complex)
        Z = Y
        for _ in range(n):
            P = np.einsum("kij,kjl->kil", nm.jacobian_batch(Z), P)
            Z = nm.step_batch(Z)
        return P - eye

    def norm(V):
        with np.errstate(invalid="ignore"):
            r = np.max(np.abs(V), axis=0)
        r[~np.isfinite(r)] = np.inf
        return r

    g = G(X)
    res = norm(g)
    active = np.isfinite(res)
    done = np.zeros(K, dtype=bool)
    for _ in range(max_iter):
        done |= active & (res < tol)
        active &= ~done
        idx = np.nonzero(active)[0]
        if idx.size == 0:
            break
        Y = X[:, idx]
        J = JG(Y)
        ok = np.all(np.isfinite(J.reshape(len(idx), -1)), axis=1)
        J[~ok] = 0
        step = np.einsum("kij,jk->ik", np.linalg.pinv(J, rcond=1e-12), g[:, idx])
        t = np.ones(idx.size)
        moved = np.zeros(idx.size, dtype=bool)
        for _h in range(halvings + 1):
            pend = ~moved
            if not pend.any():
                break
            trial = Y[:, pend] - t[pend] * step[:, pend]
            g2 = G(trial)
            r2 = norm(g2)
            better = r2 < res[idx[pend]]
            sel = np.nonzero(pend)[0][better]
            X[:, idx[sel]] = trial[:, better]
            g[:, idx[sel]] = g2[:, better]
            res[idx[sel]] = r2[better]
            moved[sel] = True
            t[pend] /= 2
        stuck = idx[~moved | ~ok]
        active[stuck] = False
        big = np.max(np.abs(X), axis=0) > 1e8
        active &= ~big
    done |= res < tol
    return done, X, res


def _near_singular(nm, x, n, precision, tol) -> bool:
    with mpmath.workprec(precision):
        cur = tuple(x)
        for _ in range(n):
            if min(abs(v) for v in nm.denominators(cur)) < tol:
                return True
            cur = nm.step(cur)
    return False


def divisors(n: int) -> list[int]:
    return [k for k in range(1, n) if n % k == 0]


def minimal_period(m: RationalMap, x0: Sequence, n: int, precision: int = 256,
                   tol: float = 1e-20) -> int:
    """Smallest divisor ``k`` of ``n`` with ``|F^k(x) - x| < tol`` (``n`` if none)."""
    nm = numeric_map(m)
    with mpmath.workprec(precision):
        x = to_mpc_vector(x0)
        orbit = nm.orbit(x, n)
        for k in divisors(n):
            if max_abs([u - v for u, v in zip(orbit[k], x)]) < tol:
                return k
    return n


@dataclass
class SearchResult:
    reports: list[OrbitReport]
    stats: dict

    def __iter__(self):
        return iter(self.reports)

    def __len__(self):
        return len(self.reports)

    def points(self) -> list[tuple]:
        return [r.start for r in self.reports]


def random_starts(d: int, starts: int, seed: int, scale: float = 2.0) -> np.ndarray:
    """Complex Gaussian starts, ``scale * (N(0,1) + i N(0,1))`` per coordinate."""
    rng = np.random.default_rng(seed)
    return scale * (rng.standard_normal((d, starts)) + 1j * rng.standard_normal((d, starts)))


def newton_periodic_search(m: RationalMap, n: int, starts: int = 1000, precision: int = 256,
                           seed: int = 0, scale: float = 2.0, tol: float = 1e-25,
                           dedup: float = 1e-10, max_iter: int = 200, halvings: int = 30,
                           minimal: bool = True, multipliers: bool = True,
                           batch: int = 4096, cluster: float = 1e-8,
                           singular_tol: float = 1e-15) -> SearchResult:
    """Periodic points of period ``n`` from seeded random complex starts.

    Damped Newton on ``F^n(x) - x`` runs vectorized in double precision,
    converged points are refined in mpmath to residual ``< tol``, re-verified
    by forward iteration at doubled precision, filtered for minimal period
    and deduplicated at distance ``dedup``.  Points whose orbit comes within
    ``singular_tol`` of a vanishing denominator are limits on the
    indeterminacy locus, not periodic points, and are dropped.  The pseudo-inverse step copes
    with the rank-deficient Jacobians found on varieties of periodic points.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    nm = numeric_map(m)
    X = random_starts(nm.d, starts, seed, scale)
    stats = {"starts": starts, "seed": seed, "scale": scale, "precision_bits": precision,
             "period": n, "converged_double": 0, "refined": 0, "unverified": 0,
             "divisor_period": 0, "duplicates": 0, "singular": 0}
    cands = []
    for lo in range(0, starts, batch):
        Xb = X[:, lo:lo + batch].copy()
        done, Xb, _ = _newton_batch(nm, Xb, n, max_iter, halvings, 1e-9)
        for k in np.nonzero(done)[0]:
            cands.append(tuple(complex(v) for v in Xb[:, k]))
    stats["converged_double"] = len(cands)

    # candidates closer than `cluster` in double precision converge to the same
    # refined point; refine one representative each
    reps: list[tuple] = []
    if cands:
        arr = np.array(cands)
        keep = np.ones(len(cands), dtype=bool)
        for i in range(len(cands)):
            if not keep[i]:
                continue
            near = np.max(np.abs(arr[i + 1:] - arr[i]), axis=1) < cluster
            keep[i + 1:][near] = False
            reps.append(cands[i])
        stats["duplicates"] += len(cands) - len(reps)

    found: list[tuple] = []
    for c in reps:
        try:
            x, res = refine(m, c, n, precision, tol)
        except (ZeroDivisionError, ValueError):
            stats["singular"] += 1
            continue
        if not res < tol:
            continue
        if _near_singular(nm, x, n, precision, singular_tol):
            stats["singular"] += 1
            continue
        stats["refined"] += 1
        try:
            res2 = return_residual(m, x, n, 2 * precision)
        except ZeroDivisionError:
            stats["singular"] += 1
            continue
        if not res2 < tol:
            stats["unverified"] += 1
            continue
        if minimal and n > 1 and minimal_period(m, x, n, precision) < n:
            stats["divisor_period"] += 1
            continue
        if any(distance(x, y) < dedup for y in found):
            # re-refine at doubled precision before deciding it is the same point
            x2, _ = refine(m, x, n, 2 * precision, tol)
            with mpmath.workprec(precision):
                x2 = tuple(mpmath.mpc(v) for v in x2)
            if any(distance(x2, y) < dedup for y in found):
                stats["duplicates"] += 1
                continue
            x = x2
        found.append(x)
    found.sort(key=lambda p: tuple(v for z in p for v in (float(z.real), float(z.imag))))
    reports = []
    for x in found:
        if multipliers:
            try:
                r = multipliers_at(m, x, n, precision, tol_in=tol)
            except (ZeroDivisionError, ValueError):
                continue
        else:
            r = OrbitReport(x, n, return_residual(m, x, n, precision), [], [], precision)
        r.verified = True
        r.minimal_period = n if minimal else None
        reports.append(r)
    stats["distinct"] = len(reports)
    return SearchResult(reports, stats)

"""Exact and high-precision checks of the special orbits of the 3dLV map."""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction

import mpmath

from ..mapcat import build_lv3
from .numeric import SingularOrbitError, max_abs, numeric_map, to_mpc_vector


@dataclass
class SpecialOrbit:
    ok: bool
    orbit: list
    period: int | None
    expected: list | None = None
    residual: object = None


def exact_orbit(m, x0, steps: int) -> list[tuple]:
    """Exact rational orbit; a vanishing denominator raises :class:`SingularOrbitError`."""
    pts = [tuple(Fraction(v) for v in x0)]
    for _ in range(steps):
        try:
            pts.append(m.step(pts[-1]))
        except ZeroDivisionError as exc:
            raise SingularOrbitError(f"orbit from {x0} hits a singular surface") from exc
    return pts


def exact_period(orbit: list[tuple]) -> int | None:
    for k in range(1, len(orbit)):
        if orbit[k] == orbit[0]:
            return k
    return None


def special_orbit_check(t) -> SpecialOrbit:
    """``(1,1,t) -> (t,1,1) -> (1,t,1) -> (1,1,t)`` under lv3(a=0), exactly.

    ``t = 1`` is the fixed point on ``x = y = z``; ``t = 0`` hits a singular
    surface and raises :class:`SingularOrbitError`.
    """
    t = Fraction(t)
    m = build_lv3(0)
    orbit = exact_orbit(m, (1, 1, t), 3)
    expected = [(1, 1, t), (t, 1, 1), (1, t, 1), (1, 1, t)]
    ok = [tuple(Fraction(v) for v in p) for p in expected] == orbit
    return SpecialOrbit(ok, orbit, exact_period(orbit), expected)


@lru_cache(maxsize=None)
def _lv3_third_iterate():
    from .symbolic import iterate_symbolic
    return tuple(iterate_symbolic(build_lv3(0), 3)[-1])


def omega_line_check(z, branch: int = 1, pair: str = "xy", precision: int = 256) -> SpecialOrbit:
    """Period 3 through a point with two coordinates equal to ``-ω`` (``-ω²`` for branch 2).

    ``pair`` chooses the line: ``xy`` (x = y = -ω), ``yz`` or ``zx``.  These
    points lie on a singular surface (e.g. ``x(1-y) = 1``): the orbit runs
    through points at infinity, ``(-ω,-ω,z) -> (1,∞,0) -> (∞,1,0) -> (-ω,-ω,z)``.
    The return is therefore measured with the cancelled third iterate
    ``X^(3)``, which is regular there.  ``orbit`` holds the stepwise images
    with ``None`` for coordinates at infinity.
    """
    X3 = _lv3_third_iterate()
    nm = numeric_map(build_lv3(0))
    with mpmath.workprec(precision):
        w = mpmath.exp(2j * mpmath.pi / 3) ** branch
        c = -w
        z = to_mpc_vector([z])[0]
        pt = {"xy": (c, c, z), "yz": (z, c, c), "zx": (c, z, c)}[pair]
        env = dict(zip(("x", "y", "z"), pt))
        back = tuple(f.evaluate(env) for f in X3)
        res = max_abs([u - v for u, v in zip(back, pt)])
        big = mpmath.mpf(2) ** (precision // 2)
        orbit = [pt]
        cur = pt
        for _ in range(2):
            try:
                cur = nm.step(cur)
            except ZeroDivisionError:
                break
            orbit.append(tuple(None if abs(v) > big else v for v in cur))
            if any(v is None for v in orbit[-1]):
                break
        moved = any(v is None for v in orbit[1]) if len(orbit) > 1 else True
        tol = mpmath.mpf(10) ** -20
        period = 3 if res < tol and moved else None
        return SpecialOrbit(period == 3, orbit, period, None, res)

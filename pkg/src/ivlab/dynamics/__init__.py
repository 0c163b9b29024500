"""Orbit engines: symbolic iteration, degree growth, Jacobians and periodic points."""

from .numeric import (NumericMap, SingularOrbitError, charpoly_coefficients, numeric_map,
                      to_mpc_vector)
from .periodic import (NEUTRAL_BAND, OrbitReport, SearchResult, classify, minimal_period,
                       multipliers_at, newton_periodic_search, random_starts, refine,
                       return_residual)
from .special import SpecialOrbit, exact_orbit, exact_period, omega_line_check, special_orbit_check
from .symbolic import (DegreeSequence, EntropyEstimate, JacobianMatrix, degree_growth,
                       entropy_estimate, iterate_symbolic, jacobian, jacobian_det_is_one,
                       term_count)

__all__ = [
    "NumericMap", "SingularOrbitError", "charpoly_coefficients", "numeric_map", "to_mpc_vector",
    "NEUTRAL_BAND", "OrbitReport", "SearchResult", "classify", "minimal_period", "multipliers_at",
    "newton_periodic_search", "random_starts", "refine", "return_residual", "SpecialOrbit",
    "exact_orbit", "exact_period", "omega_line_check", "special_orbit_check", "DegreeSequence",
    "EntropyEstimate", "JacobianMatrix", "degree_growth", "entropy_estimate", "iterate_symbolic",
    "jacobian", "jacobian_det_is_one", "term_count",
]

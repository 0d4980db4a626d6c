"""Linear network coded broadcast simulator.

Thin python surface over the C++ core: SFM generators, GF(2^m) arithmetic,
session simulation, Monte Carlo estimates, analytic bounds, approximation
reports, and the exhaustive erasure-free oracle.
"""

from ._core import (
    ApproxReport,
    Bounds,
    EliminationState,
    Estimates,
    Field,
    OracleResult,
    SessionResult,
    Sfm,
    __version__,
    approximation_report,
    bounds,
    gen_a1,
    gen_a2,
    gen_random,
    gen_theorem2,
    gen_theorem5,
    min_apdd,
    min_apdd_receiver,
    min_completion,
    monte_carlo,
    parse_sfm,
    run_session,
    serialize_sfm,
)

__all__ = [
    "ApproxReport",
    "Bounds",
    "EliminationState",
    "Estimates",
    "Field",
    "OracleResult",
    "SessionResult",
    "Sfm",
    "__version__",
    "approximation_report",
    "bounds",
    "gen_a1",
    "gen_a2",
    "gen_random",
    "gen_theorem2",
    "gen_theorem5",
    "min_apdd",
    "min_apdd_receiver",
    "min_completion",
    "monte_carlo",
    "parse_sfm",
    "run_session",
    "serialize_sfm",
]

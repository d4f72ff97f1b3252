"""Semiring provenance for Büchi games.

Solves the Büchi winning formula over absorptive polynomials, so that one
polynomial per position lists every absorption-dominant winning strategy,
and answers strategy and repair questions from those polynomials.
"""

from .analysis import (
    AnalysisReport,
    Repair,
    RepairResult,
    brute_force_repairs,
    compute_repairs,
    finite_use_check,
    lasso_finite_use,
    report,
    solve_all,
    wins_with_subset,
)
from .dual import DualityRelation, DualPoly, DualSemiring, dual_name
from .errors import (
    BudgetExceededError,
    BuchiProvError,
    ConvergenceError,
    DualityError,
    InvalidGameError,
    ParseError,
    PreconditionViolated,
    RepairError,
    SizeLimitError,
    UnassignedVariableError,
)
from .fixpoint import Trace, build_equations, gfp_outer, lfp_inner, solve_win0
from .game import (
    BuchiGame,
    RepairSpec,
    apply_repair,
    game_to_dot,
    load_game,
    parse_game,
    serialize_game,
    solve_boolean,
    validate,
)
from .interpretation import (
    Interpretation,
    compose_with_target,
    make_pi_rep,
    make_pi_strat,
)
from .poly import INF, ONE, ZERO, AbsorptivePoly, Monomial, parse_poly, poly_eval
from .semirings import (
    BOOLEAN,
    SINF,
    TROPICAL,
    VITERBI,
    BooleanSemiring,
    MinMaxSemiring,
    TropicalSemiring,
    ViterbiSemiring,
)
from .strategies import (
    EdgeProfile,
    StrategyAutomaton,
    absorbs,
    classify,
    dominant_profiles,
    dominant_sum,
    enumerate_strategies,
    enumerate_winning,
    is_winning,
    unfold_profile,
)

__version__ = "0.1.0"

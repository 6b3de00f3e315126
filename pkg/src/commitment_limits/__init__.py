"""Plausible leader actions in leader-follower games with partial commitment."""

__version__ = "0.1.0"

from .cst import SymbolicCST, cournot_cst, parse_cst, stackelberg_cst
from .design import Objective, solve_cdp
from .equilibria import cournot_set, equilibrium_report, stackelberg_set
from .errors import CommitmentError
from .families import duopoly_closed_forms, make_coordination, make_duopoly, make_family, thresholds
from .game import ActionSpace, GameSpec, Tolerances
from .intervals import IntervalUnion, Piece
from .oracle import FiniteCST, Grid, GridGame, certify, project
from .plausibility import (check_rc, i_plausible_set, p_plausible_set, plausibility_report,
                           simply_plausible_set)
from .refinement import (i_plausible_wrt, is_finer, is_richer, is_worse, simply_plausible_wrt,
                         worse_refinement_exists)

__all__ = [
    "ActionSpace", "CommitmentError", "FiniteCST", "GameSpec", "Grid", "GridGame", "IntervalUnion",
    "Objective", "Piece", "SymbolicCST", "Tolerances", "certify", "check_rc", "cournot_cst",
    "cournot_set", "duopoly_closed_forms", "equilibrium_report", "i_plausible_set",
    "i_plausible_wrt", "is_finer", "is_richer", "is_worse", "make_coordination", "make_duopoly",
    "make_family", "p_plausible_set", "parse_cst", "plausibility_report", "project",
    "simply_plausible_set", "simply_plausible_wrt", "solve_cdp", "stackelberg_cst",
    "stackelberg_set", "thresholds", "worse_refinement_exists",
]

"""Geometric-spacing constraints for rate-optimal extensible equal-weight quadrature."""

from .bounds import (
    BoundParams,
    ExtensionSolution,
    LogRateParams,
    SolveMethod,
    closed_form_floor,
    fixed_point_map,
    floor_gap,
    is_admissible_extension,
    lipschitz_bound,
    log_rate_floor,
    map_derivative,
    min_inefficiency,
    solve_rho_star,
)
from .errors import (
    BracketError,
    DomainViolationError,
    InsufficientDataError,
    ParameterDomainError,
    ScheduleSizeError,
    SolverError,
)
from .rootfind import Bracket, RootResult, brent, fixed_point_iterate
from .schedule import (
    Schedule,
    ScheduleReport,
    arithmetic_schedule,
    geometric_schedule,
    validate_schedule,
)

__version__ = "0.1.0"

"""Analysis of finite sums of exponential functions.

Root isolation with sign-change bounds, pair functions and their
characteristic points, coefficient synchronization, an internal rate of
return solver and an empirical claim checker.
"""

__version__ = "0.1.0"

from .claims import ClaimConfig, ClaimReport, SeriesReport, claim_check, series_scan
from .core import (
    ExpSum,
    ExpTerm,
    ShiftedTerm,
    collapse_log_sum,
    collapse_shifts,
    derivative,
    evaluate,
    merge_terms,
    normalize_bases,
    term_scale,
)
from .errors import (
    DomainError,
    ExpSumError,
    IdenticallyZeroError,
    InfeasibleAdditionError,
    NoSolutionError,
    PairConstructionError,
    RangeError,
    SyncInfeasibleError,
)
from .irr import (
    CashFlow,
    CashFlowSchedule,
    IrrSolution,
    irr_evaluate,
    irr_solve,
    schedule_to_expsum,
    sign_sequence,
    taylor_coefficients,
)
from .pairfn import (
    PairFunction,
    PairKind,
    characteristic_point,
    characteristic_points,
    derivative_pair,
    extremum_point,
    inflection_point,
    make_pair,
    zero_point,
)
from .roots import (
    Asymptote,
    RootReport,
    analyze,
    find_roots,
    intersections,
    polynomial_lift,
    sign_change_bound,
    solve_level,
)
from .sync import (
    PointKind,
    Side,
    SplitResult,
    SyncResult,
    add_strong_terms,
    pairs_from_sum,
    pick_sync_point,
    proportional_split,
    split_shared_mi,
    split_sum,
    sync_at_point,
    synchronize_sum,
)

__all__ = [
    "Asymptote",
    "CashFlow",
    "CashFlowSchedule",
    "ClaimConfig",
    "ClaimReport",
    "DomainError",
    "ExpSum",
    "ExpSumError",
    "ExpTerm",
    "IdenticallyZeroError",
    "InfeasibleAdditionError",
    "IrrSolution",
    "NoSolutionError",
    "PairConstructionError",
    "PairFunction",
    "PairKind",
    "PointKind",
    "RangeError",
    "RootReport",
    "SeriesReport",
    "ShiftedTerm",
    "Side",
    "SplitResult",
    "SyncInfeasibleError",
    "SyncResult",
    "add_strong_terms",
    "analyze",
    "characteristic_point",
    "characteristic_points",
    "claim_check",
    "collapse_log_sum",
    "collapse_shifts",
    "derivative",
    "derivative_pair",
    "evaluate",
    "extremum_point",
    "find_roots",
    "inflection_point",
    "intersections",
    "irr_evaluate",
    "irr_solve",
    "make_pair",
    "merge_terms",
    "normalize_bases",
    "pairs_from_sum",
    "pick_sync_point",
    "polynomial_lift",
    "proportional_split",
    "schedule_to_expsum",
    "series_scan",
    "sign_change_bound",
    "sign_sequence",
    "solve_level",
    "split_shared_mi",
    "split_sum",
    "sync_at_point",
    "synchronize_sum",
    "taylor_coefficients",
    "term_scale",
    "zero_point",
    "__version__",
]

from hcs._core import (
    HcsError,
    builtin_names,
    check_bochner,
    check_weitzenboeck,
    contraction_terms,
    flow,
    metric,
    run,
    sample_points,
    scalar_curvature,
    verify_check_names,
)

__all__ = [
    "HcsError",
    "builtin_names",
    "check_bochner",
    "check_weitzenboeck",
    "contraction_terms",
    "flow",
    "metric",
    "run",
    "sample_points",
    "scalar_curvature",
    "verify_check_names",
]

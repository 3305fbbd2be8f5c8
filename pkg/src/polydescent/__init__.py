"""Steepest-descent paths, descent trees, and length-bound checks for
factored complex polynomials and finite Blaschke products."""

from .backend import backend_name
from .blaschke import (
    BlaschkeProduct,
    BlaschkeTarget,
    blaschke_critical_points,
    blaschke_eval,
    blaschke_log_derivative,
    blaschke_tree_and_bounds,
    make_blaschke,
)
from .crofton import (
    BoundReport,
    CroftonEstimate,
    CrossingProfile,
    crofton_length,
    max_crossings,
    verify_length_bounds,
)
from .errors import (
    EvaluationDomainError,
    LeftDomain,
    NearCriticalValue,
    PolydescentError,
    StalledCorrection,
    UnresolvedEdge,
)
from .explore import ExplorationRow, explore_lengths, rows_to_csv, summarize
from .geometry import (
    ConvexHull,
    EnclosingDisk,
    convex_hull,
    hull_membership,
    smallest_enclosing_disk,
)
from .levelset import (
    ComponentReport,
    IntegralReport,
    SeparationReport,
    count_level_components,
    integral_bound_check,
    separation_witness,
)
from .poly import (
    CriticalPointSet,
    FactoredPolynomial,
    LocalBranchModel,
    branch_model,
    critical_points,
    evaluate,
    log_derivative,
)
from .randomgen import CounterRng, InstanceSpec, blaschke_corpus, polynomial_corpus
from .targets import AnalyticTarget, PolynomialTarget, SpecialPoint
from .tracer import (
    BranchSeed,
    DescentPath,
    TraceSettings,
    arc_length,
    descent_directions,
    trace_all_branches,
    trace_descent,
)
from .tree import (
    DescentTree,
    TreeReport,
    build_descent_tree,
    to_dot,
    tree_route,
    verify_tree,
)

__version__ = "0.1.0"

__all__ = [
    "AnalyticTarget",
    "BlaschkeProduct",
    "BlaschkeTarget",
    "BoundReport",
    "BranchSeed",
    "ComponentReport",
    "ConvexHull",
    "CounterRng",
    "CriticalPointSet",
    "CroftonEstimate",
    "CrossingProfile",
    "DescentPath",
    "DescentTree",
    "EnclosingDisk",
    "EvaluationDomainError",
    "ExplorationRow",
    "FactoredPolynomial",
    "InstanceSpec",
    "IntegralReport",
    "LeftDomain",
    "LocalBranchModel",
    "NearCriticalValue",
    "PolydescentError",
    "PolynomialTarget",
    "SeparationReport",
    "SpecialPoint",
    "StalledCorrection",
    "TraceSettings",
    "TreeReport",
    "UnresolvedEdge",
    "arc_length",
    "backend_name",
    "blaschke_corpus",
    "blaschke_critical_points",
    "blaschke_eval",
    "blaschke_log_derivative",
    "blaschke_tree_and_bounds",
    "branch_model",
    "build_descent_tree",
    "convex_hull",
    "count_level_components",
    "critical_points",
    "crofton_length",
    "descent_directions",
    "evaluate",
    "explore_lengths",
    "hull_membership",
    "integral_bound_check",
    "log_derivative",
    "make_blaschke",
    "max_crossings",
    "polynomial_corpus",
    "rows_to_csv",
    "separation_witness",
    "smallest_enclosing_disk",
    "summarize",
    "to_dot",
    "trace_all_branches",
    "trace_descent",
    "tree_route",
    "verify_length_bounds",
    "verify_tree",
]

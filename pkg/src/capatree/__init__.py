"""capatree: exact discrete (a,p)-capacities on the dyadic tree.

The package computes boundary capacities through an exact two-child
recursion and closed forms, classifies limsup run sets as positive / zero
/ indeterminate capacity, brackets Hausdorff dimension through the
capacity profile, and cross-validates everything against an independent
convex-program oracle and circle-side quadrature.
"""

from .capacity import (
    BoundKind,
    CapacityReport,
    Method,
    cap_component,
    capacity_recursive,
    finite_tree_capacity,
    full_tree_capacity,
    phi_apply,
    phi_composition_exponents,
    sigma,
    sigma_closed_form,
    sigma_direct,
    truncated_tree_capacity,
)
from .circle import (
    DigitStream,
    DyadicDensity,
    RunLength,
    circle_full_capacity,
    kernel_integral,
    membership_score,
    product_identity,
    riesz_potential,
    run_lengths,
)
from .dobinski import (
    Custom,
    DimensionBracket,
    Geometric,
    Growth,
    Linear,
    Outcome,
    Power,
    Verdict,
    capacity_bounds,
    classify,
    comparability_report,
    dimension_profile,
    dobinski_full,
    kappa_value,
    spec_from_json,
    spec_to_json,
)
from .errors import ConvergenceError, DomainError, DyadicTangentPole
from .exponents import (
    ApBranch,
    Exponents,
    LogOp,
    LogValue,
    as_fraction,
    conjugate,
    log_combine,
    rel_error,
)
from .oracle import (
    FiniteProblem,
    OracleResult,
    agreement_battery,
    emulated_infinite_problem,
    energy_eval,
    potential_eval,
    solve_capacity,
    solve_from_json,
)
from .tree import CylinderSet, canonicalize, d_cylinder_set, lambda_interval, meet, metric, weight

__version__ = "0.1.0"

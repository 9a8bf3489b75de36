"""Convergence-factor toolkit for plane compact sets with finitely many
components: distance-ratio lower bounds, Green's-function estimates, extremal
point diagnostics, and minimax-approximation estimates, cross-validated
against each other.
"""

__version__ = "0.1.0"

from .geometry import (  # noqa: F401
    CompactSet,
    ConvexPolygon,
    CurveFamily,
    Disk,
    DiscretizedCurve,
    Segment,
    SinglePoint,
    lower_bound,
    offset_curve_family,
    validate_curve_family,
    winding_number,
)
from .potential import (  # noqa: F401
    FitParams,
    GreensModel,
    capacity,
    eval_greens,
    fit_greens,
    find_saddles,
    level_curve_family,
    rho_critical,
    theta_descent,
    theta_for_family,
)
from .fekete import (  # noqa: F401
    capacity_from_diameters,
    decay_check,
    fekete_points_small,
    fekete_polynomial,
    leja_points,
    nth_diameter,
)
from .approx import (  # noqa: F401
    PiecewisePolynomial,
    approximation_nodes,
    dn_sequence,
    minimax_fit,
    rho_from_dn,
    walsh_interpolant,
)
from .experiments import (  # noqa: F401
    Scenario,
    gate_theorem,
    prop15_scenario,
    prop16_limit,
    scenario_by_name,
    scenario_library,
)

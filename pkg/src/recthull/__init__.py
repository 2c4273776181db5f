"""Rectangular-hull confidence regions and multivariate median-bias tools.

The package splits into five layers:

* :mod:`recthull.signs`: the sign lattice {-1, 0, +1}^d, sparse sign
  measures, and the mass-dispersal partial order,
* :mod:`recthull.bias`: rectilinear, halfspace, and orthant median biases,
  including the dispersal bias of measures with axis mass,
* :mod:`recthull.bounds`: exact miscoverage brackets for coordinatewise
  hulls and the randomized batch-count rule,
* :mod:`recthull.hull`: the sample-splitting confidence region, region
  amplification, and the vertex-randomized estimator,
* :mod:`recthull.simulate`: distributions, exact miscoverage oracles, and
  seeded Monte Carlo harnesses.
"""

from .bias import (
    BiasReport,
    bias_report,
    o_med_bias_mch,
    omb_1d_closed_form,
    omb_general,
    orthant_sup_distance,
    r_med_bias,
    t_med_bias,
)
from .bounds import (
    batch_count,
    group_spread_bounds,
    lower_bound,
    randomized_batches,
    upper_bound,
)
from .hull import (
    Box,
    BoxUnion,
    EstimatorFailure,
    HulCRegion,
    HulcResult,
    InsufficientDataError,
    amplify_region,
    coordinate_mean,
    coordinate_median,
    hulc_region,
    rect_hull,
    split_batches,
    vertex_randomized_estimator,
)
from .signs import (
    ElementaryOp,
    InfeasibleOperationError,
    SignMeasure,
    apply_elementary,
    couple_sample,
    empirical_sign_measure,
    is_mch,
    is_orthant,
    mch_order_conjectured,
    orthant_labels,
    sign_lattice,
    sign_of,
    sign_precedes,
)
from .simulate import (
    CoverageResult,
    DiscreteSign,
    Gaussian,
    MCEstimate,
    PointMixture,
    TiltedGaussian,
    edge_reference_measure,
    enumerate_miscoverage,
    four_point_disk,
    make_distribution,
    mc_hulc_coverage,
    mc_miscoverage,
    mch_reference_measure,
    oracle_miscoverage,
    random_elementary_op,
    random_op_chain,
    random_sign_measure,
    replication_rng,
    sample,
)

__version__ = "0.1.0"

__all__ = [
    "BiasReport",
    "Box",
    "BoxUnion",
    "CoverageResult",
    "DiscreteSign",
    "ElementaryOp",
    "EstimatorFailure",
    "Gaussian",
    "HulCRegion",
    "HulcResult",
    "InfeasibleOperationError",
    "InsufficientDataError",
    "MCEstimate",
    "PointMixture",
    "SignMeasure",
    "TiltedGaussian",
    "amplify_region",
    "apply_elementary",
    "batch_count",
    "bias_report",
    "coordinate_mean",
    "coordinate_median",
    "couple_sample",
    "edge_reference_measure",
    "empirical_sign_measure",
    "enumerate_miscoverage",
    "four_point_disk",
    "group_spread_bounds",
    "hulc_region",
    "is_mch",
    "is_orthant",
    "lower_bound",
    "make_distribution",
    "mc_hulc_coverage",
    "mc_miscoverage",
    "mch_order_conjectured",
    "mch_reference_measure",
    "o_med_bias_mch",
    "omb_1d_closed_form",
    "omb_general",
    "oracle_miscoverage",
    "orthant_labels",
    "orthant_sup_distance",
    "r_med_bias",
    "random_elementary_op",
    "random_op_chain",
    "random_sign_measure",
    "randomized_batches",
    "rect_hull",
    "replication_rng",
    "sample",
    "sign_lattice",
    "sign_of",
    "sign_precedes",
    "split_batches",
    "t_med_bias",
    "upper_bound",
    "vertex_randomized_estimator",
]

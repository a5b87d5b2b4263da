"""Numerical curvature testing on finite metric spaces and weighted graphs:
Gromov hyperbolicity, rough CAT comparison conditions, bolicity, and the
planar lemma suite backing them."""

__version__ = "0.1.0"

from metricurv._kernels import BACKEND as kernel_backend
from metricurv.model_plane import (
    Curvature,
    ModelPoint,
    ComparisonTriangle,
    build_comparison_triangle,
    model_distance,
    point_on_side,
    comparison_point_interval,
    alexandrov_check,
)
from metricurv.spaces import (
    FiniteMetric,
    GraphSpace,
    SpaceHandle,
    validate_metric,
    from_matrix,
    from_graph,
    l2_product,
    glue,
    make_grid_plane,
    make_tree,
    make_circle,
    make_hyperbolic_sample,
    make_warped_ladder,
    load_space,
    save_space,
)
from metricurv.shortseg import (
    ShortSegment,
    ShortTriangle,
    standard_short_h,
    geodesic,
    sample_short_segment,
    build_short_triangle,
    point_at_arclength,
)
from metricurv.conditions import (
    SubembedResult,
    CurvatureReport,
    delta_hyperbolicity,
    rough_subembedding_C,
    four_point_scan,
    rcat_triangle_excess,
    rcat_scan,
    weak_rcat_min_C,
    bolicity_min_delta,
    cn_min_deficit,
    consistency_suite,
)
from metricurv.lemma_oracles import (
    BoundCheck,
    plane_interp_bound,
    ellipse_bound,
    zipper_r,
    zipper_pert_checks,
    tripod_gap_check,
    rough_convexity_check,
    short_vs_geodesic_gap,
    constant_conversions,
)

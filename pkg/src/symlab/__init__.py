"""symlab: iterated Steiner and Minkowski symmetrization of convex bodies.

Exact 2D polygon geometry (with an optional compiled kernel backend),
sampled 3D hulls, symmetrization operators, convergence metrics,
direction samplers, spherical harmonic contraction diagnostics, and an
experiment driver with CSV trajectories and rate fitting.
"""

from ._kernels import BACKEND
from .bodies import (
    ConvexPolygon,
    SphereGrid,
    SupportProfile,
    VertexHull,
    body_from_json,
    body_to_json,
    make_hull,
    make_polygon,
    reflect_body,
    sphere_grid,
    support_eval,
    support_profile,
)
from .directions import (
    DensityModel,
    DirectionSource,
    MarkovKernel,
    deterministic_sequence,
    haar_kernel,
    hemisphere_mix_kernel,
    make_rng,
    markov_sequence,
    sample_bounded_density,
    sample_haar,
    source_from_config,
)
from .errors import SymlabError
from .harmonics import (
    HarmonicSpectrum,
    body_contraction_mc,
    centered_support,
    contraction_factor,
    contraction_ratio,
    dim_spaces,
    expand,
    linf_l2_constant,
    random_harmonic,
    reconstruct,
    reflect_spectrum,
)
from .lab import (
    ExperimentConfig,
    N0Estimate,
    RateFit,
    equivalence_probe,
    estimate_n0,
    fit_rate,
    make_body,
    mean_radius_decay,
    run_experiment,
    theoretical_c_bound,
)
from .metrics import (
    BallSpec,
    MCEstimate,
    circumradius,
    equivalent_radius,
    hausdorff,
    inertia,
    mean_radius,
    nikodym,
    unit_ball_volume,
    volume,
)
from .symmetrize import (
    OperatorKind,
    Trajectory,
    apply_operator,
    iterate,
    minkowski,
    prune_polygon,
    steiner_2d,
    steiner_sampled,
    validate_trajectory,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BallSpec",
    "ConvexPolygon",
    "DensityModel",
    "DirectionSource",
    "ExperimentConfig",
    "HarmonicSpectrum",
    "MCEstimate",
    "MarkovKernel",
    "N0Estimate",
    "OperatorKind",
    "RateFit",
    "SphereGrid",
    "SupportProfile",
    "SymlabError",
    "Trajectory",
    "VertexHull",
    "apply_operator",
    "body_contraction_mc",
    "body_from_json",
    "body_to_json",
    "centered_support",
    "circumradius",
    "contraction_factor",
    "contraction_ratio",
    "deterministic_sequence",
    "dim_spaces",
    "equivalence_probe",
    "equivalent_radius",
    "estimate_n0",
    "expand",
    "fit_rate",
    "haar_kernel",
    "hausdorff",
    "hemisphere_mix_kernel",
    "inertia",
    "iterate",
    "linf_l2_constant",
    "make_body",
    "make_hull",
    "make_polygon",
    "make_rng",
    "markov_sequence",
    "mean_radius",
    "mean_radius_decay",
    "minkowski",
    "nikodym",
    "prune_polygon",
    "random_harmonic",
    "reconstruct",
    "reflect_body",
    "reflect_spectrum",
    "run_experiment",
    "sample_bounded_density",
    "sample_haar",
    "source_from_config",
    "sphere_grid",
    "steiner_2d",
    "steiner_sampled",
    "support_eval",
    "support_profile",
    "theoretical_c_bound",
    "unit_ball_volume",
    "validate_trajectory",
    "volume",
]

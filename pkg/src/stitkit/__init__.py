"""Random-tessellation toolkit.

Simulation of recursively-cut random partitions for arbitrary stationary
cut-direction distributions, random-feature approximation of their limit
kernels, and tessellation-forest density and regression estimators, with a
reproducible experiment CLI (``stitkit``).
"""

from .errors import (
    ConfigError,
    DataFormatError,
    DegenerateCellError,
    DomainError,
    InvalidBodyError,
    MeasureError,
    OutOfWindowError,
    SamplingError,
    SplitError,
    StitKitError,
)
from .forests import (
    DensityForest,
    RegressionForest,
    infinite_forest_density,
    l1_error,
    l2_error,
    laplace_kde,
    stit_forest_kernel_estimate,
)
from .geometry import Hyperplane, Polytope, unit_vector
from .kernels import (
    FixedLifetime,
    GammaLifetime,
    KernelSpec,
    RandomFeatureSet,
    UniformLifetime,
    build_features,
    hoeffding_envelope,
    max_kernel_error,
)
from .measures import (
    DirectionalDistribution,
    ZonoidSummary,
    from_directions,
    isotropic,
    measure_from_spec,
    mondrian,
    unit_ball_volume,
)
from .special import exp_integral_e1, kernel_correction, mondrian_forest_kernel
from .tessellation import (
    CellRef,
    LiftedTessellation,
    TessellationTree,
    lift_to_mondrian,
    mondrian_cell_at,
    sample_stit,
)

__version__ = "0.1.0"

__all__ = [
    "CellRef",
    "ConfigError",
    "DataFormatError",
    "DegenerateCellError",
    "DensityForest",
    "DirectionalDistribution",
    "DomainError",
    "FixedLifetime",
    "GammaLifetime",
    "Hyperplane",
    "InvalidBodyError",
    "KernelSpec",
    "LiftedTessellation",
    "MeasureError",
    "OutOfWindowError",
    "Polytope",
    "RandomFeatureSet",
    "RegressionForest",
    "SamplingError",
    "SplitError",
    "StitKitError",
    "TessellationTree",
    "UniformLifetime",
    "ZonoidSummary",
    "build_features",
    "exp_integral_e1",
    "from_directions",
    "hoeffding_envelope",
    "infinite_forest_density",
    "isotropic",
    "kernel_correction",
    "l1_error",
    "l2_error",
    "laplace_kde",
    "lift_to_mondrian",
    "max_kernel_error",
    "measure_from_spec",
    "mondrian",
    "mondrian_cell_at",
    "mondrian_forest_kernel",
    "sample_stit",
    "stit_forest_kernel_estimate",
    "unit_ball_volume",
    "unit_vector",
]

"""Curvature algebra and verification toolkit for almost Hermitian model spaces.

The package is organized bottom-up:

* :mod:`bochnerkit.multilinear`    dense tensor values, invariant norms, frames
* :mod:`bochnerkit.curvature`      pointwise almost Hermitian constructions
* :mod:`bochnerkit.bochner`        the two trace-corrected curvature tensors
* :mod:`bochnerkit.octonion`       the seven-dimensional cross product
* :mod:`bochnerkit.charts`         finite-difference geometry on model charts
* :mod:`bochnerkit.scenarios`      theorem-level verification scenarios
* :mod:`bochnerkit.serialization`  canonical JSON and the tensor document format
* :mod:`bochnerkit.cli`            the command-line interface
"""

from .multilinear import (
    TOL_ALG,
    CurvTensor,
    FrameSet,
    SymBilinear,
    SymmetryDefects,
    curvature_symmetry_defects,
    invariant_norm,
    orthonormalize,
)
from .curvature import (
    HermitianPoint,
    RicciFamily,
    ahsc,
    complex_space_form_tensor,
    constant_hsc_estimate,
    direct_sum,
    flat_point,
    hsc,
    identity_defects,
    phi_psi,
    ricci_family,
    sigma_forms,
    space_form_tensor,
    standard_J,
    star,
    validate_point,
)
from .bochner import (
    BochnerOutput,
    antiholo_4frame_defect,
    generalized_bochner,
    nk_flat_form_3_4,
    rhs_2_1,
    rk_bochner,
)
from .charts import (
    ChartModel,
    FDConfig,
    bianchi_suite,
    christoffel_at,
    curvature_at,
    j_derivatives_at,
    make_chart,
    nk_identity_suite,
    parse_model_spec,
)
from .scenarios import (
    SCENARIO_IDS,
    ScenarioParams,
    ScenarioReport,
    ToleranceConfig,
    run_all,
    run_scenario,
)
from .serialization import TensorDocument, canonical_json, dump_tensor, load_tensor

__version__ = "0.1.0"

"""Core layer, fractional Laplacian and potential functionality."""

from .errors import (
    FracLayerError,
    DomainError,
    ConvergenceError,
    ConstructionError,
    ConfigError,
    OutputError,
)
from .numerics import (
    QuadratureConfig,
    LimitEstimate,
    gamma,
    gamma_ratio,
    gauss_rule,
    adaptive_panel_integrate,
    extrapolate_limit,
    partitions_weighted,
)
from .layer import (
    LayerParams,
    Profile,
    Layer,
    ArctanLayer,
    new_layer,
    phi,
    phi_deriv,
    phi_inverse,
    bridge_diagnostics,
    arctan_layer,
    arctan_tail_constant,
)
from .fraclap import (
    FracEval,
    fraclap,
    fraclap_deriv,
    fraclap_arctan_exact,
)
from .potential import (
    PotentialModel,
    h_of_r,
    well_integral,
    build_potential,
    recover_Vderiv,
)
from .asymptotics import (
    LimitReport,
    ScalarCheck,
    VerificationReport,
    verify_fraclap_decay,
    verify_derivative_decay,
    verify_potential_limits,
    verify_higher_limits,
    verify_double_well,
    classify_wells,
    fractional_order_split,
    verify_arctan_tail,
    verify_all,
)
from .extension import (
    ExtensionConstants,
    ExtensionSample,
    HamiltonianSample,
    extension_constants,
    kernel_H,
    kernel_normalization,
    extend,
    w_eval,
    trace_check,
    hamiltonian_check,
    maximum_principle_check,
)
from .counterexample import (
    OscParams,
    osc_f,
    osc_points,
    holder_quotient,
    holder_growth_slope,
)
from .config_file import (
    RunConfig,
    generate_config_content,
    parse_config_content,
    load_config,
    config_hash,
)
from .validation import (
    validate_layer_params,
    validate_quadrature_config,
    validate_all_fields,
)
from .file_system import (
    get_output_dir,
    ensure_directory_exists,
    check_write_permission,
    save_text_file,
)

__all__ = [
    # errors
    "FracLayerError",
    "DomainError",
    "ConvergenceError",
    "ConstructionError",
    "ConfigError",
    "OutputError",
    # numerics
    "QuadratureConfig",
    "LimitEstimate",
    "gamma",
    "gamma_ratio",
    "gauss_rule",
    "adaptive_panel_integrate",
    "extrapolate_limit",
    "partitions_weighted",
    # layer
    "LayerParams",
    "Profile",
    "Layer",
    "ArctanLayer",
    "new_layer",
    "phi",
    "phi_deriv",
    "phi_inverse",
    "bridge_diagnostics",
    "arctan_layer",
    "arctan_tail_constant",
    # fraclap
    "FracEval",
    "fraclap",
    "fraclap_deriv",
    "fraclap_arctan_exact",
    # potential
    "PotentialModel",
    "h_of_r",
    "well_integral",
    "build_potential",
    "recover_Vderiv",
    # asymptotics
    "LimitReport",
    "ScalarCheck",
    "VerificationReport",
    "verify_fraclap_decay",
    "verify_derivative_decay",
    "verify_potential_limits",
    "verify_higher_limits",
    "verify_double_well",
    "classify_wells",
    "fractional_order_split",
    "verify_arctan_tail",
    "verify_all",
    # extension
    "ExtensionConstants",
    "ExtensionSample",
    "HamiltonianSample",
    "extension_constants",
    "kernel_H",
    "kernel_normalization",
    "extend",
    "w_eval",
    "trace_check",
    "hamiltonian_check",
    "maximum_principle_check",
    # counterexample
    "OscParams",
    "osc_f",
    "osc_points",
    "holder_quotient",
    "holder_growth_slope",
    # config_file
    "RunConfig",
    "generate_config_content",
    "parse_config_content",
    "load_config",
    "config_hash",
    # validation
    "validate_layer_params",
    "validate_quadrature_config",
    "validate_all_fields",
    # file_system
    "get_output_dir",
    "ensure_directory_exists",
    "check_write_permission",
    "save_text_file",
]

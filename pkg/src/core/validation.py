"""
Validation functions for run parameters.

Pure functions for validating layer, quadrature, grid and tolerance settings.
"""

import math
from typing import Any, Dict, List, Optional, Sequence, Tuple


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def validate_fraction_order(s: float) -> Tuple[bool, Optional[str]]:
    """
    Validate the fractional order s.

    Args:
        s: Fractional order

    Returns:
        Tuple of (is_valid, error_message)

    Example:
        >>> validate_fraction_order(0.5)
        (True, None)
        >>> validate_fraction_order(1.0)
        (False, 's must lie in (0, 1), got 1.0')
    """
    if not _is_number(s) or not 0.0 < s < 1.0:
        return False, f"s must lie in (0, 1), got {s}"
    return True, None


def validate_layer_params(params: Any) -> Tuple[bool, Optional[str]]:
    """
    Validate power-tail layer parameters.

    Requires alpha, beta in (0, 2s], positive kappa and tail constants, and
    tail values at -kappa and kappa that are strictly ordered inside (-1, 1).

    Args:
        params: Object with s, alpha, beta, kappa, c1, c2 attributes

    Returns:
        Tuple of (is_valid, error_message)
    """
    valid, error = validate_fraction_order(params.s)
    if not valid:
        return False, error

    for name in ("alpha", "beta", "kappa", "c1", "c2"):
        value = getattr(params, name)
        if not _is_number(value) or value <= 0.0:
            return False, f"{name} must be a positive number, got {value}"

    two_s = 2.0 * params.s
    if params.alpha > two_s * (1.0 + 1e-12):
        return False, f"alpha must lie in (0, 2s] = (0, {two_s}], got {params.alpha}"
    if params.beta > two_s * (1.0 + 1e-12):
        return False, f"beta must lie in (0, 2s] = (0, {two_s}], got {params.beta}"

    left = params.c1 * params.kappa ** (-params.alpha)
    right = params.c2 * params.kappa ** (-params.beta)
    if left >= 2.0:
        return False, f"c1 * kappa^-alpha = {left:.6g} must be below 2"
    if right >= 2.0:
        return False, f"c2 * kappa^-beta = {right:.6g} must be below 2"
    if left + right >= 2.0:
        return False, (
            f"tail values at -kappa and kappa overlap (c1*kappa^-alpha + c2*kappa^-beta = "
            f"{left + right:.6g} >= 2); increase kappa"
        )
    return True, None


def validate_quadrature_config(cfg: Any) -> Tuple[bool, Optional[str]]:
    """
    Validate quadrature settings.

    Example:
        >>> from types import SimpleNamespace
        >>> validate_quadrature_config(SimpleNamespace(tol_abs=1e-11, tol_rel=1e-10, panel_order=4,
        ...     max_panels=10, outer_margin=2.0, outer_order=40, t_min_policy="taylor-balance"))
        (False, 'panel_order must be an integer >= 8, got 4')
    """
    for name in ("tol_abs", "tol_rel"):
        value = getattr(cfg, name)
        if not _is_number(value) or value <= 0.0:
            return False, f"{name} must be positive, got {value}"
    if not isinstance(cfg.panel_order, int) or cfg.panel_order < 8:
        return False, f"panel_order must be an integer >= 8, got {cfg.panel_order}"
    if not isinstance(cfg.max_panels, int) or cfg.max_panels < 1:
        return False, f"max_panels must be a positive integer, got {cfg.max_panels}"
    if not _is_number(cfg.outer_margin) or cfg.outer_margin < 1.0:
        return False, f"outer_margin must be >= 1, got {cfg.outer_margin}"
    if not isinstance(cfg.outer_order, int) or cfg.outer_order < 4:
        return False, f"outer_order must be an integer >= 4, got {cfg.outer_order}"
    if cfg.t_min_policy not in ("taylor-balance", "fixed"):
        return False, f"Unknown t_min_policy: {cfg.t_min_policy}"
    return True, None


def validate_tolerances(tolerances: Dict[str, float]) -> Tuple[bool, Optional[str]]:
    """
    Validate a map of check name to tolerance.

    Example:
        >>> validate_tolerances({"limit": 2e-2})
        (True, None)
        >>> validate_tolerances({"limit": 0.0})
        (False, "Tolerance 'limit' must be positive, got 0.0")
    """
    if not isinstance(tolerances, dict):
        return False, "Tolerances must be a table"
    for name, value in tolerances.items():
        if not _is_number(value) or value <= 0.0:
            return False, f"Tolerance '{name}' must be positive, got {value}"
    return True, None


def validate_sample_grid(start: float, stop: float, count: int, label: str) -> Tuple[bool, Optional[str]]:
    """
    Validate a linear sample grid.

    Example:
        >>> validate_sample_grid(-10.0, 10.0, 41, "fraclap grid")
        (True, None)
    """
    if not (_is_number(start) and _is_number(stop)) or not start < stop:
        return False, f"{label}: need start < stop, got [{start}, {stop}]"
    if not isinstance(count, int) or count < 2:
        return False, f"{label}: need at least 2 points, got {count}"
    return True, None


def validate_positive_values(values: Sequence[float], label: str) -> Tuple[bool, Optional[str]]:
    """Validate a non-empty list of positive numbers."""
    if not values:
        return False, f"{label} cannot be empty"
    for value in values:
        if not _is_number(value) or value <= 0.0:
            return False, f"{label} must contain positive numbers, got {value}"
    return True, None


def validate_osc_params(alpha: float, beta: float) -> Tuple[bool, Optional[str]]:
    """
    Validate parameters of the oscillatory counterexample.

    Example:
        >>> validate_osc_params(1.0, 0.5)
        (True, None)
        >>> validate_osc_params(0.5, 0.5)
        (False, 'alpha must differ from beta (gamma would vanish)')
    """
    if not _is_number(alpha) or alpha <= 0.0:
        return False, f"alpha must be positive, got {alpha}"
    if not _is_number(beta) or not 0.0 < beta < 1.0:
        return False, f"beta must lie in (0, 1), got {beta}"
    if alpha == beta:
        return False, "alpha must differ from beta (gamma would vanish)"
    return True, None


def validate_all_fields(config: Any) -> Tuple[bool, List[str]]:
    """
    Validate every section of a run configuration.

    Args:
        config: RunConfig instance

    Returns:
        Tuple of (all_valid, list_of_errors)
    """
    errors = []

    checks = [
        validate_layer_params(config.layer),
        validate_quadrature_config(config.quadrature),
        validate_tolerances(config.tolerances),
        validate_sample_grid(
            config.grids.fraclap_x_min, config.grids.fraclap_x_max, config.grids.fraclap_points, "grids.fraclap"
        ),
        validate_sample_grid(
            config.grids.layer_x_min, config.grids.layer_x_max, config.grids.layer_points, "grids.layer"
        ),
        validate_sample_grid(
            config.extension.x_min, config.extension.x_max, config.extension.x_points, "extension"
        ),
        validate_positive_values(config.extension.y_values, "extension.y_values"),
        validate_positive_values(config.counterexample.n_values, "counterexample.n_values"),
        validate_osc_params(config.counterexample.alpha, config.counterexample.beta),
    ]
    if config.grids.potential_nodes < 5 or config.grids.potential_nodes % 2 == 0:
        checks.append((False, f"grids.potential_nodes must be odd and >= 5, got {config.grids.potential_nodes}"))
    if not config.grids.potential_x_far > 10.0 * config.layer.kappa:
        checks.append((False, "grids.potential_x_far must exceed 10 * kappa"))
    if config.verify.samples < 4:
        checks.append((False, f"verify.samples must be >= 4, got {config.verify.samples}"))
    if not 1 <= config.verify.max_order <= 3:
        checks.append((False, f"verify.max_order must lie in 1..3, got {config.verify.max_order}"))

    for valid, error in checks:
        if not valid:
            errors.append(error)

    return len(errors) == 0, errors

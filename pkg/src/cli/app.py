"""Batch application: subcommand dispatch and report assembly."""

import argparse
import logging
import math
import sys
from pathlib import Path
from typing import List, Optional, Sequence

import numpy as np
from rich.console import Console
from rich.logging import RichHandler

from src import __version__
from src.core import (
    ConfigError,
    ConstructionError,
    ConvergenceError,
    DomainError,
    FracLayerError,
    OutputError,
    RunConfig,
    arctan_layer,
    arctan_tail_constant,
    bridge_diagnostics,
    build_potential,
    classify_wells,
    extension_constants,
    fraclap,
    fractional_order_split,
    generate_config_content,
    get_output_dir,
    hamiltonian_check,
    kernel_normalization,
    load_config,
    maximum_principle_check,
    new_layer,
    trace_check,
    validate_all_fields,
    verify_all,
    verify_double_well,
)
from src.core.asymptotics import regularity_class
from src.core.counterexample import OscParams, summarize
from src.core.extension import extension_samples
from src.core.layer import Layer
from src.core.potential import PotentialModel
from src.cli.reports import (
    VERIFICATION_HEADER,
    checks_table,
    csv_content,
    json_content,
    provenance,
    summary_table,
    verification_rows,
    write_report,
)

logger = logging.getLogger("fraclayer")

EXIT_OK = 0
EXIT_CHECKS_FAILED = 1
EXIT_CONFIG = 2
EXIT_IO = 3

SUBCOMMANDS = ("layer", "fraclap", "potential", "verify", "extension", "counterexample", "all")
NORMALIZATION_ORDERS = (0.25, 0.5, 0.75)
MAX_PRINCIPLE_POINTS = 100


class FracLayerApp:
    """Runs subcommands against one validated configuration."""

    def __init__(self, config: RunConfig, console: Optional[Console] = None):
        self.config = config
        self.output_dir = get_output_dir(config.output_dir)
        self.console = console or Console(stderr=True)
        self._prov = provenance(config)
        self._layer: Optional[Layer] = None
        self._model: Optional[PotentialModel] = None

    @property
    def layer(self) -> Layer:
        if self._layer is None:
            self._layer = new_layer(self.config.layer, self.config.chebyshev_degree)
        return self._layer

    @property
    def model(self) -> PotentialModel:
        if self._model is None:
            self._model = build_potential(self.layer, self.config.grids, self.config.quadrature)
        return self._model

    def _write(self, filename: str, content: str) -> Path:
        path = write_report(self.output_dir, filename, content)
        logger.info("wrote %s", path)
        return path

    def _csv(self, filename: str, header: Sequence[str], rows) -> Path:
        return self._write(filename, csv_content(header, rows, self._prov))

    def _json(self, filename: str, payload: dict) -> Path:
        return self._write(filename, json_content(payload, self._prov))

    def run_layer(self) -> bool:
        """Layer samples and construction diagnostics."""
        grids = self.config.grids
        layer = self.layer
        xs = np.linspace(grids.layer_x_min, grids.layer_x_max, grids.layer_points)
        values = [np.asarray(layer.derivative(xs, k)) for k in range(3)]
        self._csv("layer.csv", ["x", "phi", "phi_1", "phi_2"], zip(xs, *values))

        p = self.config.layer
        (i_l, m_l), (i_r, m_r) = fractional_order_split(p)
        left, right = classify_wells(p)
        tail = arctan_tail_constant(self.config.verify.arctan_start, max(self.config.verify.samples, 4))
        self._json(
            "layer.json",
            {
                "layer": p.to_dict(),
                "bridge": bridge_diagnostics(layer),
                "regularity_class": list(regularity_class(p)),
                "fractional_order_split": {"left": [i_l, m_l], "right": [i_r, m_r]},
                "wells": {"left": left, "right": right},
                "arctan_tail_constant": tail.to_dict(),
            },
        )
        return True

    def run_fraclap(self, arctan: bool = False) -> bool:
        """L_s of the configured layer, or of the arctan profile against its closed form."""
        grids = self.config.grids
        cfg = self.config.quadrature
        xs = np.linspace(grids.fraclap_x_min, grids.fraclap_x_max, grids.fraclap_points)

        if arctan:
            u = arctan_layer()
            rows = []
            for x in xs:
                value = fraclap(u, float(x), cfg).value
                exact = u.exact_fraclap(float(x))
                rows.append([x, value, exact, u.exact_fraclap(float(x), normalized=True), abs(value - exact)])
            self._csv("fraclap_arctan.csv", ["x", "value", "exact", "exact_normalized", "abs_error"], rows)
            worst = max(row[-1] for row in rows)
            tol = self.config.tolerance("arctan_oracle")
            logger.info("arctan oracle: max |error| = %.3e (tolerance %.1e)", worst, tol)
            return worst <= tol

        rows = []
        for x in xs:
            try:
                ev = fraclap(self.layer, float(x), cfg)
                rows.append([x, ev.value, ev.error_estimate, *ev.breakdown, True])
            except ConvergenceError as e:
                logger.warning("fraclap at x = %g did not converge; writing best estimate", x)
                rows.append([x, e.estimate, e.error_estimate, math.nan, math.nan, math.nan, math.nan, False])
        self._csv(
            "fraclap.csv",
            ["x", "value", "error_estimate", "inner", "mid", "outer_constant", "outer_power", "converged"],
            rows,
        )
        return all(row[-1] for row in rows)

    def run_potential(self) -> bool:
        """Sampled V, V' and the double-well checks."""
        model = self.model
        self._csv("potential.csv", ["r", "V", "V_prime"], model.rows())
        checks = verify_double_well(model, self.config.tolerance("balance"))
        self._json("potential.json", {"model": model.to_dict(), "checks": [c.to_dict() for c in checks]})
        return all(c.passed for c in checks)

    def run_verify(self) -> bool:
        """Every asymptotic check on the configured layer."""
        report = verify_all(
            self.layer, self.model, self.config.quadrature, self.config.verify, self.config.tolerances
        )
        payload = report.to_dict()
        payload["check_count"] = report.check_count
        self._json("verify.json", payload)
        self._csv("verify.csv", VERIFICATION_HEADER, verification_rows(report))
        self.console.print(summary_table(report))
        for name in report.failures():
            logger.error("check failed: %s", name)
        return report.passed

    def run_extension(self) -> bool:
        """Half-plane extension of the arctan profile: trace, cross-method and Hamiltonian checks."""
        ecfg = self.config.extension
        cfg = self.config.quadrature
        u = arctan_layer()
        rng = np.random.default_rng(self.config.seed)

        xs = np.linspace(ecfg.x_min, ecfg.x_max, ecfg.x_points)
        samples = extension_samples(u, u.exact_fraclap, xs, ecfg.y_values, cfg)
        self._csv("extension.csv", ["x", "y", "u_bar", "w_fd", "w_repr"], [
            [s.x, s.y, s.u_bar, s.w_fd, s.w_repr] for s in samples
        ])
        cross = max(abs(s.w_fd - s.w_repr) for s in samples)

        trace_xs = np.linspace(-ecfg.trace_x_max, ecfg.trace_x_max, ecfg.trace_points)
        trace_err, trace_rows = trace_check(u, u.exact_fraclap, trace_xs, ecfg.trace_y, cfg)

        hx = rng.uniform(-ecfg.hamiltonian_x_max, ecfg.hamiltonian_x_max, ecfg.hamiltonian_samples)
        hy = ecfg.hamiltonian_y_max * (1.0 - rng.random(ecfg.hamiltonian_samples))
        hamiltonian = [hamiltonian_check(u, u.potential, float(x), float(y), cfg) for x, y in zip(hx, hy)]
        rhs_centre = hamiltonian_check(u, u.potential, 0.0, 0.5 * ecfg.hamiltonian_y_max, cfg).rhs

        px = rng.uniform(-10.0, 10.0, MAX_PRINCIPLE_POINTS)
        py = 5.0 * (1.0 - rng.random(MAX_PRINCIPLE_POINTS))
        bounded = maximum_principle_check(u, list(zip(px, py)), cfg)

        normalizations = {str(s): kernel_normalization(s) for s in NORMALIZATION_ORDERS}
        tol_norm = self.config.tolerance("kernel_normalization")
        checks = [
            {
                "name": "kernel normalization",
                "claim": "integral H_s(x, 1) dx = 1",
                "value": max(abs(v - 1.0) for v in normalizations.values()),
                "pass": all(abs(v - 1.0) <= tol_norm for v in normalizations.values()),
            },
            {
                "name": "trace limit",
                "claim": "w(x, y) -> 2s p_s L_s u(x) as y -> 0+",
                "value": trace_err,
                "pass": trace_err <= self.config.tolerance("extension_trace"),
            },
            {
                "name": "w cross-method",
                "claim": "y^{1-2s} d_y u_bar by differences = representation formula",
                "value": cross,
                "pass": cross <= self.config.tolerance("extension_cross"),
            },
            {
                "name": "hamiltonian inequality",
                "claim": "(d_s/q_s) integral_0^y (t^{1-2s}/2)(u_x^2 - u_y^2) dt < G(u(x)) - G(1)",
                "value": float(sum(h.holds for h in hamiltonian)),
                "pass": all(h.holds for h in hamiltonian),
            },
            {
                "name": "hamiltonian rhs at x = 0",
                "claim": "G(u(0)) - G(1) = 2/pi",
                "value": rhs_centre,
                "pass": abs(rhs_centre - 2.0 / math.pi) <= self.config.tolerance("hamiltonian_rhs"),
            },
            {
                "name": "maximum principle",
                "claim": "-1 <= u_bar <= 1 on the half plane",
                "value": float(MAX_PRINCIPLE_POINTS),
                "pass": bounded,
            },
        ]
        self._json(
            "extension.json",
            {
                "constants": [extension_constants(s).to_dict() for s in sorted({0.5, self.config.layer.s})],
                "kernel_normalization": normalizations,
                "trace": {"y": ecfg.trace_y, "rows": [list(r) for r in trace_rows], "max_error": trace_err},
                "w_cross_max": cross,
                "hamiltonian": [h.to_dict() for h in hamiltonian],
                "checks": checks,
            },
        )
        self.console.print(checks_table("Extension", checks))
        return all(c["pass"] for c in checks)

    def run_counterexample(self) -> bool:
        """Hölder quotient table of the oscillatory function."""
        ccfg = self.config.counterexample
        summary = summarize(OscParams(ccfg.alpha, ccfg.beta), ccfg.n_values, ccfg.limit_x)
        self._csv(
            "counterexample.csv",
            ["n", "p_n", "q_n", "f_p", "f_q", "quotient"],
            [[r.n, r.p, r.q, r.f_p, r.f_q, r.quotient] for r in summary.rows],
        )
        self._json("counterexample.json", summary.to_dict())
        self.console.print(checks_table("Counterexample", summary.checks()))
        return summary.passed

    def run_all(self) -> bool:
        """Every subcommand; passes when every check passes."""
        results = [
            self.run_layer(),
            self.run_fraclap(),
            self.run_fraclap(arctan=True),
            self.run_potential(),
            self.run_verify(),
            self.run_extension(),
            self.run_counterexample(),
        ]
        return all(results)

    def run(self, subcommand: str, arctan: bool = False) -> bool:
        """Dispatch one subcommand."""
        if subcommand == "fraclap":
            return self.run_fraclap(arctan=arctan)
        if subcommand not in SUBCOMMANDS:
            raise DomainError(f"Unknown subcommand: {subcommand}")
        logger.info("running %s", subcommand)
        return getattr(self, f"run_{subcommand.replace('-', '_')}")()


def configure_logging(verbose: bool = False, quiet: bool = False) -> None:
    """Log to stderr through rich; DEBUG with verbose, WARNING with quiet."""
    level = logging.DEBUG if verbose else logging.WARNING if quiet else logging.INFO
    logging.basicConfig(
        level=level,
        format="%(message)s",
        datefmt="[%X]",
        handlers=[RichHandler(console=Console(stderr=True), show_path=False)],
        force=True,
    )


def build_parser() -> argparse.ArgumentParser:
    """Argument parser with one subparser per subcommand."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-c", "--config", type=Path, help="TOML run configuration (defaults when omitted)")
    noise = common.add_mutually_exclusive_group()
    noise.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    noise.add_argument("-q", "--quiet", action="store_true", help="warnings and errors only")

    parser = argparse.ArgumentParser(
        prog="fraclayer",
        description="Transition layers, their fractional Laplacians and the double-well potentials they generate.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("layer", parents=[common], help="sample the layer and its bridge diagnostics")
    fl = sub.add_parser("fraclap", parents=[common], help="sample L_s of the layer")
    fl.add_argument("--arctan", action="store_true", help="use the arctan profile and its closed form")
    sub.add_parser("potential", parents=[common], help="build the double-well potential")
    sub.add_parser("verify", parents=[common], help="run every asymptotic check")
    sub.add_parser("extension", parents=[common], help="half-plane extension checks")
    sub.add_parser("counterexample", parents=[common], help="Hölder quotient of the oscillatory function")
    sub.add_parser("all", parents=[common], help="run every subcommand")
    init = sub.add_parser("init-config", parents=[common], help="write the default configuration")
    init.add_argument("path", type=Path, help="destination TOML file")
    return parser


def _init_config(path: Path) -> int:
    if path.exists():
        logger.error("refusing to overwrite %s", path)
        return EXIT_IO
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(generate_config_content(RunConfig()), encoding="utf-8")
    except OSError as e:
        logger.error("cannot write %s: %s", path, e)
        return EXIT_IO
    logger.info("wrote %s", path)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """
    Command-line entry point.

    Returns:
        0 on success, 1 when a check fails, 2 on configuration errors,
        3 on output errors
    """
    args = build_parser().parse_args(argv)
    configure_logging(args.verbose, args.quiet)

    if args.command == "init-config":
        return _init_config(args.path)

    try:
        config = load_config(args.config) if args.config else RunConfig()
        is_valid, errors = validate_all_fields(config)
        if not is_valid:
            raise ConfigError("; ".join(errors))
        app = FracLayerApp(config)
        passed = app.run(args.command, arctan=getattr(args, "arctan", False))
    except (ConfigError, DomainError, ConstructionError) as e:
        logger.error("configuration error: %s", e)
        return EXIT_CONFIG
    except OutputError as e:
        logger.error("output error: %s", e)
        return EXIT_IO
    except FracLayerError as e:
        logger.error("%s", e)
        return EXIT_CHECKS_FAILED

    if args.command in ("verify", "all") and not passed:
        return EXIT_CHECKS_FAILED
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

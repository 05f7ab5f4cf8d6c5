"""Command-line entry point: ``psiontic <command> [options]``.

Exit status is 0 when the requested check succeeds, 2 when a verification
fails, and 1 for invalid input.
"""
from __future__ import annotations

import argparse
import dataclasses
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

from . import __version__, bounds, circuit, ontology, verifier
from .errors import PsionticError

EXIT_OK, EXIT_USAGE, EXIT_FAILED = 0, 1, 2
SEED_ENV = "PSIONTIC_SEED"
COMMANDS = ("min-n", "params", "verify", "twobox", "bound", "model-check", "regions", "sigma")
CSV_COMMANDS = ("regions", "verify")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    command: str
    theta: float | None = None
    n: int | None = None
    tol: float | None = None
    seed: int = 0
    sample_count: int = 10**6
    output_path: str | None = None
    format: str = "json"
    epsilon: float | None = None
    model_path: str | None = None
    n_max: int = 4
    grid_size: int = 512
    search_trials: int = 0
    solver_tol: float = circuit.DEFAULT_TOL

    def validate(self):
        if self.command not in COMMANDS:
            raise UsageError(f"unknown command {self.command!r}")
        if self.format not in ("json", "csv"):
            raise UsageError(f"unknown format {self.format!r}")
        if self.format == "csv" and self.command not in CSV_COMMANDS:
            raise UsageError(f"--format csv is only available for {', '.join(CSV_COMMANDS)}")
        needs_theta = ("min-n", "params", "verify", "model-check", "sigma")
        if self.command in needs_theta and self.theta is None:
            raise UsageError(f"{self.command} requires --theta")
        if self.theta is not None and not (0.0 < self.theta <= math.pi / 2):
            raise UsageError(f"invalid theta {self.theta!r}: must lie in (0, pi/2] radians")
        if self.command == "sigma" and self.n is None:
            raise UsageError("sigma requires --n")
        if self.command == "bound":
            if self.epsilon is None or self.n is None:
                raise UsageError("bound requires --epsilon and --n")
            if self.epsilon < 0:
                raise UsageError("epsilon must be non-negative")
        if self.n is not None and self.n < 1:
            raise UsageError("n must be positive")
        if self.command == "model-check" and not self.model_path:
            raise UsageError("model-check requires a model file")


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None:
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="psiontic", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, theta=False, n=False):
        if theta:
            p.add_argument("--theta", type=float, help="angle between the preparations (radians)")
            p.add_argument("--degrees", action="store_true", help="read --theta in degrees")
        if n:
            p.add_argument("--n", type=int, help="number of systems (default: minimal)")
        p.add_argument("--format", choices=("json", "csv"), default=None)
        p.add_argument("-o", "--output", dest="output_path", help="write the report here")
        p.add_argument("--seed", type=int, default=None, help=f"root seed (env {SEED_ENV})")

    common(sub.add_parser("min-n", help="minimal number of systems for theta"), theta=True)
    p = sub.add_parser("params", help="solve for alpha and beta")
    common(p, theta=True, n=True)
    p.add_argument("--tol", type=float, default=circuit.DEFAULT_TOL)
    p = sub.add_parser("verify", help="simulate every preparation and check the zeros")
    common(p, theta=True, n=True)
    p.add_argument("--tol", type=float, default=verifier.DEFAULT_TOL)
    p.add_argument("--solver-tol", type=float, default=circuit.DEFAULT_TOL)
    common(sub.add_parser("twobox", help="check the explicit two-qubit measurement"))
    p = sub.add_parser("bound", help="distance lower bound from a deviation epsilon")
    common(p, theta=True, n=True)
    p.add_argument("--epsilon", type=float)
    p = sub.add_parser("model-check", help="measure a model's deviation from quantum statistics")
    common(p, theta=True, n=True)
    p.add_argument("model_path", metavar="MODEL", help="JSON model file")
    p.add_argument("--samples", dest="sample_count", type=int, default=10**6,
                   help="Monte Carlo samples for the overlap-region estimate (0 to skip)")
    p = sub.add_parser("regions", help="overlap bounds versus trace distance")
    common(p)
    p.add_argument("--n-max", type=int, default=4)
    p.add_argument("--grid-size", type=int, default=512)
    p = sub.add_parser("sigma", help="minimal discrimination objective and its parameters")
    common(p, theta=True, n=True)
    p.add_argument("--search-trials", type=int, default=0,
                   help="also run a random-measurement search (n <= 3)")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    values = {f.name: getattr(args, f.name) for f in dataclasses.fields(RunConfig) if hasattr(args, f.name)}
    values = {k: v for k, v in values.items() if v is not None}
    if getattr(args, "degrees", False) and args.theta is not None:
        values["theta"] = math.radians(args.theta)
    if "format" not in values:
        values["format"] = "csv" if args.command == "regions" else "json"
    if "seed" not in values:
        values["seed"] = _default_seed()
    config = RunConfig(**values)
    config.validate()
    return config


# report assembly -------------------------------------------------------------

def _clean(obj):
    if isinstance(obj, float):
        return obj if math.isfinite(obj) else None
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item"):
        return _clean(obj.item())
    return obj


def _dump(report: dict) -> str:
    return json.dumps(_clean(report), indent=2, allow_nan=False) + "\n"


def _config_dict(config: RunConfig) -> dict:
    return dataclasses.asdict(config)


def _nogo_dict(report: verifier.NogoReport) -> dict:
    out = dataclasses.asdict(report)
    out["per_preparation"] = [
        {"x": "".join(map(str, r.x)), "outcome": r.outcome, "probability": r.probability}
        for r in report.per_preparation
    ]
    return out


def _resolve_n(config: RunConfig) -> int:
    return config.n if config.n is not None else circuit.min_n(config.theta)


def run(config: RunConfig) -> tuple[int, str]:
    """Execute one command; returns (exit status, serialized report)."""
    cmd = config.command
    status = EXIT_OK
    result: dict
    if cmd == "min-n":
        result = {"theta": config.theta, "min_n": circuit.min_n(config.theta)}
    elif cmd == "params":
        n = _resolve_n(config)
        params = circuit.solve_params(config.theta, n, config.tol or circuit.DEFAULT_TOL)
        result = {
            "n": n, "theta": config.theta, "alpha": params.alpha, "beta": params.beta,
            "residual": params.residual, "bracket": params.bracket,
            "forbidden_amplitude_abs": abs(circuit.forbidden_amplitude(params)),
        }
        if n == 2:
            result["analytic_beta"] = circuit.analytic_beta_n2(config.theta)
    elif cmd == "verify":
        n = _resolve_n(config)
        report = verifier.verify_nogo(
            config.theta, n, config.tol or verifier.DEFAULT_TOL,
            solver_tol=config.solver_tol, seed=config.seed,
        )
        status = EXIT_OK if report.passed else EXIT_FAILED
        if config.format == "csv":
            lines = ["x,outcome,probability"]
            lines += [f"{''.join(map(str, r.x))},{r.outcome},{r.probability:.17g}" for r in report.per_preparation]
            return status, "\n".join(lines) + "\n"
        result = _nogo_dict(report)
    elif cmd == "twobox":
        report = verifier.twobox_check()
        status = EXIT_OK if report.passed else EXIT_FAILED
        result = _nogo_dict(report)
    elif cmd == "bound":
        if config.theta is not None and not circuit.is_feasible(config.theta, config.n):
            raise circuit.InfeasibleError(
                f"n={config.n} is too small for theta={config.theta!r}; need n >= {circuit.min_n(config.theta)}"
            )
        lower = ontology.distance_lower_bound(config.epsilon, config.n)
        result = {
            "epsilon": config.epsilon, "n": config.n,
            "D_lower": lower, "omega_upper": 1.0 - lower,
        }
    elif cmd == "model-check":
        n = _resolve_n(config)
        try:
            model, resp = ontology.load_model(config.model_path)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read model file {config.model_path!r}: {exc}") from None
        params = circuit.solve_params(config.theta, n, config.solver_tol)
        response_source = "file"
        if resp is None:
            resp = ontology.posterior_response(model, params)
            response_source = "posterior"
        dev = ontology.max_deviation(model, resp, params)
        result = dataclasses.asdict(dev)
        result.update({"alpha": params.alpha, "beta": params.beta, "response": response_source})
        if config.sample_count:
            mc = ontology.sample_all_shared(model, (0,) * n, config.sample_count, config.seed)
            result["all_shared_frequency"] = mc.frequency
            result["all_shared_stderr"] = mc.stderr
        status = EXIT_OK if dev.bound_holds and dev.omega_power_bound_holds else EXIT_FAILED
    elif cmd == "regions":
        points = bounds.region_data(config.n_max, config.grid_size)
        if config.format == "csv":
            return status, bounds.region_csv(points)
        result = {"points": [dataclasses.asdict(p) for p in points]}
    elif cmd == "sigma":
        best = bounds.optimal_sigma(config.theta, config.n, confirm=True)
        result = dataclasses.asdict(best)
        result["omega_upper"] = best.sigma ** (1.0 / config.n)
        if config.search_trials:
            search = bounds.random_povm_search(config.theta, config.n, config.search_trials, config.seed)
            result["random_search_min"] = search.min_sigma
    else:  # pragma: no cover - validate() rejects this
        raise UsageError(cmd)
    return status, _dump({"config": _config_dict(config), "result": result})


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = config_from_args(args)
        status, text = run(config)
    except (UsageError, PsionticError) as exc:
        print(f"psiontic {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if config.output_path:
        Path(config.output_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())

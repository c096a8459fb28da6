"""Command-line entry point.

Subcommands:

``verify``   run verification suites and write a JSON report
``wigner``   write the collective Wigner function on a grid as CSV
``circuit``  write the generation circuit and its eigen-residuals as JSON

Exit codes: 0 all asserted checks pass, 1 a check failed or the run errored,
2 only statistically inconclusive results, 64 bad arguments or config.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__, gaussian
from .analysis.eigen import gaussian_eigen_residuals
from .analysis.wigner import wigner_grid
from .circuits import circuit_state_fock, generate_ces_circuit, run_gaussian
from .config import SUITES, RunConfig, WignerGrid, config_from_mapping, load_config
from .errors import CesLabError, ConfigError
from .report import exit_code, run_suites
from .serialization import dumps, format_float, parse_complex, to_jsonable

EXIT_OK, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_USAGE = 0, 1, 2, 64


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _floats(text: str, name: str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(","))
    except ValueError:
        raise ConfigError(f"--{name}: expected comma-separated numbers, got {text!r}") from None


def _complexes(text: str, name: str) -> tuple:
    try:
        return tuple(parse_complex(v) for v in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"--{name}: {exc}") from None


def _add_common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="YAML or JSON config file; flags override its values")
    p.add_argument("--weights", help="comma-separated mode weights, e.g. 1,2,3")
    p.add_argument("--beta", help="first ladder label, or all N-1 labels comma-separated (a+bi form)")
    p.add_argument("--gamma", help="second ladder label for three modes (a+bi form)")
    p.add_argument("--x", type=float, help="collective quadrature label")
    p.add_argument("--reg-r", type=float, dest="reg_r", help="regularization squeeze strength")
    p.add_argument("--cutoff", type=int, help="Fock cutoff per mode")
    p.add_argument("--seed", type=int, help="Monte Carlo seed")
    p.add_argument("--samples", type=int, help="Monte Carlo samples")
    p.add_argument("--out", help="output file ('-' for stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ceslab", description="Verification lab for coherent-entangled states.")
    parser.add_argument("--version", action="version", version=f"ceslab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    verify = sub.add_parser("verify", help="run verification suites")
    _add_common(verify)
    verify.add_argument("--suite", action="append",
                        help=f"suite to run ({' | '.join(SUITES)} | all); repeat or comma-separate")

    wig = sub.add_parser("wigner", help="write the collective Wigner function on a grid")
    _add_common(wig)
    wig.add_argument("--x-range", dest="x_range", help="lo,hi")
    wig.add_argument("--p-range", dest="p_range", help="lo,hi")
    wig.add_argument("--steps", help="nx,np")
    wig.add_argument("--state", choices=("ces", "vacuum"), default="ces")
    wig.add_argument("--engine", choices=("gaussian", "fock"), default="gaussian")

    circ = sub.add_parser("circuit", help="write the generation circuit and its residuals")
    _add_common(circ)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    base = load_config(args.config) if args.config else RunConfig()
    updates = {}
    if args.weights is not None:
        updates["weights"] = _floats(args.weights, "weights")
    weights = updates.get("weights", base.weights)
    if args.beta is not None or args.gamma is not None:
        current = list(base.betas) if base.betas is not None else list(
            RunConfig(weights=weights).resolved_betas())
        if args.beta is not None:
            given = _complexes(args.beta, "beta")
            current[: len(given)] = given
        if args.gamma is not None:
            if len(weights) != 3:
                raise ConfigError("--gamma applies to three modes only; pass all labels with --beta")
            current[1] = _complexes(args.gamma, "gamma")[0]
        updates["betas"] = tuple(current)
    for name in ("x", "reg_r", "cutoff", "seed", "samples"):
        value = getattr(args, name)
        if value is not None:
            updates[name] = value
    if getattr(args, "suite", None):
        updates["suites"] = tuple(s.strip() for item in args.suite for s in item.split(",") if s.strip())
    grid = dataclasses.asdict(base.grid)
    for name in ("x_range", "p_range", "steps"):
        value = getattr(args, name, None)
        if value is not None:
            parsed = _floats(value, name.replace("_", "-"))
            if len(parsed) != 2:
                raise ConfigError(f"--{name.replace('_', '-')}: expected two values")
            grid[name] = parsed
    updates["grid"] = grid
    merged = {f.name: getattr(base, f.name) for f in dataclasses.fields(RunConfig)}
    merged.update(updates)
    if isinstance(merged["grid"], WignerGrid):
        merged["grid"] = dataclasses.asdict(merged["grid"])
    if merged["betas"] is not None and len(merged["betas"]) != len(weights):
        if "weights" in updates and "betas" not in updates:
            merged["betas"] = None
    return config_from_mapping(merged)


def _write(text: str, out: str) -> None:
    if out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def cmd_verify(cfg: RunConfig, out: Optional[str] = None, timestamp: Optional[str] = None) -> int:
    report = run_suites(cfg, timestamp=timestamp)
    _write(dumps(to_jsonable(report)), out or cfg.out)
    for suite in report["suites"]:
        failed = [c["name"] for c in suite["checks"] if c["status"] in ("fail", "inconclusive")]
        line = f"{suite['suite']:<11} {suite['status'].upper()}"
        if failed:
            line += "  (" + "; ".join(failed) + ")"
        print(line, file=sys.stderr if out == "-" else sys.stdout)
    return exit_code(report)


def wigner_csv(cfg: RunConfig, state: str = "ces", engine: str = "gaussian") -> str:
    grid = cfg.grid
    grid.validate()
    xs = np.linspace(grid.x_range[0], grid.x_range[1], int(grid.steps[0]))
    ps = np.linspace(grid.p_range[0], grid.p_range[1], int(grid.steps[1]))
    n = len(cfg.weights)
    if state == "vacuum":
        g_state = gaussian.vacuum_gaussian(n)
        circuit = None
    else:
        circuit = generate_ces_circuit(cfg.weights, cfg.resolved_betas(), cfg.x, cfg.reg_r)
        g_state = run_gaussian(circuit)
    if engine == "fock":
        if circuit is None:
            from .fock import vacuum_fock

            target = vacuum_fock(n, cfg.resolved_cutoff())
        else:
            target = circuit_state_fock(circuit, cfg.resolved_cutoff())
    else:
        target = g_state
    literal, normalized = wigner_grid(target, cfg.weights, xs, ps)
    lines = ["x,p,w_literal,w_normalized"]
    for i, x in enumerate(xs):
        for j, p in enumerate(ps):
            lit = format_float(literal[i, j]) if literal is not None else "NaN"
            lines.append(f"{format_float(x)},{format_float(p)},{lit},{format_float(normalized[i, j])}")
    return "\n".join(lines) + "\n"


def cmd_wigner(cfg: RunConfig, out: Optional[str] = None, state: str = "ces", engine: str = "gaussian") -> int:
    _write(wigner_csv(cfg, state, engine), out or cfg.wigner_out)
    return EXIT_OK


def circuit_document(cfg: RunConfig) -> dict:
    betas = cfg.resolved_betas()
    circuit = generate_ces_circuit(cfg.weights, betas, cfg.x, cfg.reg_r)
    residuals = gaussian_eigen_residuals(run_gaussian(circuit), cfg.weights, betas, cfg.x, reg_r=cfg.reg_r)
    return {"circuit": circuit.to_list(), "residuals": residuals.to_dict()}


def cmd_circuit(cfg: RunConfig, out: Optional[str] = None) -> int:
    _write(dumps(to_jsonable(circuit_document(cfg))), out or "-")
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        cfg = config_from_args(args)
    except ConfigError as exc:
        print(f"ceslab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.command == "verify":
            return cmd_verify(cfg, args.out)
        if args.command == "wigner":
            return cmd_wigner(cfg, args.out, args.state, args.engine)
        return cmd_circuit(cfg, args.out)
    except ConfigError as exc:
        print(f"ceslab: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except CesLabError as exc:
        print(f"ceslab: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

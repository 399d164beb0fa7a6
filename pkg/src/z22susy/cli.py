"""Command line: run verification suites, expand model Lagrangians, render
serialized expressions."""

from __future__ import annotations

import argparse
import dataclasses
import sys
from pathlib import Path

from . import models as M
from .serialize import ParseError, dumps, expr_json_text, loads, to_latex, to_text
from .verify import SUITES, VerificationReport, VerifyConfig, run

try:
    import tomllib
except ModuleNotFoundError:  # python < 3.11
    import tomli as tomllib

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

MODELS = {
    "linear-sigma": lambda n: M.linear_sigma(n, "abstract"),
    "linear-sigma-minkowski": lambda n: M.linear_sigma(n, "minkowski"),
    "nonlinear-sigma": lambda n: M.nonlinear_sigma(n),
    "superpotential": lambda n: M.superpotential_model(n),
    "sine-gordon": lambda n: M.sine_gordon(),
    "free": lambda n: M.sine_gordon(with_potential=False),
    "exotic": lambda n: M.exotic_model(),
}
STAGES = ("superspace", "component", "eliminated")


class ConfigError(ValueError):
    pass


def load_config(path: str | None, overrides: dict) -> VerifyConfig:
    """Read a TOML file (top level or a [verify] table), then apply flags."""
    values: dict = {}
    if path:
        try:
            data = tomllib.loads(Path(path).read_text())
        except FileNotFoundError as e:
            raise ConfigError(f"{path}: no such file") from e
        except tomllib.TOMLDecodeError as e:
            raise ConfigError(f"{path}: {e}") from e
        values = data.get("verify", data)
    known = {f.name for f in dataclasses.fields(VerifyConfig)}
    unknown = sorted(set(values) - known)
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(unknown)}")
    values.update({k: v for k, v in overrides.items() if v is not None})
    for k, v in values.items():
        if not isinstance(v, int) or isinstance(v, bool) or v < 0:
            raise ConfigError(f"{k} must be a non-negative integer, got {v!r}")
    return VerifyConfig(**values)


def model_stage(model: str, stage: str, n: int = 1, expanded: bool = False):
    """The superspace stage is the formal kernel K(Φ, D±Φ) unless
    ``expanded``, which gives its full expansion in θ±, z."""
    if model not in MODELS:
        raise KeyError(f"unknown model {model!r}; expected one of {', '.join(MODELS)}")
    if stage not in STAGES:
        raise KeyError(f"unknown stage {stage!r}; expected one of {', '.join(STAGES)}")
    m = MODELS[model](n)
    if stage == "superspace":
        return m.lagrangian if expanded else m.kernel
    L = M.component_lagrangian(m)
    if stage == "eliminated" and m.auxiliary:
        L, _ = M.eliminate_auxiliary(L, list(m.auxiliary))
    return L


def render(e, fmt: str) -> str:
    if fmt == "text":
        return to_text(e) + "\n"
    if fmt == "latex":
        return to_latex(e) + "\n"
    if fmt == "json":
        return expr_json_text(e)
    if fmt == "serial":
        return dumps(e)
    raise ValueError(f"unknown format {fmt!r}")


def _cmd_run(args) -> int:
    try:
        cfg = load_config(args.config, {"trials": args.trials, "z_order": args.z_order, "seed": args.seed})
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return EXIT_USAGE
    report: VerificationReport = run(args.suite, cfg)
    sys.stdout.write(report.to_text())
    if args.json:
        Path(args.json).write_text(report.to_json())
    return EXIT_OK if report.ok else EXIT_FAIL


def _cmd_expand(args) -> int:
    try:
        e = model_stage(args.model, args.stage, args.n, args.expanded)
    except KeyError as err:
        print(err.args[0], file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(render(e, "latex" if args.latex else args.format))
    return EXIT_OK


def _cmd_render(args) -> int:
    path = Path(args.expr_file)
    try:
        e = loads(path.read_text())
    except FileNotFoundError:
        print(f"{path}: no such file", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as err:
        print(f"{path}:{err.line}:{err.col}: {err}", file=sys.stderr)
        return EXIT_USAGE
    sys.stdout.write(render(e, "latex" if args.latex else args.format))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="z22susy", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", help="run verification suites")
    r.add_argument("--suite", default="all", choices=SUITES + ("all",))
    r.add_argument("--config", help="TOML file with seed, trials, z_order, liouville_trials")
    r.add_argument("--json", metavar="PATH", help="also write the JSON report here")
    r.add_argument("--trials", type=int, help="randomized-property scale (default 50)")
    r.add_argument("--z-order", type=int, dest="z_order", help="z truncation of coordinate changes (default 3)")
    r.add_argument("--seed", type=int)
    r.set_defaults(func=_cmd_run)

    x = sub.add_parser("expand", help="print a model Lagrangian at some stage")
    x.add_argument("model", help=", ".join(MODELS))
    x.add_argument("stage", help=", ".join(STAGES))
    x.add_argument("--n", type=int, default=1, help="number of target superfields")
    x.add_argument("--expanded", action="store_true", help="superspace stage: expand in the graded coordinates")
    x.add_argument("--format", default="text", choices=("text", "latex", "json", "serial"))
    x.add_argument("--latex", action="store_true", help="shorthand for --format latex")
    x.set_defaults(func=_cmd_expand)

    d = sub.add_parser("render", help="render a serialized expression")
    d.add_argument("expr_file")
    d.add_argument("--format", default="text", choices=("text", "latex", "json", "serial"))
    d.add_argument("--latex", action="store_true", help="shorthand for --format latex")
    d.set_defaults(func=_cmd_render)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

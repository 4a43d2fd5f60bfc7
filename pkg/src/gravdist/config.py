"""Run configuration: command-line flags layered over a ``key = value`` file."""
from __future__ import annotations

import argparse
import enum
import re
from dataclasses import dataclass, field
from pathlib import Path

from .integrate import IntegratorSpec, Method, default_dt
from .model import ParameterSet, State
from .scenario import load_preset

CONFIG_KEYS = ("g", "mu", "tau", "rho", "y0", "d0", "t_end", "dt", "method", "preset",
               "out", "format")
NUMERIC_KEYS = {"g", "mu", "tau", "rho", "y0", "d0", "t_end", "dt"}

_NUMBER = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")

# CSV sampling interval in years
SAMPLE_INTERVAL = 0.1


class UsageError(ValueError):
    """Bad command line or config file."""


class Command(str, enum.Enum):
    SIMULATE = "simulate"
    PORTRAIT = "portrait"
    EQUILIBRIA = "equilibria"
    SCHEDULE = "schedule"
    SIR_RHO = "sir-rho"
    PRESET_LIST = "preset-list"


def parse_number(text, key="value"):
    """Plain decimal or scientific notation; nothing locale-dependent."""
    s = str(text).strip()
    if not _NUMBER.fullmatch(s):
        raise UsageError(f"malformed number for {key}: {text!r}")
    return float(s)


def read_config_file(path):
    """Parse ``key = value`` lines; ``#`` starts a comment."""
    values = {}
    try:
        lines = Path(path).read_text(encoding="utf-8").splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc.strerror}") from None
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in CONFIG_KEYS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = parse_number(value, key) if key in NUMERIC_KEYS else value
    return values


@dataclass
class RunConfig:
    command: Command
    params: ParameterSet | None = None
    preset: str | None = None
    initial: State | None = None
    t_end: float | None = None
    integrator: IntegratorSpec = field(default_factory=IntegratorSpec)
    out: str | None = None
    format: str | None = None
    svg: str | None = None
    plot_mode: str | None = None
    extras: dict = field(default_factory=dict)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _num_arg(key):
    def convert(text):
        try:
            return parse_number(text, key)
        except UsageError as exc:
            raise argparse.ArgumentTypeError(str(exc)) from None
    convert.__name__ = "number"
    return convert


def _add_model_flags(p, *, initial=True, run=True):
    p.add_argument("--config", help="key = value file; flags win over its values")
    p.add_argument("--preset", help="named parameter preset (see preset-list)")
    for key in ("g", "mu", "tau", "rho"):
        p.add_argument(f"--{key}", type=_num_arg(key))
    if initial:
        p.add_argument("--y0", type=_num_arg("y0"))
        p.add_argument("--d0", type=_num_arg("d0"))
    if run:
        p.add_argument("--t-end", dest="t_end", type=_num_arg("t_end"))
        p.add_argument("--dt", type=_num_arg("dt"))
        p.add_argument("--method", choices=[m.value for m in Method])
    p.add_argument("--out")
    p.add_argument("--format", choices=["csv", "json", "text"])


def build_parser():
    parser = _Parser(prog="gravdist", description="Output/social-distancing dynamics toolkit")
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)

    p = sub.add_parser("simulate", help="integrate one parameter set")
    _add_model_flags(p)
    p.add_argument("--svg", help="also render an SVG plot here")
    p.add_argument("--plot-mode", choices=["phase", "time"], default="phase")

    p = sub.add_parser("portrait", help="normalised direction field on a grid")
    _add_model_flags(p, run=True)
    p.add_argument("--x-range", nargs=2, type=_num_arg("x-range"), metavar=("LO", "HI"),
                   default=[0.0, 1.0])
    p.add_argument("--y-range", nargs=2, type=_num_arg("y-range"), metavar=("LO", "HI"),
                   default=[0.0, 1.0])
    p.add_argument("--n", type=int, default=15)
    p.add_argument("--svg", help="phase-plane SVG with the field (and orbit if y0/d0 given)")

    p = sub.add_parser("equilibria", help="fixed points, eigenvalues and regime")
    _add_model_flags(p, initial=False, run=False)

    p = sub.add_parser("schedule", help="three-phase switched run")
    p.add_argument("--config", help="key = value file (dt, method, out, format)")
    p.add_argument("--dt", type=_num_arg("dt"))
    p.add_argument("--method", choices=[m.value for m in Method])
    p.add_argument("--continue-state", action="store_true",
                   help="carry state across switches instead of restarting")
    p.add_argument("--out")
    p.add_argument("--format", choices=["csv", "json"])
    p.add_argument("--svg")
    p.add_argument("--plot-mode", choices=["phase", "time"], default="time")

    p = sub.add_parser("sir-rho", help="susceptibility from SIR rates")
    p.add_argument("--a", type=_num_arg("a"), required=True)
    p.add_argument("--b", type=_num_arg("b"), required=True)
    p.add_argument("--phi", type=_num_arg("phi"), default=1.0)
    p.add_argument("--format", choices=["text", "json"], default="text")

    p = sub.add_parser("preset-list", help="list named presets")
    p.add_argument("--format", choices=["text", "json"], default="text")
    return parser


def _merged(args, file_values):
    merged = dict(file_values)
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        if value is not None:
            merged[key] = value
    return merged


def _resolve_params(values, required):
    base = None
    if values.get("preset"):
        try:
            preset = load_preset(values["preset"])
        except KeyError:
            raise UsageError(f"unknown preset {values['preset']!r}") from None
        base = preset
    fields = {}
    for key in ("g", "mu", "tau", "rho"):
        if key in values:
            fields[key] = values[key]
        elif base is not None:
            fields[key] = getattr(base.params, key)
    missing = [k for k in ("g", "mu", "tau", "rho") if k not in fields]
    if missing:
        if required:
            raise UsageError("missing parameter(s): " + ", ".join(f"--{k}" for k in missing)
                             + " (or give --preset)")
        return base, None
    return base, ParameterSet(**fields)


def parse_config(argv) -> RunConfig:
    """Build a RunConfig from ``argv`` (without the program name)."""
    parser = build_parser()
    args = parser.parse_args(list(argv))
    if args.command is None:
        raise UsageError("missing command; choose from " + ", ".join(c.value for c in Command))
    command = Command(args.command)

    file_values = read_config_file(args.config) if getattr(args, "config", None) else {}
    values = _merged(args, file_values)
    cfg = RunConfig(command=command, out=values.get("out"), format=values.get("format"))

    if command in (Command.SIMULATE, Command.PORTRAIT, Command.EQUILIBRIA):
        preset, cfg.params = _resolve_params(values, required=True)
        cfg.preset = preset.name.value if preset else None
        if command is not Command.EQUILIBRIA:
            y0 = values.get("y0", preset.anchor_state.Y if preset else None)
            d0 = values.get("d0", preset.anchor_state.d if preset else None)
            if command is Command.SIMULATE and (y0 is None or d0 is None):
                raise UsageError("missing initial state: --y0 and --d0 (or give --preset)")
            if y0 is not None and d0 is not None:
                cfg.initial = State(y0, d0)
    if command in (Command.SIMULATE, Command.PORTRAIT, Command.SCHEDULE):
        dt = values.get("dt", default_dt())
        method = values.get("method", Method.RK4_LOG.value)
        try:
            method = Method(method)
        except ValueError:
            raise UsageError(f"unknown method {method!r}") from None
        cfg.integrator = IntegratorSpec(method, dt, max(1, round(SAMPLE_INTERVAL / dt)))
    if command is Command.SIMULATE:
        if "t_end" not in values:
            raise UsageError("missing --t-end")
        cfg.t_end = values["t_end"]
    if command is Command.PORTRAIT:
        cfg.t_end = values.get("t_end")
        cfg.extras.update(x_range=tuple(args.x_range), y_range=tuple(args.y_range), n=args.n)
    if command is Command.SCHEDULE:
        cfg.extras["continue_state"] = args.continue_state
    if command is Command.SIR_RHO:
        cfg.extras.update(a=args.a, b=args.b, phi=args.phi)
    cfg.svg = getattr(args, "svg", None)
    cfg.plot_mode = getattr(args, "plot_mode", None)
    return cfg

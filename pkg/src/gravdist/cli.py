"""``gravdist`` command-line entry point."""
from __future__ import annotations

import json
import sys
import warnings

from . import io
from .config import Command, RunConfig, UsageError, parse_config
from .epi import PhiSpec, SirParams, linearized_growth, rho_from_sir
from .integrate import DivergenceError, detect_period, integrate_ode, sample_vector_field
from .model import InvalidInputError
from .scenario import (Entry, PhaseSchedule, PhaseSpec, figure4_schedule, list_presets,
                       regime_report, run_schedule)


def _emit_trajectory(traj, cfg: RunConfig):
    fmt = cfg.format or ("json" if cfg.out and cfg.out.endswith(".json") else "csv")
    if cfg.out is None:
        out = sys.stdout
        if fmt == "json":
            rows = [dict(t=float(a), Y=float(b), d=float(c)) for a, b, c in io._trajectory_rows(traj)]
            out.write(json.dumps(rows) + "\n")
        else:
            out.write("t,Y,d\n")
            for row in io._trajectory_rows(traj):
                out.write(",".join(io._num(x) for x in row) + "\n")
    elif fmt == "json":
        io.write_trajectory_json(traj, cfg.out)
    else:
        io.write_trajectory_csv(traj, cfg.out)


def _plot_mode(cfg):
    return io.PlotMode.TIME_SERIES if cfg.plot_mode == "time" else io.PlotMode.PHASE_PLANE


def cmd_simulate(cfg: RunConfig):
    traj = integrate_ode(cfg.initial, cfg.params, cfg.t_end, cfg.integrator)
    _emit_trajectory(traj, cfg)
    if cfg.svg:
        io.render_svg(traj, _plot_mode(cfg), cfg.svg)
    period = detect_period(traj) if len(traj) >= 3 else None
    note = f"period {period:.3f} y" if period is not None else "no recurrence"
    print(f"simulated {len(traj)} samples to t={traj.t[-1]:g} ({note})", file=sys.stderr)


def cmd_portrait(cfg: RunConfig):
    ex = cfg.extras
    grid = sample_vector_field(cfg.params, ex["x_range"], ex["y_range"], ex["n"])
    fmt = cfg.format or ("json" if cfg.out and cfg.out.endswith(".json") else "csv")
    if cfg.out is None:
        sys.stdout.write("x,y,u,v\n")
        for row in grid.rows():
            sys.stdout.write(",".join(io._num(x) for x in row) + "\n")
    elif fmt == "json":
        io.write_vector_field_json(grid, cfg.out)
    else:
        io.write_vector_field(grid, cfg.out)
    if cfg.svg:
        if cfg.initial is None or cfg.initial.Y == 0 and cfg.initial.d == 0:
            raise UsageError("portrait --svg needs an orbit: give --y0/--d0 or --preset")
        traj = integrate_ode(cfg.initial, cfg.params, cfg.t_end or 100.0, cfg.integrator)
        io.render_svg(traj, io.PlotMode.PHASE_PLANE, cfg.svg, field=grid)


def _fixed_point_json(fp):
    return {
        "location": list(fp.location),
        "eigenvalues": [[z.real, z.imag] for z in fp.eigenvalues],
        "kind": fp.kind.value,
        "in_domain": fp.in_domain,
        "note": fp.note,
    }


def cmd_equilibria(cfg: RunConfig):
    report = regime_report(cfg.params)
    if cfg.format == "json":
        text = json.dumps({"regime": report.regime.value,
                           "fixed_points": [_fixed_point_json(fp) for fp in report.fixed_points]},
                          indent=2) + "\n"
    else:
        text = report.summary + "\n"
    if cfg.out:
        with open(cfg.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_schedule(cfg: RunConfig):
    schedule = figure4_schedule()
    if cfg.extras.get("continue_state"):
        phases = tuple(PhaseSpec(p.params, p.duration, Entry.CONTINUE) for p in schedule.phases)
        schedule = PhaseSchedule(phases, schedule.initial)
    comp = run_schedule(schedule, cfg.integrator)
    _emit_trajectory(comp, cfg)
    if cfg.svg:
        io.render_svg(comp, _plot_mode(cfg), cfg.svg)
    for k, seg in comp.segments:
        period = detect_period(seg)
        note = f"period {period:.2f} y" if period is not None else "no recurrence"
        print(f"phase {k + 1}: t={seg.t[0]:g}..{seg.t[-1]:g}, {note}", file=sys.stderr)


def cmd_sir_rho(cfg: RunConfig):
    ex = cfg.extras
    params = SirParams(ex["a"], ex["b"])
    rho = rho_from_sir(params, PhiSpec(ex["phi"]), warn=False)
    growth = linearized_growth(params)
    if cfg.format == "json":
        sys.stdout.write(json.dumps({"a": params.a, "b": params.b, "phi": ex["phi"],
                                     "growth": growth, "rho": rho, "negative": rho < 0}) + "\n")
    else:
        flag = "  (negative: recovery outpaces transmission)" if rho < 0 else ""
        print(f"growth a-b = {growth:.12g}")
        print(f"rho = {rho:.12g}{flag}")


def cmd_preset_list(cfg: RunConfig):
    presets = list_presets()
    if cfg.format == "json":
        rows = [{"name": p.name.value, "g": p.params.g, "mu": p.params.mu, "tau": p.params.tau,
                 "rho": p.params.rho, "Y": p.anchor_state.Y, "d": p.anchor_state.d,
                 "source": p.source} for p in presets]
        sys.stdout.write(json.dumps(rows, indent=2, ensure_ascii=False) + "\n")
        return
    for p in presets:
        print(f"{p.name.value:<15} {p.source}")


COMMANDS = {
    Command.SIMULATE: cmd_simulate,
    Command.PORTRAIT: cmd_portrait,
    Command.EQUILIBRIA: cmd_equilibria,
    Command.SCHEDULE: cmd_schedule,
    Command.SIR_RHO: cmd_sir_rho,
    Command.PRESET_LIST: cmd_preset_list,
}


def _one_line(exc):
    return " ".join(str(exc).split())


def main(argv=None):
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = parse_config(argv)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            COMMANDS[cfg.command](cfg)
    except UsageError as exc:
        print(f"gravdist: usage error: {_one_line(exc)}", file=sys.stderr)
        return 2
    except (InvalidInputError, DivergenceError, OSError) as exc:
        print(f"gravdist: error: {_one_line(exc)}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

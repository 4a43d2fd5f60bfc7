"""Named parameter presets and phase-switched runs."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .integrate import DivergenceError, IntegratorSpec, integrate_ode
from .model import (FixedPoint, InvalidInputError, ParameterSet, Regime, State,
                    classify_regime, equilibria)


class PresetName(str, enum.Enum):
    RECESSION = "Recession"
    RECOVERY = "Recovery"
    PHASE1 = "Phase1"
    PHASE2 = "Phase2"
    PHASE3 = "Phase3"
    SADDLE_APPENDIX = "SaddleAppendix"


@dataclass(frozen=True)
class Preset:
    name: PresetName
    params: ParameterSet
    anchor_state: State
    source: str


_PRESETS = {
    PresetName.RECESSION: Preset(
        PresetName.RECESSION, ParameterSet(0.04, 1.1, 0.5, 1), State(0.25, 0.5),
        "Figure 1 (Case Recession): g=0.04, mu=1.1, tau=0.5, rho=1; passes at Y=0.25, d=0.5"),
    PresetName.RECOVERY: Preset(
        PresetName.RECOVERY, ParameterSet(0.04, -0.49, 0.46, 0.37), State(0.5, 0.25),
        "Figure 2 (Case Recovery): g=0.04, mu=-0.49, tau=0.46, rho=0.37; passes at Y=0.5, d=0.25"),
    PresetName.PHASE1: Preset(
        PresetName.PHASE1, ParameterSet(0.04, 0.48, 0.79, 2), State(0.3, 0.25),
        "Figure 3 (Phase 1): g=0.04, mu=0.48, tau=0.79, rho=2; passes at Y=0.3, d=0.25"),
    PresetName.PHASE2: Preset(
        PresetName.PHASE2, ParameterSet(0.04, 0.29, 0.46, 1.75), State(0.2, 0.2),
        "Figure 4 (Phase 2): g=0.04, mu=0.29, tau=0.46, rho=1.75; passes at Y=0.2, d=0.2"),
    PresetName.PHASE3: Preset(
        PresetName.PHASE3, ParameterSet(0.04, 0.2, 0.4, 2), State(0.25, 0.5),
        "Figure 5 (Phase 3): g=0.04, mu=0.2, tau=0.4, rho=2; passes at Y=0.25, d=0.5"),
    PresetName.SADDLE_APPENDIX: Preset(
        PresetName.SADDLE_APPENDIX, ParameterSet(-0.04, -0.15, 0.5, 1), State(0.5, 0.25),
        "Figure 6 (non-consistent case, saddle): g=-0.04, mu=-0.15, tau=0.5, rho=1; "
        "saddle quoted at Y=0.5, d=0.25"),
}


def _normalise(name):
    return str(name).replace("-", "").replace("_", "").replace(" ", "").lower()


def load_preset(name) -> Preset:
    """Look up a preset by enum or by case/punctuation-insensitive name."""
    if isinstance(name, PresetName):
        return _PRESETS[name]
    key = _normalise(name)
    for preset_name, preset in _PRESETS.items():
        if _normalise(preset_name.value) == key:
            return preset
    raise KeyError(f"unknown preset {name!r}; choose from "
                   + ", ".join(p.value for p in PresetName))


def list_presets():
    return [_PRESETS[p] for p in PresetName]


class Entry(str, enum.Enum):
    CONTINUE = "ContinueState"
    RESET = "ResetTo"


@dataclass(frozen=True)
class PhaseSpec:
    params: ParameterSet
    duration: float
    entry: Entry = Entry.CONTINUE
    reset_state: State | None = None

    def __post_init__(self):
        object.__setattr__(self, "entry", Entry(self.entry))
        if not (math.isfinite(self.duration) and self.duration > 0):
            raise InvalidInputError(f"phase duration must be > 0, got {self.duration!r}")
        if self.entry is Entry.RESET:
            if self.reset_state is None:
                raise InvalidInputError("ResetTo phase needs a reset_state")
            if not isinstance(self.reset_state, State):
                object.__setattr__(self, "reset_state", State(*self.reset_state))

    @classmethod
    def reset_to(cls, params, duration, state):
        return cls(params, duration, Entry.RESET, state)


@dataclass(frozen=True)
class PhaseSchedule:
    phases: tuple
    initial: State | None = None

    def __post_init__(self):
        phases = tuple(self.phases)
        if not phases:
            raise InvalidInputError("schedule needs at least one phase")
        object.__setattr__(self, "phases", phases)
        if self.initial is not None and not isinstance(self.initial, State):
            object.__setattr__(self, "initial", State(*self.initial))
        if phases[0].entry is Entry.CONTINUE and self.initial is None:
            raise InvalidInputError("first phase continues from nothing: give an initial state")

    def durations(self):
        return [p.duration for p in self.phases]


@dataclass(frozen=True, eq=False)
class CompositeTrajectory:
    """Per-phase segments on one global clock.

    Every segment but the last omits its end sample, which coincides in time
    with the next segment's first sample.
    """

    segments: tuple
    switch_times: tuple

    def __post_init__(self):
        last = -math.inf
        for _, seg in self.segments:
            if len(seg) and seg.t[0] <= last:
                raise InvalidInputError("segment times must increase globally")
            if len(seg):
                last = seg.t[-1]

    @property
    def phase_starts(self):
        return tuple(seg.t[0] for _, seg in self.segments)

    def concatenated(self):
        t = np.concatenate([s.t for _, s in self.segments])
        Y = np.concatenate([s.Y for _, s in self.segments])
        d = np.concatenate([s.d for _, s in self.segments])
        return t, Y, d


def _is_whole_steps(duration, dt):
    n = round(duration / dt)
    return n >= 1 and abs(n * dt - duration) <= 1e-9 * max(duration, dt), n


def run_schedule(schedule: PhaseSchedule, spec: IntegratorSpec | None = None) -> CompositeTrajectory:
    spec = spec or IntegratorSpec()
    segments = []
    switch_times = []
    state = schedule.initial
    carry = None
    t_start = 0.0
    step_offset = 0
    on_grid = True
    n_phases = len(schedule.phases)
    for k, phase in enumerate(schedule.phases):
        if phase.entry is Entry.RESET:
            state = phase.reset_state
            carry = None
        try:
            if on_grid:
                traj = integrate_ode(state, phase.params, phase.duration, spec,
                                     step_offset=step_offset, resume=carry)
            else:
                traj = integrate_ode(state, phase.params, phase.duration, spec,
                                     resume=carry).shifted(t_start)
        except DivergenceError as exc:
            last = exc.last_time if on_grid else exc.last_time + t_start
            raise DivergenceError(f"phase {k} diverged after t={last:g}", last, phase=k) from exc
        state = traj.final
        carry = traj.carry
        whole, n = _is_whole_steps(phase.duration, spec.dt)
        if on_grid and whole:
            step_offset += n
            t_start = step_offset * spec.dt
        else:
            on_grid = False
            t_start = t_start + phase.duration
        if k < n_phases - 1:
            switch_times.append(t_start)
            traj = traj.slice(None, -1)
        segments.append((k, traj))
    return CompositeTrajectory(tuple(segments), tuple(switch_times))


def figure4_schedule() -> PhaseSchedule:
    """Three phases of 103, 102 and 100 years, restarting state at each switch."""
    p1, p2, p3 = (load_preset(n) for n in (PresetName.PHASE1, PresetName.PHASE2, PresetName.PHASE3))
    return PhaseSchedule(
        (PhaseSpec(p1.params, 103.0),
         PhaseSpec.reset_to(p2.params, 102.0, p2.anchor_state),
         PhaseSpec.reset_to(p3.params, 100.0, p3.anchor_state)),
        initial=p1.anchor_state,
    )


@dataclass(frozen=True)
class RegimeReport:
    regime: Regime
    fixed_points: tuple
    summary: str

    @property
    def eigenvalues(self):
        return tuple(fp.eigenvalues for fp in self.fixed_points)


def _fmt(x):
    return f"{x:.4g}"


def _describe(fp: FixedPoint):
    y, d = fp.location
    l1, l2 = fp.eigenvalues
    text = f"({_fmt(y)}, {_fmt(d)}) {fp.kind.value}, eigenvalues {_fmt_c(l1)}, {_fmt_c(l2)}"
    if fp.note:
        text += f" [{fp.note}]"
    return text


def _fmt_c(z):
    if z.imag == 0:
        return _fmt(z.real)
    sign = "+" if z.imag >= 0 else "-"
    return f"{_fmt(z.real)}{sign}{_fmt(abs(z.imag))}i"


def regime_report(params: ParameterSet) -> RegimeReport:
    regime = classify_regime(params)
    fps = tuple(equilibria(params))
    lines = [f"regime: {regime.value}"]
    names = ("origin", "interior")
    for name, fp in zip(names, fps):
        lines.append(f"{name}: {_describe(fp)}")
    return RegimeReport(regime, fps, "\n".join(lines))

"""SIR compartments and the map from infection growth to distancing susceptibility."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .integrate import DivergenceError, IntegratorSpec, _sample_steps, _step_plan
from .model import InvalidInputError

SUM_TOL = 1e-9


class NegativeRhoWarning(UserWarning):
    """Recovery outpaces transmission, so the mapped susceptibility is negative."""


@dataclass(frozen=True)
class SirParams:
    a: float  # transmission rate per infectious individual, 1/yr
    b: float  # recovery rate, 1/yr

    def __post_init__(self):
        for name in ("a", "b"):
            v = float(getattr(self, name))
            if not math.isfinite(v) or v < 0:
                raise InvalidInputError(f"{name} must be finite and >= 0, got {v!r}")
            object.__setattr__(self, name, v)


@dataclass(frozen=True)
class SirState:
    omega: float  # susceptible fraction
    gamma_i: float  # infectious fraction
    lambda_r: float  # recovered fraction

    def __post_init__(self):
        vals = []
        for name in ("omega", "gamma_i", "lambda_r"):
            v = float(getattr(self, name))
            if not (math.isfinite(v) and 0.0 <= v <= 1.0):
                raise InvalidInputError(f"{name} must lie in [0, 1], got {v!r}")
            object.__setattr__(self, name, v)
            vals.append(v)
        if abs(sum(vals) - 1.0) > SUM_TOL:
            raise InvalidInputError(f"fractions must sum to 1, got {sum(vals)!r}")

    def __iter__(self):
        yield self.omega
        yield self.gamma_i
        yield self.lambda_r


@dataclass(frozen=True)
class PhiSpec:
    phi: float = 1.0

    def __post_init__(self):
        v = float(self.phi)
        if not math.isfinite(v) or v < 0:
            raise InvalidInputError(f"phi must be finite and >= 0, got {v!r}")
        object.__setattr__(self, "phi", v)


@dataclass(frozen=True, eq=False)
class SirTrajectory:
    t: np.ndarray
    omega: np.ndarray
    gamma_i: np.ndarray
    lambda_r: np.ndarray
    params: SirParams

    def __post_init__(self):
        for name in ("t", "omega", "gamma_i", "lambda_r"):
            arr = np.array(getattr(self, name), dtype=float)
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    def __len__(self):
        return len(self.t)

    def totals(self):
        return self.omega + self.gamma_i + self.lambda_r


def sir_rhs(state: SirState, params: SirParams):
    """Derivatives of (susceptible, infectious, recovered).

    The susceptible pool shrinks at rate ``a * omega * gamma``; the three
    components sum to zero.
    """
    omega, gamma, _ = state
    infections = params.a * omega * gamma
    recoveries = params.b * gamma
    return (-infections, infections - recoveries, recoveries)


def integrate_sir(initial: SirState, params: SirParams, t_end, spec: IntegratorSpec | None = None):
    """Classical RK4 on the SIR system; ``spec.method`` is ignored."""
    spec = spec or IntegratorSpec()
    if not (math.isfinite(t_end) and t_end > 0):
        raise InvalidInputError(f"t_end must be > 0, got {t_end!r}")
    n_steps, last_h = _step_plan(t_end, spec.dt)
    out_s, out_i, out_r = kernels.alloc(n_steps, spec.sample_every, 3)
    filled, status = kernels.sir_integrate(
        initial.omega, initial.gamma_i, initial.lambda_r, params.a, params.b,
        spec.dt, n_steps, last_h, spec.sample_every, out_s, out_i, out_r)
    if status != 0:
        last_time = (-status - 1) * spec.dt
        raise DivergenceError(f"SIR integration diverged after t={last_time:g}", last_time)
    t = _sample_steps(n_steps, spec.sample_every) * spec.dt
    if last_h != spec.dt:
        t[-1] = t_end
    return SirTrajectory(t, out_s, out_i, out_r, params)


def linearized_growth(params: SirParams) -> float:
    """Growth rate of the infectious fraction near the disease-free state."""
    return params.a - params.b


def rho_from_sir(params: SirParams, phi: PhiSpec | None = None, *, warn=True) -> float:
    """Susceptibility of distancing to output, ``phi * (a - b)``.

    A negative value is returned as is; a ``NegativeRhoWarning`` is issued
    unless ``warn`` is false.
    """
    phi = phi or PhiSpec()
    rho = phi.phi * linearized_growth(params)
    if rho < 0 and warn:
        warnings.warn(f"rho = {rho:g} < 0: recovery outpaces transmission",
                      NegativeRhoWarning, stacklevel=2)
    return rho

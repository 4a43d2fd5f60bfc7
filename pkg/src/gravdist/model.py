"""Output/distancing system: state types, vector field, equilibria, regimes.

The system is

    Y' = Y (g - mu d)
    d' = d (-tau + rho Y)

a Lotka-Volterra pair with output Y playing prey and distancing d predator.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

# |Re(lambda)| <= ZERO_TOL * (1 + |lambda|) counts as zero.
ZERO_TOL = 1e-9


class InvalidInputError(ValueError):
    """Non-finite or out-of-domain input."""


class DomainError(InvalidInputError):
    """Point outside the domain of a function (e.g. the first integral)."""


def _require_finite(**values):
    for name, value in values.items():
        if not math.isfinite(value):
            raise InvalidInputError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class ParameterSet:
    """The four dimensionless rates. No sign restriction."""

    g: float
    mu: float
    tau: float
    rho: float

    def __post_init__(self):
        for name in ("g", "mu", "tau", "rho"):
            value = float(getattr(self, name))
            _require_finite(**{name: value})
            object.__setattr__(self, name, value)

    def as_tuple(self):
        return (self.g, self.mu, self.tau, self.rho)


@dataclass(frozen=True)
class State:
    """Point (Y, d) in output/distancing space."""

    Y: float
    d: float

    def __post_init__(self):
        Y, d = float(self.Y), float(self.d)
        _require_finite(Y=Y, d=d)
        if Y < 0 or d < 0:
            raise InvalidInputError(f"state components must be >= 0, got ({Y}, {d})")
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "d", d)

    def __iter__(self):
        yield self.Y
        yield self.d


@dataclass(frozen=True)
class StateDerivative:
    dY_dt: float
    dd_dt: float

    def __iter__(self):
        yield self.dY_dt
        yield self.dd_dt


class FixedPointKind(str, enum.Enum):
    SADDLE = "Saddle"
    CENTER = "Center"
    STABLE_NODE = "StableNode"
    UNSTABLE_NODE = "UnstableNode"
    STABLE_SPIRAL = "StableSpiral"
    UNSTABLE_SPIRAL = "UnstableSpiral"
    DEGENERATE = "Degenerate"


class Regime(str, enum.Enum):
    GROWTH_ONLY = "GrowthOnly"
    CYCLICAL = "Cyclical"
    DISTANCING_DOMINANT_CYCLICAL = "DistancingDominantCyclical"
    RECOVERY = "Recovery"
    NON_CONSISTENT = "NonConsistent"


@dataclass(frozen=True)
class FixedPoint:
    location: tuple
    eigenvalues: tuple
    kind: FixedPointKind
    in_domain: bool = True
    note: str = ""

    @property
    def trace(self):
        return (self.eigenvalues[0] + self.eigenvalues[1]).real

    @property
    def determinant(self):
        return (self.eigenvalues[0] * self.eigenvalues[1]).real


def rhs(state, params: ParameterSet) -> StateDerivative:
    Y, d = state
    _require_finite(Y=Y, d=d)
    return StateDerivative(Y * (params.g - params.mu * d), d * (-params.tau + params.rho * Y))


def rhs_array(Y, d, params: ParameterSet):
    """Vectorised field over arrays of points."""
    Y = np.asarray(Y, dtype=float)
    d = np.asarray(d, dtype=float)
    return Y * (params.g - params.mu * d), d * (-params.tau + params.rho * Y)


def jacobian_at(params: ParameterSet, point) -> np.ndarray:
    Y, d = (float(x) for x in point)
    _require_finite(Y=Y, d=d)
    g, mu, tau, rho = params.as_tuple()
    return np.array([[g - mu * d, -mu * Y],
                     [rho * d, -tau + rho * Y]])


def _eigs_2x2(jac):
    # closed form keeps exact zero traces exact (pure centers)
    tr = jac[0, 0] + jac[1, 1]
    det = jac[0, 0] * jac[1, 1] - jac[0, 1] * jac[1, 0]
    half = 0.5 * tr
    disc = half * half - det
    if disc >= 0:
        root = math.sqrt(disc)
        # larger-magnitude root first, the other via det to avoid cancellation
        big = half + math.copysign(root, half) if half != 0 else root
        small = det / big if big != 0 else half - root
        pair = sorted((big, small), reverse=True)
        return complex(pair[0]), complex(pair[1])
    root = math.sqrt(-disc)
    return complex(half, root), complex(half, -root)


def _is_zero(lam: complex) -> bool:
    return abs(lam.real) <= ZERO_TOL * (1.0 + abs(lam))


def _kind_from_eigenvalues(l1: complex, l2: complex) -> FixedPointKind:
    if abs(l1) == 0.0 or abs(l2) == 0.0:
        return FixedPointKind.DEGENERATE
    complex_pair = l1.imag != 0.0
    if complex_pair:
        if _is_zero(l1):
            return FixedPointKind.CENTER
        return FixedPointKind.STABLE_SPIRAL if l1.real < 0 else FixedPointKind.UNSTABLE_SPIRAL
    if _is_zero(l1) or _is_zero(l2):
        return FixedPointKind.DEGENERATE
    if (l1.real > 0) != (l2.real > 0):
        return FixedPointKind.SADDLE
    return FixedPointKind.STABLE_NODE if l1.real < 0 else FixedPointKind.UNSTABLE_NODE


def classify_equilibrium(params: ParameterSet, point) -> FixedPoint:
    loc = (float(point[0]), float(point[1]))
    l1, l2 = _eigs_2x2(jacobian_at(params, loc))
    in_domain = loc[0] >= 0 and loc[1] >= 0
    note = "" if in_domain else "outside economic domain"
    return FixedPoint(loc, (l1, l2), _kind_from_eigenvalues(l1, l2), in_domain, note)


def interior_point(params: ParameterSet):
    """``(tau/rho, g/mu)`` or ``None`` when mu or rho vanishes."""
    if params.rho == 0 or params.mu == 0:
        return None
    return (params.tau / params.rho, params.g / params.mu)


def equilibria(params: ParameterSet) -> list:
    """Origin plus the interior point, the latter reported even when it lies
    outside the nonnegative quadrant."""
    interior = interior_point(params)
    if interior is None:
        origin = classify_equilibrium(params, (0.0, 0.0))
        note = "interior equilibrium undefined (mu = 0 or rho = 0)"
        return [FixedPoint(origin.location, origin.eigenvalues, origin.kind, True, note)]
    return [classify_equilibrium(params, (0.0, 0.0)), classify_equilibrium(params, interior)]


def first_integral(state, params: ParameterSet) -> float:
    """V(Y, d) = rho Y - tau ln Y + mu d - g ln d, constant along orbits."""
    Y, d = (float(x) for x in state)
    _require_finite(Y=Y, d=d)
    if Y <= 0 or d <= 0:
        raise DomainError(f"first integral needs Y > 0 and d > 0, got ({Y}, {d})")
    g, mu, tau, rho = params.as_tuple()
    return rho * Y - tau * math.log(Y) + mu * d - g * math.log(d)


def first_integral_array(Y, d, params: ParameterSet):
    Y = np.asarray(Y, dtype=float)
    d = np.asarray(d, dtype=float)
    if np.any(Y <= 0) or np.any(d <= 0):
        raise DomainError("first integral needs Y > 0 and d > 0")
    g, mu, tau, rho = params.as_tuple()
    return rho * Y - tau * np.log(Y) + mu * d - g * np.log(d)


def first_integral_gradient(state, params: ParameterSet):
    Y, d = (float(x) for x in state)
    if Y <= 0 or d <= 0:
        raise DomainError(f"first integral needs Y > 0 and d > 0, got ({Y}, {d})")
    return (params.rho - params.tau / Y, params.mu - params.g / d)


def classify_regime(params: ParameterSet, d0=None) -> Regime:
    """Label a parameter set.

    Rules are checked in order: growth-only (``mu == rho == 0`` or a run whose
    initial distancing ``d0`` is zero), non-consistent (``g < 0`` and
    ``mu < 0``), recovery (``mu < 0 < g``), cyclical (all rates positive,
    distancing-dominant when ``mu > 1``). Anything else falls back to
    non-consistent.
    """
    g, mu, tau, rho = params.as_tuple()
    if (d0 is not None and d0 == 0) or (mu == 0 and rho == 0):
        return Regime.GROWTH_ONLY
    if g < 0 and mu < 0:
        return Regime.NON_CONSISTENT
    if mu < 0 and g > 0:
        return Regime.RECOVERY
    if g > 0 and mu > 0 and tau > 0 and rho > 0:
        if mu > 1:
            return Regime.DISTANCING_DOMINANT_CYCLICAL
        return Regime.CYCLICAL
    return Regime.NON_CONSISTENT

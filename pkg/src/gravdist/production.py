"""Static production function and the factor-utilisation map."""
from __future__ import annotations

import math
from dataclasses import dataclass

from .model import DomainError, InvalidInputError, ParameterSet


@dataclass(frozen=True)
class ProductionSpec:
    """``Y = Y_min + A N``; ``A`` folds technology and fixed capital together."""

    A: float = 1.0
    Y_min: float = 0.0

    def __post_init__(self):
        if not math.isfinite(self.A):
            raise InvalidInputError("A must be finite")
        if not (math.isfinite(self.Y_min) and self.Y_min >= 0):
            raise InvalidInputError("Y_min must be finite and >= 0")


def output_from_factor(N, spec: ProductionSpec = ProductionSpec()) -> float:
    if N < 0:
        raise DomainError(f"factor index must be >= 0, got {N!r}")
    return spec.Y_min + spec.A * N


def factor_step(N_t, params: ParameterSet, d) -> float:
    """One period of factor utilisation: ``N + (g N - mu d N)``."""
    if N_t < 0:
        raise DomainError(f"factor index must be >= 0, got {N_t!r}")
    return N_t + (params.g * N_t - params.mu * d * N_t)


def growth_rate_equivalence_check(N_t, params: ParameterSet, d,
                                  spec: ProductionSpec = ProductionSpec()):
    """Relative growth of the factor and of output over one ``factor_step``.

    The two agree when ``Y_min = 0``; otherwise output growth is scaled by
    ``A N / (Y_min + A N)``.
    """
    if not N_t > 0:
        raise DomainError(f"factor index must be > 0, got {N_t!r}")
    N_next = factor_step(N_t, params, d)
    Y_t = output_from_factor(N_t, spec)
    Y_next = output_from_factor(N_next, spec) if N_next >= 0 else spec.Y_min + spec.A * N_next
    return (N_next - N_t) / N_t, (Y_next - Y_t) / Y_t

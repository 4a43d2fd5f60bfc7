"""Output/social-distancing dynamics: simulation, equilibria and SIR linkage."""
from ._accel import NUMBA_OK
from .epi import (PhiSpec, SirParams, SirState, SirTrajectory, integrate_sir, linearized_growth,
                  rho_from_sir, sir_rhs)
from .integrate import (DivergenceError, IntegratorSpec, Method, Trajectory, VectorField,
                        detect_period, integrate_ode, sample_vector_field, step_discrete)
from .model import (DomainError, FixedPoint, FixedPointKind, InvalidInputError, ParameterSet,
                    Regime, State, StateDerivative, classify_equilibrium, classify_regime,
                    equilibria, first_integral, jacobian_at, rhs)
from .production import (ProductionSpec, factor_step, growth_rate_equivalence_check,
                         output_from_factor)
from .scenario import (CompositeTrajectory, Entry, PhaseSchedule, PhaseSpec, Preset, PresetName,
                       figure4_schedule, list_presets, load_preset, regime_report, run_schedule)

__version__ = "0.1.0"

"""Two-excitation dynamics and Schmidt analysis of a circuit-QED photon-pair source."""

from .benchmark2le import (
    TwoEmitterConfig,
    analytic_waveguide_population,
    jc_dressed_energies,
    ode_waveguide_population,
)
from .dynamics import (
    AmplitudeField,
    FrequencyGrid,
    build_omega,
    evolve_field,
    propagate,
)
from .errors import ConfigError, ConvergenceError, NumericalError, SimulationError
from .observables import (
    ObservableRecord,
    emission_delay,
    joint_spectrum,
    norm,
    pair_probability,
    populations,
    time_domain,
)
from .params import (
    EffectiveParams,
    SystemConfig,
    derive_effective_params,
    effective_params,
    validate_config,
)
from .schmidt import (
    SchmidtDomain,
    SchmidtResult,
    analyze,
    build_kernels,
    entanglement_entropy,
    final_state,
    schmidt_decompose,
    select_domain,
)

__all__ = [
    "AmplitudeField",
    "ConfigError",
    "ConvergenceError",
    "EffectiveParams",
    "FrequencyGrid",
    "NumericalError",
    "ObservableRecord",
    "SchmidtDomain",
    "SchmidtResult",
    "SimulationError",
    "SystemConfig",
    "TwoEmitterConfig",
    "analytic_waveguide_population",
    "analyze",
    "build_kernels",
    "build_omega",
    "derive_effective_params",
    "effective_params",
    "emission_delay",
    "entanglement_entropy",
    "evolve_field",
    "final_state",
    "jc_dressed_energies",
    "joint_spectrum",
    "norm",
    "ode_waveguide_population",
    "pair_probability",
    "populations",
    "propagate",
    "schmidt_decompose",
    "select_domain",
    "time_domain",
    "validate_config",
]

"""Dissipative, Kerr-nonlinear, frequency-modulated Jaynes-Cummings dynamics of a
Cooper pair box coupled to a nanomechanical resonator."""

from .dynamics import (
    BlockCoefficients,
    Gauge,
    IntegratorConfig,
    TrajectoryRecord,
    assemble_block,
    block_rhs,
    propagate,
)
from .integrators import IntegrationError
from .model import (
    CoefficientSet,
    DeviceParams,
    InvalidDeviceError,
    ModulationKind,
    ModulationLaw,
    SystemParams,
    UnphysicalModulationError,
    device_coupling,
    device_energy,
    eval_coefficients,
    eval_f,
)
from .observables import entropy, inversion, mean_excitation
from .state import AmplitudeState, CoherentSpec, ConfigurationError, coherent_init, norm_squared

__version__ = "0.1.0"

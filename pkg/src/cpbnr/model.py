"""Static model constants and time-dependent Hamiltonian coefficients.

Every frequency is measured in units of the bare coupling lambda_0 and every
time in units of 1/lambda_0, so ``omega0 = 20000`` means omega_0/lambda_0.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np


class InvalidDeviceError(ValueError):
    """Raised for device constants that do not describe a physical circuit."""


class UnphysicalModulationError(ValueError):
    """Raised when 1 + f(t)/omega0 < 0, i.e. the modulated coupling is imaginary."""


@dataclass(frozen=True)
class DeviceParams:
    """Raw circuit constants of the Cooper pair box / resonator device.

    ``phi_x`` is the external flux as a fraction of the flux quantum and
    ``b_field`` is the dimensionless group pi*B*l*x0/Phi_0. ``charge`` is the
    elementary charge in whatever unit system the capacitances and voltage use
    (hbar = 1 throughout).
    """

    ej0: float
    c1: float
    cj0: float
    vg: float
    phi_x: float
    b_field: float
    charge: float = 1.0

    def __post_init__(self):
        if not (self.c1 > 0 and self.cj0 > 0):
            raise InvalidDeviceError(
                f"capacitances must be strictly positive (c1={self.c1}, cj0={self.cj0})"
            )


def device_coupling(d: DeviceParams) -> float:
    """Bare coupling lambda_0 = -4 E_J0 cos(pi Phi_x/Phi_0) (pi B l x0/Phi_0)."""
    return -4.0 * d.ej0 * math.cos(math.pi * d.phi_x) * d.b_field


def charging_energy(d: DeviceParams) -> float:
    total = d.c1 + 4.0 * d.cj0
    if not total > 0 or not math.isfinite(total):
        raise InvalidDeviceError(f"degenerate capacitance sum c1 + 4 cj0 = {total}")
    return d.charge**2 / total


def gate_charge(d: DeviceParams) -> float:
    return d.c1 * d.vg / (2.0 * d.charge)


def device_energy(d: DeviceParams) -> float:
    """Effective qubit splitting omega_c = 8 E_c (N_g - 1/2)."""
    return 8.0 * charging_energy(d) * (gate_charge(d) - 0.5)


class ModulationKind(enum.Enum):
    CONSTANT = "constant"
    SINUSOIDAL = "sinusoidal"


@dataclass(frozen=True)
class ModulationLaw:
    """Resonator frequency shift f(t): zero, or tau*sin(omega_prime*t)."""

    kind: ModulationKind = ModulationKind.CONSTANT
    tau: float = 0.0
    omega_prime: float = 0.0

    @classmethod
    def constant(cls) -> "ModulationLaw":
        return cls(ModulationKind.CONSTANT)

    @classmethod
    def sinusoidal(cls, tau: float, omega_prime: float) -> "ModulationLaw":
        return cls(ModulationKind.SINUSOIDAL, float(tau), float(omega_prime))

    def __call__(self, t):
        return eval_f(self, t)

    def integral(self, t):
        """Closed-form F(t) = int_0^t f(s) ds (works elementwise on arrays)."""
        if self.kind is ModulationKind.CONSTANT or self.omega_prime == 0.0:
            return 0.0 * t
        return self.tau * (1.0 - np.cos(self.omega_prime * t)) / self.omega_prime


def eval_f(law: ModulationLaw, t):
    if law.kind is ModulationKind.CONSTANT:
        return 0.0 * t
    return law.tau * np.sin(law.omega_prime * t)


@dataclass(frozen=True)
class SystemParams:
    """Model constants in units of lambda_0.

    ``epsilon`` is dimensionless: chi(t) = chi0 + epsilon*f(t).
    ``coupling_scale`` multiplies lambda(t); set it to 0 to switch the
    qubit-resonator exchange off entirely.
    """

    omega0: float = 20000.0
    omega_c: float = 20000.0
    chi0: float = 0.0
    kappa: float = 0.0
    delta: float = 0.0
    epsilon: float = 0.0
    coupling_scale: float = 1.0

    def __post_init__(self):
        for name in ("kappa", "delta", "chi0"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative, got {getattr(self, name)}")


@dataclass(frozen=True)
class CoefficientSet:
    omega: float
    omega_c: float
    lam: float
    chi: float
    kappa: float
    delta: float


def coupling_factor(p: SystemParams, f) -> float:
    """lambda(t)/lambda_0 for a given frequency shift f."""
    if f == 0.0:
        return p.coupling_scale
    ratio = 1.0 + f / p.omega0
    if ratio < 0:
        raise UnphysicalModulationError(
            f"1 + f/omega0 = {ratio:.6g} < 0 makes the coupling imaginary"
        )
    return p.coupling_scale * math.sqrt(ratio)


def eval_coefficients(p: SystemParams, law: ModulationLaw, t: float) -> CoefficientSet:
    """Evaluate omega(t), lambda(t), chi(t) and the constant terms at time t."""
    f = float(eval_f(law, t))
    return CoefficientSet(
        omega=p.omega0 + f,
        omega_c=p.omega_c,
        lam=coupling_factor(p, f),
        chi=p.chi0 + p.epsilon * f,
        kappa=p.kappa,
        delta=p.delta,
    )

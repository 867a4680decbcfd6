import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from cpbnr.model import (
    DeviceParams,
    InvalidDeviceError,
    ModulationKind,
    ModulationLaw,
    SystemParams,
    UnphysicalModulationError,
    charging_energy,
    device_coupling,
    device_energy,
    eval_coefficients,
    eval_f,
    gate_charge,
)


def device(**kw):
    base = dict(ej0=1.0, c1=0.6, cj0=0.1, vg=1.0, phi_x=0.0, b_field=0.1)
    base.update(kw)
    return DeviceParams(**base)


class TestDeviceCoupling:
    def test_half_flux_quantum_kills_coupling(self):
        assert device_coupling(device(phi_x=0.5)) == pytest.approx(0.0, abs=1e-15)

    def test_direct_evaluation(self):
        assert device_coupling(device(phi_x=0.0, ej0=1.0, b_field=0.1)) == pytest.approx(-0.4, rel=1e-15)

    def test_zero_b_group(self):
        assert device_coupling(device(b_field=0.0)) == 0.0

    @given(
        st.floats(0.01, 10),
        st.floats(-2, 2),
        st.floats(-1, 1),
    )
    def test_odd_in_b_even_in_flux(self, ej0, phi_x, b):
        d = device(ej0=ej0, phi_x=phi_x, b_field=b)
        assert device_coupling(device(ej0=ej0, phi_x=phi_x, b_field=-b)) == -device_coupling(d)
        assert device_coupling(device(ej0=ej0, phi_x=-phi_x, b_field=b)) == device_coupling(d)


class TestDeviceEnergy:
    def test_charge_degeneracy(self):
        # N_g = c1 vg / 2 = 1/2
        assert device_energy(device(c1=0.5, cj0=0.125, vg=2.0)) == pytest.approx(0.0, abs=1e-15)

    def test_unit_charging_energy(self):
        d = device(c1=0.6, cj0=0.1, vg=2.0 / 0.6)
        assert charging_energy(d) == pytest.approx(1.0)
        assert gate_charge(d) == pytest.approx(1.0)
        assert device_energy(d) == pytest.approx(4.0)

    def test_zero_gate_charge(self):
        assert device_energy(device(c1=0.6, cj0=0.1, vg=0.0)) == pytest.approx(-4.0)

    @pytest.mark.parametrize("c1,cj0", [(0.0, 0.1), (0.5, 0.0), (-1.0, 0.1)])
    def test_rejects_nonpositive_capacitance(self, c1, cj0):
        with pytest.raises(InvalidDeviceError):
            device(c1=c1, cj0=cj0)

    def test_rejects_degenerate_sum(self):
        with pytest.raises(InvalidDeviceError):
            device_energy(device(c1=math.inf))


def test_eval_f_constant_and_sinusoid():
    law = ModulationLaw.sinusoidal(10.0, 1.0)
    assert eval_f(ModulationLaw.constant(), 3.7) == 0.0
    assert eval_f(law, 0.0) == 0.0
    assert eval_f(law, math.pi / 2) == pytest.approx(10.0, rel=1e-15)
    assert law.kind is ModulationKind.SINUSOIDAL


@given(st.floats(0.0, 100.0), st.floats(-20, 20), st.floats(0.1, 30))
def test_sinusoid_is_exact(t, tau, wp):
    assert eval_f(ModulationLaw.sinusoidal(tau, wp), t) == tau * np.sin(wp * t)


def test_modulation_integral_matches_quadrature():
    from scipy.integrate import quad

    law = ModulationLaw.sinusoidal(10.0, 20.0)
    for t in (0.3, 1.7, 12.0):
        ref, _ = quad(lambda s: eval_f(law, s), 0.0, t, limit=500, epsabs=1e-13)
        assert law.integral(t) == pytest.approx(ref, abs=1e-10)


class TestCoefficients:
    def test_identity_case(self):
        p = SystemParams(omega0=20000, omega_c=20000, chi0=0.2, kappa=0.01, delta=0.02)
        c = eval_coefficients(p, ModulationLaw.constant(), 5.0)
        assert (c.omega, c.omega_c, c.lam, c.chi, c.kappa, c.delta) == (20000, 20000, 1.0, 0.2, 0.01, 0.02)

    def test_coupling_doubles_when_frequency_quadruples(self):
        # f = 3 omega0 at t = pi/2
        p = SystemParams(omega0=2.0, omega_c=2.0)
        c = eval_coefficients(p, ModulationLaw.sinusoidal(6.0, 1.0), math.pi / 2)
        assert c.lam == pytest.approx(2.0, rel=1e-15)

    def test_figure3a_parameters(self):
        p = SystemParams(omega0=20000, omega_c=20000, chi0=0.2, epsilon=0.001, kappa=0.01)
        c = eval_coefficients(p, ModulationLaw.sinusoidal(10.0, 1.0), math.pi / 2)
        assert c.omega == pytest.approx(20010.0, rel=1e-15)
        assert c.chi == pytest.approx(0.21, rel=1e-14)
        assert c.lam == pytest.approx(math.sqrt(1 + 10 / 20000), rel=1e-15)
        assert c.lam == pytest.approx(1.00025, abs=1e-6)

    def test_unphysical_modulation(self):
        p = SystemParams(omega0=5.0, omega_c=5.0)
        with pytest.raises(UnphysicalModulationError):
            eval_coefficients(p, ModulationLaw.sinusoidal(10.0, 1.0), -math.pi / 2)

    def test_constant_law_is_time_independent(self):
        p = SystemParams(chi0=0.2, kappa=0.01, epsilon=0.3)
        law = ModulationLaw.constant()
        assert eval_coefficients(p, law, 0.0) == eval_coefficients(p, law, 1234.5)

    @given(st.floats(0, 200), st.floats(0, 500), st.floats(0.1, 40))
    def test_coupling_squared_tracks_frequency(self, t, tau, wp):
        p = SystemParams(omega0=1000.0, omega_c=1000.0)
        c = eval_coefficients(p, ModulationLaw.sinusoidal(tau, wp), t)
        assert c.lam**2 == pytest.approx(c.omega / p.omega0, rel=1e-12)

    def test_negative_rates_rejected(self):
        with pytest.raises(ValueError):
            SystemParams(kappa=-0.1)

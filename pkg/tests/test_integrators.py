import numpy as np
import pytest
from scipy.linalg import expm

from cpbnr.integrators import IntegrationError, StepStats, dopri5, expm2, magnus4


def test_dopri5_harmonic_phase():
    t = np.linspace(0, 20, 401)
    y = dopri5(lambda t, y: 3j * y, np.array([1.0 + 0j]), t, rtol=1e-10, atol=1e-13)
    np.testing.assert_allclose(y[:, 0], np.exp(3j * t), atol=5e-9)


def test_dopri5_dense_output_between_steps():
    # output grid much finer than the natural steps exercises the interpolant
    stats = StepStats()
    t = np.linspace(0, 5, 5001)
    y = dopri5(lambda t, y: -0.3 * y + 0j, np.array([1.0 + 0j]), t, 1e-9, 1e-12, stats=stats)
    assert stats.accepted < 500
    np.testing.assert_allclose(y[:, 0].real, np.exp(-0.3 * t), rtol=1e-8)


def test_dopri5_time_dependent_forcing():
    # y' = i cos(t) y  ->  y = exp(i sin t)
    t = np.linspace(0, 10, 101)
    y = dopri5(lambda t, y: 1j * np.cos(t) * y, np.array([1 + 0j]), t, 1e-11, 1e-14)
    np.testing.assert_allclose(y[:, 0], np.exp(1j * np.sin(t)), atol=1e-9)


def test_dopri5_tolerance_scaling():
    t = np.array([0.0, 10.0])
    exact = np.exp(5j * 10.0)
    errs = []
    for tol in (1e-6, 1e-8, 1e-10):
        y = dopri5(lambda t, y: 5j * y, np.array([1 + 0j]), t, tol, tol * 1e-3)
        errs.append(abs(y[-1, 0] - exact))
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-8


def test_dopri5_step_budget():
    with pytest.raises(IntegrationError) as info:
        dopri5(lambda t, y: 1e4j * y, np.array([1 + 0j]), [0.0, 100.0], max_steps=50)
    assert info.value.t > 0


def test_dopri5_zero_span_returns_initial():
    y0 = np.array([0.3 + 0.1j, 2.0])
    out = dopri5(lambda t, y: y, y0, [1.5])
    assert np.array_equal(out[0], y0)


def test_expm2_matches_scipy():
    rng = np.random.default_rng(0)
    m = rng.normal(size=(50, 2, 2)) + 1j * rng.normal(size=(50, 2, 2))
    m[:5] *= 1e-6  # small-argument branch
    e = expm2(m[:, 0, 0], m[:, 0, 1], m[:, 1, 0], m[:, 1, 1])
    for k in range(50):
        ref = expm(m[k])
        got = np.array([[e[0][k], e[1][k]], [e[2][k], e[3][k]]])
        np.testing.assert_allclose(got, ref, rtol=1e-12, atol=1e-14)


def test_magnus4_constant_generator_is_exact():
    a, g, b = -0.2 + 3j, -1j * 0.7, 0.1 - 2j
    gen = lambda t: (np.array([a]), np.array([g]), np.array([g]), np.array([b]))
    t = np.linspace(0, 4, 9)
    y = magnus4(gen, np.array([[1.0 + 0j], [0.0]]), t)
    for k, tk in enumerate(t):
        ref = expm(tk * np.array([[a, g], [g, b]])) @ np.array([1.0, 0.0])
        np.testing.assert_allclose(y[k, :, 0], ref, atol=1e-11)


def test_magnus4_handles_fast_scalar_phase():
    # huge common rotation plus a slowly driven exchange: solution is known in closed form
    big = 2e6
    gen = lambda t: (
        np.array([-1j * big]),
        np.array([-1j * np.cos(t)]),
        np.array([-1j * np.cos(t)]),
        np.array([-1j * big]),
    )
    t = np.linspace(0, 10, 11)
    y = magnus4(gen, np.array([[1.0 + 0j], [0.0]]), t, 1e-10, 1e-13)
    phase = np.exp(-1j * big * t)
    np.testing.assert_allclose(y[:, 0, 0], phase * np.cos(np.sin(t)), atol=1e-7)
    np.testing.assert_allclose(y[:, 1, 0], -1j * phase * np.sin(np.sin(t)), atol=1e-7)

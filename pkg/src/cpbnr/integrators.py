"""Adaptive time steppers for linear complex ODE systems.

Two schemes are provided:

* :func:`dopri5` -- the Dormand-Prince 5(4) embedded pair with a PI step-size
  controller and the classical 4th-order continuous extension for sampling on
  an arbitrary output grid.
* :func:`magnus4` -- a 4th-order Magnus exponential integrator for a batch of
  independent 2x2 generators, with step-doubling error control. The exponential
  of each 2x2 Magnus operator is taken in closed form, so arbitrarily fast
  scalar phases in the generator cost nothing in accuracy.

Both return the solution sampled at the requested output times.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class IntegrationError(RuntimeError):
    """Step size underflow or exhausted step budget; ``t`` is where it failed."""

    def __init__(self, message: str, t: float):
        super().__init__(f"{message} at t = {t:.10g}")
        self.t = t


@dataclass
class StepStats:
    accepted: int = 0
    rejected: int = 0
    evaluations: int = 0


# Dormand-Prince 5(4) coefficients
_C = (0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0)
_A = (
    (),
    (1 / 5,),
    (3 / 40, 9 / 40),
    (44 / 45, -56 / 15, 32 / 9),
    (19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729),
    (9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656),
    (35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84),
)
_E = (71 / 57600, 0.0, -71 / 16695, 71 / 1920, -17253 / 339200, 22 / 525, -1 / 40)
_D = (
    -12715105075 / 11282082432,
    0.0,
    87487479700 / 32700410799,
    -10690763975 / 1880347072,
    701980252875 / 199316789632,
    -1453857185 / 822651844,
    69997945 / 29380423,
)

_SAFETY = 0.9
_FAC_MIN = 0.2
_FAC_MAX = 10.0
_BETA = 0.04
_EXPO = 0.2 - 0.75 * _BETA


def _error_norm(err, y_old, y_new, rtol, atol):
    scale = atol + rtol * np.maximum(np.abs(y_old), np.abs(y_new))
    return float(np.max(np.abs(err) / scale))


def _initial_step(rhs, t0, y0, f0, rtol, atol, span):
    scale = atol + rtol * np.abs(y0)
    d0 = np.max(np.abs(y0) / scale)
    d1 = np.max(np.abs(f0) / scale)
    h0 = 1e-6 if d0 < 1e-5 or d1 < 1e-5 else 0.01 * d0 / d1
    h0 = min(h0, span)
    f1 = rhs(t0 + h0, y0 + h0 * f0)
    d2 = np.max(np.abs(f1 - f0) / scale) / h0
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** 0.2
    return min(100 * h0, h1, span)


def dopri5(rhs, y0, t_eval, rtol=1e-9, atol=1e-12, max_steps=10_000_000, stats=None):
    """Integrate ``y' = rhs(t, y)`` from ``t_eval[0]`` and sample at ``t_eval``.

    Returns an array of shape ``(len(t_eval),) + y0.shape``.
    """
    t_eval = np.asarray(t_eval, dtype=float)
    y = np.array(y0, dtype=complex)
    out = np.empty((t_eval.size,) + y.shape, dtype=complex)
    out[0] = y
    stats = stats if stats is not None else StepStats()
    t = float(t_eval[0])
    t_end = float(t_eval[-1])
    if t_eval.size == 1 or t_end == t:
        out[:] = y
        return out

    k1 = rhs(t, y)
    stats.evaluations += 1
    h = _initial_step(rhs, t, y, k1, rtol, atol, t_end - t)
    stats.evaluations += 1
    fac_old = 1e-4
    nxt = 1
    reject = False
    k = [None] * 7

    while nxt < t_eval.size:
        if stats.accepted + stats.rejected >= max_steps:
            raise IntegrationError(f"step budget of {max_steps} exhausted", t)
        if h < 16 * np.finfo(float).eps * max(abs(t), 1.0):
            raise IntegrationError("step size underflow", t)
        last = h >= t_end - t
        if last:
            h = t_end - t

        k[0] = k1
        for i in range(1, 7):
            acc = y.copy()
            for j, a in enumerate(_A[i]):
                if a:
                    acc += (h * a) * k[j]
            if i == 6:
                y_new = acc
            k[i] = rhs(t + _C[i] * h, acc)
        stats.evaluations += 6

        err_vec = h * sum(e * kk for e, kk in zip(_E, k) if e)
        err = _error_norm(err_vec, y, y_new, rtol, atol)

        fac11 = err**_EXPO if err > 0 else 0.0
        if err <= 1.0:
            fac = fac11 / fac_old**_BETA
            fac = min(1 / _FAC_MIN, max(1 / _FAC_MAX, fac / _SAFETY))
            h_next = h / fac
            fac_old = max(err, 1e-4)

            t_new = t_end if last else t + h
            if t_eval[nxt] <= t_new:
                ydiff = y_new - y
                bspl = h * k[0] - ydiff
                r4 = ydiff - h * k[6] - bspl
                r5 = h * sum(d * kk for d, kk in zip(_D, k) if d)
                while nxt < t_eval.size and t_eval[nxt] <= t_new:
                    if t_eval[nxt] == t_new:
                        out[nxt] = y_new
                    else:
                        th = (t_eval[nxt] - t) / h
                        th1 = 1.0 - th
                        out[nxt] = y + th * (ydiff + th1 * (bspl + th * (r4 + th1 * r5)))
                    nxt += 1

            y, t, k1 = y_new, t_new, k[6]
            stats.accepted += 1
            if reject:
                h_next = min(h_next, h)
            reject = False
            h = h_next
        else:
            h = h / min(1 / _FAC_MIN, fac11 / _SAFETY)
            reject = True
            stats.rejected += 1
    return out


# 4th-order Magnus with two Gauss-Legendre nodes
_G1 = 0.5 - np.sqrt(3.0) / 6.0
_G2 = 0.5 + np.sqrt(3.0) / 6.0
_COMM = np.sqrt(3.0) / 12.0


def expm2(m11, m12, m21, m22):
    """Closed-form exponential of a batch of 2x2 complex matrices."""
    mean = 0.5 * (m11 + m22)
    u = m11 - mean
    s = np.sqrt(u * u + m12 * m21)
    small = np.abs(s) < 1e-4
    s_safe = np.where(small, 1.0, s)
    s2 = s * s
    sinhc = np.where(small, 1.0 + s2 / 6.0 + s2 * s2 / 120.0, np.sinh(s_safe) / s_safe)
    cosh = np.cosh(s)
    e = np.exp(mean)
    return (
        e * (cosh + sinhc * u),
        e * sinhc * m12,
        e * sinhc * m21,
        e * (cosh - sinhc * u),
    )


def _magnus_step(generator, t, h, y):
    x = generator(t + _G1 * h)
    z = generator(t + _G2 * h)
    # commutator [A(t2), A(t1)]
    c11 = z[1] * x[2] - x[1] * z[2]
    c12 = x[1] * (z[0] - z[3]) - z[1] * (x[0] - x[3])
    c21 = z[2] * (x[0] - x[3]) - x[2] * (z[0] - z[3])
    w = _COMM * h * h
    e11, e12, e21, e22 = expm2(
        0.5 * h * (x[0] + z[0]) + w * c11,
        0.5 * h * (x[1] + z[1]) + w * c12,
        0.5 * h * (x[2] + z[2]) + w * c21,
        0.5 * h * (x[3] + z[3]) - w * c11,
    )
    return np.stack([e11 * y[0] + e12 * y[1], e21 * y[0] + e22 * y[1]])


def magnus4(generator, y0, t_eval, rtol=1e-9, atol=1e-12, max_steps=10_000_000, stats=None):
    """Integrate a batch of 2x2 systems ``y' = A(t) y`` and sample at ``t_eval``.

    ``generator(t)`` returns the four entries ``(A11, A12, A21, A22)``, each an
    array over the batch; ``y0`` has shape ``(2, batch)``.
    """
    t_eval = np.asarray(t_eval, dtype=float)
    y = np.array(y0, dtype=complex)
    out = np.empty((t_eval.size,) + y.shape, dtype=complex)
    out[0] = y
    stats = stats if stats is not None else StepStats()
    t = float(t_eval[0])
    h = min(1e-3, max(t_eval[-1] - t, 0.0)) or 1e-3
    nxt = 1
    while nxt < t_eval.size:
        if stats.accepted + stats.rejected >= max_steps:
            raise IntegrationError(f"step budget of {max_steps} exhausted", t)
        if h < 16 * np.finfo(float).eps * max(abs(t), 1.0):
            raise IntegrationError("step size underflow", t)
        target = t_eval[nxt]
        step = min(h, target - t)
        big = _magnus_step(generator, t, step, y)
        half = _magnus_step(generator, t, 0.5 * step, y)
        half = _magnus_step(generator, t + 0.5 * step, 0.5 * step, half)
        stats.evaluations += 6
        err = _error_norm((half - big) / 15.0, y, half, rtol, atol)
        fac = min(5.0, max(0.2, _SAFETY * err ** -0.2)) if err > 0 else 5.0
        if err <= 1.0:
            t = target if step == target - t else t + step
            y = half
            stats.accepted += 1
            if t == target:
                out[nxt] = y
                nxt += 1
            # a step clipped to the grid says nothing about the natural size
            if step == h or fac < 1.0:
                h = step * fac
        else:
            h = step * fac
            stats.rejected += 1
    return out

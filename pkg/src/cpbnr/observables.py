"""Population inversion, resonator entanglement entropy and diagnostics.

All functions accept either an :class:`AmplitudeState` or raw ``(c1, c0)``
arrays whose last axis is the Fock index, so a whole sampled trajectory can be
reduced in one call.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .state import AmplitudeState

_TINY_NORM = 1e-300


@dataclass(frozen=True)
class EntropyInputs:
    """Reduced-matrix entries <C|C>, <S|S> and <C|S>."""

    cc: float
    ss: float
    cs: complex


def _arrays(s):
    if isinstance(s, AmplitudeState):
        return s.c1, s.c0
    c1, c0 = s
    return np.asarray(c1), np.asarray(c0)


def _abs2(z):
    return z.real**2 + z.imag**2


def norm2(s):
    c1, c0 = _arrays(s)
    return _abs2(c1).sum(axis=-1) + _abs2(c0).sum(axis=-1)


def inversion(s):
    """I = sum_n |C_{1,n}|^2 - |C_{0,n+1}|^2."""
    c1, c0 = _arrays(s)
    return _abs2(c1).sum(axis=-1) - _abs2(c0[..., 1:]).sum(axis=-1)


def entropy_inputs(s) -> EntropyInputs:
    c1, c0 = _arrays(s)
    cc = _abs2(c1).sum(axis=-1)
    ss = _abs2(c0[..., 1:]).sum(axis=-1)
    # sum_n C*_{1,n+1} C_{0,n+1}: pairs neighbouring blocks
    cs = (np.conj(c1[..., 1:]) * c0[..., 1:-1]).sum(axis=-1)
    return EntropyInputs(cc, ss, cs)


def reduced_eigenvalues(inputs: EntropyInputs):
    """Eigenvalues (pi_plus, pi_minus) of the 2x2 reduced density matrix."""
    cc, ss, cs = inputs.cc, inputs.ss, inputs.cs
    trace = cc + ss
    disc = np.hypot(cc - ss, 2.0 * np.abs(cs))
    return 0.5 * (trace + disc), 0.5 * (trace - disc)


def _xlogx(p):
    p = np.asarray(p, dtype=float)
    out = np.zeros_like(p)
    pos = p > 0
    out[pos] = p[pos] * np.log(p[pos])
    return out


def entropy(s, renormalize: bool = False):
    """Von Neumann entropy (natural log) of the resonator's reduced state.

    By default the raw, possibly decayed amplitudes are used, so the entropy
    is driven to zero as losses drain the norm. With ``renormalize`` the
    reduced matrix is divided by the surviving norm first.
    """
    inputs = entropy_inputs(s)
    if renormalize:
        n2 = np.asarray(norm2(s), dtype=float)
        scale = np.where(n2 > _TINY_NORM, 1.0 / np.where(n2 > _TINY_NORM, n2, 1.0), 1.0)
        inputs = EntropyInputs(inputs.cc * scale, inputs.ss * scale, inputs.cs * scale)
    p_plus, p_minus = reduced_eigenvalues(inputs)
    out = -(_xlogx(p_plus) + _xlogx(p_minus))
    return out if out.ndim else float(out)


def mean_excitation(s):
    """Mean resonator quantum number, normalized by the surviving norm."""
    c1, c0 = _arrays(s)
    n1 = np.arange(c1.shape[-1])
    n0 = np.arange(c0.shape[-1])
    weighted = (n1 * _abs2(c1)).sum(axis=-1) + (n0 * _abs2(c0)).sum(axis=-1)
    n2 = norm2(s)
    out = np.where(n2 > 0, weighted / np.where(n2 > 0, n2, 1.0), 0.0)
    return out if out.ndim else float(out)

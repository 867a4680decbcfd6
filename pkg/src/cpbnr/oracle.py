"""Brute-force reference propagator on the full truncated Hilbert space.

The non-Hermitian Hamiltonian is assembled as a dense matrix over the joint
basis |1,n> (n = 0..n_max) followed by |0,n> (n = 0..n_max+1), and the state is
advanced by exponentiating H at the midpoint of each step. Nothing here uses
the block structure, so it serves as an independent check of
:mod:`cpbnr.dynamics`.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import expm

from .model import ModulationLaw, SystemParams, eval_coefficients
from .state import AmplitudeState

MAX_ORACLE_N = 64


@dataclass(frozen=True)
class DenseHamiltonian:
    entries: np.ndarray
    basis: tuple

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


def basis_labels(n_max: int):
    return tuple((1, n) for n in range(n_max + 1)) + tuple((0, n) for n in range(n_max + 2))


def assemble(p: SystemParams, law: ModulationLaw, t: float, n_max: int) -> DenseHamiltonian:
    if n_max < 0:
        raise ValueError("n_max must be non-negative")
    c = eval_coefficients(p, law, t)
    basis = basis_labels(n_max)
    h = np.zeros((len(basis), len(basis)), complex)
    index = {label: i for i, label in enumerate(basis)}
    for (level, n), i in index.items():
        kerr = c.chi * n * (n - 1)  # a^dag^2 a^2 |n> = n(n-1)|n>
        if level == 1:
            h[i, i] = n * c.omega + 0.5 * c.omega_c + kerr - 0.5j * (c.kappa + n * c.delta)
        else:
            h[i, i] = n * c.omega - 0.5 * c.omega_c + kerr - 0.5j * n * c.delta
    for n in range(n_max + 1):
        i, j = index[(1, n)], index[(0, n + 1)]
        h[i, j] = h[j, i] = c.lam * np.sqrt(n + 1)
    return DenseHamiltonian(h, basis)


def to_vector(s: AmplitudeState) -> np.ndarray:
    return np.concatenate([s.c1, s.c0])


def from_vector(v: np.ndarray, n_max: int, t: float) -> AmplitudeState:
    return AmplitudeState(v[: n_max + 1].copy(), v[n_max + 1 :].copy(), t)


def propagate_dense(
    s0: AmplitudeState,
    p: SystemParams,
    law: ModulationLaw,
    t_end: float,
    steps: int,
    n_max: int | None = None,
) -> AmplitudeState:
    """Midpoint-exponential propagation of ``s0`` from ``s0.t`` to ``t_end``.

    Second order in the step for time-dependent coefficients, exact (to
    matrix-exponential accuracy) when the coefficients are constant.
    """
    if n_max is not None and n_max != s0.n_max:
        raise ValueError(f"state truncated at n_max={s0.n_max}, oracle asked for {n_max}")
    if s0.n_max > MAX_ORACLE_N:
        raise ValueError(f"dense oracle is limited to n_max <= {MAX_ORACLE_N}")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if t_end == s0.t:
        return s0
    dt = (t_end - s0.t) / steps
    psi = to_vector(s0)
    for k in range(steps):
        t_mid = s0.t + (k + 0.5) * dt
        h = assemble(p, law, t_mid, s0.n_max).entries
        psi = expm(-1j * dt * h) @ psi
    return from_vector(psi, s0.n_max, t_end)

"""Truncated two-ladder amplitude state and the coherent initial condition."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

N_MAX_CAP = 4096


class ConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class AmplitudeState:
    """Amplitudes C_{1,n} (n = 0..n_max) and C_{0,n} (n = 0..n_max+1) at time t.

    Block n pairs ``c1[n]`` with ``c0[n + 1]``; ``c0[0]`` is the uncoupled
    ground state |0,0>.
    """

    c1: np.ndarray
    c0: np.ndarray
    t: float = 0.0

    def __post_init__(self):
        c1 = np.asarray(self.c1, dtype=complex)
        c0 = np.asarray(self.c0, dtype=complex)
        if c1.ndim != 1 or c1.size == 0 or c0.shape != (c1.size + 1,):
            raise ValueError(
                f"expected c1 of length n_max+1 and c0 of length n_max+2, "
                f"got {c1.shape} and {c0.shape}"
            )
        c1.setflags(write=False)
        c0.setflags(write=False)
        object.__setattr__(self, "c1", c1)
        object.__setattr__(self, "c0", c0)

    @property
    def n_max(self) -> int:
        return self.c1.size - 1

    @classmethod
    def zeros(cls, n_max: int, t: float = 0.0) -> "AmplitudeState":
        return cls(np.zeros(n_max + 1, complex), np.zeros(n_max + 2, complex), t)

    @classmethod
    def basis(cls, level: int, n: int, n_max: int) -> "AmplitudeState":
        """The product state |level, n> embedded in a truncation of size n_max."""
        c1 = np.zeros(n_max + 1, complex)
        c0 = np.zeros(n_max + 2, complex)
        (c1 if level == 1 else c0)[n] = 1.0
        return cls(c1, c0)

    def with_t(self, t: float) -> "AmplitudeState":
        return AmplitudeState(self.c1, self.c0, t)


@dataclass(frozen=True)
class CoherentSpec:
    alpha: complex
    tail_tolerance: float = 1e-12

    @classmethod
    def from_mean(cls, n_bar: float, tail_tolerance: float = 1e-12) -> "CoherentSpec":
        return cls(complex(np.sqrt(n_bar)), tail_tolerance)


def poisson_weights(alpha: complex, n_stop: int) -> np.ndarray:
    """|F_n|^2 for n = 0..n_stop-1, evaluated in log space."""
    n = np.arange(n_stop)
    mean = abs(alpha) ** 2
    if mean == 0.0:
        w = np.zeros(n_stop)
        w[0] = 1.0
        return w
    return np.exp(-mean + n * np.log(mean) - gammaln(n + 1))


def truncation_index(alpha: complex, tail_tolerance: float) -> int:
    """Smallest n_max with sum_{n > n_max} |F_n|^2 < tail_tolerance."""
    mean = abs(alpha) ** 2
    n_stop = min(N_MAX_CAP + 1, int(mean + 40 * np.sqrt(mean) + 200))
    w = poisson_weights(alpha, n_stop)
    # tail[k] = sum of w[k+1:], summed from the small end
    tail = np.concatenate([np.cumsum(w[::-1])[::-1][1:], [0.0]])
    ok = np.flatnonzero(tail < tail_tolerance)
    if ok.size == 0 or ok[0] > N_MAX_CAP:
        raise ConfigurationError(
            f"|alpha|^2 = {mean:g} needs more than {N_MAX_CAP} Fock levels"
        )
    return int(ok[0])


def coherent_init(spec: CoherentSpec, n_max: int | None = None) -> AmplitudeState:
    """Qubit excited, resonator in |alpha>: C_{1,n} = F_n and all C_{0,n} = 0.

    ``n_max`` overrides the adaptive truncation (the amplitudes are then the
    plain, unrenormalized F_n up to that index).
    """
    if not 0.0 < spec.tail_tolerance < 1.0:
        raise ConfigurationError(
            f"tail_tolerance must lie in (0, 1), got {spec.tail_tolerance}"
        )
    alpha = complex(spec.alpha)
    if not np.isfinite(abs(alpha)):
        raise ConfigurationError("alpha must be finite")
    if n_max is None:
        n_max = truncation_index(alpha, spec.tail_tolerance)
    elif not 0 <= n_max <= N_MAX_CAP:
        raise ConfigurationError(f"n_max must lie in [0, {N_MAX_CAP}], got {n_max}")

    n = np.arange(n_max + 1)
    if alpha == 0:
        c1 = np.zeros(n_max + 1, complex)
        c1[0] = 1.0
    else:
        log_mod = -0.5 * abs(alpha) ** 2 + n * np.log(abs(alpha)) - 0.5 * gammaln(n + 1)
        c1 = np.exp(log_mod + 1j * n * np.angle(alpha))
    return AmplitudeState(c1, np.zeros(n_max + 2, complex))


def norm_squared(s: AmplitudeState) -> float:
    return float(np.vdot(s.c1, s.c1).real + np.vdot(s.c0, s.c0).real)

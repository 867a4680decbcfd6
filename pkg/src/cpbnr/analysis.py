"""Scalar summaries of a sampled trajectory."""
from __future__ import annotations

import math

import numpy as np

PLATEAU_WINDOW = (5.0, 15.0)


def _window(times, values, t0, t1):
    mask = (times >= t0) & (times <= t1)
    return np.asarray(values)[mask]


def window_average(times, values, t0, t1) -> float:
    vals = _window(times, values, t0, t1)
    return float(vals.mean()) if vals.size else math.nan


def envelope(times, values, t0, t1) -> float:
    """Peak-to-peak excursion max - min over [t0, t1]."""
    vals = _window(times, values, t0, t1)
    return float(vals.max() - vals.min()) if vals.size else math.nan


def decay_time(times, values, fraction=0.01) -> float:
    """First time after the global maximum at which ``values`` drops to
    ``fraction`` of that maximum; NaN if it never does within the record."""
    values = np.asarray(values)
    k = int(np.argmax(values))
    below = np.flatnonzero(values[k:] <= fraction * values[k])
    return float(times[k + below[0]]) if below.size else math.nan


def summarize(record, plateau=PLATEAU_WINDOW) -> dict:
    k = int(np.argmax(record.entropy))
    return {
        "plateau_window": list(plateau),
        "plateau_inversion": window_average(record.times, record.inversion, *plateau),
        "entropy_max": float(record.entropy[k]),
        "entropy_max_time": float(record.times[k]),
        "entropy_time_to_1pct_of_max": decay_time(record.times, record.entropy, 0.01),
        "final_norm2": float(record.norm2[-1]),
    }

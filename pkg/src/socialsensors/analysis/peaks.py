"""Peak detection and lead times."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidParameterError, NoEpidemicError


@dataclass(frozen=True)
class PeakReport:
    peak_time: int  # 1-based step
    peak_value: float
    window: int


def first_argmax(x, rtol: float = 0.0, atol: float = 0.0) -> int:
    """Index of the first entry within ``atol + rtol * max|x|`` of the maximum."""
    x = np.asarray(x, dtype=float)
    top = x.max()
    slack = atol + (rtol * float(np.max(np.abs(x))) if rtol else 0.0)
    return int(np.flatnonzero(x >= top - slack)[0])


def moving_average(series, window: int) -> np.ndarray:
    """Centered moving average with zero padding outside the series.

    The divisor is always ``window``, so appending zeros never changes the
    smoothed values inside the original range.  Even windows reach one step
    further forward than back.
    """
    x = np.asarray(series, dtype=float)
    if window < 1:
        raise InvalidParameterError(f"smoothing window must be >= 1, got {window}")
    if window == 1:
        return x.copy()
    back = (window - 1) // 2
    ahead = window - 1 - back
    c = np.concatenate([[0.0], np.cumsum(x)])
    idx = np.arange(x.size)
    hi = np.minimum(idx + ahead + 1, x.size)
    lo = np.maximum(idx - back, 0)
    return (c[hi] - c[lo]) / window


def peak_time(series, smoothing_window: int = 1) -> PeakReport:
    """Smooth, then take the earliest argmax.

    Raises:
        NoEpidemicError: if the series is all zeros.
    """
    x = np.asarray(series, dtype=float)
    if x.size == 0:
        raise InvalidParameterError("series is empty")
    if not np.any(x):
        raise NoEpidemicError("no epidemic: series is identically zero")
    smooth = moving_average(x, smoothing_window)
    i = first_argmax(smooth, rtol=1e-12 if smoothing_window > 1 else 0.0)
    return PeakReport(i + 1, float(smooth[i]), smoothing_window)


def lead_time(population: PeakReport, sensor: PeakReport) -> int:
    """Steps by which the sensor group peaks before the population (negative if after)."""
    return int(population.peak_time) - int(sensor.peak_time)

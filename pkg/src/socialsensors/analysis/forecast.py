"""Cubic-trend forecast of the population peak from data observed shortly after a sensor peak."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidParameterError
from .peaks import first_argmax

DEFAULT_LAG = 100
DEFAULT_HORIZON = 500

# relative slack for ties in the fitted incidence
_TIE_RTOL = 1e-9


@dataclass(frozen=True)
class ForecastReport:
    """Fitted cubic and the population peak it implies.

    Attributes:
        coefficients: Power-basis coefficients ``c0..c3`` of the fitted
            cumulative curve ``C(t) = c0 + c1 t + c2 t^2 + c3 t^3``.
        training_end: Last observed step used for fitting (``sensor_peak + lag``).
        window_end: Last step of the prediction window (``sensor_peak + horizon``).
        predicted_peak: Step of largest fitted incidence ``C(t) - C(t-1)``.
        actual_peak: Observed population peak, if supplied.
        method: Sensor group that triggered the forecast.
    """

    coefficients: tuple[float, float, float, float]
    sensor_peak: int
    training_end: int
    window_end: int
    predicted_peak: int
    actual_peak: int | None = None
    method: str = ""

    @property
    def error(self) -> int | None:
        """Signed ``predicted - actual``."""
        return None if self.actual_peak is None else self.predicted_peak - self.actual_peak

    @property
    def bias(self) -> int | None:
        """Absolute peak-time difference ``|predicted - actual|``."""
        return None if self.actual_peak is None else abs(self.error)

    def fitted_cumulative(self, t) -> np.ndarray:
        return np.polynomial.Polynomial(self.coefficients)(np.asarray(t, dtype=float))


def forecast_peak_cubic(
    population_cumulative,
    sensor_peak: int,
    lag: int = DEFAULT_LAG,
    horizon: int = DEFAULT_HORIZON,
    actual_peak: int | None = None,
    method: str = "",
) -> ForecastReport:
    """Fit a cubic in time to cumulative incidence and read off the incidence peak.

    The fit uses observed steps ``1..sensor_peak + lag``; the fitted curve is
    then evaluated on ``1..sensor_peak + horizon`` (or the training window if
    that is longer), and the predicted peak is the earliest step maximizing
    the fitted first difference.

    Args:
        population_cumulative: Observed cumulative infections, index ``t - 1``.
        sensor_peak: 1-based peak step of the sensor group.
        lag: Steps of data used past the sensor peak.
        horizon: Prediction window length past the sensor peak.
        actual_peak: Observed population peak, for the bias column.

    Raises:
        InvalidParameterError: if fewer than 4 points are available or the
            series is shorter than the training window.
    """
    y = np.asarray(population_cumulative, dtype=float)
    if sensor_peak < 1 or lag < 0 or horizon < 0:
        raise InvalidParameterError("sensor_peak must be >= 1 and lag, horizon >= 0")
    training_end = int(sensor_peak) + int(lag)
    if training_end > y.size:
        raise InvalidParameterError(
            f"need data through step {training_end} (sensor peak {sensor_peak} + lag {lag}); "
            f"only {y.size} steps observed"
        )
    if training_end < 4:
        raise InvalidParameterError(f"a cubic needs at least 4 points, got {training_end}")
    t = np.arange(1, training_end + 1, dtype=float)
    fit = np.polynomial.Polynomial.fit(t, y[:training_end], 3)
    window_end = max(int(sensor_peak) + int(horizon), training_end)
    curve = fit(np.arange(0, window_end + 1, dtype=float))
    incidence = np.diff(curve)
    # differences of large cumulative values carry rounding noise of order eps * |C|
    noise = 64 * np.finfo(float).eps * float(np.max(np.abs(curve)))
    predicted = first_argmax(incidence, rtol=_TIE_RTOL, atol=noise) + 1
    coef = np.zeros(4)
    c = fit.convert().coef
    coef[: c.size] = c
    return ForecastReport(
        tuple(float(v) for v in coef),
        int(sensor_peak),
        training_end,
        window_end,
        int(predicted),
        None if actual_peak is None else int(actual_peak),
        method,
    )

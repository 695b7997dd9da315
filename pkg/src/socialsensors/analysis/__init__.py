from .benchmark import BenchmarkResult, ReplicationResult, benchmark, run_replication
from .estimators import RateEstimates, estimate_beta_mom, estimate_gamma_mom, estimate_rates
from .forecast import ForecastReport, forecast_peak_cubic
from .peaks import PeakReport, lead_time, moving_average, peak_time

__all__ = [
    "BenchmarkResult",
    "ForecastReport",
    "PeakReport",
    "RateEstimates",
    "ReplicationResult",
    "benchmark",
    "estimate_beta_mom",
    "estimate_gamma_mom",
    "estimate_rates",
    "forecast_peak_cubic",
    "lead_time",
    "moving_average",
    "peak_time",
    "run_replication",
]

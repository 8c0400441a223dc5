from .config import GaugeConfig
from .families import (
    DEFAULT_CUTOFF_LN,
    FAlphaBeta,
    FEps,
    Gauge,
    HAlpha,
    HAlphaBeta,
    PowerDelta,
)
from .lognum import LOG_ZERO, LogNum, log_sum
from .tower import LN_MAX, Tower

__all__ = [
    "DEFAULT_CUTOFF_LN",
    "LN_MAX",
    "LOG_ZERO",
    "FAlphaBeta",
    "FEps",
    "Gauge",
    "GaugeConfig",
    "HAlpha",
    "HAlphaBeta",
    "LogNum",
    "PowerDelta",
    "Tower",
    "log_sum",
]

from .base import BallProfile, MeasuredSet
from .cantor import CantorLevel, CantorSpec, build_cantor
from .config import (
    CantorSetConfig,
    ExplicitRule,
    GaugeRule,
    IntervalSetConfig,
    PeriodicSetConfig,
    SetConfig,
)
from .frostman import (
    FrostmanBall,
    FrostmanCertificate,
    SubdivisionReport,
    best_subinterval_content,
    content_upper,
    frostman_lower,
)
from .intervals import IntervalUnion
from .thickness import PeriodicSet, ThicknessReport, thickness_report

__all__ = [
    "BallProfile",
    "CantorLevel",
    "CantorSetConfig",
    "CantorSpec",
    "ExplicitRule",
    "FrostmanBall",
    "FrostmanCertificate",
    "GaugeRule",
    "IntervalSetConfig",
    "IntervalUnion",
    "MeasuredSet",
    "PeriodicSet",
    "PeriodicSetConfig",
    "SetConfig",
    "SubdivisionReport",
    "ThicknessReport",
    "best_subinterval_content",
    "build_cantor",
    "content_upper",
    "frostman_lower",
    "thickness_report",
]

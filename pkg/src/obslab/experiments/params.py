"""
Per-experiment parameter tables.

Every model forbids unknown keys; set and gauge entries reuse the fractal
and gauge configuration models and are turned into domain objects by their
build() methods.
"""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from obslab.fractal import CantorSetConfig, IntervalSetConfig, PeriodicSetConfig
from obslab.gauge import GaugeConfig
from obslab.lemniscate import ENSEMBLES
from obslab.lemniscate.polynomial import Ensemble

ExperimentName = Literal[
    "content",
    "thickness",
    "cartan",
    "lemniscate",
    "remez",
    "propagation",
    "jensen",
    "spectral-cost",
    "nazarov-turan",
    "bernstein",
    "uncertainty",
    "heat-ratio",
    "counterexample",
    "lr-schedule",
    "capacity",
    "slicing",
]


class Params(BaseModel):
    model_config = ConfigDict(extra="forbid", frozen=True)


class ContentParams(Params):
    cantor: CantorSetConfig
    # defaults to the gauge driving the Cantor rule
    gauge: GaugeConfig | None = None


class ThicknessParams(Params):
    window_set: PeriodicSetConfig
    gauge: GaugeConfig
    L: float = Field(gt=0)
    windows: int = Field(default=16, ge=1)


class CartanParams(Params):
    gauge: GaugeConfig
    degrees: list[int] = Field(min_length=1)
    ln_H: list[float] = Field(min_length=1)
    trials: int = Field(ge=1)
    ensembles: list[Ensemble] = Field(default_factory=lambda: list(ENSEMBLES))
    samples: int = Field(default=100_000, ge=0)
    box_samples: int = Field(default=100_000, ge=0)


class LemniscateParams(Params):
    alphas: list[float] = Field(min_length=1)
    degrees: list[int] = Field(min_length=1)
    ln_deltas: list[float] = Field(min_length=1)
    trials: int = Field(ge=1)
    ensembles: list[Ensemble] = Field(default_factory=lambda: list(ENSEMBLES[:2]))
    fit_max_n: int | None = None


class RemezParams(Params):
    cantor: CantorSetConfig
    alpha: float = Field(ge=0)
    degrees: list[int] = Field(min_length=1)
    trials: int = Field(ge=1)
    ensembles: list[Ensemble] = Field(default_factory=lambda: list(ENSEMBLES))
    fit_max_n: int | None = None


class PropagationParams(Params):
    cantor: CantorSetConfig
    alpha: float = Field(ge=0)
    degrees: list[int] = Field(min_length=1)
    trials: int = Field(ge=1)
    eps_count: int = Field(default=8, ge=1)
    ln_eps_lo: float = -12.0
    # random Dirichlet expansions on (0, 1) with eigenvalues up to lam
    spectral_trials: int = Field(default=0, ge=0)
    lam: float = Field(default=100.0, gt=0)
    taylor_order: int = Field(default=160, ge=1)


class JensenParams(Params):
    degrees: list[int] = Field(min_length=1)
    trials: int = Field(ge=1)
    ensembles: list[Ensemble] = Field(default_factory=lambda: list(ENSEMBLES))


class SpectralCostParams(Params):
    cantor: CantorSetConfig
    alpha: float = Field(ge=0)
    lambdas: list[float] = Field(min_length=1)
    trials: int = Field(ge=1)
    L: float = Field(default=1.0, gt=0)


class NazarovTuranParams(Params):
    observed: IntervalSetConfig
    orders: list[int] = Field(min_length=1)
    trials: int = Field(ge=1)
    interval: tuple[float, float] = (0.0, 1.0)
    re_max: float = Field(default=10.0, ge=0)
    im_max: float = Field(default=20.0, ge=0)


class BernsteinParams(Params):
    bandwidths: list[float] = Field(min_length=1)
    m_max: int = Field(default=4, ge=1, le=8)
    trials: int = Field(ge=1)
    W: int = Field(default=64, ge=1)
    # cells are classified with A = A_factor * fitted C
    A_factor: float = Field(default=2.0, gt=0)
    m_cap: int = Field(default=12, ge=1)


class UncertaintyParams(Params):
    window_set: PeriodicSetConfig
    alpha: float = Field(ge=0)
    L: float = Field(gt=0)
    bandwidths: list[float] = Field(min_length=1)
    trials: int = Field(ge=1)
    W: int = Field(default=64, ge=1)
    gamma: float | None = None


class HeatRatioParams(Params):
    cantor: CantorSetConfig
    lam: float = Field(gt=0)
    times: list[float] = Field(min_length=1)
    trials: int = Field(ge=1)
    L: float = Field(default=1.0, gt=0)


class CounterexampleParams(Params):
    eps: float = Field(gt=0)
    levels: int = Field(ge=1)
    T: float = Field(default=1.0, gt=0)
    alpha: float = Field(default=1.0, ge=0)


class TelescopingParams(Params):
    cantor: CantorSetConfig
    modes: int = Field(default=16, ge=1)
    first: int = Field(default=1, ge=1)
    last: int = Field(default=8, ge=2)


class LRScheduleParams(Params):
    alpha: float = Field(gt=0)
    C: float = Field(gt=0)
    L: float = Field(default=1.0, gt=0)
    lam1: float | None = None
    n_max: int = Field(default=200, ge=2)
    T: float | None = Field(default=None, gt=0)
    target: float | None = None
    telescoping: TelescopingParams | None = None


class BallParams(Params):
    r: float = Field(gt=0)
    d: Literal[1, 2] = 1
    per_axis: int = Field(default=64, ge=1)


class CapacityParams(Params):
    cantor: CantorSetConfig
    gauge: GaugeConfig
    eps_shift: float = 0.5
    depths: list[int] = Field(default_factory=list)
    balls: list[BallParams] = Field(default_factory=list)


class SlicingParams(Params):
    x: CantorSetConfig
    y: CantorSetConfig
    alpha: float = Field(ge=0)
    beta: float = Field(ge=0)
    depths: list[int] = Field(min_length=1)
    offsets: int = Field(default=1000, ge=1)
    keep: float = Field(default=1.0, gt=0, le=1)
    # leading depths used to fit (k, c); all of them when unset
    fit_count: int | None = Field(default=None, ge=1)

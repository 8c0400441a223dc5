"""Pydantic model describing a gauge in experiment configuration."""

from typing import Literal

from pydantic import BaseModel, ConfigDict

from obslab.gauge.families import (
    DEFAULT_CUTOFF_LN,
    FAlphaBeta,
    FEps,
    Gauge,
    HAlpha,
    HAlphaBeta,
    PowerDelta,
)

GaugeFamily = Literal["h_alpha", "h_alpha_beta", "f_alpha_beta", "power", "f_eps"]


class GaugeConfig(BaseModel):
    """`{family, alpha?, beta?, delta?, eps?, d?}` as written in a config file."""

    model_config = ConfigDict(extra="forbid", frozen=True)

    family: GaugeFamily
    alpha: float = 0.0
    beta: float = 1.0
    delta: float = 1.0
    eps: float = 0.0
    d: int = 1
    cutoff_ln: float = DEFAULT_CUTOFF_LN

    def build(self) -> Gauge:
        match self.family:
            case "h_alpha":
                return HAlpha(alpha=self.alpha, cutoff_ln=self.cutoff_ln)
            case "h_alpha_beta":
                return HAlphaBeta(
                    alpha=self.alpha, beta=self.beta, cutoff_ln=self.cutoff_ln
                )
            case "f_alpha_beta":
                return FAlphaBeta(
                    alpha=self.alpha, beta=self.beta, d=self.d, cutoff_ln=self.cutoff_ln
                )
            case "power":
                return PowerDelta(delta=self.delta, cutoff_ln=self.cutoff_ln)
            case "f_eps":
                return FEps(eps=self.eps, cutoff_ln=self.cutoff_ln)

"""Pydantic models for set specifications in experiment configuration."""

from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from obslab.fractal.cantor import MAX_DEPTH, CantorLevel, CantorSpec, build_cantor
from obslab.fractal.intervals import IntervalUnion
from obslab.fractal.thickness import PeriodicSet
from obslab.gauge import GaugeConfig


class GaugeRule(BaseModel):
    """Lengths solving g(c_k) = scale * 2^{-k}."""

    model_config = ConfigDict(extra="forbid")

    gauge: GaugeConfig
    scale: float = Field(default=1.0, gt=0)


class ExplicitRule(BaseModel):
    """Lengths given as ln c_1, ln c_2, ..."""

    model_config = ConfigDict(extra="forbid")

    ln_lengths: list[float]


class CantorSetConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    type: Literal["cantor"] = "cantor"
    rule: GaugeRule | ExplicitRule
    depth: int = Field(ge=0, le=MAX_DEPTH)
    base: tuple[float, float] = (0.0, 1.0)

    def spec(self) -> CantorSpec:
        if isinstance(self.rule, GaugeRule):
            return CantorSpec(
                base=self.base, gauge=self.rule.gauge.build(), scale=self.rule.scale
            )
        return CantorSpec(base=self.base, ln_lengths=tuple(self.rule.ln_lengths))

    def build(self) -> CantorLevel:
        return build_cantor(self.spec(), self.depth)


class IntervalSetConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    type: Literal["intervals"] = "intervals"
    intervals: list[tuple[float, float]]

    def build(self) -> IntervalUnion:
        return IntervalUnion.from_pairs(self.intervals)


SetConfig = CantorSetConfig | IntervalSetConfig


class PeriodicSetConfig(BaseModel):
    model_config = ConfigDict(extra="forbid")

    cell: CantorSetConfig | IntervalSetConfig = Field(discriminator="type")
    period: int = Field(default=1, ge=1)
    occupied: tuple[int, ...] = (0,)

    def build(self) -> PeriodicSet:
        return PeriodicSet(
            cell=self.cell.build(), period=self.period, occupied=self.occupied
        )

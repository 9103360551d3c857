import math
from pathlib import Path

import numpy as np
from pydantic import Field, model_validator

from recoherence.models.base import RecoItemBase
from recoherence.models.enums import EntropyUnit, EnvKind, ExperimentKind, InitialStateName
from recoherence.models.environment import EnvParticle, ModelParams

DEFAULT_PHIS = (0.0, math.pi / 8, math.pi / 6, math.pi / 4)


class KrausFileRef(RecoItemBase):
    kraus_file: Path
    selective: bool = False


OperatorRef = str | KrausFileRef


class TimeGrid(RecoItemBase):
    """Inclusive grid ``count`` points from ``start`` to ``stop``."""

    start: float = Field(0.0, ge=0, allow_inf_nan=False)
    stop: float = Field(8.0, ge=0, allow_inf_nan=False)
    count: int = Field(81, ge=1)

    @model_validator(mode="after")
    def _increasing(self) -> "TimeGrid":
        if self.stop < self.start or (self.count > 1 and self.stop == self.start):
            raise ValueError(f"time grid must increase, got start={self.start} stop={self.stop}")
        return self

    def values(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.start])
        return np.linspace(self.start, self.stop, self.count)


class ModelSection(RecoItemBase):
    kind: EnvKind = EnvKind.LORENTZIAN
    n: int = Field(5, ge=1)
    g: float = 1.0
    gamma: float = Field(1.0, gt=0)
    p_plus: float = Field(0.5, ge=0, le=1)
    particles: tuple[EnvParticle, ...] | None = None

    def to_params(self) -> ModelParams:
        if self.particles:
            return ModelParams(particles=self.particles)
        return ModelParams.homogeneous(self.n, kind=self.kind, g=self.g, gamma=self.gamma, p_plus=self.p_plus)


class InsertionSection(RecoItemBase):
    time: float = Field(..., ge=0)
    operator: OperatorRef = "sx"


class CertifierSection(RecoItemBase):
    epsilon: float = Field(0.1, ge=0)
    tau: float = Field(0.5, ge=0)
    controls: tuple[OperatorRef, ...] = ("I", "flip")
    max_ops: int = Field(1, ge=1)
    initial_states: tuple[InitialStateName, ...] = (
        InitialStateName.PLUS,
        InitialStateName.ZERO,
        InitialStateName.PLUS_I,
    )
    projectors: str | tuple[tuple[tuple[float | tuple[float, float], ...], ...], ...] = "pointer"


class ExperimentSection(RecoItemBase):
    """Experiment parameters.

    When ``scaled_times`` is true every time below is given in units of Gamma_E * t.
    """

    kind: ExperimentKind = ExperimentKind.SIEVE
    scaled_times: bool | None = None
    times: TimeGrid = TimeGrid()
    phis: tuple[float, ...] = DEFAULT_PHIS
    initial_state: InitialStateName = InitialStateName.PLUS
    t_star: float = Field(2.0, ge=0)
    flip_times: tuple[float, ...] = ()
    compare_n: tuple[int, ...] = ()
    fragment_sizes: tuple[int, ...] | None = None
    darwinism_time: float | None = None
    insertions: tuple[InsertionSection, ...] = ()
    history_times: tuple[float, ...] = Field((1.0, 2.0, 3.0), min_length=1, max_length=6)
    lgi_times: tuple[float, ...] = Field((0.5, 1.0, 1.5, 2.0, 3.0), min_length=3)
    operators: tuple[str, ...] = ("I", "sx", "sy", "sz")
    correlator_times: tuple[float, float] = Field((1.0, 2.0), description="(s, t) with s <= t.")
    regression_rate: float | None = Field(None, gt=0, description="Master-equation rate; Gamma_E when unset.")
    channels: tuple[OperatorRef, ...] = ("I", "flip", "phase")
    certifier: CertifierSection = CertifierSection()

    @model_validator(mode="after")
    def _correlator_order(self) -> "ExperimentSection":
        s, t = self.correlator_times
        if s > t:
            raise ValueError(f"correlator_times must be (s, t) with s <= t, got ({s}, {t})")
        return self


class OutputSection(RecoItemBase):
    path: Path | None = None
    units: EntropyUnit = EntropyUnit.NATS


class ExperimentConfig(RecoItemBase):
    model: ModelSection = ModelSection()
    experiment: ExperimentSection = ExperimentSection()
    output: OutputSection = OutputSection()

    @model_validator(mode="after")
    def _scaling_needs_rate(self) -> "ExperimentConfig":
        if self.experiment.scaled_times and not self.model.to_params().is_lorentzian:
            raise ValueError("scaled_times requires an all-Lorentzian model (Gamma_E is undefined otherwise)")
        return self

    @property
    def uses_scaled_times(self) -> bool:
        if self.experiment.scaled_times is None:
            return self.model.to_params().is_lorentzian
        return self.experiment.scaled_times

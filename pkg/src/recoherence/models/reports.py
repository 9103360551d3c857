from typing import Literal

import numpy as np
import pandas as pd
from pydantic import ConfigDict, Field, SerializeAsAny, computed_field, field_validator, model_validator

from recoherence.models.base import ComplexMatrix, ComplexValue, RecoItemBase
from recoherence.models.enums import EntropyUnit, ExperimentKind, OracleMode
from recoherence.models.states import ControlChannel, SystemAmplitudes


class Insertion(RecoItemBase):
    """A local operator applied at ``time`` inside a history or a free run."""

    time: float = Field(..., ge=0, allow_inf_nan=False)
    matrix: ComplexMatrix
    label: str = ""


class HistorySpec(RecoItemBase):
    times: tuple[float, ...] = Field(..., min_length=1)
    labels: tuple[Literal[0, 1], ...]
    insertions: tuple[Insertion, ...] = ()

    @model_validator(mode="after")
    def _ordered(self) -> "HistorySpec":
        if any(t < 0 for t in self.times):
            raise ValueError("history times must be nonnegative")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise ValueError(f"history times must be strictly increasing, got {self.times}")
        if len(self.labels) != len(self.times):
            raise ValueError("one label per history time is required")
        for insertion in self.insertions:
            if insertion.time > self.times[-1]:
                raise ValueError(f"insertion at {insertion.time} lies after the last projection time")
        return self


class CorrelatorReport(RecoItemBase):
    """Exact value next to the regression (Markov) prediction of the same quantity."""

    exact: ComplexValue
    regression: ComplexValue
    observables: tuple[str, ...]
    t: float
    s: float
    initial_state: SystemAmplitudes
    label: str = ""

    @computed_field  # type: ignore[prop-decorator]
    @property
    def discrepancy(self) -> float:
        return abs(self.exact - self.regression)


class SieveTable(RecoItemBase):
    phis: tuple[float, ...]
    times: tuple[float, ...]
    rate: float | None = Field(None, description="Gamma_E, when every particle is Lorentzian.")
    unit: EntropyUnit = EntropyUnit.NATS
    entropy: np.ndarray = Field(..., exclude=True, description="Entropy indexed by (phi, time).")

    def column(self, phi_index: int) -> np.ndarray:
        return self.entropy[phi_index]


class FragmentReport(RecoItemBase):
    size: int
    indices: tuple[int, ...]
    t: float
    overlap: ComplexValue
    rate: float | None = None
    expected_overlap: float | None = None
    mutual_information: float
    unit: EntropyUnit = EntropyUnit.NATS

    @computed_field  # type: ignore[prop-decorator]
    @property
    def rate_deviation(self) -> float | None:
        if self.expected_overlap is None:
            return None
        return abs(self.overlap - self.expected_overlap)


class DecoherenceFunctional(RecoItemBase):
    """D(z, z') = <psi(z')|psi(z)> over every label sequence for the given times."""

    times: tuple[float, ...]
    histories: tuple[tuple[int, ...], ...]
    matrix: ComplexMatrix
    insertions: tuple[Insertion, ...] = ()

    @computed_field  # type: ignore[prop-decorator]
    @property
    def max_off_diagonal(self) -> float:
        off = self.matrix - np.diag(np.diag(self.matrix))
        return float(np.abs(off).max()) if off.size else 0.0

    @computed_field  # type: ignore[prop-decorator]
    @property
    def diagonal_sum(self) -> float:
        return float(np.trace(self.matrix).real)

    @property
    def probabilities(self) -> dict[tuple[int, ...], float]:
        return {h: float(self.matrix[i, i].real) for i, h in enumerate(self.histories)}


class LgiReport(RecoItemBase):
    times: tuple[float, float, float]
    c21: float
    c32: float
    c31: float

    @computed_field  # type: ignore[prop-decorator]
    @property
    def k3(self) -> float:
        return self.c21 + self.c32 - self.c31


class CertifierConfig(RecoItemBase):
    epsilon: float = Field(..., ge=0)
    tau: float = Field(..., ge=0)
    controls: tuple[ControlChannel, ...] = Field(..., min_length=1)
    max_ops: int = Field(1, ge=1)
    times: tuple[float, ...] = Field(..., min_length=1)
    initial_states: tuple[SystemAmplitudes, ...] = Field(..., min_length=1)

    @field_validator("times")
    @classmethod
    def _grid(cls, value: tuple[float, ...]) -> tuple[float, ...]:
        if any(t < 0 for t in value):
            raise ValueError("certifier times must be nonnegative")
        return tuple(sorted(set(value)))


class Witness(RecoItemBase):
    controls: tuple[str, ...]
    control_indices: tuple[int, ...]
    outcomes: tuple[int | None, ...]
    times: tuple[float, ...]
    probe_time: float
    initial_state: SystemAmplitudes
    distance: float


class CertifierVerdict(RecoItemBase):
    passed: bool = Field(..., alias="pass")
    worst_distance: float = Field(..., ge=0)
    epsilon: float
    tau: float
    candidates: int = 0
    skipped: int = 0
    witness: Witness | None = None

    model_config = ConfigDict(populate_by_name=True)

    @model_validator(mode="after")
    def _witness_iff_fail(self) -> "CertifierVerdict":
        if self.passed == (self.witness is not None):
            raise ValueError("a witness is reported exactly when the verdict fails")
        return self


class QrtReport(RecoItemBase):
    """Pauli-pair two-time correlators and intervention rows, exact next to the regression prediction."""

    rate: float
    t_star: float
    pairs: tuple[CorrelatorReport, ...]
    interventions: tuple[CorrelatorReport, ...]

    @computed_field  # type: ignore[prop-decorator]
    @property
    def max_discrepancy(self) -> float:
        return max((row.discrepancy for row in (*self.pairs, *self.interventions)), default=0.0)


class OracleCheck(RecoItemBase):
    mode: OracleMode
    deviation: float = Field(..., ge=0)
    tolerance: float

    @computed_field  # type: ignore[prop-decorator]
    @property
    def within_tolerance(self) -> bool:
        return self.deviation <= self.tolerance


class ExperimentResult(RecoItemBase):
    """What one experiment run produced: a CSV table or a JSON document, plus its self-checks.

    ``violation`` names the first failed self-check; ``passed`` is only set by the certifier.
    """

    kind: ExperimentKind
    config_sha256: str
    table: pd.DataFrame | None = Field(None, exclude=True)
    document: SerializeAsAny[RecoItemBase] | None = None
    oracle: OracleCheck | None = None
    violation: str | None = None
    passed: bool | None = Field(None, exclude=True)

    @property
    def is_table(self) -> bool:
        return self.table is not None

import math
from typing import Literal

import numpy as np
from pydantic import Field, field_validator

from recoherence.models.base import ComplexMatrix, ComplexValue, RecoItemBase
from recoherence.models.environment import Fragment, ModelParams


class Branch(RecoItemBase):
    """One summand a |z> (x) prod_j exp(i g_j q_j theta / 2)|chi_j> of the global state."""

    label: Literal[0, 1]
    amplitude: ComplexValue
    theta: float = Field(..., allow_inf_nan=False, description="Signed accumulated interaction time.")

    @field_validator("amplitude")
    @classmethod
    def _finite(cls, value: complex) -> complex:
        if not (math.isfinite(value.real) and math.isfinite(value.imag)):
            raise ValueError("branch amplitude must be finite")
        return value


class BranchLedger(RecoItemBase):
    """Exact global state as a superposition of branches.

    Ledgers are values: every engine operation returns a new ledger.
    """

    branches: tuple[Branch, ...]
    params: ModelParams
    normalized: bool = True

    @field_validator("branches")
    @classmethod
    def _merged(cls, value: tuple[Branch, ...]) -> tuple[Branch, ...]:
        keys = [(b.label, b.theta) for b in value]
        if len(set(keys)) != len(keys):
            raise ValueError("branches with identical (label, theta) must be merged")
        return value

    def __len__(self) -> int:
        return len(self.branches)

    @property
    def labels(self) -> np.ndarray:
        return np.array([b.label for b in self.branches], dtype=int)

    @property
    def amplitudes(self) -> np.ndarray:
        return np.array([b.amplitude for b in self.branches], dtype=np.complex128)

    @property
    def thetas(self) -> np.ndarray:
        return np.array([b.theta for b in self.branches], dtype=float)

    def branches_for(self, label: int) -> tuple[Branch, ...]:
        return tuple(b for b in self.branches if b.label == label)


class BranchDecomposition(RecoItemBase):
    """Per-label probabilities and fragment Gram matrices of a ledger.

    ``branching_form`` is False when some pointer label carries more than one branch; the Gram
    matrices are then those of the aggregated per-label fragment vectors.
    """

    labels: tuple[int, ...]
    probabilities: tuple[float, ...]
    fragment: Fragment
    fragment_gram: ComplexMatrix
    complement_gram: ComplexMatrix
    branching_form: bool = True
    degenerate: bool = False

    @property
    def fragment_overlap(self) -> complex | None:
        """<phi_0|phi_1>_F, or None when only one pointer label is populated."""
        if len(self.labels) < 2:
            return None
        return complex(self.fragment_gram[0, 1])

    @property
    def complement_overlap(self) -> complex | None:
        if len(self.labels) < 2:
            return None
        return complex(self.complement_gram[0, 1])

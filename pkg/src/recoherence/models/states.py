import math

import numpy as np
from pydantic import Field, field_validator, model_validator

from recoherence.models.base import ComplexMatrix, ComplexValue, RecoItemBase
from recoherence.models.enums import InitialStateName
from recoherence.models.mixins import PauliExpectationMixin

NORMALIZATION_TOL = 1e-12


class SystemAmplitudes(RecoItemBase):
    alpha: ComplexValue
    beta: ComplexValue

    @model_validator(mode="after")
    def _normalized(self) -> "SystemAmplitudes":
        norm = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(norm - 1) > NORMALIZATION_TOL:
            raise ValueError(f"|alpha|^2 + |beta|^2 must be 1, got {norm!r}")
        return self

    @classmethod
    def pointer(cls, label: int) -> "SystemAmplitudes":
        return cls(alpha=1.0, beta=0.0) if label == 0 else cls(alpha=0.0, beta=1.0)

    @classmethod
    def plus(cls) -> "SystemAmplitudes":
        return cls(alpha=1 / math.sqrt(2), beta=1 / math.sqrt(2))

    @classmethod
    def from_angle(cls, phi: float) -> "SystemAmplitudes":
        """The state exp(-i phi sigma_y)|0> = cos(phi)|0> + sin(phi)|1>."""
        return cls(alpha=math.cos(phi), beta=math.sin(phi))

    @classmethod
    def named(cls, name: str | InitialStateName) -> "SystemAmplitudes":
        s = 1 / math.sqrt(2)
        match InitialStateName(name):
            case InitialStateName.ZERO:
                return cls.pointer(0)
            case InitialStateName.ONE:
                return cls.pointer(1)
            case InitialStateName.PLUS:
                return cls.plus()
            case InitialStateName.MINUS:
                return cls(alpha=s, beta=-s)
            case InitialStateName.PLUS_I:
                return cls(alpha=s, beta=1j * s)

    @property
    def vector(self) -> np.ndarray:
        return np.array([self.alpha, self.beta], dtype=np.complex128)

    def density(self) -> "DensityMatrix2":
        v = self.vector
        return DensityMatrix2(rho=np.outer(v, v.conj()))


class DensityMatrix2(RecoItemBase, PauliExpectationMixin):
    """A qubit density matrix in the pointer basis."""

    rho: ComplexMatrix

    @field_validator("rho")
    @classmethod
    def _valid_state(cls, value: np.ndarray) -> np.ndarray:
        if value.shape != (2, 2):
            raise ValueError(f"expected a 2x2 matrix, got shape {value.shape}")
        if not np.allclose(value, value.conj().T, rtol=0, atol=NORMALIZATION_TOL):
            raise ValueError("density matrix must be Hermitian")
        trace = np.trace(value)
        if abs(trace - 1) > NORMALIZATION_TOL:
            raise ValueError(f"density matrix must have unit trace, got {trace!r}")
        min_eig = float(np.linalg.eigvalsh(value).min())
        if min_eig < -NORMALIZATION_TOL:
            raise ValueError(f"density matrix must be positive semidefinite, min eigenvalue {min_eig!r}")
        return value

    def expectation(self, observable: np.ndarray) -> complex:
        return complex(np.trace(observable @ self.rho))


class ControlChannel(RecoItemBase):
    """A CPTP map on the system, rho -> sum_a K_a rho K_a^dagger.

    A ``selective`` channel is read as an instrument: each Kraus operator is one conditional outcome.
    """

    kraus: tuple[ComplexMatrix, ...] = Field(..., min_length=1)
    name: str = "custom"
    selective: bool = False

    @field_validator("kraus")
    @classmethod
    def _complete(cls, value: tuple[np.ndarray, ...]) -> tuple[np.ndarray, ...]:
        for k in value:
            if k.shape != (2, 2):
                raise ValueError(f"Kraus operators must be 2x2, got shape {k.shape}")
        total = sum((k.conj().T @ k for k in value), np.zeros((2, 2), dtype=np.complex128))
        if not np.allclose(total, np.eye(2), rtol=0, atol=NORMALIZATION_TOL):
            raise ValueError("Kraus operators must satisfy sum K^dagger K = I")
        return value

    @classmethod
    def unitary(cls, matrix: np.ndarray, name: str) -> "ControlChannel":
        return cls(kraus=(matrix,), name=name)

    @classmethod
    def identity(cls) -> "ControlChannel":
        return cls(kraus=(np.eye(2),), name="I")

    @classmethod
    def flip(cls) -> "ControlChannel":
        return cls(kraus=(np.array([[0, 1], [1, 0]]),), name="flip")

    @classmethod
    def phase(cls) -> "ControlChannel":
        return cls(kraus=(np.array([[-1, 0], [0, 1]]),), name="phase")

    def apply(self, matrix: np.ndarray) -> np.ndarray:
        """Apply the channel to any 2x2 matrix (linear extension)."""
        return sum((k @ matrix @ k.conj().T for k in self.kraus), np.zeros((2, 2), dtype=np.complex128))

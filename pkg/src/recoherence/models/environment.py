import math
from collections.abc import Iterable
from typing import Annotated, Literal

import numpy as np
from numpy.typing import ArrayLike
from pydantic import Field, field_validator, model_validator

from recoherence.models.base import RecoItemBase
from recoherence.models.enums import EnvKind


class LorentzianParticle(RecoItemBase):
    """Environment particle whose initial position distribution is Lorentzian with scale ``gamma``."""

    kind: Literal["lorentzian"] = "lorentzian"
    g: float = Field(..., allow_inf_nan=False, description="Coupling strength, in rate units.")
    gamma: float = Field(..., gt=0, allow_inf_nan=False)

    def characteristic(self, u: ArrayLike) -> np.ndarray:
        return np.exp(-abs(self.g) * self.gamma * np.abs(np.asarray(u, dtype=float))).astype(np.complex128)


class DichotomicParticle(RecoItemBase):
    """Environment spin whose coupled observable takes the values q = +1 / -1."""

    kind: Literal["dichotomic"] = "dichotomic"
    g: float = Field(..., allow_inf_nan=False)
    p_plus: float = Field(..., ge=0, le=1)

    def characteristic(self, u: ArrayLike) -> np.ndarray:
        phase = self.g * np.asarray(u, dtype=float)
        return self.p_plus * np.exp(1j * phase) + (1 - self.p_plus) * np.exp(-1j * phase)


EnvParticle = Annotated[LorentzianParticle | DichotomicParticle, Field(discriminator="kind")]


class Fragment(RecoItemBase):
    """A subset of the 1-based environment index set."""

    indices: frozenset[int] = frozenset()

    @field_validator("indices")
    @classmethod
    def _positive_indices(cls, value: frozenset[int]) -> frozenset[int]:
        if any(index < 1 for index in value):
            raise ValueError(f"fragment indices are 1-based, got {sorted(value)}")
        return value

    @classmethod
    def of(cls, indices: Iterable[int]) -> "Fragment":
        return cls(indices=frozenset(indices))

    @classmethod
    def prefix(cls, size: int) -> "Fragment":
        """The contiguous fragment {1, ..., size}."""
        return cls(indices=frozenset(range(1, size + 1)))

    def __len__(self) -> int:
        return len(self.indices)

    def complement(self, params: "ModelParams") -> "Fragment":
        return Fragment(indices=params.environment.indices - self.indices)

    def sorted(self) -> list[int]:
        return sorted(self.indices)


class ModelParams(RecoItemBase):
    particles: tuple[EnvParticle, ...] = Field(..., min_length=1)

    @model_validator(mode="after")
    def _finite_couplings(self) -> "ModelParams":
        for index, particle in enumerate(self.particles, start=1):
            if not math.isfinite(particle.g):
                raise ValueError(f"particle {index} has a non-finite coupling")
        return self

    @classmethod
    def homogeneous(
        cls,
        n: int,
        kind: EnvKind = EnvKind.LORENTZIAN,
        g: float = 1.0,
        gamma: float = 1.0,
        p_plus: float = 0.5,
    ) -> "ModelParams":
        """N identical particles, g = gamma = 1 unless given."""
        particle: LorentzianParticle | DichotomicParticle
        if kind == EnvKind.LORENTZIAN:
            particle = LorentzianParticle(g=g, gamma=gamma)
        else:
            particle = DichotomicParticle(g=g, p_plus=p_plus)
        return cls(particles=(particle,) * n)

    @property
    def n(self) -> int:
        return len(self.particles)

    @property
    def environment(self) -> Fragment:
        return Fragment(indices=frozenset(range(1, self.n + 1)))

    @property
    def is_lorentzian(self) -> bool:
        return all(p.kind == EnvKind.LORENTZIAN for p in self.particles)

    @property
    def is_dichotomic(self) -> bool:
        return all(p.kind == EnvKind.DICHOTOMIC for p in self.particles)

    def particle(self, index: int) -> LorentzianParticle | DichotomicParticle:
        return self.particles[index - 1]

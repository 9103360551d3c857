import numpy as np
from pydantic import Field, model_validator

from recoherence.models.base import RecoItemBase
from recoherence.models.environment import ModelParams


class GridSpec(RecoItemBase):
    """Uniform midpoint grid of ``points`` positions over [-cutoff, cutoff]."""

    cutoff: float = Field(..., gt=0, allow_inf_nan=False)
    points: int = Field(..., ge=2)

    @model_validator(mode="after")
    def _even(self) -> "GridSpec":
        if self.points % 2:
            raise ValueError(f"grid point count must be even, got {self.points}")
        return self

    @classmethod
    def default_for(cls, params: ModelParams) -> "GridSpec":
        gamma_max = max((getattr(p, "gamma", 0.0) for p in params.particles), default=1.0) or 1.0
        return cls(cutoff=4000.0 * gamma_max, points=2**15)

    @property
    def positions(self) -> np.ndarray:
        spacing = 2 * self.cutoff / self.points
        return -self.cutoff + spacing * (np.arange(self.points) + 0.5)


class OracleState(RecoItemBase):
    """Dense state vector over system (x) particle_1 (x) ... (x) particle_N.

    ``amplitudes`` has shape ``dims``; ``positions[j-1]`` holds the q values of particle j's basis.
    """

    amplitudes: np.ndarray
    positions: tuple[np.ndarray, ...]
    params: ModelParams
    normalized: bool = True

    @model_validator(mode="after")
    def _consistent(self) -> "OracleState":
        if self.amplitudes.shape != self.dims:
            raise ValueError(f"amplitude tensor shape {self.amplitudes.shape} does not match dims {self.dims}")
        if self.normalized:
            norm = float(np.vdot(self.amplitudes, self.amplitudes).real)
            if abs(norm - 1) > 1e-10:
                raise ValueError(f"normalized oracle state has norm {norm!r}")
        return self

    @property
    def dims(self) -> tuple[int, ...]:
        return (2, *(len(q) for q in self.positions))

    @property
    def size(self) -> int:
        return int(np.prod(self.dims))

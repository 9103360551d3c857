from typing import Annotated, Literal

from pydantic import Field

from recoherence.models.base import ComplexMatrix, RecoItemBase


class Evolve(RecoItemBase):
    """Free evolution under the coupling Hamiltonian for ``dt``."""

    type: Literal["evolve"] = "evolve"
    dt: float = Field(..., allow_inf_nan=False)


class Operate(RecoItemBase):
    """A local operator M acting on the system only."""

    type: Literal["operate"] = "operate"
    matrix: ComplexMatrix
    label: str = ""
    renormalize: bool = False


Step = Annotated[Evolve | Operate, Field(discriminator="type")]

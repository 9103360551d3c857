from collections.abc import Mapping, Sequence
from typing import Annotated, Any, ClassVar

import numpy as np
from pydantic import BaseModel, BeforeValidator, ConfigDict, PlainSerializer


def as_complex(value: Any) -> complex:
    """Coerce a number, an ``[re, im]`` pair or a ``{"re": .., "im": ..}`` mapping to ``complex``."""
    if isinstance(value, Mapping):
        return complex(float(value.get("re", 0.0)), float(value.get("im", 0.0)))
    if isinstance(value, Sequence) and not isinstance(value, str):
        if len(value) != 2:
            raise ValueError(f"complex pair must have two entries, got {len(value)}")
        return complex(float(value[0]), float(value[1]))
    return complex(value)


def complex_to_json(value: complex) -> dict[str, float]:
    return {"re": value.real, "im": value.imag}


def as_complex_matrix(value: Any) -> np.ndarray:
    """Coerce an array or a list of rows into a read-only ``complex128`` matrix."""
    if isinstance(value, np.ndarray):
        matrix = np.array(value, dtype=np.complex128)
    else:
        matrix = np.array([[as_complex(entry) for entry in row] for row in value], dtype=np.complex128)

    if matrix.ndim != 2:
        raise ValueError(f"expected a matrix, got an array of shape {matrix.shape}")
    if not np.all(np.isfinite(matrix)):
        raise ValueError("matrix entries must be finite")

    matrix.flags.writeable = False
    return matrix


def matrix_to_json(value: np.ndarray) -> list[list[dict[str, float]]]:
    return [[complex_to_json(complex(entry)) for entry in row] for row in value]


ComplexValue = Annotated[complex, BeforeValidator(as_complex), PlainSerializer(complex_to_json)]
ComplexMatrix = Annotated[np.ndarray, BeforeValidator(as_complex_matrix), PlainSerializer(matrix_to_json)]


class RecoItemBase(BaseModel):
    model_config: ClassVar[ConfigDict] = ConfigDict(arbitrary_types_allowed=True, frozen=True, extra="forbid")

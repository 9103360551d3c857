"""Single-qubit operators in the pointer basis {|0>, |1>}.

sigma_z follows the pointer convention sigma_z = |1><1| - |0><0|, so |0> has eigenvalue -1.
"""

import numpy as np

from recoherence.exceptions import UnknownOperatorError
from recoherence.models.enums import OperatorName


def _frozen(matrix: np.ndarray) -> np.ndarray:
    matrix = np.asarray(matrix, dtype=np.complex128)
    matrix.flags.writeable = False
    return matrix


IDENTITY = _frozen(np.eye(2))
SIGMA_X = _frozen([[0, 1], [1, 0]])
SIGMA_Y = _frozen([[0, -1j], [1j, 0]])
SIGMA_Z = _frozen([[-1, 0], [0, 1]])
PROJECTORS = (_frozen([[1, 0], [0, 0]]), _frozen([[0, 0], [0, 1]]))

# eigenvalue of sigma_z on each pointer label
POINTER_SIGNS = (-1, 1)

PAULI_BASIS = {
    OperatorName.I: IDENTITY,
    OperatorName.SX: SIGMA_X,
    OperatorName.SY: SIGMA_Y,
    OperatorName.SZ: SIGMA_Z,
}

_NAMED = {
    **PAULI_BASIS,
    OperatorName.FLIP: SIGMA_X,
    OperatorName.PHASE: SIGMA_Z,
}


def named_operator(name: str | OperatorName) -> np.ndarray:
    """Look up an operator by its config name (case-insensitive).

    Raises:
        UnknownOperatorError: If the name is not one of ``I, sx, sy, sz, flip, phase``.
    """
    try:
        key = name if isinstance(name, OperatorName) else OperatorName.get_case_insensitive(name)
    except KeyError:
        valid = [item.value for item in OperatorName]
        raise UnknownOperatorError(
            f"Unknown operator {name!r}; valid names are {', '.join(valid)} or a custom Kraus file", valid
        ) from None
    return _NAMED[key]


def is_unitary(matrix: np.ndarray, atol: float = 1e-12) -> bool:
    return bool(np.allclose(matrix.conj().T @ matrix, np.eye(matrix.shape[0]), rtol=0, atol=atol))

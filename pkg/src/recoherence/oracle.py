"""Brute-force state-vector simulation, used to check the analytic engine.

The joint state is a dense tensor over system (x) particle_1 (x) ... (x) particle_N. The Hamiltonian is
diagonal in the (sigma_z, q) product basis, so propagation is an elementwise phase.
"""

import math
from collections.abc import Iterable, Sequence
from functools import reduce
from logging import getLogger

import numpy as np
from numpy.typing import ArrayLike
from scipy.special import entr

from recoherence.exceptions import (
    AnnihilatedStateError,
    GridRequiredError,
    InvalidFragmentError,
    NotPositiveSemidefiniteError,
    ReductionTooLargeError,
)
from recoherence.models import (
    DensityMatrix2,
    EntropyUnit,
    EnvKind,
    Evolve,
    Fragment,
    GridSpec,
    ModelParams,
    Operate,
    OracleState,
    Step,
    SystemAmplitudes,
)
from recoherence.operators import POINTER_SIGNS, is_unitary

LOGGER = getLogger(__name__)

MAX_REDUCED_DIMENSION = 2**14
MAX_STATE_SIZE = 2**24
PSD_TOL = 1e-10
ANNIHILATION_NORM = 1e-14
DICHOTOMIC_POSITIONS = np.array([1.0, -1.0])


def _particle_amplitudes(params: ModelParams, index: int, grid: GridSpec | None) -> tuple[np.ndarray, np.ndarray]:
    particle = params.particle(index)
    if particle.kind == EnvKind.DICHOTOMIC:
        p_plus = particle.p_plus  # type: ignore[union-attr]
        amplitudes = np.array([math.sqrt(p_plus), math.sqrt(1 - p_plus)], dtype=np.complex128)
        return DICHOTOMIC_POSITIONS, amplitudes

    if grid is None:
        raise GridRequiredError(f"Lorentzian particle {index} needs a position grid", index)

    gamma = particle.gamma  # type: ignore[union-attr]
    q = grid.positions
    amplitudes = np.sqrt(gamma / np.pi) / (q + 1j * gamma)
    return q, amplitudes / np.linalg.norm(amplitudes)


def build_initial(sys: SystemAmplitudes, params: ModelParams, grid: GridSpec | None = None) -> OracleState:
    """Product state of the system amplitudes and every particle's initial wave function.

    Raises:
        GridRequiredError: If a Lorentzian particle is present and no grid is given.
        ReductionTooLargeError: If the joint state would exceed 2**24 amplitudes.
    """
    factors = [_particle_amplitudes(params, index, grid) for index in range(1, params.n + 1)]
    size = 2 * math.prod(len(q) for q, _ in factors)
    if size > MAX_STATE_SIZE:
        raise ReductionTooLargeError(f"joint state dimension {size} exceeds {MAX_STATE_SIZE}", size)

    amplitudes = reduce(np.multiply.outer, (a for _, a in factors), sys.vector)
    return OracleState(
        amplitudes=np.asarray(amplitudes, dtype=np.complex128),
        positions=tuple(q for q, _ in factors),
        params=params,
    )


def _coupling_field(state: OracleState) -> np.ndarray:
    """sum_j g_j q_j over the joint environment basis."""
    n = state.params.n
    field = np.zeros(state.dims[1:], dtype=float)
    for axis, q in enumerate(state.positions):
        shape = [1] * n
        shape[axis] = len(q)
        field = field + state.params.particle(axis + 1).g * q.reshape(shape)
    return field


def propagate(state: OracleState, dt: float) -> OracleState:
    """Multiply every amplitude by exp(-i (s_z / 2) sum_j g_j q_j dt); negative dt is allowed here."""
    if dt == 0:
        return state

    field = _coupling_field(state)
    phases = np.stack([np.exp(-0.5j * sign * field * dt) for sign in POINTER_SIGNS])
    return state.model_copy(update={"amplitudes": state.amplitudes * phases})


def _norm(amplitudes: np.ndarray) -> float:
    return float(np.vdot(amplitudes, amplitudes).real)


def apply_system_op(state: OracleState, matrix: np.ndarray, renormalize: bool = False) -> OracleState:
    """Apply M (x) 1_E.

    Raises:
        AnnihilatedStateError: If renormalization is requested on a state of norm below 1e-14.
    """
    matrix = np.asarray(matrix, dtype=np.complex128)
    amplitudes = np.tensordot(matrix, state.amplitudes, axes=([1], [0]))
    normalized = state.normalized and is_unitary(matrix)

    if renormalize:
        norm = _norm(amplitudes)
        if norm < ANNIHILATION_NORM:
            raise AnnihilatedStateError(f"annihilated state: norm {norm:.3e} after projection", norm)
        amplitudes = amplitudes / math.sqrt(norm)
        normalized = True

    return OracleState(amplitudes=amplitudes, positions=state.positions, params=state.params, normalized=normalized)


def run_steps(state: OracleState, steps: Sequence[Step]) -> OracleState:
    for step in steps:
        if isinstance(step, Evolve):
            state = propagate(state, step.dt)
        elif isinstance(step, Operate):
            state = apply_system_op(state, step.matrix, renormalize=step.renormalize)
    return state


def overlap(state_a: OracleState, state_b: OracleState) -> complex:
    return complex(np.vdot(state_a.amplitudes, state_b.amplitudes))


def reduced(state: OracleState, keep: Iterable[int]) -> np.ndarray:
    """Density matrix over the kept subsystems (0 is the system, j the j-th particle), in index order.

    Raises:
        InvalidFragmentError: If ``keep`` is empty or names an unknown subsystem.
        ReductionTooLargeError: If the kept dimension exceeds 2**14.
    """
    kept = sorted(set(keep))
    if not kept or kept[0] < 0 or kept[-1] > state.params.n:
        raise InvalidFragmentError(f"cannot reduce onto subsystems {kept}", kept)

    dimension = math.prod(state.dims[axis] for axis in kept)
    if dimension > MAX_REDUCED_DIMENSION:
        raise ReductionTooLargeError(f"reduced dimension {dimension} exceeds {MAX_REDUCED_DIMENSION}", dimension)

    traced = [axis for axis in range(len(state.dims)) if axis not in kept]
    psi = np.transpose(state.amplitudes, kept + traced).reshape(dimension, -1)
    return psi @ psi.conj().T


def system_density(state: OracleState) -> DensityMatrix2:
    return DensityMatrix2(rho=reduced(state, [0]))


def vn_entropy(rho: DensityMatrix2 | np.ndarray, unit: EntropyUnit = EntropyUnit.NATS) -> float:
    """-sum lambda ln lambda, with 0 ln 0 = 0 and eigenvalues clipped to [0, 1].

    Raises:
        NotPositiveSemidefiniteError: If an eigenvalue is below -1e-10.
    """
    matrix = rho.rho if isinstance(rho, DensityMatrix2) else np.asarray(rho)
    eigenvalues = np.linalg.eigvalsh((matrix + matrix.conj().T) / 2)
    if eigenvalues.min() < -PSD_TOL:
        raise NotPositiveSemidefiniteError(
            f"matrix is not positive semidefinite (min eigenvalue {eigenvalues.min():.3e})", float(eigenvalues.min())
        )

    entropy = float(entr(np.clip(eigenvalues, 0.0, 1.0)).sum())
    if unit == EntropyUnit.BITS:
        return entropy / math.log(2)
    return entropy


def mutual_information(state: OracleState, frag: Fragment, unit: EntropyUnit = EntropyUnit.NATS) -> float:
    """I(S:F) = S(rho_S) + S(rho_F) - S(rho_SF)."""
    if not frag.indices:
        return 0.0

    fragment = frag.sorted()
    return (
        vn_entropy(reduced(state, [0]), unit)
        + vn_entropy(reduced(state, fragment), unit)
        - vn_entropy(reduced(state, [0, *fragment]), unit)
    )


def particle_characteristic(state: OracleState, index: int, u: ArrayLike) -> np.ndarray | complex:
    """<exp(i g_j q_j u)> in the marginal position distribution of particle ``index``."""
    axes = tuple(axis for axis in range(len(state.dims)) if axis != index)
    probabilities = np.sum(np.abs(state.amplitudes) ** 2, axis=axes)
    probabilities = probabilities / probabilities.sum()

    u_arr = np.asarray(u, dtype=float)
    g = state.params.particle(index).g
    value = np.exp(1j * g * np.multiply.outer(u_arr, state.positions[index - 1])) @ probabilities
    if u_arr.ndim == 0:
        return complex(value)
    return value


class GridKernel:
    """Environment kernel assembled from per-particle oracle characteristic functions.

    Joint grids over several Lorentzian particles are out of reach, but the particles never interact,
    so per-particle states suffice. Each particle gets its own default grid unless ``grid`` is given.
    """

    def __init__(self, params: ModelParams, grid: GridSpec | None = None):
        self.params = params
        self._marginals: dict[int, tuple[np.ndarray, np.ndarray]] = {}
        for index in range(1, params.n + 1):
            single = ModelParams(particles=(params.particle(index),))
            state = build_initial(SystemAmplitudes.pointer(0), single, grid or GridSpec.default_for(single))
            probabilities = np.abs(state.amplitudes[0]) ** 2
            self._marginals[index] = (state.positions[0], probabilities / probabilities.sum())

    def fragment(self, frag: Fragment, u: ArrayLike) -> np.ndarray:
        u_arr = np.asarray(u, dtype=float)
        value = np.ones(u_arr.shape, dtype=np.complex128)
        for index in frag.sorted():
            q, probabilities = self._marginals[index]
            g = self.params.particle(index).g
            value = value * (np.exp(1j * g * np.multiply.outer(u_arr, q)) @ probabilities)
        return value

    def __call__(self, u: ArrayLike) -> np.ndarray:
        return self.fragment(self.params.environment, u)


def grid_kernel(params: ModelParams, frag: Fragment, u: ArrayLike, grid: GridSpec | None = None) -> np.ndarray:
    """Fragment kernel as a product of single-particle grid characteristic functions."""
    return GridKernel(params, grid).fragment(frag, u)


def system_matrix(initial: OracleState, paths: Iterable[Sequence[Step]]) -> np.ndarray:
    """Sum of the reduced system matrices reached along each Kraus path (unnormalized)."""
    total = np.zeros((2, 2), dtype=np.complex128)
    for steps in paths:
        total = total + reduced(run_steps(initial, steps), [0])
    return total

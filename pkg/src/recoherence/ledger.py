"""Exact propagation of the global state as a ledger of (label, amplitude, theta) branches.

A branch (z, a, theta) stands for a |z> (x) prod_j exp(i g_j q_j theta / 2) |chi_j>. Free evolution
only moves theta (by +dt for z = 0, -dt for z = 1), local operators only mix labels and amplitudes,
and every inner product reduces to the environment kernel at (theta_l - theta_k) / 2.
"""

from collections.abc import Callable, Iterable, Sequence
from logging import getLogger

import numpy as np

from recoherence.environment import check_fragment, environment_kernel, kernel
from recoherence.exceptions import (
    AnnihilatedStateError,
    NegativeTimeError,
    ParamsMismatchError,
    UnnormalizedLedgerError,
)
from recoherence.models import (
    Branch,
    BranchDecomposition,
    BranchLedger,
    DensityMatrix2,
    Evolve,
    Fragment,
    ModelParams,
    Operate,
    Step,
    SystemAmplitudes,
)
from recoherence.operators import is_unitary

LOGGER = getLogger(__name__)

# sign of theta advance per pointer label
EVOLUTION_SIGNS = (1, -1)
THETA_MERGE_TOL = 1e-12
RELATIVE_AMPLITUDE_FLOOR = 1e-15
ANNIHILATION_NORM = 1e-14
NORM_TOL = 1e-10


def _merged(params: ModelParams, raw: Iterable[tuple[int, complex, float]], normalized: bool) -> BranchLedger:
    """Merge branches sharing (label, theta) and drop vanishing amplitudes."""
    ordered = sorted(raw, key=lambda b: (b[0], b[2]))

    merged: list[tuple[int, complex, float]] = []
    for label, amplitude, theta in ordered:
        if merged:
            last_label, last_amplitude, last_theta = merged[-1]
            if last_label == label and abs(last_theta - theta) <= THETA_MERGE_TOL * max(1.0, abs(theta)):
                merged[-1] = (label, last_amplitude + amplitude, last_theta)
                continue
        merged.append((label, amplitude, theta))

    scale = max((abs(b[1]) for b in merged), default=0.0)
    branches = tuple(
        Branch(label=label, amplitude=amplitude, theta=theta)
        for label, amplitude, theta in merged
        if abs(amplitude) > RELATIVE_AMPLITUDE_FLOOR * scale
    )
    return BranchLedger(branches=branches, params=params, normalized=normalized)


def initial_ledger(sys: SystemAmplitudes, params: ModelParams) -> BranchLedger:
    """The product state (alpha|0> + beta|1>) (x) prod_j |chi_j(0)>."""
    raw = [(0, sys.alpha, 0.0), (1, sys.beta, 0.0)]
    return _merged(params, (b for b in raw if b[1] != 0), normalized=True)


def evolve(ledger: BranchLedger, dt: float) -> BranchLedger:
    """Free evolution for ``dt`` >= 0.

    Raises:
        NegativeTimeError: If ``dt`` is negative; time reversal is done with a sigma_x echo instead.
    """
    if dt < 0:
        raise NegativeTimeError(f"evolve requires dt >= 0, got {dt}", dt)
    if dt == 0:
        return ledger

    raw = ((b.label, b.amplitude, b.theta + EVOLUTION_SIGNS[b.label] * dt) for b in ledger.branches)
    return _merged(ledger.params, raw, ledger.normalized)


def apply_operator(ledger: BranchLedger, matrix: np.ndarray, renormalize: bool = False) -> BranchLedger:
    """Apply M (x) 1_E; theta is untouched since M acts on the system only.

    The result stays normalized when the input was and M is unitary, or when ``renormalize`` is set.

    Raises:
        AnnihilatedStateError: If renormalization is requested on a state of norm below 1e-14.
    """
    matrix = np.asarray(matrix, dtype=np.complex128)
    raw = []
    for b in ledger.branches:
        for target in (0, 1):
            element = matrix[target, b.label]
            if element != 0:
                raw.append((target, complex(element * b.amplitude), b.theta))

    result = _merged(ledger.params, raw, normalized=ledger.normalized and is_unitary(matrix))
    LOGGER.debug(f"Operator applied, {len(ledger)} -> {len(result)} branches")

    if not renormalize:
        return result

    norm = gram_norm(result)
    if norm < ANNIHILATION_NORM:
        raise AnnihilatedStateError(f"annihilated state: norm {norm:.3e} after projection", norm)

    scale = 1 / np.sqrt(norm)
    return BranchLedger(
        branches=tuple(b.model_copy(update={"amplitude": b.amplitude * scale}) for b in result.branches),
        params=result.params,
        normalized=True,
    )


def run_steps(ledger: BranchLedger, steps: Sequence[Step]) -> BranchLedger:
    for step in steps:
        if isinstance(step, Evolve):
            ledger = evolve(ledger, step.dt)
        elif isinstance(step, Operate):
            ledger = apply_operator(ledger, step.matrix, renormalize=step.renormalize)
    return ledger


def global_overlap(ledger_a: BranchLedger, ledger_b: BranchLedger) -> complex:
    """<A|B> for two ledgers over the same environment; ledgers need not be normalized.

    Raises:
        ParamsMismatchError: If the ledgers were built for different models.
    """
    if ledger_a.params != ledger_b.params:
        raise ParamsMismatchError("ledgers belong to different model parameters")
    if not ledger_a.branches or not ledger_b.branches:
        return 0j

    same_label = ledger_a.labels[:, None] == ledger_b.labels[None, :]
    u = (ledger_b.thetas[None, :] - ledger_a.thetas[:, None]) / 2
    weights = ledger_a.amplitudes.conj()[:, None] * ledger_b.amplitudes[None, :]
    return complex(np.sum(np.where(same_label, weights * environment_kernel(ledger_a.params, u), 0)))


def gram_norm(ledger: BranchLedger) -> float:
    return float(global_overlap(ledger, ledger).real)


def reduced_matrix(
    ledger: BranchLedger, env_kernel: Callable[[np.ndarray], np.ndarray] | None = None
) -> np.ndarray:
    """tr_E |Psi><Psi| without any normalization check (history and Kraus-branch states).

    ``env_kernel`` replaces the analytic environment kernel, e.g. by a grid-sampled one.
    """
    rho = np.zeros((2, 2), dtype=np.complex128)
    if not ledger.branches:
        return rho

    labels, amplitudes, thetas = ledger.labels, ledger.amplitudes, ledger.thetas
    u = (thetas[:, None] - thetas[None, :]) / 2
    values = env_kernel(u) if env_kernel is not None else environment_kernel(ledger.params, u)
    weights = amplitudes[:, None] * amplitudes.conj()[None, :] * values
    for z in (0, 1):
        for z_prime in (0, 1):
            rho[z, z_prime] = weights[np.ix_(labels == z, labels == z_prime)].sum()

    return (rho + rho.conj().T) / 2


def reduced_density(ledger: BranchLedger) -> DensityMatrix2:
    """Reduced system state of a normalized ledger.

    Raises:
        UnnormalizedLedgerError: If the ledger is flagged unnormalized or its norm is off by more than 1e-10.
    """
    if not ledger.normalized:
        raise UnnormalizedLedgerError("reduced_density requires a normalized ledger")

    rho = reduced_matrix(ledger)
    trace = float(np.trace(rho).real)
    if abs(trace - 1) > NORM_TOL:
        raise UnnormalizedLedgerError(f"ledger norm {trace!r} differs from 1", trace)
    return DensityMatrix2(rho=rho / trace)


def _label_gram(ledger: BranchLedger, labels: Sequence[int], frag: Fragment) -> tuple[np.ndarray, bool]:
    """Normalized Gram matrix of the per-label fragment vectors sum_{k: z_k = z} a_k |env_k>_F.

    Each label's vector is rephased by its first branch amplitude, so with one branch per label the
    entries reduce to kappa_F((theta_z' - theta_z) / 2).
    """
    vectors = []
    for z in labels:
        group = ledger.branches_for(z)
        reference = group[0].amplitude / abs(group[0].amplitude)
        vectors.append(
            (
                np.array([b.amplitude / reference for b in group], dtype=np.complex128),
                np.array([b.theta for b in group], dtype=float),
            )
        )

    size = len(labels)
    gram = np.zeros((size, size), dtype=np.complex128)
    for i, (amp_i, theta_i) in enumerate(vectors):
        for j, (amp_j, theta_j) in enumerate(vectors):
            u = (theta_j[None, :] - theta_i[:, None]) / 2
            gram[i, j] = np.sum(amp_i.conj()[:, None] * amp_j[None, :] * kernel(ledger.params, frag, u))

    norms = np.sqrt(np.clip(np.diag(gram).real, 0, None))
    vanished = bool(np.any(norms == 0))
    norms[norms == 0] = 1.0
    return gram / np.outer(norms, norms), vanished


def branch_decomposition(ledger: BranchLedger, frag: Fragment) -> BranchDecomposition:
    """Probabilities and fragment / complement Gram matrices of the branching form.

    Raises:
        UnnormalizedLedgerError: If the ledger is not normalized.
        InvalidFragmentError: If ``frag`` is not part of the environment.
    """
    check_fragment(ledger.params, frag)
    rho = reduced_density(ledger).rho

    labels = tuple(z for z in (0, 1) if ledger.branches_for(z))
    complement = frag.complement(ledger.params)
    fragment_gram, fragment_vanished = _label_gram(ledger, labels, frag)
    complement_gram, complement_vanished = _label_gram(ledger, labels, complement)

    return BranchDecomposition(
        labels=labels,
        probabilities=tuple(float(rho[z, z].real) for z in labels),
        fragment=frag,
        fragment_gram=fragment_gram,
        complement_gram=complement_gram,
        branching_form=all(len(ledger.branches_for(z)) == 1 for z in labels),
        degenerate=not frag.indices or not complement.indices or fragment_vanished or complement_vanished,
    )

"""Classicality diagnostics: predictability sieve, quantum Darwinism, decoherent histories,
Leggett-Garg K3, and the (epsilon, tau)-pointer-state certifier."""

import itertools
import math
from collections.abc import Iterable, Sequence
from logging import getLogger

import numpy as np
from humanize import intcomma

from recoherence.environment import environment_rate, fragment_rate
from recoherence.exceptions import (
    BranchingFormError,
    InvalidFragmentError,
    InvalidProjectorSetError,
    RateUndefinedError,
    TimeOrderingError,
)
from recoherence.ledger import (
    branch_decomposition,
    evolve,
    gram_norm,
    global_overlap,
    initial_ledger,
    reduced_density,
    reduced_matrix,
    run_steps,
)
from recoherence.models import (
    BranchDecomposition,
    BranchLedger,
    CertifierConfig,
    CertifierVerdict,
    ControlChannel,
    DecoherenceFunctional,
    EntropyUnit,
    Evolve,
    Fragment,
    FragmentReport,
    HistorySpec,
    Insertion,
    LgiReport,
    ModelParams,
    Operate,
    SieveTable,
    Step,
    SystemAmplitudes,
    Witness,
)
from recoherence.operators import POINTER_SIGNS, PROJECTORS
from recoherence.oracle import vn_entropy

LOGGER = getLogger(__name__)

MAX_HISTORY_LENGTH = 6
PROJECTOR_TOL = 1e-12
WITNESS_TIE_TOL = 1e-12

# (operations, control times, probe time, control indices, outcomes, initial state index)
WitnessKey = tuple[int, tuple[float, ...], float, tuple[int, ...], tuple[int | None, ...], int]
ANNIHILATION_NORM = 1e-14


def optional_rate(params: ModelParams, frag: Fragment | None = None) -> float | None:
    """Gamma_F (Gamma_E without a fragment), or None where the exponential rate does not exist."""
    try:
        return fragment_rate(params, frag) if frag is not None else environment_rate(params)
    except RateUndefinedError:
        return None


def schedule(times: Sequence[float], insertions: Iterable[Insertion] = ()) -> list[list[Step]]:
    """Step segments taking the state from one grid time to the next, applying insertions on the way.

    An insertion at time t is applied before the state at any grid time >= t is read.
    """
    if any(t < 0 for t in times) or any(b < a for a, b in zip(times, times[1:])):
        raise TimeOrderingError("time grid must be nonnegative and nondecreasing", times)

    pending = sorted(insertions, key=lambda ins: ins.time)
    current = 0.0
    segments: list[list[Step]] = []
    for t in times:
        segment: list[Step] = []
        while pending and pending[0].time <= t:
            insertion = pending.pop(0)
            segment.append(Evolve(dt=insertion.time - current))
            segment.append(Operate(matrix=insertion.matrix, label=insertion.label))
            current = insertion.time
        segment.append(Evolve(dt=t - current))
        current = t
        segments.append(segment)
    return segments


def trajectory(
    sys: SystemAmplitudes, params: ModelParams, times: Sequence[float], insertions: Iterable[Insertion] = ()
) -> list[BranchLedger]:
    """Ledgers at every time of the grid."""
    ledger = initial_ledger(sys, params)
    ledgers = []
    for segment in schedule(times, insertions):
        ledger = run_steps(ledger, segment)
        ledgers.append(ledger)
    return ledgers


def sieve(
    params: ModelParams,
    phis: Sequence[float],
    times: Sequence[float],
    unit: EntropyUnit = EntropyUnit.NATS,
    insertions: Iterable[Insertion] = (),
) -> SieveTable:
    """Entropy of the reduced state for the initial states cos(phi)|0> + sin(phi)|1> on a time grid."""
    insertions = tuple(insertions)
    entropy = np.zeros((len(phis), len(times)))
    for i, phi in enumerate(phis):
        for j, ledger in enumerate(trajectory(SystemAmplitudes.from_angle(phi), params, times, insertions)):
            entropy[i, j] = vn_entropy(reduced_density(ledger), unit)

    return SieveTable(phis=tuple(phis), times=tuple(times), rate=optional_rate(params), unit=unit, entropy=entropy)


def gram_mutual_information(decomposition: BranchDecomposition, unit: EntropyUnit = EntropyUnit.NATS) -> float:
    """I(S:F) from the branching form sum_z sqrt(p_z)|z>|phi_z>|phibar_z> using only Gram matrices.

    The spectra of rho_S, rho_F and rho_SF (= that of rho_Fbar, the global state being pure) are those of
    sqrt(P) G sqrt(P) with G the environment, fragment and complement Gram matrix respectively.

    Raises:
        BranchingFormError: If some pointer label carries more than one branch.
    """
    if not decomposition.branching_form:
        raise BranchingFormError("the Gram closed form needs one branch per pointer label")
    if len(decomposition.labels) < 2:
        return 0.0

    root = np.sqrt(np.diag(decomposition.probabilities))
    fragment = decomposition.fragment_gram
    complement = decomposition.complement_gram
    return (
        vn_entropy(root @ (fragment * complement) @ root, unit)
        + vn_entropy(root @ fragment @ root, unit)
        - vn_entropy(root @ complement @ root, unit)
    )


def qd_report(
    params: ModelParams,
    sys: SystemAmplitudes,
    t: float,
    fragment_sizes: Sequence[int],
    unit: EntropyUnit = EntropyUnit.NATS,
    insertions: Iterable[Insertion] = (),
) -> list[FragmentReport]:
    """Fragment overlaps and mutual information for the contiguous fragments {1..L}.

    The exponential reference exp(-Gamma_F t) is reported only for uncontrolled Lorentzian runs.

    Raises:
        InvalidFragmentError: For sizes outside [1, N - 1].
    """
    for size in fragment_sizes:
        if not 1 <= size <= params.n - 1:
            raise InvalidFragmentError(f"fragment size {size} is trivial for N={params.n}; use 1..{params.n - 1}")

    insertions = tuple(insertions)
    ledger = trajectory(sys, params, [t], insertions)[-1]

    reports = []
    for size in fragment_sizes:
        frag = Fragment.prefix(size)
        decomposition = branch_decomposition(ledger, frag)
        rate = optional_rate(params, frag)
        overlap = decomposition.fragment_overlap
        reports.append(
            FragmentReport(
                size=size,
                indices=tuple(frag.sorted()),
                t=t,
                overlap=overlap if overlap is not None else 0j,
                rate=rate,
                expected_overlap=math.exp(-rate * t) if rate is not None and not insertions else None,
                mutual_information=gram_mutual_information(decomposition, unit),
                unit=unit,
            )
        )
    return reports


def history_steps(spec: HistorySpec) -> list[Step]:
    """Projections Pi_{z_i} at t_i interleaved with the insertions; at equal times the projection comes first."""
    events: list[tuple[float, int, np.ndarray, str]] = [
        (t, 0, PROJECTORS[z], f"P{z}") for t, z in zip(spec.times, spec.labels)
    ]
    events += [(ins.time, 1, ins.matrix, ins.label) for ins in spec.insertions]
    events.sort(key=lambda event: (event[0], event[1]))

    steps: list[Step] = []
    current = 0.0
    for time, _, matrix, label in events:
        steps.append(Evolve(dt=time - current))
        steps.append(Operate(matrix=matrix, label=label))
        current = time
    return steps


def history_ledger(params: ModelParams, sys: SystemAmplitudes, spec: HistorySpec) -> BranchLedger:
    """Unnormalized history state Pi_{z_n} U ... Pi_{z_1} U |Psi(0)>."""
    return run_steps(initial_ledger(sys, params), history_steps(spec))


def decoherence_functional(
    params: ModelParams,
    sys: SystemAmplitudes,
    times: Sequence[float],
    insertions: Iterable[Insertion] = (),
) -> DecoherenceFunctional:
    """D(z, z') = <psi(z')|psi(z)> over all 2**n label sequences."""
    if len(times) > MAX_HISTORY_LENGTH:
        raise ValueError(f"at most {MAX_HISTORY_LENGTH} history times are supported, got {len(times)}")

    insertions = tuple(insertions)
    histories = tuple(itertools.product((0, 1), repeat=len(times)))
    ledgers = [
        history_ledger(params, sys, HistorySpec(times=tuple(times), labels=labels, insertions=insertions))
        for labels in histories
    ]

    size = len(histories)
    matrix = np.zeros((size, size), dtype=np.complex128)
    for i, j in itertools.product(range(size), repeat=2):
        matrix[i, j] = global_overlap(ledgers[j], ledgers[i])

    return DecoherenceFunctional(times=tuple(times), histories=histories, matrix=matrix, insertions=insertions)


def two_time_correlator(params: ModelParams, sys: SystemAmplitudes, t_i: float, t_j: float) -> float:
    """C_ij from sequential projective sigma_z measurements at t_i < t_j."""
    if not 0 <= t_i < t_j:
        raise TimeOrderingError(f"correlator times must satisfy 0 <= t_i < t_j, got {t_i}, {t_j}", (t_i, t_j))

    correlator = 0.0
    for z_i, z_j in itertools.product((0, 1), repeat=2):
        probability = gram_norm(history_ledger(params, sys, HistorySpec(times=(t_i, t_j), labels=(z_i, z_j))))
        correlator += POINTER_SIGNS[z_i] * POINTER_SIGNS[z_j] * probability
    return correlator


def lgi_report(params: ModelParams, sys: SystemAmplitudes, t1: float, t2: float, t3: float) -> LgiReport:
    if not 0 <= t1 < t2 < t3:
        raise TimeOrderingError(f"Leggett-Garg times must be strictly increasing, got {(t1, t2, t3)}", (t1, t2, t3))
    return LgiReport(
        times=(t1, t2, t3),
        c21=two_time_correlator(params, sys, t1, t2),
        c32=two_time_correlator(params, sys, t2, t3),
        c31=two_time_correlator(params, sys, t1, t3),
    )


def lgi_k3(params: ModelParams, sys: SystemAmplitudes, t1: float, t2: float, t3: float) -> float:
    """K3 = C21 + C32 - C31 for sigma_z measurements."""
    return lgi_report(params, sys, t1, t2, t3).k3


def check_projectors(projectors: Sequence[np.ndarray]) -> None:
    """Raise InvalidProjectorSetError unless the projectors are orthogonal and sum to the identity."""
    if not projectors:
        raise InvalidProjectorSetError("projector set is empty")

    dimension = projectors[0].shape[0]
    for i, p in enumerate(projectors):
        if p.shape != (dimension, dimension):
            raise InvalidProjectorSetError(f"projector {i} has shape {p.shape}")
        if not np.allclose(p, p.conj().T, rtol=0, atol=PROJECTOR_TOL):
            raise InvalidProjectorSetError(f"projector {i} is not Hermitian")
        for j, q in enumerate(projectors):
            expected = p if i == j else np.zeros_like(p)
            if not np.allclose(p @ q, expected, rtol=0, atol=PROJECTOR_TOL):
                raise InvalidProjectorSetError(f"projectors {i} and {j} are not orthogonal idempotents")

    if not np.allclose(sum(projectors), np.eye(dimension), rtol=0, atol=PROJECTOR_TOL):
        raise InvalidProjectorSetError("projectors do not sum to the identity")


def dephasing_distance(rho: np.ndarray, projectors: Sequence[np.ndarray]) -> float:
    """(1/2) || rho - sum_n Pi_n rho Pi_n ||_1."""
    dephased = sum(p @ rho @ p for p in projectors)
    difference = rho - dephased
    return float(0.5 * np.abs(np.linalg.eigvalsh((difference + difference.conj().T) / 2)).sum())


def control_paths(
    channels: Sequence[ControlChannel], outcomes: Sequence[int | None], times: Sequence[float]
) -> list[list[Step]]:
    """One step sequence per Kraus path of a control sequence, ending at the last control time.

    Non-selective channels contribute every Kraus operator (their branches are summed); a selective
    channel contributes only its recorded outcome.
    """
    choices = [
        range(len(channel.kraus)) if outcome is None else (outcome,) for channel, outcome in zip(channels, outcomes)
    ]
    paths = []
    for kraus_indices in itertools.product(*choices):
        steps: list[Step] = []
        current = 0.0
        for channel, index, time in zip(channels, kraus_indices, times):
            steps.append(Evolve(dt=time - current))
            steps.append(Operate(matrix=channel.kraus[index], label=f"{channel.name}[{index}]"))
            current = time
        paths.append(steps)
    return paths


def certify(params: ModelParams, projectors: Sequence[np.ndarray], config: CertifierConfig) -> CertifierVerdict:
    """Search the configured control family for the largest distance to the dephased state.

    Every control sequence of up to ``max_ops`` channels is tried at every increasing choice of grid
    times, probed at every grid time t >= t_n + tau, for every configured initial state. The verdict
    passes iff the worst conditional distance is <= epsilon; ties among worst candidates go to the
    fewest operations, then the earliest control and probe times.

    Raises:
        InvalidProjectorSetError: If the projectors are not a complete orthogonal set.
    """
    projectors = [np.asarray(p, dtype=np.complex128) for p in projectors]
    check_projectors(projectors)

    worst = 0.0
    best: tuple[float, WitnessKey, Witness] | None = None
    candidates = skipped = 0

    for n_ops in range(1, config.max_ops + 1):
        for control_times in itertools.combinations(config.times, n_ops):
            probes = [t for t in config.times if t >= control_times[-1] + config.tau - 1e-12]
            if not probes:
                continue

            for channel_indices in itertools.product(range(len(config.controls)), repeat=n_ops):
                channels = [config.controls[i] for i in channel_indices]
                outcome_choices = [range(len(c.kraus)) if c.selective else (None,) for c in channels]

                for outcomes in itertools.product(*outcome_choices):
                    paths = control_paths(channels, outcomes, control_times)
                    for state_index, sys in enumerate(config.initial_states):
                        initial = initial_ledger(sys, params)
                        controlled = [run_steps(initial, steps) for steps in paths]
                        for probe in probes:
                            candidates += 1
                            dt = probe - control_times[-1]
                            rho = sum(
                                (reduced_matrix(evolve(ledger, dt)) for ledger in controlled),
                                np.zeros((2, 2), dtype=np.complex128),
                            )
                            probability = float(np.trace(rho).real)
                            if probability < ANNIHILATION_NORM:
                                skipped += 1
                                LOGGER.info(
                                    f"Skipping control sequence {[c.name for c in channels]} with outcomes "
                                    f"{outcomes}: zero probability"
                                )
                                continue

                            distance = dephasing_distance(rho / probability, projectors)
                            worst = max(worst, distance)
                            key = (n_ops, control_times, probe, channel_indices, outcomes, state_index)
                            if (
                                best is None
                                or distance > best[0] + WITNESS_TIE_TOL
                                or (abs(distance - best[0]) <= WITNESS_TIE_TOL and key < best[1])
                            ):
                                witness = Witness(
                                    controls=tuple(c.name for c in channels),
                                    control_indices=tuple(channel_indices),
                                    outcomes=tuple(outcomes),
                                    times=tuple(control_times),
                                    probe_time=probe,
                                    initial_state=sys,
                                    distance=distance,
                                )
                                best = (distance, key, witness)

    LOGGER.info(f"Certifier searched {intcomma(candidates)} candidates ({intcomma(skipped)} skipped)")

    passed = worst <= config.epsilon
    return CertifierVerdict(
        passed=passed,
        worst_distance=worst,
        epsilon=config.epsilon,
        tau=config.tau,
        candidates=candidates,
        skipped=skipped,
        witness=None if passed or best is None else best[2],
    )



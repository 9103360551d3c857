"""Pure-dephasing master equation and the regression-theorem comparison against exact dynamics."""

from logging import getLogger

import numpy as np
from scipy.integrate import solve_ivp

from recoherence.environment import environment_rate
from recoherence.exceptions import NegativeTimeError, TimeOrderingError
from recoherence.ledger import apply_operator, evolve, global_overlap, initial_ledger, reduced_matrix
from recoherence.models import ControlChannel, CorrelatorReport, DensityMatrix2, ModelParams, SystemAmplitudes
from recoherence.operators import SIGMA_Z

LOGGER = getLogger(__name__)


def dephasing_generator(matrix: np.ndarray, rate: float) -> np.ndarray:
    """L X = (rate / 2) (sigma_z X sigma_z - X)."""
    return rate / 2 * (SIGMA_Z @ matrix @ SIGMA_Z - matrix)


def propagate_operator(matrix: np.ndarray, t: float, rate: float) -> np.ndarray:
    """exp(L t) on an arbitrary 2x2 matrix.

    The identity and sigma_z components are invariant, the sigma_x and sigma_y components decay as
    exp(-rate t); in the pointer basis that is damping of the off-diagonal entries.
    """
    if t < 0:
        raise NegativeTimeError(f"master-equation propagation requires t >= 0, got {t}", t)

    damping = np.exp(-rate * t)
    result = np.array(matrix, dtype=np.complex128)
    result[0, 1] *= damping
    result[1, 0] *= damping
    return result


def dephasing_propagate(rho: DensityMatrix2, t: float, rate: float) -> DensityMatrix2:
    return DensityMatrix2(rho=propagate_operator(rho.rho, t, rate))


def gksl_integrate(rho: DensityMatrix2, rate: float, t: float, steps: int) -> DensityMatrix2:
    """Numerically integrate the master equation with at most ``t / steps`` per integrator step."""
    if steps < 1:
        raise ValueError(f"steps must be at least 1, got {steps}")
    if t < 0:
        raise NegativeTimeError(f"master-equation integration requires t >= 0, got {t}", t)
    if t == 0:
        return rho

    def rhs(_: float, y: np.ndarray) -> np.ndarray:
        return dephasing_generator(y.reshape(2, 2), rate).ravel()

    solution = solve_ivp(
        rhs,
        (0.0, t),
        np.asarray(rho.rho, dtype=np.complex128).ravel(),
        method="DOP853",
        t_eval=[t],
        max_step=t / steps,
        rtol=1e-12,
        atol=1e-14,
    )
    if not solution.success:
        raise RuntimeError(f"master-equation integration failed: {solution.message}")

    final = solution.y[:, -1].reshape(2, 2)
    return DensityMatrix2(rho=(final + final.conj().T) / 2)


def _check_order(s: float, t: float) -> None:
    if s < 0 or s > t:
        raise TimeOrderingError(f"two-time correlators need 0 <= s <= t, got s={s}, t={t}", (s, t))


def exact_two_time(
    a: np.ndarray, b: np.ndarray, t: float, s: float, sys: SystemAmplitudes, params: ModelParams
) -> complex:
    """<A(t) B(s)> = <A^dagger U(t)Psi | U(t, s) B U(s)Psi>, evaluated on branch ledgers."""
    _check_order(s, t)
    initial = initial_ledger(sys, params)
    left = apply_operator(evolve(initial, t), np.asarray(a).conj().T)
    right = evolve(apply_operator(evolve(initial, s), b), t - s)
    return global_overlap(left, right)


def regression_two_time(
    a: np.ndarray, b: np.ndarray, t: float, s: float, rho0: DensityMatrix2, rate: float
) -> complex:
    """tr{A exp(L(t - s)) B exp(L s) rho0}, the quantum-regression prediction."""
    _check_order(s, t)
    matrix = propagate_operator(rho0.rho, s, rate)
    matrix = propagate_operator(np.asarray(b) @ matrix, t - s, rate)
    return complex(np.trace(np.asarray(a) @ matrix))


def exact_intervention(
    channel: ControlChannel,
    t_star: float,
    observable: np.ndarray,
    t: float,
    sys: SystemAmplitudes,
    params: ModelParams,
) -> complex:
    """<O>(t) after the channel at t*, tracking each Kraus branch as its own ledger."""
    before = evolve(initial_ledger(sys, params), t_star)
    rho = sum(
        (reduced_matrix(evolve(apply_operator(before, k), t - t_star)) for k in channel.kraus),
        np.zeros((2, 2), dtype=np.complex128),
    )
    return complex(np.trace(np.asarray(observable) @ rho))


def markov_intervention(
    channel: ControlChannel,
    t_star: float,
    observable: np.ndarray,
    t: float,
    rho0: DensityMatrix2,
    rate: float,
) -> complex:
    matrix = propagate_operator(rho0.rho, t_star, rate)
    matrix = propagate_operator(channel.apply(matrix), t - t_star, rate)
    return complex(np.trace(np.asarray(observable) @ matrix))


def intervention_compare(
    channel: ControlChannel,
    t_star: float,
    observable: np.ndarray,
    t: float,
    sys: SystemAmplitudes,
    params: ModelParams,
    rate: float | None = None,
    observable_name: str = "O",
) -> CorrelatorReport:
    """Exact versus master-equation expectation of ``observable`` at ``t`` after ``channel`` at ``t_star``.

    ``rate`` defaults to Gamma_E, which needs an all-Lorentzian model.

    Raises:
        TimeOrderingError: Unless 0 <= t_star <= t.
    """
    if t_star < 0 or t < t_star:
        raise TimeOrderingError(f"interventions need 0 <= t* <= t, got t*={t_star}, t={t}", (t_star, t))
    if rate is None:
        rate = environment_rate(params)

    exact = exact_intervention(channel, t_star, observable, t, sys, params)
    regression = markov_intervention(channel, t_star, observable, t, sys.density(), rate)
    LOGGER.debug(f"Intervention {channel.name} at t*={t_star}: exact={exact:.6g}, regression={regression:.6g}")
    return CorrelatorReport(
        exact=exact,
        regression=regression,
        observables=(observable_name, channel.name),
        t=t,
        s=t_star,
        initial_state=sys,
        label=f"intervention:{channel.name}",
    )

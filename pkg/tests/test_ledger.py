import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from strategies import dichotomic_params, system_amplitudes, times

from recoherence.exceptions import (
    AnnihilatedStateError,
    NegativeTimeError,
    ParamsMismatchError,
    UnnormalizedLedgerError,
)
from recoherence.ledger import (
    apply_operator,
    branch_decomposition,
    evolve,
    global_overlap,
    gram_norm,
    initial_ledger,
    reduced_density,
    reduced_matrix,
)
from recoherence.lindblad import dephasing_propagate
from recoherence.models import Fragment, ModelParams, SystemAmplitudes
from recoherence.operators import IDENTITY, PROJECTORS, SIGMA_X, SIGMA_Z


def test_initial_ledger_has_one_branch_per_label(plus, lorentzian5):
    ledger = initial_ledger(plus, lorentzian5)
    assert ledger.labels.tolist() == [0, 1]
    assert ledger.thetas.tolist() == [0.0, 0.0]
    assert gram_norm(ledger) == pytest.approx(1.0)


def test_initial_ledger_drops_zero_amplitudes(lorentzian5):
    ledger = initial_ledger(SystemAmplitudes.pointer(1), lorentzian5)
    assert len(ledger) == 1
    assert ledger.branches[0].label == 1


def test_evolve_moves_theta_in_opposite_directions(plus, lorentzian5):
    ledger = evolve(initial_ledger(plus, lorentzian5), 0.75)
    assert ledger.thetas.tolist() == [0.75, -0.75]
    assert evolve(ledger, 0.0) is ledger


def test_evolve_rejects_negative_time(plus, lorentzian5):
    with pytest.raises(NegativeTimeError) as exc_info:
        evolve(initial_ledger(plus, lorentzian5), -0.1)
    assert exc_info.value.value == -0.1


def test_identity_operator_is_a_no_op(plus, lorentzian5):
    ledger = evolve(initial_ledger(plus, lorentzian5), 1.0)
    assert apply_operator(ledger, IDENTITY) == ledger


def test_projection_with_renormalization(plus, lorentzian5):
    ledger = evolve(initial_ledger(plus, lorentzian5), 1.0)
    projected = apply_operator(ledger, PROJECTORS[0], renormalize=True)
    assert projected.normalized
    assert np.allclose(reduced_density(projected).rho, np.diag([1.0, 0.0]), rtol=0, atol=1e-14)


def test_projection_without_renormalization_is_flagged(plus, lorentzian5):
    projected = apply_operator(initial_ledger(plus, lorentzian5), PROJECTORS[0])
    assert not projected.normalized
    with pytest.raises(UnnormalizedLedgerError):
        reduced_density(projected)
    assert reduced_matrix(projected)[0, 0] == pytest.approx(0.5)


def test_annihilated_state_cannot_be_renormalized(lorentzian5):
    ledger = initial_ledger(SystemAmplitudes.pointer(0), lorentzian5)
    with pytest.raises(AnnihilatedStateError):
        apply_operator(ledger, PROJECTORS[1], renormalize=True)


def test_pointer_state_does_not_decohere(lorentzian5):
    ledger = evolve(initial_ledger(SystemAmplitudes.pointer(0), lorentzian5), 3.0)
    assert np.allclose(reduced_density(ledger).rho, np.diag([1.0, 0.0]), rtol=0, atol=1e-15)


def test_plus_state_coherence_decays_at_gamma_e(plus, lorentzian1):
    rho = reduced_density(evolve(initial_ledger(plus, lorentzian1), 1.0))
    assert rho.sx == pytest.approx(math.exp(-1), abs=1e-12)
    assert rho.sz == pytest.approx(0.0, abs=1e-15)


@settings(derandomize=True, deadline=None, max_examples=20)
@given(sys=system_amplitudes(), t=times)
def test_echo_restores_the_initial_state(sys, t):
    params = ModelParams.homogeneous(5)
    initial = initial_ledger(sys, params)
    echoed = apply_operator(evolve(apply_operator(evolve(initial, t), SIGMA_X), t), SIGMA_X)
    assert abs(global_overlap(initial, echoed)) == pytest.approx(1.0, abs=1e-12)


def test_orthogonal_pointer_states_have_zero_overlap(lorentzian5):
    zero = evolve(initial_ledger(SystemAmplitudes.pointer(0), lorentzian5), 1.0)
    one = evolve(initial_ledger(SystemAmplitudes.pointer(1), lorentzian5), 1.0)
    assert global_overlap(zero, one) == 0j


def test_overlap_requires_matching_params(plus, lorentzian1, lorentzian5):
    with pytest.raises(ParamsMismatchError):
        global_overlap(initial_ledger(plus, lorentzian1), initial_ledger(plus, lorentzian5))


@pytest.mark.parametrize("size", [1, 2, 3, 4])
@pytest.mark.parametrize("t", [0.0, 0.3, 1.0, 2.5, 4.0])
def test_fragment_overlap_decays_at_fragment_rate(plus, lorentzian5, size, t):
    ledger = evolve(initial_ledger(plus, lorentzian5), t)
    decomposition = branch_decomposition(ledger, Fragment.prefix(size))
    assert decomposition.branching_form
    assert decomposition.probabilities == pytest.approx((0.5, 0.5))
    assert decomposition.fragment_overlap == pytest.approx(math.exp(-size * t), abs=1e-12)
    assert decomposition.complement_overlap == pytest.approx(math.exp(-(5 - size) * t), abs=1e-12)


def test_decomposition_of_superposed_branches_is_not_branching_form(plus, lorentzian5):
    ledger = evolve(initial_ledger(plus, lorentzian5), 1.0)
    hadamard = np.array([[1, 1], [1, -1]]) / math.sqrt(2)
    decomposition = branch_decomposition(apply_operator(ledger, hadamard), Fragment.prefix(2))
    assert not decomposition.branching_form


@settings(derandomize=True, deadline=None, max_examples=30)
@given(sys=system_amplitudes(), t=times, n=st.integers(1, 6))
def test_reduced_state_solves_the_dephasing_master_equation(sys, t, n):
    params = ModelParams.homogeneous(n, g=0.8, gamma=0.6)
    exact = reduced_density(evolve(initial_ledger(sys, params), t))
    expected = dephasing_propagate(sys.density(), t, 0.48 * n)
    assert np.allclose(exact.rho, expected.rho, rtol=0, atol=1e-12)


@settings(derandomize=True, deadline=None, max_examples=30)
@given(
    sys=system_amplitudes(),
    params=dichotomic_params(),
    t=times,
    diagonal=st.sampled_from([SIGMA_Z, np.diag([1.0, 1j])]),
)
def test_echo_survives_diagonal_unitaries(sys, params, t, diagonal):
    initial = initial_ledger(sys, params)
    ledger = apply_operator(evolve(initial, t), SIGMA_X)
    ledger = apply_operator(evolve(apply_operator(ledger, diagonal), t), SIGMA_X)

    assert np.allclose(ledger.thetas, 0.0, rtol=0, atol=1e-12)
    assert reduced_density(ledger).coherence == pytest.approx(reduced_density(initial).coherence, abs=1e-12)


def test_double_flip_returns_the_same_ledger(plus, lorentzian5):
    ledger = evolve(initial_ledger(plus, lorentzian5), 0.7)
    assert apply_operator(apply_operator(ledger, SIGMA_X), SIGMA_X) == ledger


@settings(derandomize=True, deadline=None, max_examples=20)
@given(sys=system_amplitudes(), t1=times, t2=times)
def test_evolve_is_a_semigroup(sys, t1, t2):
    params = ModelParams.homogeneous(3, gamma=0.5)
    ledger = initial_ledger(sys, params)
    once = evolve(ledger, t1 + t2)
    twice = evolve(evolve(ledger, t1), t2)
    assert np.allclose(reduced_density(once).rho, reduced_density(twice).rho, rtol=0, atol=1e-12)


@settings(derandomize=True, deadline=None, max_examples=30)
@given(sys=system_amplitudes(), params=dichotomic_params(), t=times)
def test_evolution_preserves_the_norm(sys, params, t):
    ledger = evolve(apply_operator(evolve(initial_ledger(sys, params), t), SIGMA_X), t / 2)
    assert gram_norm(ledger) == pytest.approx(1.0, abs=1e-12)

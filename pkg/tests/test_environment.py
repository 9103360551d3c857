import math

import numpy as np
import pytest

from recoherence.environment import environment_rate, fragment_rate, kernel
from recoherence.exceptions import InvalidFragmentError, RateUndefinedError
from recoherence.models import DichotomicParticle, EnvKind, Fragment, LorentzianParticle, ModelParams


def test_fragment_rate_of_empty_fragment_is_zero(lorentzian5):
    assert fragment_rate(lorentzian5, Fragment()) == 0.0


def test_environment_rate_sums_couplings(lorentzian5):
    assert environment_rate(lorentzian5) == 5.0


def test_fragment_rate_heterogeneous_particles():
    params = ModelParams(particles=(LorentzianParticle(g=2, gamma=0.5), LorentzianParticle(g=1, gamma=3)))
    assert fragment_rate(params, params.environment) == pytest.approx(4.0)


def test_fragment_rate_rejects_dichotomic_particles(dichotomic3):
    with pytest.raises(RateUndefinedError) as exc_info:
        fragment_rate(dichotomic3, Fragment.of([2]))
    assert exc_info.value.particle_index == 2


def test_fragment_rate_rejects_non_positive_coupling():
    params = ModelParams(particles=(LorentzianParticle(g=-1, gamma=1),))
    with pytest.raises(RateUndefinedError):
        environment_rate(params)


def test_fragment_outside_environment_is_rejected(lorentzian5):
    with pytest.raises(InvalidFragmentError) as exc_info:
        kernel(lorentzian5, Fragment.of([4, 6, 7]), 0.5)
    assert exc_info.value.indices == (6, 7)


@pytest.mark.parametrize("kind", [EnvKind.LORENTZIAN, EnvKind.DICHOTOMIC])
def test_kernel_is_one_at_zero(kind):
    params = ModelParams.homogeneous(3, kind=kind, g=1.7, gamma=0.4, p_plus=0.2)
    assert kernel(params, params.environment, 0.0) == pytest.approx(1.0)


def test_lorentzian_kernel_decays_exponentially(lorentzian1):
    assert kernel(lorentzian1, lorentzian1.environment, 1.0) == pytest.approx(math.exp(-1), abs=1e-15)
    assert kernel(lorentzian1, lorentzian1.environment, -1.0) == pytest.approx(math.exp(-1), abs=1e-15)


def test_dichotomic_kernel_is_cosine_for_balanced_populations():
    params = ModelParams(particles=(DichotomicParticle(g=1, p_plus=0.5),))
    assert kernel(params, params.environment, math.pi) == pytest.approx(-1.0, abs=1e-15)


def test_dichotomic_kernel_is_a_phase_for_polarized_particle():
    params = ModelParams(particles=(DichotomicParticle(g=2, p_plus=1.0),))
    assert kernel(params, params.environment, 0.3) == pytest.approx(np.exp(0.6j))


def test_kernel_factorizes_over_fragments(lorentzian5):
    u = np.linspace(-2, 2, 9)
    whole = kernel(lorentzian5, lorentzian5.environment, u)
    parts = kernel(lorentzian5, Fragment.prefix(2), u) * kernel(lorentzian5, Fragment.of([3, 4, 5]), u)
    assert np.allclose(whole, parts, rtol=0, atol=1e-15)
    assert np.allclose(whole, np.exp(-5 * np.abs(u)), rtol=0, atol=1e-15)


def test_kernel_is_hermitian_and_bounded():
    params = ModelParams(
        particles=(
            LorentzianParticle(g=1.5, gamma=0.4),
            DichotomicParticle(g=-0.7, p_plus=0.3),
            DichotomicParticle(g=2.0, p_plus=0.9),
        )
    )
    u = np.random.default_rng(7).uniform(-20, 20, size=1000)
    values = kernel(params, params.environment, u)
    assert np.allclose(kernel(params, params.environment, -u), np.conj(values), rtol=0, atol=1e-14)
    assert np.all(np.abs(values) <= 1 + 1e-14)

import pytest

from recoherence.models import DichotomicParticle, EnvKind, ModelParams, SystemAmplitudes


@pytest.fixture
def lorentzian5() -> ModelParams:
    """Five particles with g = gamma = 1, so Gamma_E = 5."""
    return ModelParams.homogeneous(5)


@pytest.fixture
def lorentzian1() -> ModelParams:
    return ModelParams.homogeneous(1)


@pytest.fixture
def dichotomic3() -> ModelParams:
    return ModelParams.homogeneous(3, kind=EnvKind.DICHOTOMIC, g=1.0, p_plus=0.5)


@pytest.fixture
def mixed_dichotomic() -> ModelParams:
    return ModelParams(
        particles=(
            DichotomicParticle(g=1.0, p_plus=0.5),
            DichotomicParticle(g=0.7, p_plus=0.3),
            DichotomicParticle(g=-1.3, p_plus=0.8),
            DichotomicParticle(g=0.4, p_plus=0.1),
        )
    )


@pytest.fixture
def plus() -> SystemAmplitudes:
    return SystemAmplitudes.plus()

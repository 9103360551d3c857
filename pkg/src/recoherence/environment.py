"""Environment rates and the characteristic-function kernel.

Every environment quantity enters through kappa_j(u) = <chi_j| exp(i g_j q_j u) |chi_j>; the
position kets themselves are never materialized.
"""

from collections.abc import Iterable

import numpy as np
from numpy.typing import ArrayLike

from recoherence.exceptions import InvalidFragmentError, RateUndefinedError
from recoherence.models import EnvKind, Fragment, ModelParams


def check_fragment(params: ModelParams, frag: Fragment) -> None:
    """Raise InvalidFragmentError unless ``frag`` is a subset of {1, ..., N}."""
    outside = frag.indices - params.environment.indices
    if outside:
        raise InvalidFragmentError(
            f"Fragment indices {sorted(outside)} are outside the environment 1..{params.n}", outside
        )


def fragment_rate(params: ModelParams, frag: Fragment) -> float:
    """Sum of g_j * gamma_j over the fragment.

    Raises:
        InvalidFragmentError: If the fragment is not part of the environment.
        RateUndefinedError: If a particle in the fragment is not Lorentzian or has g <= 0.
    """
    check_fragment(params, frag)

    rate = 0.0
    for index in frag.sorted():
        particle = params.particle(index)
        if particle.kind != EnvKind.LORENTZIAN:
            raise RateUndefinedError(f"rate undefined for non-Lorentzian particle {index}", index)
        if particle.g <= 0:
            raise RateUndefinedError(f"rate undefined for particle {index} with coupling g={particle.g}", index)
        rate += particle.g * particle.gamma  # type: ignore[union-attr]

    return rate


def environment_rate(params: ModelParams) -> float:
    """Gamma_E, the dephasing rate of the whole environment."""
    return fragment_rate(params, params.environment)


def kernel(params: ModelParams, frag: Fragment, u: ArrayLike) -> np.ndarray | complex:
    """Product of the single-particle characteristic functions over ``frag``.

    Accepts a scalar or an array of ``u``; a scalar input returns a Python complex.
    """
    check_fragment(params, frag)
    return _kernel(params, frag.sorted(), u)


def _kernel(params: ModelParams, indices: Iterable[int], u: ArrayLike) -> np.ndarray | complex:
    u_arr = np.asarray(u, dtype=float)
    value = np.ones(u_arr.shape, dtype=np.complex128)
    for index in indices:
        value = value * params.particle(index).characteristic(u_arr)

    if u_arr.ndim == 0:
        return complex(value)
    return value


def environment_kernel(params: ModelParams, u: ArrayLike) -> np.ndarray | complex:
    return _kernel(params, range(1, params.n + 1), u)

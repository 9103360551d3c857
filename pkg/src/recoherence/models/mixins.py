import numpy as np


class PauliExpectationMixin:
    rho: np.ndarray

    @property
    def sx(self) -> float:
        return float(2 * self.rho[0, 1].real)

    @property
    def sy(self) -> float:
        return float(-2 * self.rho[0, 1].imag)

    @property
    def sz(self) -> float:
        """Expectation of sigma_z = |1><1| - |0><0|"""
        return float((self.rho[1, 1] - self.rho[0, 0]).real)

    @property
    def coherence(self) -> float:
        """Modulus of the pointer-basis off-diagonal element."""
        return float(abs(self.rho[0, 1]))

    @property
    def populations(self) -> tuple[float, float]:
        return float(self.rho[0, 0].real), float(self.rho[1, 1].real)

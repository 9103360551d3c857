from collections.abc import Iterable, Sequence


class RecoherenceError(Exception): ...


class InvalidFragmentError(RecoherenceError, ValueError):
    indices: tuple[int, ...]

    def __init__(self, message: str, indices: Iterable[int] = ()):
        super().__init__(message)
        self.indices = tuple(sorted(indices))


class RateUndefinedError(RecoherenceError, ValueError):
    particle_index: int | None

    def __init__(self, message: str, particle_index: int | None = None):
        super().__init__(message)
        self.particle_index = particle_index


class NegativeTimeError(RecoherenceError, ValueError):
    value: float

    def __init__(self, message: str, value: float):
        super().__init__(message)
        self.value = value


class TimeOrderingError(RecoherenceError, ValueError):
    times: tuple[float, ...]

    def __init__(self, message: str, times: Sequence[float] = ()):
        super().__init__(message)
        self.times = tuple(times)


class AnnihilatedStateError(RecoherenceError):
    norm: float

    def __init__(self, message: str, norm: float):
        super().__init__(message)
        self.norm = norm


class UnnormalizedLedgerError(RecoherenceError):
    norm: float | None

    def __init__(self, message: str, norm: float | None = None):
        super().__init__(message)
        self.norm = norm


class ParamsMismatchError(RecoherenceError, ValueError): ...


class GridRequiredError(RecoherenceError, ValueError):
    particle_index: int

    def __init__(self, message: str, particle_index: int):
        super().__init__(message)
        self.particle_index = particle_index


class ReductionTooLargeError(RecoherenceError):
    dimension: int

    def __init__(self, message: str, dimension: int):
        super().__init__(message)
        self.dimension = dimension


class NotPositiveSemidefiniteError(RecoherenceError, ValueError):
    min_eigenvalue: float

    def __init__(self, message: str, min_eigenvalue: float):
        super().__init__(message)
        self.min_eigenvalue = min_eigenvalue


class BranchingFormError(RecoherenceError): ...


class InvalidProjectorSetError(RecoherenceError, ValueError): ...


class ConfigError(RecoherenceError):
    path: str | None

    def __init__(self, message: str, path: str | None = None):
        super().__init__(message)
        self.path = path


class UnknownOperatorError(ConfigError):
    valid_names: tuple[str, ...]

    def __init__(self, message: str, valid_names: Iterable[str] = (), path: str | None = None):
        super().__init__(message, path=path)
        self.valid_names = tuple(valid_names)


class SelfCheckError(RecoherenceError):
    deviation: float

    def __init__(self, message: str, deviation: float):
        super().__init__(message)
        self.deviation = deviation

from enum import Enum


class EnvKind(str, Enum):
    LORENTZIAN = "lorentzian"
    DICHOTOMIC = "dichotomic"

    @classmethod
    def get_case_insensitive(cls, value: str) -> "EnvKind":
        lcase_to_actual = {item.value.lower(): item for item in cls}
        return lcase_to_actual[value.lower()]


class ExperimentKind(str, Enum):
    SIEVE = "sieve"
    RECOHERE = "recohere"
    DARWINISM = "darwinism"
    HISTORIES = "histories"
    LGI = "lgi"
    QRT = "qrt"
    CERTIFY = "certify"


class EntropyUnit(str, Enum):
    NATS = "nats"
    BITS = "bits"


class OracleMode(str, Enum):
    OFF = "off"
    DICHOTOMIC = "dichotomic"
    GRID = "grid"


class OperatorName(str, Enum):
    """Named single-qubit operators accepted in configs.

    ``flip`` and ``phase`` are the control-channel spellings of ``sx`` and ``sz``.
    """

    I = "I"  # noqa: E741
    SX = "sx"
    SY = "sy"
    SZ = "sz"
    FLIP = "flip"
    PHASE = "phase"

    @classmethod
    def get_case_insensitive(cls, value: str) -> "OperatorName":
        lcase_to_actual = {item.value.lower(): item for item in cls}
        return lcase_to_actual[value.lower()]


class InitialStateName(str, Enum):
    ZERO = "zero"
    ONE = "one"
    PLUS = "plus"
    MINUS = "minus"
    PLUS_I = "plus_i"

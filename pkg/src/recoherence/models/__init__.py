from .base import ComplexMatrix, ComplexValue, RecoItemBase, as_complex, as_complex_matrix
from .config import (
    CertifierSection,
    ExperimentConfig,
    ExperimentSection,
    InsertionSection,
    KrausFileRef,
    ModelSection,
    OutputSection,
    TimeGrid,
)
from .enums import EntropyUnit, EnvKind, ExperimentKind, InitialStateName, OperatorName, OracleMode
from .environment import DichotomicParticle, EnvParticle, Fragment, LorentzianParticle, ModelParams
from .ledger import Branch, BranchDecomposition, BranchLedger
from .oracle import GridSpec, OracleState
from .reports import (
    CertifierConfig,
    CertifierVerdict,
    CorrelatorReport,
    DecoherenceFunctional,
    FragmentReport,
    HistorySpec,
    Insertion,
    ExperimentResult,
    LgiReport,
    OracleCheck,
    QrtReport,
    SieveTable,
    Witness,
)
from .states import ControlChannel, DensityMatrix2, SystemAmplitudes
from .steps import Evolve, Operate, Step

__all__ = [
    "Branch",
    "BranchDecomposition",
    "BranchLedger",
    "CertifierConfig",
    "CertifierSection",
    "CertifierVerdict",
    "ComplexMatrix",
    "ComplexValue",
    "ControlChannel",
    "CorrelatorReport",
    "DecoherenceFunctional",
    "DensityMatrix2",
    "DichotomicParticle",
    "EntropyUnit",
    "EnvKind",
    "EnvParticle",
    "Evolve",
    "ExperimentConfig",
    "ExperimentKind",
    "ExperimentResult",
    "ExperimentSection",
    "Fragment",
    "FragmentReport",
    "GridSpec",
    "HistorySpec",
    "InitialStateName",
    "Insertion",
    "InsertionSection",
    "KrausFileRef",
    "LgiReport",
    "LorentzianParticle",
    "ModelParams",
    "ModelSection",
    "Operate",
    "OperatorName",
    "OracleCheck",
    "OracleMode",
    "OracleState",
    "OutputSection",
    "QrtReport",
    "RecoItemBase",
    "SieveTable",
    "Step",
    "SystemAmplitudes",
    "TimeGrid",
    "Witness",
    "as_complex",
    "as_complex_matrix",
]

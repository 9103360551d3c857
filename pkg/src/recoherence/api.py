import hashlib
import itertools
from collections.abc import Callable, Sequence
from logging import Logger, getLogger
from pathlib import Path

import numpy as np
import pandas as pd
import yaml
from humanize import intcomma
from pydantic import ValidationError

from recoherence import oracle
from recoherence.classicality import (
    certify,
    control_paths,
    decoherence_functional,
    dephasing_distance,
    history_steps,
    lgi_report,
    optional_rate,
    qd_report,
    schedule,
    sieve,
    trajectory,
)
from recoherence.exceptions import ConfigError, SelfCheckError
from recoherence.ledger import initial_ledger, reduced_density, reduced_matrix, run_steps
from recoherence.lindblad import exact_two_time, intervention_compare, regression_two_time
from recoherence.models import (
    CertifierConfig,
    CertifierVerdict,
    ControlChannel,
    CorrelatorReport,
    DecoherenceFunctional,
    EntropyUnit,
    Evolve,
    ExperimentConfig,
    ExperimentKind,
    ExperimentResult,
    ExperimentSection,
    Fragment,
    GridSpec,
    HistorySpec,
    Insertion,
    KrausFileRef,
    Operate,
    OracleCheck,
    OracleMode,
    QrtReport,
    Step,
    SystemAmplitudes,
    as_complex_matrix,
)
from recoherence.models.config import OperatorRef
from recoherence.operators import POINTER_SIGNS, PROJECTORS, SIGMA_X, named_operator

ORACLE_TOLERANCES = {OracleMode.DICHOTOMIC: 1e-10, OracleMode.GRID: 1e-3}
SELF_CHECK_TOL = 1e-10
MAX_DENSE_PARTICLES = 6
GRID_TIME_TOL = 1e-12


def load_config(path: str | Path) -> ExperimentConfig:
    """Read and validate a YAML experiment config.

    Raises:
        ConfigError: If the file is not valid YAML or does not validate.
        OSError: If the file cannot be read.
    """
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text())
    except yaml.YAMLError as e:
        raise ConfigError(f"{path}: not valid YAML ({e})", path=str(path)) from e

    if data is None:
        data = {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a mapping with model / experiment / output sections", path=str(path))

    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        raise ConfigError(f"{path}: {e}", path=str(path)) from e


def load_kraus_file(path: Path) -> tuple[np.ndarray, ...]:
    """Read a YAML list of 2x2 matrices whose entries are numbers or ``[re, im]`` pairs."""
    try:
        data = yaml.safe_load(path.read_text())
    except yaml.YAMLError as e:
        raise ConfigError(f"{path}: not valid YAML ({e})", path=str(path)) from e

    if not isinstance(data, list) or not data:
        raise ConfigError(f"{path}: expected a nonempty list of 2x2 matrices", path=str(path))
    try:
        return tuple(as_complex_matrix(matrix) for matrix in data)
    except (TypeError, ValueError) as e:
        raise ConfigError(f"{path}: {e}", path=str(path)) from e


def config_digest(config: ExperimentConfig) -> str:
    return hashlib.sha256(config.model_dump_json().encode()).hexdigest()


class Experiments:
    """Runs the configured experiments on the analytic engine, optionally cross-checked by the oracle."""

    logger: "Logger" = getLogger(__name__)

    def __init__(
        self,
        config: ExperimentConfig,
        oracle_mode: OracleMode | str = OracleMode.OFF,
        base_dir: Path | None = None,
        grid: GridSpec | None = None,
    ):
        """Create a new Experiments instance.

        Args:
            config (ExperimentConfig): The validated experiment configuration.
            oracle_mode (OracleMode, optional): Cross-check mode. Default is ``off``.
            base_dir (Path, optional): Directory Kraus-file paths are relative to. Default is the cwd.
            grid (GridSpec, optional): Position grid for ``grid`` mode. Default is per-particle defaults.

        Raises:
            ConfigError: If the oracle mode does not fit the model.
        """
        self.config = config
        self.params = config.model.to_params()
        self.oracle_mode = OracleMode(oracle_mode)
        self.base_dir = base_dir or Path.cwd()
        self.grid = grid
        self.digest = config_digest(config)
        self._grid_kernel: oracle.GridKernel | None = None

        if self.oracle_mode == OracleMode.DICHOTOMIC:
            if not self.params.is_dichotomic or self.params.n > MAX_DENSE_PARTICLES:
                raise ConfigError(
                    f"dichotomic oracle needs an all-Dichotomic model with N <= {MAX_DENSE_PARTICLES}, "
                    f"got N={self.params.n}"
                )
        elif self.oracle_mode == OracleMode.GRID and not self.params.is_lorentzian:
            raise ConfigError("grid oracle needs an all-Lorentzian model")

    @classmethod
    def from_file(cls, path: str | Path, oracle_mode: OracleMode | str = OracleMode.OFF) -> "Experiments":
        path = Path(path)
        return cls(load_config(path), oracle_mode=oracle_mode, base_dir=path.parent)

    @property
    def section(self) -> ExperimentSection:
        return self.config.experiment

    @property
    def unit(self) -> EntropyUnit:
        return self.config.output.units

    @property
    def rate(self) -> float | None:
        return optional_rate(self.params)

    def raw_time(self, value: float) -> float:
        """Convert a config time to model time; scaled configs give times in units of Gamma_E * t."""
        if not self.config.uses_scaled_times:
            return float(value)
        rate = self.rate
        if rate is None:
            raise ConfigError("scaled times need an all-Lorentzian model with positive couplings")
        return float(value) / rate

    def raw_times(self, values: Sequence[float]) -> list[float]:
        return [self.raw_time(v) for v in values]

    def time_grid(self) -> list[float]:
        return self.raw_times(self.section.times.values())

    def on_grid(self, value: float, name: str) -> float:
        """Snap ``value`` to the matching grid time.

        Raises:
            ConfigError: If no grid time matches.
        """
        grid = np.asarray(self.time_grid())
        matches = np.flatnonzero(np.isclose(grid, value, rtol=0, atol=GRID_TIME_TOL * max(1.0, abs(value))))
        if not matches.size:
            raise ConfigError(f"{name}={value!r} is not on the time grid")
        return float(grid[matches[0]])

    def initial_state(self) -> SystemAmplitudes:
        return SystemAmplitudes.named(self.section.initial_state)

    def channel(self, ref: OperatorRef) -> ControlChannel:
        if isinstance(ref, KrausFileRef):
            path = ref.kraus_file if ref.kraus_file.is_absolute() else self.base_dir / ref.kraus_file
            try:
                return ControlChannel(kraus=load_kraus_file(path), name=path.stem, selective=ref.selective)
            except ValidationError as e:
                raise ConfigError(f"{path}: {e}", path=str(path)) from e
        return ControlChannel.unitary(named_operator(ref), name=ref)

    def operator(self, ref: OperatorRef) -> np.ndarray:
        """A single matrix; Kraus files must then hold exactly one operator."""
        if isinstance(ref, KrausFileRef):
            channel = self.channel(ref)
            if len(channel.kraus) != 1:
                raise ConfigError(f"{ref.kraus_file}: an inserted operator needs exactly one Kraus matrix")
            return channel.kraus[0]
        return named_operator(ref)

    def insertions(self) -> tuple[Insertion, ...]:
        return tuple(
            Insertion(
                time=self.raw_time(item.time),
                matrix=self.operator(item.operator),
                label=item.operator if isinstance(item.operator, str) else item.operator.kraus_file.stem,
            )
            for item in self.section.insertions
        )

    def run(self, kind: ExperimentKind | str | None = None) -> ExperimentResult:
        kind = ExperimentKind(kind) if kind is not None else self.section.kind
        if kind != self.section.kind:
            self.logger.warning(f"Running {kind.value!r} although the config declares {self.section.kind.value!r}")

        self.logger.debug(f"Running {kind.value} on N={self.params.n}, oracle={self.oracle_mode.value}")
        match kind:
            case ExperimentKind.SIEVE:
                return self.run_sieve()
            case ExperimentKind.RECOHERE:
                return self.run_recohere()
            case ExperimentKind.DARWINISM:
                return self.run_darwinism()
            case ExperimentKind.HISTORIES:
                return self.run_histories()
            case ExperimentKind.LGI:
                return self.run_lgi()
            case ExperimentKind.QRT:
                return self.run_qrt()
            case ExperimentKind.CERTIFY:
                return self.run_certify()

    def raise_for_violation(self, result: ExperimentResult) -> None:
        """Raise SelfCheckError if the result failed a self-check or an oracle comparison."""
        if result.violation is None:
            return
        deviation = result.oracle.deviation if result.oracle and not result.oracle.within_tolerance else 0.0
        raise SelfCheckError(result.violation, deviation)

    def _result(
        self,
        kind: ExperimentKind,
        table: pd.DataFrame | None = None,
        document: DecoherenceFunctional | QrtReport | CertifierVerdict | None = None,
        deviation: float | None = None,
        violation: str | None = None,
        passed: bool | None = None,
    ) -> ExperimentResult:
        check = None
        if deviation is not None and self.oracle_mode != OracleMode.OFF:
            check = OracleCheck(
                mode=self.oracle_mode, deviation=deviation, tolerance=ORACLE_TOLERANCES[self.oracle_mode]
            )
            if not check.within_tolerance and violation is None:
                violation = f"oracle deviation {deviation:.3e} exceeds {check.tolerance:.0e}"

        if violation:
            self.logger.error(f"{kind.value}: self-check failed, {violation}")
        return ExperimentResult(
            kind=kind,
            config_sha256=self.digest,
            table=table,
            document=document,
            oracle=check,
            violation=violation,
            passed=passed,
        )

    def _time_columns(self, times: Sequence[float]) -> dict[str, list[float]]:
        columns = {"t": list(times)}
        rate = self.rate
        if rate is not None:
            columns["gamma_t"] = [rate * t for t in times]
        return columns

    def _oracle_densities(
        self, sys: SystemAmplitudes, times: Sequence[float], insertions: Sequence[Insertion] = ()
    ) -> list[np.ndarray]:
        """Reduced system matrices on the grid from the oracle of the active mode."""
        segments = schedule(times, insertions)
        if self.oracle_mode == OracleMode.GRID and self.params.n > 1:
            kernel = self._kernel_from_grid()
            ledger = initial_ledger(sys, self.params)
            densities = []
            for segment in segments:
                ledger = run_steps(ledger, segment)
                densities.append(reduced_matrix(ledger, env_kernel=kernel))
            return densities

        state = self._oracle_initial(sys)
        densities = []
        for segment in segments:
            state = oracle.run_steps(state, segment)
            densities.append(oracle.reduced(state, [0]))
        return densities

    def _oracle_initial(self, sys: SystemAmplitudes) -> oracle.OracleState:
        grid = None
        if self.oracle_mode == OracleMode.GRID:
            grid = self.grid or GridSpec.default_for(self.params)
        return oracle.build_initial(sys, self.params, grid)

    def _kernel_from_grid(self) -> Callable[[np.ndarray], np.ndarray]:
        if self._grid_kernel is None:
            self._grid_kernel = oracle.GridKernel(self.params, self.grid)
        return self._grid_kernel

    def run_sieve(self) -> ExperimentResult:
        """Entropy per initial angle phi over the time grid."""
        times = self.time_grid()
        insertions = self.insertions()
        table = sieve(self.params, self.section.phis, times, self.unit, insertions)

        columns: dict[str, list[float]] = self._time_columns(times)
        for i, phi in enumerate(self.section.phis):
            columns[f"entropy_phi={phi:.6g}"] = list(table.column(i))

        deviation = None
        if self.oracle_mode != OracleMode.OFF:
            deviation = 0.0
            for i, phi in enumerate(self.section.phis):
                densities = self._oracle_densities(SystemAmplitudes.from_angle(phi), times, insertions)
                entropies = [oracle.vn_entropy(rho, self.unit) for rho in densities]
                columns[f"oracle_entropy_phi={phi:.6g}"] = entropies
                if self.oracle_mode == OracleMode.DICHOTOMIC:
                    deviation = max(deviation, float(np.max(np.abs(np.asarray(entropies) - table.column(i)))))
                else:
                    # entropy is too steep near full coherence; grid runs compare coherences
                    ledgers = trajectory(SystemAmplitudes.from_angle(phi), self.params, times, insertions)
                    analytic = [reduced_density(ledger).coherence for ledger in ledgers]
                    sampled = [abs(rho[0, 1]) for rho in densities]
                    deviation = max(deviation, float(np.max(np.abs(np.subtract(sampled, analytic)))))

        return self._result(ExperimentKind.SIEVE, table=pd.DataFrame(columns), deviation=deviation)

    def _flip_times(self) -> list[float]:
        t_star = self.on_grid(self.raw_time(self.section.t_star), "t_star")
        if not self.section.flip_times:
            return [t_star]
        return [self.on_grid(self.raw_time(t), "flip_times") for t in self.section.flip_times]

    def run_recohere(self) -> ExperimentResult:
        """<sigma_x>(t) with and without sigma_x flips (a single flip at t* by default)."""
        if self.section.compare_n and self.config.model.particles:
            raise ConfigError("compare_n needs the homogeneous model shorthand, not an explicit particles list")

        times = self.time_grid()
        sys = self.initial_state()
        flips = tuple(Insertion(time=t, matrix=SIGMA_X, label="flip") for t in self._flip_times())
        self.logger.debug(f"Echo flips at {[f.time for f in flips]}")

        controlled = [reduced_density(ledger).sx for ledger in trajectory(sys, self.params, times, flips)]
        free = [reduced_density(ledger).sx for ledger in trajectory(sys, self.params, times)]
        columns: dict[str, list[float]] = {**self._time_columns(times), "sx_control": controlled, "sx_free": free}

        for n in self.section.compare_n:
            params = self.config.model.model_copy(update={"n": n, "particles": None}).to_params()
            ledgers = trajectory(sys, params, times, flips)
            columns[f"sx_control_N{n}"] = [reduced_density(ledger).sx for ledger in ledgers]

        deviation = None
        if self.oracle_mode != OracleMode.OFF:
            oracle_controlled = [2 * rho[0, 1].real for rho in self._oracle_densities(sys, times, flips)]
            oracle_free = [2 * rho[0, 1].real for rho in self._oracle_densities(sys, times)]
            columns["oracle_sx_control"] = oracle_controlled
            columns["oracle_sx_free"] = oracle_free
            deviation = float(
                max(
                    np.max(np.abs(np.subtract(oracle_controlled, controlled))),
                    np.max(np.abs(np.subtract(oracle_free, free))),
                )
            )

        return self._result(ExperimentKind.RECOHERE, table=pd.DataFrame(columns), deviation=deviation)

    def run_darwinism(self) -> ExperimentResult:
        """Fragment overlaps and mutual information for the contiguous fragments {1..L}."""
        if self.oracle_mode == OracleMode.GRID:
            raise ConfigError("darwinism supports the dichotomic oracle only")

        if self.section.darwinism_time is not None:
            times = [self.raw_time(self.section.darwinism_time)]
        else:
            times = self.time_grid()
        sizes = self.section.fragment_sizes or tuple(range(1, self.params.n))
        sys = self.initial_state()
        insertions = self.insertions()

        columns: dict[str, list[float]] = self._time_columns(times)
        for size in sizes:
            for key in ("overlap_re", "overlap_im", "expected", "mi"):
                columns[f"{key}_L{size}"] = []
            if self.oracle_mode == OracleMode.DICHOTOMIC:
                columns[f"oracle_mi_L{size}"] = []

        state = self._oracle_initial(sys) if self.oracle_mode == OracleMode.DICHOTOMIC else None
        deviation = 0.0
        for t, segment in zip(times, schedule(times, insertions)):
            if state is not None:
                state = oracle.run_steps(state, segment)
            for report in qd_report(self.params, sys, t, sizes, self.unit, insertions):
                overlap = complex(report.overlap)
                columns[f"overlap_re_L{report.size}"].append(overlap.real)
                columns[f"overlap_im_L{report.size}"].append(overlap.imag)
                columns[f"expected_L{report.size}"].append(
                    report.expected_overlap if report.expected_overlap is not None else float("nan")
                )
                columns[f"mi_L{report.size}"].append(report.mutual_information)
                if state is not None:
                    mi = oracle.mutual_information(state, Fragment.prefix(report.size), self.unit)
                    columns[f"oracle_mi_L{report.size}"].append(mi)
                    deviation = max(deviation, abs(mi - report.mutual_information))

        return self._result(
            ExperimentKind.DARWINISM,
            table=pd.DataFrame(columns),
            deviation=deviation if state is not None else None,
        )

    def _history_times(self) -> tuple[float, ...]:
        times = tuple(self.raw_times(self.section.history_times))
        for insertion in self.insertions():
            if insertion.time > times[-1]:
                raise ConfigError(f"insertion at t={insertion.time} lies after the last history time {times[-1]}")
        return times

    def run_histories(self) -> ExperimentResult:
        """Decoherence functional over every pointer history; off-diagonals above 1e-10 fail the run."""
        if self.oracle_mode == OracleMode.GRID:
            raise ConfigError("histories supports the dichotomic oracle only")

        times = self._history_times()
        insertions = self.insertions()
        sys = self.initial_state()
        functional = decoherence_functional(self.params, sys, times, insertions)

        deviation = None
        if self.oracle_mode == OracleMode.DICHOTOMIC:
            initial = self._oracle_initial(sys)
            states = [
                oracle.run_steps(initial, history_steps(HistorySpec(times=times, labels=labels, insertions=insertions)))
                for labels in functional.histories
            ]
            deviation = max(
                abs(oracle.overlap(states[j], states[i]) - functional.matrix[i, j])
                for i, j in itertools.product(range(len(states)), repeat=2)
            )

        violation = None
        if functional.max_off_diagonal > SELF_CHECK_TOL:
            violation = f"decoherence functional off-diagonal {functional.max_off_diagonal:.3e} exceeds 1e-10"
        elif abs(functional.diagonal_sum - 1) > SELF_CHECK_TOL:
            violation = f"history probabilities sum to {functional.diagonal_sum!r}"

        return self._result(ExperimentKind.HISTORIES, document=functional, deviation=deviation, violation=violation)

    def _oracle_correlator(self, sys: SystemAmplitudes, t_i: float, t_j: float) -> float:
        initial = self._oracle_initial(sys)
        correlator = 0.0
        for z_i, z_j in itertools.product((0, 1), repeat=2):
            steps = history_steps(HistorySpec(times=(t_i, t_j), labels=(z_i, z_j)))
            state = oracle.run_steps(initial, steps)
            correlator += POINTER_SIGNS[z_i] * POINTER_SIGNS[z_j] * oracle.overlap(state, state).real
        return correlator

    def run_lgi(self) -> ExperimentResult:
        """K3 over every increasing triple drawn from the configured times; K3 > 1 + 1e-10 fails the run."""
        if self.oracle_mode == OracleMode.GRID:
            raise ConfigError("lgi supports the dichotomic oracle only")

        times = sorted(set(self.raw_times(self.section.lgi_times)))
        sys = self.initial_state()
        rows = []
        deviation = 0.0
        for t1, t2, t3 in itertools.combinations(times, 3):
            report = lgi_report(self.params, sys, t1, t2, t3)
            row = {"t1": t1, "t2": t2, "t3": t3}
            row.update(c21=report.c21, c32=report.c32, c31=report.c31, k3=report.k3)
            if self.oracle_mode == OracleMode.DICHOTOMIC:
                k3 = (
                    self._oracle_correlator(sys, t1, t2)
                    + self._oracle_correlator(sys, t2, t3)
                    - self._oracle_correlator(sys, t1, t3)
                )
                row["oracle_k3"] = k3
                deviation = max(deviation, abs(k3 - report.k3))
            rows.append(row)
        self.logger.debug(f"Evaluated {intcomma(len(rows))} time triples")

        columns = ["t1", "t2", "t3", "c21", "c32", "c31", "k3"]
        if self.oracle_mode == OracleMode.DICHOTOMIC:
            columns.append("oracle_k3")
        table = pd.DataFrame(rows, columns=columns)
        violation = None
        if len(table) and table["k3"].max() > 1 + SELF_CHECK_TOL:
            violation = f"K3 = {table['k3'].max()!r} exceeds 1"

        return self._result(
            ExperimentKind.LGI,
            table=table,
            deviation=deviation if self.oracle_mode == OracleMode.DICHOTOMIC else None,
            violation=violation,
        )

    def _regression_rate(self) -> float:
        if self.section.regression_rate is not None:
            return self.section.regression_rate
        rate = self.rate
        if rate is None:
            raise ConfigError("qrt needs regression_rate for models without a Lorentzian rate Gamma_E")
        return rate

    def _oracle_two_time(self, a: np.ndarray, b: np.ndarray, t: float, s: float, sys: SystemAmplitudes) -> complex:
        initial = self._oracle_initial(sys)
        left = oracle.apply_system_op(oracle.propagate(initial, t), a.conj().T)
        right = oracle.propagate(oracle.apply_system_op(oracle.propagate(initial, s), b), t - s)
        return oracle.overlap(left, right)

    def run_qrt(self) -> ExperimentResult:
        """Two-time Pauli correlators and sigma_x probes after each intervention channel at t*."""
        if self.oracle_mode == OracleMode.GRID and self.params.n > 1:
            raise ConfigError(f"qrt grid cross-check needs a single Lorentzian particle, got N={self.params.n}")

        rate = self._regression_rate()
        sys = self.initial_state()
        s, t = self.raw_times(self.section.correlator_times)
        t_star = self.raw_time(self.section.t_star)
        probe = 2 * t_star

        deviation = 0.0
        pairs = []
        for name_a, name_b in itertools.product(self.section.operators, repeat=2):
            a, b = named_operator(name_a), named_operator(name_b)
            exact = exact_two_time(a, b, t, s, sys, self.params)
            pairs.append(
                CorrelatorReport(
                    exact=exact,
                    regression=regression_two_time(a, b, t, s, sys.density(), rate),
                    observables=(name_a, name_b),
                    t=t,
                    s=s,
                    initial_state=sys,
                    label=f"{name_a}(t) {name_b}(s)",
                )
            )
            if self.oracle_mode != OracleMode.OFF:
                deviation = max(deviation, abs(self._oracle_two_time(a, b, t, s, sys) - exact))

        interventions = []
        for ref in self.section.channels:
            channel = self.channel(ref)
            report = intervention_compare(channel, t_star, SIGMA_X, probe, sys, self.params, rate, "sx")
            interventions.append(report)
            if self.oracle_mode != OracleMode.OFF:
                paths = [[Evolve(dt=t_star), Operate(matrix=k), Evolve(dt=probe - t_star)] for k in channel.kraus]
                rho = oracle.system_matrix(self._oracle_initial(sys), paths)
                deviation = max(deviation, abs(complex(np.trace(SIGMA_X @ rho)) - report.exact))

        document = QrtReport(rate=rate, t_star=t_star, pairs=tuple(pairs), interventions=tuple(interventions))
        return self._result(
            ExperimentKind.QRT,
            document=document,
            deviation=deviation if self.oracle_mode != OracleMode.OFF else None,
        )

    def certifier_config(self) -> tuple[CertifierConfig, list[np.ndarray]]:
        section = self.section.certifier
        if section.projectors == "pointer":
            projectors = list(PROJECTORS)
        elif isinstance(section.projectors, str):
            raise ConfigError(f"unknown projector set {section.projectors!r}; use 'pointer' or a list of matrices")
        else:
            projectors = [as_complex_matrix(p) for p in section.projectors]

        config = CertifierConfig(
            epsilon=section.epsilon,
            tau=self.raw_time(section.tau),
            controls=tuple(self.channel(ref) for ref in section.controls),
            max_ops=section.max_ops,
            times=tuple(self.time_grid()),
            initial_states=tuple(SystemAmplitudes.named(name) for name in section.initial_states),
        )
        return config, projectors

    def run_certify(self) -> ExperimentResult:
        """(epsilon, tau) certification of the projector set against the configured control family."""
        if self.oracle_mode == OracleMode.GRID:
            raise ConfigError("certify supports the dichotomic oracle only")

        config, projectors = self.certifier_config()
        verdict = certify(self.params, projectors, config)

        deviation = None
        if self.oracle_mode == OracleMode.DICHOTOMIC:
            deviation = 0.0
            if verdict.witness is not None:
                witness = verdict.witness
                channels = [config.controls[i] for i in witness.control_indices]
                extra: list[Step] = [Evolve(dt=witness.probe_time - witness.times[-1])]
                paths = [[*steps, *extra] for steps in control_paths(channels, witness.outcomes, witness.times)]
                rho = oracle.system_matrix(self._oracle_initial(witness.initial_state), paths)
                distance = dephasing_distance(rho / np.trace(rho).real, projectors)
                deviation = abs(distance - witness.distance)

        return self._result(ExperimentKind.CERTIFY, document=verdict, deviation=deviation, passed=verdict.passed)

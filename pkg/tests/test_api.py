import math
from pathlib import Path

import numpy as np
import pytest

from recoherence.api import Experiments, config_digest, load_config, load_kraus_file
from recoherence.exceptions import ConfigError, SelfCheckError, UnknownOperatorError
from recoherence.models import (
    CertifierVerdict,
    DecoherenceFunctional,
    ExperimentConfig,
    ExperimentKind,
    ExperimentResult,
    GridSpec,
    OracleCheck,
    OracleMode,
    QrtReport,
)

CONFIG_DIR = Path(__file__).parent.parent / "configs"

DICHOTOMIC_MODEL = {
    "particles": [
        {"kind": "dichotomic", "g": 1.0, "p_plus": 0.5},
        {"kind": "dichotomic", "g": 0.7, "p_plus": 0.3},
        {"kind": "dichotomic", "g": -1.3, "p_plus": 0.8},
    ]
}


def _experiments(experiment: dict, model: dict | None = None, **kwargs) -> Experiments:
    config = ExperimentConfig.model_validate({"model": model or {"n": 5}, "experiment": experiment})
    return Experiments(config, base_dir=CONFIG_DIR, **kwargs)


def _row(table, gamma_t: float):
    (index,) = np.flatnonzero(np.isclose(table["gamma_t"], gamma_t))
    return table.iloc[index]


def test_flip_recoheres_at_twice_the_flip_time():
    result = _experiments({"kind": "recohere", "times": {"stop": 8, "count": 81}, "t_star": 2.0}).run()
    table = result.table
    assert list(table.columns) == ["t", "gamma_t", "sx_control", "sx_free"]
    assert _row(table, 2.0)["sx_control"] == pytest.approx(math.exp(-2), abs=1e-12)
    assert _row(table, 4.0)["sx_control"] == pytest.approx(1.0, abs=1e-12)
    assert _row(table, 4.0)["sx_free"] == pytest.approx(math.exp(-4), abs=1e-12)
    assert _row(table, 6.0)["sx_control"] == pytest.approx(math.exp(-2), abs=1e-12)


def test_recoherence_is_independent_of_environment_size():
    experiments = _experiments({"kind": "recohere", "times": {"stop": 4, "count": 9}, "compare_n": [1, 10]})
    table = experiments.run(ExperimentKind.RECOHERE).table
    assert _row(table, 4.0)["sx_control_N1"] == pytest.approx(1.0, abs=1e-12)
    assert _row(table, 4.0)["sx_control_N10"] == pytest.approx(1.0, abs=1e-12)


def test_flip_time_must_lie_on_the_grid():
    experiments = _experiments({"kind": "recohere", "times": {"stop": 8, "count": 81}, "t_star": 2.05})
    with pytest.raises(ConfigError, match="t_star"):
        experiments.run()


def test_raw_times_follow_the_scaling():
    scaled = _experiments({"kind": "sieve"})
    assert scaled.raw_time(2.0) == pytest.approx(0.4)
    unscaled = _experiments({"kind": "sieve", "scaled_times": False})
    assert unscaled.raw_time(2.0) == 2.0


def test_sieve_columns_follow_phi_order():
    result = _experiments({"kind": "sieve", "times": {"stop": 2, "count": 5}, "phis": [0.0, 0.3]}).run()
    assert list(result.table.columns) == ["t", "gamma_t", "entropy_phi=0", "entropy_phi=0.3"]
    assert result.is_table
    assert result.oracle is None


def test_sieve_reports_bits_when_asked():
    config = ExperimentConfig.model_validate(
        {"experiment": {"kind": "sieve", "times": {"stop": 30, "count": 4}}, "output": {"units": "bits"}}
    )
    table = Experiments(config).run().table
    assert table["entropy_phi=0.785398"].iloc[-1] == pytest.approx(1.0, abs=1e-9)


def test_darwinism_rows_at_a_single_time():
    result = _experiments({"kind": "darwinism", "darwinism_time": 1.0, "fragment_sizes": [1, 3]}).run()
    row = result.table.iloc[0]
    assert len(result.table) == 1
    assert row["overlap_re_L1"] == pytest.approx(math.exp(-0.2), abs=1e-12)
    assert row["expected_L3"] == pytest.approx(math.exp(-0.6), abs=1e-12)
    assert row["overlap_im_L3"] == pytest.approx(0.0, abs=1e-15)


def test_histories_document_is_consistent():
    result = Experiments.from_file(CONFIG_DIR / "histories.yaml").run()
    assert isinstance(result.document, DecoherenceFunctional)
    assert result.violation is None
    assert result.document.matrix.shape == (8, 8)


def test_lgi_table_covers_every_triple():
    result = _experiments({"kind": "lgi", "lgi_times": [0.5, 1.0, 1.5, 2.0]}).run()
    assert len(result.table) == 4
    assert np.allclose(result.table["k3"], 1.0, rtol=0, atol=1e-12)
    assert result.violation is None


def test_qrt_separates_regression_and_intervention():
    result = Experiments.from_file(CONFIG_DIR / "qrt.yaml").run()
    report = result.document
    assert isinstance(report, QrtReport)
    assert len(report.pairs) == 16
    assert max(row.discrepancy for row in report.pairs) <= 1e-12

    by_name = {row.observables[1]: row for row in report.interventions}
    assert set(by_name) == {"I", "flip", "phase", "amplitude_damping"}
    assert by_name["flip"].discrepancy == pytest.approx(1 - math.exp(-4), abs=1e-12)
    assert by_name["phase"].discrepancy <= 1e-12
    assert report.max_discrepancy == pytest.approx(1 - math.exp(-4), abs=1e-12)


def test_qrt_needs_a_rate_for_dichotomic_models():
    experiments = _experiments({"kind": "qrt"}, model=DICHOTOMIC_MODEL)
    with pytest.raises(ConfigError, match="regression_rate"):
        experiments.run()

    report = _experiments({"kind": "qrt", "regression_rate": 1.0}, model=DICHOTOMIC_MODEL).run().document
    assert report.rate == 1.0


def test_certify_reports_a_witness():
    result = Experiments.from_file(CONFIG_DIR / "certify.yaml").run()
    verdict = result.document
    assert isinstance(verdict, CertifierVerdict)
    assert result.passed is False
    assert verdict.worst_distance == pytest.approx(0.5, abs=1e-12)
    assert verdict.witness.controls == ("flip",)
    assert verdict.witness.probe_time == pytest.approx(2 * verdict.witness.times[0])


def test_unknown_operator_lists_valid_names():
    experiments = _experiments({"kind": "sieve", "insertions": [{"time": 1.0, "operator": "hadamard"}]})
    with pytest.raises(UnknownOperatorError) as exc_info:
        experiments.run()
    assert "sx" in exc_info.value.valid_names
    assert "flip" in str(exc_info.value)


def test_kraus_files_load_relative_to_the_config():
    kraus = load_kraus_file(CONFIG_DIR / "kraus" / "amplitude_damping.yaml")
    total = sum(k.conj().T @ k for k in kraus)
    assert np.allclose(total, np.eye(2), rtol=0, atol=1e-12)


@pytest.mark.parametrize("kind", ["sieve", "recohere", "darwinism", "histories", "lgi", "qrt", "certify"])
def test_dichotomic_oracle_agrees(kind):
    experiment = {
        "kind": kind,
        "times": {"stop": 3, "count": 7},
        "t_star": 1.0,
        "history_times": [0.5, 1.0, 2.0],
        "lgi_times": [0.5, 1.0, 2.0],
        "regression_rate": 1.0,
        "certifier": {"controls": ["I", "flip"], "tau": 0.5},
    }
    result = _experiments(experiment, model=DICHOTOMIC_MODEL, oracle_mode=OracleMode.DICHOTOMIC).run()
    assert isinstance(result.oracle, OracleCheck)
    assert result.oracle.deviation <= 1e-10
    assert result.oracle.within_tolerance


def test_dichotomic_oracle_needs_a_small_dichotomic_model():
    with pytest.raises(ConfigError):
        _experiments({"kind": "sieve"}, oracle_mode="dichotomic")
    with pytest.raises(ConfigError):
        _experiments({"kind": "sieve"}, model={"kind": "dichotomic", "n": 7}, oracle_mode="dichotomic")


def test_grid_oracle_is_limited_to_supported_lorentzian_runs():
    with pytest.raises(ConfigError):
        _experiments({"kind": "sieve"}, model=DICHOTOMIC_MODEL, oracle_mode="grid")
    with pytest.raises(ConfigError):
        _experiments({"kind": "darwinism"}, oracle_mode="grid").run()
    with pytest.raises(ConfigError, match="single Lorentzian particle"):
        _experiments({"kind": "qrt"}, oracle_mode="grid").run()


def test_grid_oracle_tracks_single_particle_recoherence():
    experiments = _experiments(
        {"kind": "recohere", "times": {"stop": 4, "count": 9}, "t_star": 2.0}, model={"n": 1}, oracle_mode="grid"
    )
    result = experiments.run()
    assert result.oracle.deviation <= 1e-3
    assert "oracle_sx_control" in result.table.columns


def test_grid_oracle_on_several_particles_uses_sampled_kernels():
    experiments = _experiments(
        {"kind": "sieve", "times": {"stop": 4, "count": 5}, "phis": [0.785398]},
        model={"n": 3, "gamma": 0.5},
        oracle_mode="grid",
        grid=GridSpec(cutoff=2000.0, points=2**15),
    )
    assert experiments.run().oracle.deviation <= 1e-3


def test_oracle_violation_raises_self_check_error():
    experiments = _experiments({"kind": "sieve"}, model=DICHOTOMIC_MODEL, oracle_mode="dichotomic")
    result = ExperimentResult(
        kind=ExperimentKind.SIEVE,
        config_sha256="0" * 64,
        oracle=OracleCheck(mode=OracleMode.DICHOTOMIC, deviation=1e-6, tolerance=1e-10),
        violation="oracle deviation 1.000e-06 exceeds 1e-10",
    )
    with pytest.raises(SelfCheckError) as exc_info:
        experiments.raise_for_violation(result)
    assert exc_info.value.deviation == 1e-6


def test_config_digest_is_stable():
    config = load_config(CONFIG_DIR / "sieve.yaml")
    assert config_digest(config) == config_digest(load_config(CONFIG_DIR / "sieve.yaml"))
    assert len(config_digest(config)) == 64


def test_load_config_rejects_bad_yaml(tmp_path):
    path = tmp_path / "broken.yaml"
    path.write_text("model: [unclosed\n")
    with pytest.raises(ConfigError) as exc_info:
        load_config(path)
    assert exc_info.value.path == str(path)

    path.write_text("model: {n: 0}\n")
    with pytest.raises(ConfigError):
        load_config(path)


def test_flip_train_recoheres_after_every_pair():
    experiments = _experiments({"kind": "recohere", "times": {"stop": 8, "count": 81}, "flip_times": [1.0, 3.0]})
    table = experiments.run().table
    assert _row(table, 2.0)["sx_control"] == pytest.approx(1.0, abs=1e-12)
    assert _row(table, 3.0)["sx_control"] == pytest.approx(math.exp(-1), abs=1e-12)
    assert _row(table, 4.0)["sx_control"] == pytest.approx(1.0, abs=1e-12)
    assert _row(table, 6.0)["sx_control"] == pytest.approx(math.exp(-2), abs=1e-12)


def test_grid_oracle_checks_single_particle_correlators():
    experiments = _experiments(
        {"kind": "qrt", "correlator_times": [1.0, 2.0], "operators": ["sx"], "channels": ["I", "flip"]},
        model={"n": 1},
        oracle_mode="grid",
    )
    result = experiments.run()
    (pair,) = result.document.pairs
    assert pair.exact.real == pytest.approx(math.exp(-1), abs=1e-12)
    assert result.oracle.mode == OracleMode.GRID
    assert result.oracle.deviation <= 1e-3
    assert result.violation is None


def test_compare_n_needs_a_homogeneous_model():
    experiments = _experiments({"kind": "recohere", "compare_n": [2]}, model=DICHOTOMIC_MODEL)
    with pytest.raises(ConfigError, match="compare_n"):
        experiments.run()


def test_oracle_rebuilds_the_witness_from_control_positions(tmp_path):
    (tmp_path / "flip.yaml").write_text("- [[1.0, 0.0], [0.0, 1.0]]\n")
    config = ExperimentConfig.model_validate(
        {
            "model": DICHOTOMIC_MODEL,
            "experiment": {
                "kind": "certify",
                "times": {"stop": 2.0, "count": 5},
                "certifier": {"controls": ["flip", {"kraus_file": "flip.yaml"}], "initial_states": ["plus"]},
            },
        }
    )
    result = Experiments(config, oracle_mode="dichotomic", base_dir=tmp_path).run()
    witness = result.document.witness
    assert witness.controls == ("flip",)
    assert witness.control_indices == (0,)
    assert result.oracle.deviation <= 1e-10

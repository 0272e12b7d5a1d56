import json

import pytest

from helmbie.cli import main
from helmbie.harness import (
    ConfigError,
    StudyConfig,
    run_convergence,
    run_verification,
)

FAST_STUDY = """
# small self-convergence study used by the test suite
curve = kite
k_plus = 8.0
k_minus = 8.0        # matched media: all errors at roundoff level
nu = 1.0
formulations = l1
n_ladder = 24,32
n_reference = 64
directions = 36
"""


def test_defaults_build():
    cfg = StudyConfig.from_mapping({})
    assert cfg.curve_name == "kite"
    assert cfg.n_reference >= 2 * max(cfg.n_ladder)
    prob = cfg.build_problem()
    assert prob.k_minus == 32.0


def test_config_rejects_unknown_keys():
    with pytest.raises(ConfigError):
        StudyConfig.from_mapping({"wavenumber": 3})


def test_config_rejects_bad_values():
    with pytest.raises(ConfigError):
        StudyConfig.from_mapping({"k_plus": "-2"})
    with pytest.raises(ConfigError):
        StudyConfig.from_mapping({"formulations": "l9"})
    with pytest.raises(ConfigError):
        StudyConfig.from_mapping({"n_reference": "100"})  # < 2 x 160
    with pytest.raises(ConfigError):
        StudyConfig.from_mapping({"solver": "cg"})
    with pytest.raises(ConfigError):
        StudyConfig.from_mapping({"n_ladder": "abc"})


def test_config_file_parsing(tmp_path):
    path = tmp_path / "study.cfg"
    path.write_text(FAST_STUDY)
    cfg = StudyConfig.from_file(path)
    assert cfg.k_minus == 8.0
    assert cfg.formulations == ("l1",)
    assert cfg.n_ladder == (24, 32)
    bad = tmp_path / "bad.cfg"
    bad.write_text("this line has no equals sign\n")
    with pytest.raises(ConfigError):
        StudyConfig.from_file(bad)


def test_matched_media_study_errors_vanish(tmp_path):
    path = tmp_path / "study.cfg"
    path.write_text(FAST_STUDY)
    cfg = StudyConfig.from_file(path)
    report = run_convergence(cfg)
    assert len(report.rows) == 2
    for row in report.rows:
        assert not row.failure
        assert row.error_linf <= 1e-12
    csv = report.to_csv()
    assert csv.splitlines()[0] == "formulation,N,error_linf,iters,seconds"
    payload = json.loads(report.to_json())
    assert payload["reference"] == "l1 at N=64"
    assert len(payload["rows"]) == 2


def test_self2x_reference(tmp_path):
    cfg = StudyConfig.from_mapping({
        "k_plus": "2.0",
        "k_minus": "2.0",
        "formulations": "l2",
        "n_ladder": "24",
        "reference_formulation": "self2x",
        "directions": "36",
    })
    report = run_convergence(cfg)
    assert report.reference_label == "self at 2N"
    # matched media: the error is pure discretization noise of the solve
    assert report.rows[0].error_linf <= 1e-6


def test_study_runs_concurrently(tmp_path):
    cfg = StudyConfig.from_mapping({
        "k_minus": "8.0",
        "formulations": "l1,l2",
        "n_ladder": "16,24",
        "n_reference": "48",
        "directions": "18",
        "threads": "4",
    })
    report = run_convergence(cfg)
    assert [(r.formulation, r.N) for r in report.rows] == [
        ("l1", 16), ("l1", 24), ("l2", 16), ("l2", 24)
    ]


def test_reports_are_deterministic(tmp_path):
    cfg_text = FAST_STUDY
    path = tmp_path / "study.cfg"
    path.write_text(cfg_text)
    first = run_convergence(StudyConfig.from_file(path)).to_csv()
    second = run_convergence(StudyConfig.from_file(path)).to_csv()
    # timing columns differ; everything physical must be bit-identical
    strip = lambda csv: [",".join(r.split(",")[:4]) for r in csv.splitlines()]
    assert strip(first) == strip(second)


def test_unknown_suite_rejected():
    with pytest.raises(ConfigError):
        run_verification("spectralify")


def test_weights_suite_passes():
    rep = run_verification("weights")
    assert rep.passed
    assert any("quadrature oracle" in c.label for c in rep.checks)


def test_extinction_suite_passes():
    rep = run_verification("extinction")
    assert rep.passed


# ------------------------------------------------------------------- CLI


def test_cli_verify_exit_codes(capsys):
    assert main(["verify", "weights"]) == 0
    out = capsys.readouterr().out
    assert "[PASS] suite weights" in out


def test_cli_study_and_solve(tmp_path, capsys):
    cfg = tmp_path / "study.cfg"
    cfg.write_text(FAST_STUDY + f"out_dir = {tmp_path/'out'}\n")
    assert main(["--config", str(cfg), "study"]) == 0
    assert (tmp_path / "out" / "study.csv").exists()
    assert (tmp_path / "out" / "study.json").exists()
    capsys.readouterr()
    assert main(["--config", str(cfg), "solve"]) == 0
    out = capsys.readouterr().out
    payload = json.loads(out)
    assert payload["formulation"] == "l1"
    assert (tmp_path / "out" / "farfield_l1_N32.csv").exists()


def test_cli_config_error_exit_code(tmp_path, capsys):
    cfg = tmp_path / "broken.cfg"
    cfg.write_text("curve = dodecahedron\n")
    assert main(["--config", str(cfg), "study"]) == 1
    assert main(["--config", str(tmp_path / "missing.cfg"), "study"]) == 1


def test_cli_threads_flag(tmp_path):
    cfg = tmp_path / "study.cfg"
    cfg.write_text(FAST_STUDY + f"out_dir = {tmp_path/'out'}\n")
    assert main(["--config", str(cfg), "--threads", "2", "study"]) == 0


def test_cli_solver_failure_exit_code(tmp_path, capsys):
    # an unreachable gmres tolerance fails the cell and flips the exit code
    cfg = tmp_path / "study.cfg"
    cfg.write_text(FAST_STUDY + "solver = gmres\ngmres_tol = 1e-30\n"
                   + f"out_dir = {tmp_path/'out'}\n")
    assert main(["--config", str(cfg), "study"]) == 2
    capsys.readouterr()
    assert main(["--config", str(cfg), "solve"]) == 2

import json

import numpy as np
import pytest

from phhs.cli import main


def write_config(tmp_path, name, cfg):
    path = tmp_path / name
    path.write_text(json.dumps(cfg))
    return str(path)


def load_summary(outdir):
    return json.loads((outdir / "summary.json").read_text())


def test_integrate_central_problem(tmp_path):
    cfg = write_config(
        tmp_path,
        "cfg.json",
        {
            "model": {"name": "central_problem"},
            "x0": [1.0, 0.5, 0.0, 0.0],
            "z0": 0.0,
            "t_range": [0.0, 0.5],
            "s_range": [0.0, 0.5],
            "nt": 9,
            "ns": 9,
            "flow": {"dt": 1e-3},
        },
    )
    out = tmp_path / "out"
    assert main(["integrate", "--config", cfg, "--out", str(out)]) == 0
    summary = load_summary(out)
    assert summary["pass"] is True
    assert summary["results"]["swap_defect"] <= 1e-6
    lines = (out / "grid.csv").read_text().strip().splitlines()
    assert len(lines) == 1 + 81
    assert lines[0].startswith("i,j,t,s,c0")


def test_outputs_are_byte_identical(tmp_path):
    cfg = write_config(
        tmp_path,
        "cfg.json",
        {
            "model": {"name": "proper_phhs", "f": "1", "h": "exp(x1)", "H_R": "-y1"},
            "center": [0, 0, 0, 0],
            "half_width": 0.5,
            "per_axis": 3,
        },
    )
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert main(["integrability-scan", "--config", cfg, "--out", str(out1)]) == 0
    assert main(["integrability-scan", "--config", cfg, "--out", str(out2)]) == 0
    assert (out1 / "summary.json").read_bytes() == (out2 / "summary.json").read_bytes()
    assert (out1 / "scan.csv").read_bytes() == (out2 / "scan.csv").read_bytes()
    summary = load_summary(out1)
    assert summary["results"]["classification"] == "proper"
    # the summary echoes the resolved configuration
    assert summary["model"]["h"] == "exp(x1)"
    assert summary["threshold"] == pytest.approx(1e-3)


def test_monodromy_scenario(tmp_path):
    theta = np.linspace(0.0, 2.0 * np.pi, 49)
    path = [[-1.0 + float(np.cos(t)), float(np.sin(t))] for t in theta]
    cfg = write_config(
        tmp_path,
        "cfg.json",
        {
            "model": {"name": "central_problem"},
            "x0": [1.0, 0.5, 0.0, 0.0],
            "path": path,
            "expect": "negated",
            "tolerance": 1e-5,
        },
    )
    out = tmp_path / "out"
    assert main(["monodromy", "--config", cfg, "--out", str(out)]) == 0
    summary = load_summary(out)
    assert summary["results"]["negated_defect"] <= 1e-5


def test_foliate_scenario(tmp_path):
    cfg = write_config(
        tmp_path,
        "cfg.json",
        {
            "model": {"name": "central_problem"},
            "x0": [1.0, 0.5, 0.0, 0.0],
            "words": [[[0.3, -0.2]], [[0.1, 0.2], [0.2, -0.1]]],
        },
    )
    out = tmp_path / "out"
    assert main(["foliate", "--config", cfg, "--out", str(out)]) == 0
    assert load_summary(out)["results"]["max_energy_drift"] <= 1e-6


def test_action_check_scenario(tmp_path):
    cfg = write_config(
        tmp_path,
        "cfg.json",
        {
            "model": {"name": "standard_hhs", "n": 1, "H": "(P1^2 + Q1^2)/2"},
            "x0": [0.4, 0.3, 0.1, -0.2],
            "nt": 9,
            "ns": 9,
            "displace": {"node": [4, 4], "coord": 0, "amount": 0.05},
            "ratio_min": 10.0,
        },
    )
    out = tmp_path / "out"
    assert main(["action-check", "--config", cfg, "--out", str(out)]) == 0
    summary = load_summary(out)
    assert summary["results"]["ratio"] >= 10.0


def test_deform_scenario(tmp_path):
    cfg = write_config(
        tmp_path,
        "cfg.json",
        {"epsilons": [0.0, 0.5], "n": 1, "half_width": 0.6, "per_axis": 3},
    )
    out = tmp_path / "out"
    assert main(["deform", "--config", cfg, "--out", str(out)]) == 0
    rows = (out / "sweep.csv").read_text().strip().splitlines()[1:]
    classes = [r.split(",")[-1] for r in rows]
    assert classes == ["integrable", "proper"]


def test_connection_check_scenario(tmp_path):
    cfg = write_config(
        tmp_path,
        "cfg.json",
        {
            "metric": {"kind": "euclidean", "n": 2},
            "holo_metric": {"entries": [["1", "0"], ["0", "exp(z1)"]]},
        },
    )
    out = tmp_path / "out"
    assert main(["connection-check", "--config", cfg, "--out", str(out)]) == 0
    summary = load_summary(out)
    assert summary["results"]["pairing_signature"] == [4, 0]
    assert summary["results"]["lc_diff"] <= 1e-5


def test_bad_model_name_exits_3(tmp_path):
    cfg = write_config(tmp_path, "cfg.json", {"model": {"name": "nope"}})
    assert main(["monodromy", "--config", cfg, "--out", str(tmp_path / "o")]) == 3


def test_missing_grid_key_exits_3(tmp_path):
    cfg = write_config(tmp_path, "cfg.json", {"model": {"name": "central_problem"}})
    assert main(["integrate", "--config", cfg, "--out", str(tmp_path / "o")]) == 3


def test_bad_expression_exits_3(tmp_path):
    cfg = write_config(
        tmp_path, "cfg.json", {"model": {"name": "proper_phhs", "f": "1 +", "h": "1"}}
    )
    assert main(
        ["integrability-scan", "--config", cfg, "--out", str(tmp_path / "o")]
    ) == 3


def test_runtime_failure_exits_4(tmp_path):
    # the path walks straight through the singular point of the closed form
    cfg = write_config(
        tmp_path,
        "cfg.json",
        {
            "model": {"name": "central_problem"},
            "x0": [1.0, 0.5, 0.0, 0.0],
            "path": [[0.0, 0.0], [-0.9995, 0.0]],
            "expect": "closed",
            "flow": {"dt": 1e-3, "max_steps": 100},
        },
    )
    assert main(["monodromy", "--config", cfg, "--out", str(tmp_path / "o")]) == 4


def test_failed_numerical_check_exits_2(tmp_path):
    theta = np.linspace(0.0, 2.0 * np.pi, 49)
    path = [[-1.0 + float(np.cos(t)), float(np.sin(t))] for t in theta]
    cfg = write_config(
        tmp_path,
        "cfg.json",
        {
            "model": {"name": "central_problem"},
            "x0": [1.0, 0.5, 0.0, 0.0],
            "path": path,
            "expect": "closed",
        },
    )
    assert main(["monodromy", "--config", cfg, "--out", str(tmp_path / "o")]) == 2

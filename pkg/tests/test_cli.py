import csv
import json

import numpy as np
import pytest

import gaussorder as go
from gaussorder.cli import run


def write_state(path, **payload):
    path.write_text(json.dumps(payload))
    return str(path)


@pytest.fixture
def files(tmp_path):
    return {
        "a": write_state(tmp_path / "a.json", xi=[2, 2, 1, 1]),
        "b": write_state(tmp_path / "b.json", xi=[2, 2, 1, -0.5]),
        "fig": write_state(tmp_path / "fig.json", xi=[3, 5, 1, 0.5]),
        "noisy": write_state(tmp_path / "noisy.json", xi=[3, 2, 1, 0.5]),
        "base": write_state(tmp_path / "base.json", xi=[2, 2, 1, 0.5]),
        "vac": write_state(tmp_path / "vac.json", covariance=np.eye(4).tolist()),
        "sub": write_state(
            tmp_path / "sub.json", covariance=np.diag([0.5, 0.5, 1, 1]).tolist()
        ),
        "tmp": tmp_path,
    }


def get_json(capsys):
    return json.loads(capsys.readouterr().out)


def test_validate_valid(files, capsys):
    assert run(["validate", files["vac"]]) == 0
    out = get_json(capsys)
    assert out["valid"] and out["xi"] == [1.0, 1.0, 0.0, 0.0]


def test_validate_invalid_exits_2(files, capsys):
    assert run(["validate", files["sub"]]) == 2
    assert get_json(capsys)["valid"] is False


def test_invariants_output(files, capsys):
    assert run(["invariants", files["fig"]]) == 0
    xi = get_json(capsys)
    np.testing.assert_allclose(xi, [3, 5, 1, 0.5], atol=1e-9)


def test_invariants_round_trip_decision(files, capsys, tmp_path):
    run(["invariants", files["fig"]])
    xi = get_json(capsys)
    reingested = write_state(tmp_path / "ri.json", xi=xi)
    first = run(["decide", "--from", files["fig"], "--to", files["fig"]])
    capsys.readouterr()
    second = run(["decide", "--from", reingested, "--to", reingested])
    capsys.readouterr()
    assert first == second == 0


def test_reduce_output(files, capsys):
    assert run(["reduce", files["vac"]]) == 0
    out = get_json(capsys)
    np.testing.assert_allclose(out["normal_form"], np.eye(4))
    assert go.symplectic_check(np.asarray(out["s1"]), 1e-9)


def test_decide_incommensurate_exits_3(files, capsys):
    code = run(["decide", "--from", files["a"], "--to", files["b"], "--general"])
    assert code == 3
    assert get_json(capsys)["possible"] is False


def test_decide_self_exits_0(files, capsys):
    assert run(["decide", "--from", files["a"], "--to", files["a"]]) == 0
    assert get_json(capsys)["possible"] is True


def test_decide_local_witness_file(files, capsys, tmp_path):
    witness = tmp_path / "witness.json"
    code = run(
        [
            "decide",
            "--from",
            files["base"],
            "--to",
            files["noisy"],
            "--local",
            "2",
            "--witness-out",
            str(witness),
        ]
    )
    assert code == 1  # xi1 differs, so a system-2 map cannot do it
    capsys.readouterr()
    code = run(
        [
            "decide",
            "--from",
            files["base"],
            "--to",
            files["noisy"],
            "--local",
            "1",
            "--witness-out",
            str(witness),
        ]
    )
    assert code == 0
    out = get_json(capsys)
    assert out["possible"] and out["witness_map"] is not None
    cp_map = go.GaussianCPMap.from_dict(json.loads(witness.read_text()))
    assert go.cp_check(cp_map)


def test_decide_strict_vs_reflexive_closure(tmp_path, capsys):
    deg = write_state(tmp_path / "deg.json", xi=[2, 2, 1, 0])
    assert run(["decide", "--from", deg, "--to", deg, "--strict"]) == 3
    capsys.readouterr()
    assert run(["decide", "--from", deg, "--to", deg, "--reflexive-closure"]) == 0
    capsys.readouterr()


def test_compare_output(files, capsys):
    assert run(["compare", "--a", files["a"], "--b", files["b"]]) == 0
    out = get_json(capsys)
    assert out == {"order": "Incommensurate", "forward": False, "backward": False}


def test_region_csv_schema_and_bound(files, tmp_path, capsys):
    out_csv = tmp_path / "region.csv"
    code = run(
        [
            "region", "--state", files["fig"], "--xi1pp", "2",
            "--xmin", "0", "--xmax", "1.2", "--ymin", "-0.8", "--ymax", "0.8",
            "--nx", "200", "--ny", "200", "--out", str(out_csv),
        ]
    )
    assert code == 0
    assert capsys.readouterr().out == ""
    with open(out_csv, newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 200 * 200
    assert set(rows[0]) == {"xi3pp", "xi4pp", "feasible", "f1"}
    bound = (0.5 / 3.0) * 2.0
    for row in rows:
        if row["feasible"] == "1":
            assert abs(float(row["xi3pp"]) * float(row["xi4pp"])) <= bound + 1e-9


def test_region_to_stdout(files, capsys):
    code = run(
        [
            "region", "--state", files["fig"], "--xi1pp", "2",
            "--xmin", "0", "--xmax", "1", "--ymin", "-0.5", "--ymax", "0.5",
            "--nx", "8", "--ny", "8",
        ]
    )
    assert code == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert lines[0] == "xi3pp,xi4pp,feasible,f1"
    assert len(lines) == 65


def test_region_plot_renders(files, tmp_path, capsys):
    image = tmp_path / "region.png"
    code = run(
        [
            "region", "--state", files["fig"], "--xi1pp", "2",
            "--xmin", "0", "--xmax", "1.2", "--ymin", "-0.8", "--ymax", "0.8",
            "--nx", "64", "--ny", "64", "--out", str(tmp_path / "r.csv"),
            "--plot", str(image),
        ]
    )
    assert code == 0
    assert image.exists() and image.stat().st_size > 5000


def test_oracle_check_agreement(files, capsys):
    code = run(
        ["oracle-check", "--from", files["a"], "--to", files["b"], "--nx", "256", "--ny", "256"]
    )
    assert code == 0
    out = get_json(capsys)
    assert out["agree"] is True and out["region_scan"] is False


def test_malformed_inputs_exit_1(tmp_path, capsys):
    missing = str(tmp_path / "nope.json")
    assert run(["validate", missing]) == 1
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["validate", str(bad)]) == 1
    both = write_state(tmp_path / "both.json", xi=[2, 2, 1, 0], covariance=np.eye(4).tolist())
    assert run(["validate", both]) == 1
    assert run(["decide", "--from", missing]) == 1
    capsys.readouterr()


def test_invalid_state_exits_2(files, capsys):
    assert run(["invariants", files["sub"]]) == 2
    capsys.readouterr()

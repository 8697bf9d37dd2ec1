import json

from dilatekit import Mat
from dilatekit.cli import EXIT_INPUT, EXIT_PASS, main
from dilatekit.seqops import Componentwise
from dilatekit.serialize import seqop_to_json


def write(tmp_path, name, payload):
    path = tmp_path / name
    path.write_text(json.dumps(payload))
    return str(path)


def run_cli(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_run_small_suite(capsys, tmp_path):
    out_path = tmp_path / "report.json"
    code, out, err = run_cli(
        capsys,
        [
            "run",
            "--seed",
            "7",
            "--trials",
            "2",
            "--suites",
            "halmos,wold",
            "--json",
            str(out_path),
        ],
    )
    assert code == EXIT_PASS
    reports = json.loads(out)
    assert [r["suite"] for r in reports] == ["halmos", "wold"]
    assert json.loads(out_path.read_text()) == reports
    assert "halmos: pass" in err


def test_run_is_deterministic(capsys):
    argv = ["run", "--seed", "5", "--trials", "2", "--suites", "standard"]
    code1, out1, _ = run_cli(capsys, argv)
    code2, out2, _ = run_cli(capsys, argv)
    assert (code1, code2) == (EXIT_PASS, EXIT_PASS)
    assert out1 == out2


def test_seed_env_override(capsys, monkeypatch):
    monkeypatch.setenv("DILATEKIT_SEED", "11")
    code, out, _ = run_cli(capsys, ["run", "--trials", "2", "--suites", "halmos"])
    assert code == EXIT_PASS
    assert json.loads(out)[0]["config"]["seed"] == 11
    monkeypatch.setenv("DILATEKIT_SEED", "not-a-number")
    code, _, err = run_cli(capsys, ["run", "--trials", "2", "--suites", "halmos"])
    assert code == EXIT_INPUT
    assert "DILATEKIT_SEED" in err


def test_run_rejects_unknown_suite(capsys):
    code, _, err = run_cli(capsys, ["run", "--suites", "halmos,frobenius"])
    assert code == EXIT_INPUT
    assert "frobenius" in err


def test_halmos_command(capsys, tmp_path):
    t_file = write(tmp_path, "t.json", [[2]])
    code, out, _ = run_cli(capsys, ["halmos", "--T", t_file])
    assert code == EXIT_PASS
    report = json.loads(out)[0]
    assert report["data"]["U"] == [[2, 1], [1, 0]]
    assert report["data"]["U_inv"] == [[0, 1], [1, -2]]


def test_schur_command_and_precondition_error(capsys, tmp_path):
    t = write(tmp_path, "t.json", [[2]])
    b = write(tmp_path, "b.json", [[1]])
    code, out, _ = run_cli(
        capsys, ["schur", "--class", "i", "--T", t, "--B", b, "--C", b, "--D", b]
    )
    assert code == EXIT_PASS
    assert json.loads(out)[0]["data"]["schur_complement"] == [["1/2"]]

    singular = write(tmp_path, "s.json", [[0]])
    code, _, err = run_cli(
        capsys, ["schur", "--class", "i", "--T", singular, "--B", b, "--C", b, "--D", b]
    )
    assert code == EXIT_INPUT
    assert "T is not invertible" in err


def test_nonsimilar_command_inconclusive_exits_zero(capsys, tmp_path):
    t_file = write(tmp_path, "t.json", [[0, 1], [0, 0]])
    code, out, _ = run_cli(capsys, ["nonsimilar", "--T", t_file])
    assert code == EXIT_PASS
    report = json.loads(out)[0]
    assert report["data"]["verdict"] == "inconclusive"
    assert report["checks"][0]["status"] == "inconclusive"


def test_ndilate_command(capsys, tmp_path):
    t_file = write(tmp_path, "t.json", [[2]])
    code, out, _ = run_cli(capsys, ["ndilate", "--T", t_file, "--N", "2", "--kmax", "3"])
    assert code == EXIT_PASS
    report = json.loads(out)[0]
    assert report["data"]["U"] == [[2, 0, 1], [1, 0, 0], [0, 1, 0]]


def test_schaffer_and_standard_commands(capsys, tmp_path):
    t_file = write(tmp_path, "t.json", [[2, 1], [0, 1]])
    code, out, _ = run_cli(capsys, ["schaffer", "--T", t_file, "--nmax", "6"])
    assert code == EXIT_PASS
    code, out, _ = run_cli(capsys, ["standard", "--T", t_file, "--nmax", "6", "--minimality"])
    assert code == EXIT_PASS
    assert len(json.loads(out)) == 2


def test_ando_command_and_noncommuting(capsys, tmp_path):
    t = write(tmp_path, "t.json", [[0, 1], [0, 0]])
    s_good = write(tmp_path, "sg.json", [[1, 0], [0, 1]])
    code, _, _ = run_cli(capsys, ["ando", "--T", t, "--S", s_good, "--nmax", "3", "--mmax", "3"])
    assert code == EXIT_PASS
    s_bad = write(tmp_path, "sb.json", [[0, 0], [1, 0]])
    code, _, err = run_cli(capsys, ["ando", "--T", t, "--S", s_bad])
    assert code == EXIT_INPUT
    assert "commute" in err


def test_wold_command_strict_rejection(capsys, tmp_path):
    t_file = write(tmp_path, "t.json", [[0, 1], [0, 0]])
    code, out, _ = run_cli(capsys, ["wold", "--T", t_file, "--mode", "extended"])
    assert code == EXIT_PASS
    report = json.loads(out)[0]
    assert report["data"]["stabilization_index"] == 2
    code, _, err = run_cli(capsys, ["wold", "--T", t_file, "--mode", "strict"])
    assert code == EXIT_INPUT
    assert "not injective" in err


def test_intertwine_lift_and_extract(capsys, tmp_path):
    t_file = write(tmp_path, "t.json", [[2]])
    s_file = write(tmp_path, "s.json", [[3]])
    code, out, _ = run_cli(
        capsys, ["intertwine", "lift", "--T1", t_file, "--T2", t_file, "--S", s_file]
    )
    assert code == EXIT_PASS

    r_file = write(tmp_path, "r.json", seqop_to_json(Componentwise(Mat([[3]]))))
    code, out, _ = run_cli(
        capsys,
        ["intertwine", "extract", "--R", r_file, "--T1", t_file, "--T2", t_file],
    )
    assert code == EXIT_PASS
    assert json.loads(out)[0]["data"]["S"] == [[3]]


def test_intertwine_extract_rejects_corrupted(capsys, tmp_path):
    t_file = write(tmp_path, "t.json", [[2]])
    bad = {
        "kind": "compose",
        "factors": [
            {"kind": "shift_right", "dim": 1},
            seqop_to_json(Componentwise(Mat([[3]]))),
        ],
    }
    r_file = write(tmp_path, "r.json", bad)
    code, _, err = run_cli(
        capsys,
        ["intertwine", "extract", "--R", r_file, "--T1", t_file, "--T2", t_file],
    )
    assert code == EXIT_INPUT
    assert "hypothesis" in err


def test_missing_file_is_input_error(capsys):
    code, _, err = run_cli(capsys, ["halmos", "--T", "/nonexistent/t.json"])
    assert code == EXIT_INPUT
    assert "error" in err


def test_malformed_matrix_is_input_error(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('[[1, "1/0"]]')
    code, _, err = run_cli(capsys, ["halmos", "--T", str(bad)])
    assert code == EXIT_INPUT
    assert "denominator" in err

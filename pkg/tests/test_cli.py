import json

import pytest

from slicevc.harness.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write(tmp_path, name, text):
    p = tmp_path / name
    p.write_text(text)
    return str(p)


def test_vc_of_u2(tmp_path, capsys):
    code, text, _ = run(capsys, "gen", "--kind", "uk", "--n", "0", "--d", "2")
    assert code == 0
    path = write(tmp_path, "u2.txt", text)
    code, out, _ = run(capsys, "--json", "vc", "--input", path)
    assert code == 0 and json.loads(out)["value"] == 2
    code, out, _ = run(capsys, "vc", "--input", path)
    assert out.strip() == "vc = 2"


def test_gen_deterministic(capsys):
    a = run(capsys, "--seed", "7", "gen", "--kind", "class_based", "--n", "5", "--d", "2", "--noise", "1/10")
    b = run(capsys, "--seed", "7", "gen", "--kind", "class_based", "--n", "5", "--d", "2", "--noise", "1/10")
    c = run(capsys, "--seed", "8", "gen", "--kind", "class_based", "--n", "5", "--d", "2", "--noise", "1/10")
    assert a == b and a[0] == 0 and a[1] != c[1]


def test_malformed_input_reports_line(tmp_path, capsys):
    path = write(tmp_path, "bad.txt", "graph bipartite 2 2\n0 1\n1 9\n")
    code, _, err = run(capsys, "vc", "--input", path)
    assert code == 2 and f"{path}:3:" in err


def test_wrong_graph_type_is_input_error(tmp_path, capsys):
    path = write(tmp_path, "h.txt", "3graph tripartite 1 1 1\n0 0 0\n")
    code, _, err = run(capsys, "vc", "--input", path)
    assert code == 2 and "expected" in err


def test_bad_option_value(capsys):
    code, _, _ = run(capsys, "constants", "--k", "2", "--tau", "abc")
    assert code == 2
    code, _, _ = run(capsys, "constants", "--k", "2", "--tau", "3")
    assert code == 2
    code, _, _ = run(capsys, "gen", "--kind", "random", "--n", "3", "--noise", "1")
    assert code == 2


def test_constants_output(capsys):
    code, out, _ = run(capsys, "--json", "constants", "--k", "3", "--tau", "1/2")
    data = json.loads(out)
    assert code == 0 and data["D"] == 8 and data["formulas"]["D"] == "2k+2"


def test_audit_exit_codes(tmp_path, capsys):
    g = write(tmp_path, "g.txt", "graph bipartite 2 2\n0 0\n1 1\n")
    coarse = write(tmp_path, "coarse.json", json.dumps({"ground": {"name": "AB", "n": 4}, "blocks": [[0, 1, 2, 3]]}))
    fine = write(tmp_path, "fine.json", json.dumps({"ground": {"name": "AB", "n": 4}, "blocks": [[0], [1], [2], [3]]}))
    code, _, _ = run(capsys, "audit", "--input", g, "--partition", fine, "--eps", "1/10")
    assert code == 0
    code, _, _ = run(capsys, "audit", "--input", g, "--partition", coarse, "--eps", "1/10")
    assert code == 1
    code, _, err = run(capsys, "audit", "--input", g, "--partition", str(tmp_path / "none.json"), "--eps", "1/10")
    assert code == 2


def test_oracle_command(tmp_path, capsys):
    code, text, _ = run(capsys, "gen", "--kind", "blowup_graph", "--n", "6", "--d", "2", "--noise", "1/10")
    path = write(tmp_path, "b.txt", text)
    code, out, _ = run(capsys, "--json", "oracle", "--input", path)
    assert code == 0 and all(r["match"] for r in json.loads(out)["reports"])


def test_ecg_partition_writes_outputs(tmp_path, capsys):
    code, text, _ = run(capsys, "gen", "--kind", "blowup_ecg", "--n", "20", "--d", "2")
    path = write(tmp_path, "e.txt", text)
    out = tmp_path / "out"
    code, _, _ = run(capsys, "ecg-partition", "--input", path, "--k", "3", "--eps", "1/10", "--out", str(out))
    assert code == 0
    assert {p.name for p in out.iterdir()} == {"partition_A.json", "partition_B.json", "audit.json"}


def test_pipeline_outputs_and_thread_independence(tmp_path, capsys):
    code, text, _ = run(capsys, "gen", "--kind", "class_based", "--n", "24", "--d", "2")
    path = write(tmp_path, "h.txt", text)
    outs = []
    for threads in ("1", "8"):
        d = tmp_path / f"run{threads}"
        code, _, _ = run(
            capsys, "--threads", threads, "pipeline", "--input", path, "--k", "4", "--eps", "1/20",
            "--eps-slice", "1/5", "--delta-cover", "1/4", "--delta-pack", "1/5", "--out", str(d),
        )
        assert code == 0
        outs.append({p.name: p.read_bytes() for p in d.iterdir()})
    assert set(outs[0]) == {"partition_U.json", "partition_V.json", "partition_W.json", "audit.json", "constants.json", "runlog.csv"}
    assert outs[0] == outs[1]
    assert outs[0]["runlog.csv"].startswith(b"step,bound_name,paper_formula_value,achieved_value,pass\n")


def test_version(capsys):
    code, out, _ = run(capsys, "--version")
    assert code == 0 and "version" in out

import json
import math

import numpy as np
import pytest

from equicode.cli import (
    EXIT_FAIL,
    EXIT_OK,
    EXIT_RUNTIME,
    EXIT_USAGE,
    GRAM_CSV_HEADER,
    canonical_json,
    load_code,
    parse_angle_set,
    read_code_file,
    rewrite_code_file,
    run,
    tolerance_from_env,
    write_code_file,
)
from equicode import gram_of, regular_simplex


def test_canonical_json_floats_round_trip():
    values = [0.1, 1 / 3, -2 / 3, 1e-17, 123456.789, 4.0, -0.0]
    text = canonical_json(values)
    back = json.loads(text)
    assert back == values


def test_canonical_json_rejects_non_finite():
    with pytest.raises(Exception):
        canonical_json(float("inf"))


def test_construct_write_read_write_identical_bytes(tmp_path):
    out = tmp_path / "ls.json"
    assert run(["construct", "lemmens-seidel", "--n", "6",
                "--out", str(out)]) == EXIT_OK
    first = out.read_bytes()
    doc = read_code_file(str(out))
    rewrite_code_file(str(out), doc)
    assert out.read_bytes() == first


def test_construct_lines28_metadata(tmp_path):
    out = tmp_path / "lines28.json"
    assert run(["construct", "lines28", "--out", str(out)]) == EXIT_OK
    doc = read_code_file(str(out))
    assert doc["dim"] == 8
    assert doc["metadata"]["size"] == 28
    assert doc["metadata"]["gram_rank"] == 7


def test_construct_invalid_params_exit_code(tmp_path):
    out = tmp_path / "x.json"
    assert run(["construct", "lemmens-seidel", "--out", str(out)]) == EXIT_USAGE
    assert run(["construct", "lemmens-seidel", "--n", "2",
                "--out", str(out)]) == EXIT_USAGE


def test_verify_lines28(tmp_path, capsys):
    out = tmp_path / "lines28.json"
    run(["construct", "lines28", "--out", str(out)])
    code = run(["verify", str(out),
                "--L", "point:-0.3333333333333333+point:0.3333333333333333"])
    assert code == EXIT_OK


def test_verify_simplex_interval(tmp_path):
    out = tmp_path / "s4.json"
    run(["construct", "simplex", "--r", "4", "--out", str(out)])
    assert run(["verify", str(out), "--L", "interval:-1,-0.25"]) == EXIT_OK


def test_verify_failure_lists_violations(tmp_path, capsys):
    out = tmp_path / "basis.json"
    write_code_file(str(out), 3, vectors=np.eye(3).tolist(),
                    metadata={"construction": "basis"})
    code = run(["verify", str(out), "--L", "point:0.5"])
    captured = capsys.readouterr().out
    assert code == EXIT_FAIL
    assert captured.count("violation (") == 3
    assert "FAIL (3 violations)" in captured


def test_verify_parse_failure(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(["verify", str(bad), "--L", "point:0"]) == EXIT_USAGE
    good = tmp_path / "s.json"
    run(["construct", "simplex", "--r", "2", "--out", str(good)])
    assert run(["verify", str(good), "--L", "nonsense:1"]) == EXIT_USAGE


def test_certify_gerzon_suite(tmp_path):
    out = tmp_path / "lines28.json"
    run(["construct", "lines28", "--out", str(out)])
    report = tmp_path / "report.json"
    assert run(["certify", str(out), "--suite", "gerzon",
                "--report", str(report)]) == EXIT_OK
    doc = json.loads(report.read_text())
    assert doc["certificates"][0]["name"] == "gerzon"
    assert doc["certificates"][0]["passed"] is True
    assert doc["certificates"][0]["statement"]


def test_certify_negclique_with_equality_witness(tmp_path):
    out = tmp_path / "s4.json"
    run(["construct", "simplex", "--r", "4", "--out", str(out)])
    assert run(["certify", str(out), "--suite", "negclique"]) == EXIT_OK


def test_certify_all_skips_inapplicable(tmp_path, capsys):
    out = tmp_path / "kcode.json"
    run(["construct", "binary-kcode", "--n", "4", "--k", "2", "--out", str(out)])
    code = run(["certify", str(out), "--suite", "all"])
    captured = capsys.readouterr().out
    assert code == EXIT_OK
    assert "SKIP" in captured  # gerzon and lambda do not apply
    assert "PASS dgs" in captured


def test_certify_schnirelman_on_reduced_code(tmp_path):
    src = tmp_path / "ls12.json"
    reduced = tmp_path / "reduced.json"
    run(["construct", "lemmens-seidel", "--n", "12", "--out", str(src)])
    assert run(["reduce", str(src), "--t", "6", "--out", str(reduced)]) == EXIT_OK
    assert run(["certify", str(reduced), "--suite", "schnirelman"]) == EXIT_OK
    sidecar = str(reduced) + ".reduction.json"
    side = json.loads(open(sidecar).read())
    assert side["accounting_identity"] is True
    acc = side["accounting"]
    assert acc["size"] == acc["s_y"] + acc["others"] + acc["clique"]


def test_reduce_full_clique_writes_sidecar_only(tmp_path, capsys):
    src = tmp_path / "ls10.json"
    run(["construct", "lemmens-seidel", "--n", "10", "--out", str(src)])
    out = tmp_path / "red.json"
    assert run(["reduce", str(src), "--t", "9", "--out", str(out)]) == EXIT_OK
    captured = capsys.readouterr().out
    assert "sidecar only" in captured
    assert not out.exists()
    side = json.loads(open(str(out) + ".reduction.json").read())
    assert side["accounting_identity"] is True
    assert side["projected_size"] == 0


def test_project_identity_on_orthonormal_input(tmp_path):
    src = tmp_path / "basis.json"
    write_code_file(str(src), 3, vectors=np.eye(3).tolist(), metadata={})
    out = tmp_path / "projected.json"
    assert run(["project", str(src), "--clique", "0", "--out", str(out)]) == EXIT_OK
    doc = read_code_file(str(out))
    assert np.allclose(np.array(doc["vectors"]), np.eye(3)[1:], atol=1e-12)


def test_project_non_clique_exit_code(tmp_path):
    src = tmp_path / "mixed.json"
    v = np.array([[1.0, 0, 0], [0, 1, 0], [0.6, 0.8, 0.0]])
    write_code_file(str(src), 3, vectors=v.tolist(), metadata={})
    out = tmp_path / "out.json"
    assert run(["project", str(src), "--clique", "0,2",
                "--out", str(out)]) == EXIT_RUNTIME


def test_reduce_no_positive_clique(tmp_path):
    src = tmp_path / "simplex.json"
    run(["construct", "simplex", "--r", "4", "--out", str(src)])
    out = tmp_path / "red.json"
    assert run(["reduce", str(src), "--t", "2", "--out", str(out)]) == EXIT_RUNTIME


def test_gram_only_files_are_embedded(tmp_path):
    src = tmp_path / "gram.json"
    g = gram_of(regular_simplex(3)).as_array()
    write_code_file(str(src), 3, gram=g.tolist(), metadata={})
    code, _ = load_code(str(src))
    assert len(code) == 4 and code.dim == 3
    assert run(["verify", str(src), "--L", "interval:-1,-0.33333333"]) == EXIT_OK


def test_gram_csv_export(tmp_path):
    out = tmp_path / "s.json"
    csv = tmp_path / "s.csv"
    run(["construct", "simplex", "--r", "2", "--out", str(out),
         "--gram-csv", str(csv)])
    lines = csv.read_text().strip().split("\n")
    assert lines[0] == GRAM_CSV_HEADER
    assert len(lines) == 4
    row = [float(x) for x in lines[1].split(",")]
    assert abs(row[0] - 1.0) <= 1e-15


def test_concat_seed_determinism(tmp_path):
    a = tmp_path / "a.json"
    b = tmp_path / "b.json"
    args = ["construct", "concat", "--n", "12", "--k", "2", "--r", "2",
            "--alpha1", "0.5", "--seed", "7"]
    assert run(args + ["--out", str(a)]) == EXIT_OK
    assert run(args + ["--out", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    doc = read_code_file(str(a))
    assert doc["metadata"]["size"] == 3 * math.comb(12, 2)
    assert "achieved_beta" in doc["metadata"]


def test_construct_concat_desk_scale(tmp_path):
    out = tmp_path / "concat.json"
    assert run(["construct", "concat", "--n", "30", "--k", "2", "--r", "3",
                "--alpha1", "0.5", "--seed", "7", "--out", str(out)]) == EXIT_OK
    doc = read_code_file(str(out))
    assert doc["metadata"]["size"] == 1740
    assert doc["dim"] == 33
    assert doc["metadata"]["attempts"] >= 1


def test_gram_file_padding_to_declared_dim(tmp_path):
    src = tmp_path / "gram.json"
    write_code_file(str(src), 3, gram=np.eye(2).tolist(), metadata={})
    code, _ = load_code(str(src))
    assert code.dim == 3 and len(code) == 2


def test_certify_multipartite_from_concat_metadata(tmp_path, capsys):
    out = tmp_path / "concat.json"
    run(["construct", "concat", "--n", "100", "--k", "1", "--r", "2",
         "--alpha1", "0.5", "--seed", "1", "--out", str(out)])
    code = run(["certify", str(out), "--suite", "multipartite"])
    captured = capsys.readouterr().out
    assert code == EXIT_OK
    assert "PASS multipartite" in captured


def test_parse_angle_set_grammar():
    aset = parse_angle_set("interval:-1,-0.25+point:0.5", 1e-9)
    assert aset.intervals == ((-1.0, -0.25),)
    assert aset.points == (0.5,)


def test_tolerance_env_override(monkeypatch):
    monkeypatch.setenv("EQUICODE_TOL", "1e-6")
    tol = tolerance_from_env()
    assert tol.angle_tol == 1e-6
    monkeypatch.setenv("EQUICODE_TOL", "psd_slack=1e-7,angle_tol=1e-5")
    tol = tolerance_from_env()
    assert tol.psd_slack == 1e-7 and tol.angle_tol == 1e-5
    monkeypatch.delenv("EQUICODE_TOL")
    assert tolerance_from_env().angle_tol == 1e-9

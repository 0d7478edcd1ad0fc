"""CLI contract: JSON in/out, exit codes, determinism."""

import json

import pytest

from orbitlimits.cli import (EXIT_COMPUTE, EXIT_INPUT, EXIT_MISMATCH, EXIT_OK,
                             main)


def _run(capsys, argv, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io
        import sys
        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def _write(tmp_path, name, doc):
    p = tmp_path / name
    p.write_text(json.dumps(doc))
    return str(p)


XYZ = {"schema": 1,
       "form": {"nvars": 3, "degree": 3,
                "terms": [{"exp": [1, 1, 1], "coef": "1"}]}}


def test_stabilizer_of_xyz(tmp_path, capsys):
    path = _write(tmp_path, "in.json", XYZ)
    code, out, _ = _run(capsys, ["stabilizer", "--input", path])
    doc = json.loads(out)
    assert code == EXIT_OK
    assert doc["schema"] == 1
    assert doc["dimension"] == 2
    assert doc["verified"] is True


def test_stabilizer_reads_stdin(capsys, monkeypatch):
    code, out, _ = _run(capsys, ["stabilizer"],
                        stdin=json.dumps(XYZ), monkeypatch=monkeypatch)
    assert code == EXIT_OK
    assert json.loads(out)["dimension"] == 2


def test_stabilizer_of_matrix(tmp_path, capsys):
    doc = {"matrix": [["0", "1", "0"], ["0", "0", "1"], ["0", "0", "0"]]}
    path = _write(tmp_path, "in.json", doc)
    code, out, _ = _run(capsys, ["stabilizer", "--input", path])
    assert code == EXIT_OK
    assert json.loads(out)["dimension"] == 3        # centralizer of J_3


def test_local_model_on_x_squared(tmp_path, capsys):
    doc = {"form": {"nvars": 2, "degree": 2,
                    "terms": [{"exp": [2, 0], "coef": "1"}]}}
    path = _write(tmp_path, "in.json", doc)
    code, out, _ = _run(capsys, ["local-model", "--input", path])
    res = json.loads(out)
    assert code == EXIT_OK
    assert (res["dim_H"], res["dim_S"], res["dim_N"]) == (2, 2, 1)


def test_limit_o2(tmp_path, capsys):
    doc = {"form": {"nvars": 2, "degree": 4,
                    "terms": [{"exp": [4, 0], "coef": "1"},
                              {"exp": [2, 2], "coef": "2"},
                              {"exp": [0, 4], "coef": "1"}]},
           "oneps": [1, 0]}
    path = _write(tmp_path, "in.json", doc)
    code, out, _ = _run(capsys, ["limit", "--input", path])
    res = json.loads(out)
    assert code == EXIT_OK
    assert (res["a"], res["b"]) == (0, 2)
    assert res["dim_K"] == 1
    assert res["case"] == "A"
    assert res["extension_feasible"] is True


def test_closure_verdicts(tmp_path, capsys):
    doc = {"spec": [{"eig": "1", "sizes": [1, 1]},
                    {"eig": "-1", "sizes": [1]}],
           "partition": [3]}
    path = _write(tmp_path, "in.json", doc)
    code, out, _ = _run(capsys, ["closure", "--input", path])
    res = json.loads(out)
    assert code == EXIT_OK
    assert res["contains"] is False
    assert res["transpose_block_spectrum"] == [2, 1]
    assert res["separating"] == {"k": 1, "r": 1}


def test_closure_positive_with_witness(tmp_path, capsys):
    doc = {"spec": [{"eig": "1", "sizes": [2]}, {"eig": "-1", "sizes": [1]}],
           "partition": [3]}
    path = _write(tmp_path, "in.json", doc)
    code, out, _ = _run(capsys, ["closure", "--input", path])
    res = json.loads(out)
    assert code == EXIT_OK
    assert res["contains"] is True and "witness" in res


def test_slice_jn(tmp_path, capsys):
    path = _write(tmp_path, "in.json", {"kind": "jn", "n": 3})
    code, out, _ = _run(capsys, ["slice", "--input", path])
    res = json.loads(out)
    assert code == EXIT_OK
    assert res["dim_H"] == 3 and res["theta_squared_zero"] is True


def test_curvature_sphere(tmp_path, capsys):
    path = _write(tmp_path, "in.json",
                  {"kind": "sphere", "dim": 3, "r": "2"})
    code, out, _ = _run(capsys, ["curvature", "--input", path])
    res = json.loads(out)
    assert code == EXIT_OK
    assert res["ricci"][0][0] == "1/2"


def test_kempf_on_j3(tmp_path, capsys):
    doc = {"matrix": [["0", "1", "0"], ["0", "0", "1"], ["0", "0", "0"]],
           "t": 1000}
    path = _write(tmp_path, "in.json", doc)
    code, out, _ = _run(capsys, ["kempf", "--input", path])
    res = json.loads(out)
    assert code == EXIT_OK
    assert res["mu"] > 0
    assert res["converged"] is True
    assert res["agrees_with_grid"] is True


def test_reproduce_fast_ids(capsys):
    code, out, _ = _run(capsys, ["reproduce", "--format", "table",
                                 "sl2-sym2", "conj-final"])
    assert code == EXIT_OK
    lines = out.strip().splitlines()
    assert all(line.startswith("PASS") for line in lines)
    assert lines[-1].startswith("PASS  2 example(s)")


def test_reproduce_unknown_id(capsys):
    code, _, err = _run(capsys, ["reproduce", "no-such-example"])
    assert code == EXIT_INPUT
    assert "unknown example id" in err


def test_malformed_json_is_input_error(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    code, _, err = _run(capsys, ["stabilizer", "--input", str(p)])
    assert code == EXIT_INPUT and "input error" in err


def test_bad_exponent_is_input_error(tmp_path, capsys):
    doc = {"form": {"nvars": 2, "degree": 2,
                    "terms": [{"exp": [3, 0], "coef": "1"}]}}
    path = _write(tmp_path, "in.json", doc)
    code, _, err = _run(capsys, ["stabilizer", "--input", path])
    assert code == EXIT_INPUT and "input error" in err


def test_wrong_schema_rejected(tmp_path, capsys):
    doc = dict(XYZ, schema=99)
    path = _write(tmp_path, "in.json", doc)
    code, _, err = _run(capsys, ["stabilizer", "--input", path])
    assert code == EXIT_INPUT and "schema" in err


def test_zero_form_is_compute_error(tmp_path, capsys):
    doc = {"form": {"nvars": 2, "degree": 2, "terms": []}}
    path = _write(tmp_path, "in.json", doc)
    code, _, err = _run(capsys, ["local-model", "--input", path])
    assert code == EXIT_COMPUTE


def test_json_output_deterministic(tmp_path, capsys):
    path = _write(tmp_path, "in.json", XYZ)
    _, out1, _ = _run(capsys, ["stabilizer", "--input", path])
    _, out2, _ = _run(capsys, ["stabilizer", "--input", path])
    assert out1 == out2

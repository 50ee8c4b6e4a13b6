"""CLI contract: exit codes, determinism, report shapes."""

import json
import subprocess
import sys

CLI = [sys.executable, "-m", "endokat.cli"]


def run(*args, **kw):
    return subprocess.run(CLI + list(args), capture_output=True, text=True, **kw)


def test_generate_validate_roundtrip(tmp_path):
    f = tmp_path / "m.json"
    r = run("generate", "--kind", "matrix_bimodule", "--p", "2", "--k", "2", "--m", "2",
            "--seed", "1", "-o", str(f))
    assert r.returncode == 0
    r2 = run("validate", str(f))
    assert r2.returncode == 0
    echoed = json.loads(r2.stdout)
    assert echoed["kind"] == "matrix_bimodule"


def test_generate_deterministic(tmp_path):
    f1, f2 = tmp_path / "a.json", tmp_path / "b.json"
    for f in (f1, f2):
        r = run("generate", "--kind", "split_bimodule", "--p", "2", "--n", "2",
                "--torsion", "3", "--seed", "7", "-o", str(f))
        assert r.returncode == 0
    assert f1.read_bytes() == f2.read_bytes()


def test_validate_errors(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run("validate", str(bad)).returncode == 2
    nonglobal = tmp_path / "ng.json"
    nonglobal.write_text(json.dumps({
        "format_version": "1",
        "kind": "endogeny",
        "source": {"invariant_factors": [4]},
        "target": {"invariant_factors": [4]},
        "graph_generators": [[[2], [1]]],
        "n_max": {"generators": []},
    }))
    r = run("validate", str(nonglobal))
    assert r.returncode == 1
    assert "not-global" in r.stderr


def test_audit_exit_codes(tmp_path):
    rep = tmp_path / "rep.json"
    r = run("audit", "--suite", "prering", "--random", "5", "--seed", "11",
            "--workers", "1", "--report", str(rep))
    assert r.returncode == 0
    doc = json.loads(rep.read_text())
    assert doc["suite"] == "prering" and doc["instances_run"] == 5
    assert doc["violations"] == []
    # empty instance list exits 0 with zero instances
    empty = tmp_path / "empty.json"
    empty.write_text(json.dumps({"format_version": "1", "instances": []}))
    r2 = run("audit", "--suite", "prering", "--instances", str(empty), "--workers", "1")
    assert r2.returncode == 0
    assert json.loads(r2.stdout)["instances_run"] == 0


def test_audit_deterministic_modulo_runtime(tmp_path):
    outs = []
    for _ in range(2):
        r = run("audit", "--suite", "sharp", "--random", "4", "--seed", "3",
                "--workers", "1")
        assert r.returncode == 0
        doc = json.loads(r.stdout)
        doc.pop("runtime_ms")
        outs.append(json.dumps(doc, sort_keys=True))
    assert outs[0] == outs[1]


def test_audit_workers_match_serial():
    r1 = run("audit", "--suite", "dimension", "--random", "6", "--seed", "5",
             "--workers", "1")
    r2 = run("audit", "--suite", "dimension", "--random", "6", "--seed", "5",
             "--workers", "2")
    d1, d2 = json.loads(r1.stdout), json.loads(r2.stdout)
    d1.pop("runtime_ms")
    d2.pop("runtime_ms")
    assert d1 == d2


def test_linearize_matrix(tmp_path):
    f = tmp_path / "m.json"
    run("generate", "--kind", "matrix_bimodule", "--p", "2", "--k", "1", "--m", "2",
        "--seed", "0", "-o", str(f))
    r = run("linearize", str(f))
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["order"] == 2 and doc["vs_dimension"] == 2
    assert doc["ground_truth_match"] is True


def test_linearize_split(tmp_path):
    f = tmp_path / "s.json"
    run("generate", "--kind", "split_bimodule", "--p", "2", "--n", "2",
        "--torsion", "3", "--seed", "5", "-o", str(f))
    r = run("linearize", str(f))
    assert r.returncode == 0
    doc = json.loads(r.stdout)
    assert doc["kind"] == "split_report"
    assert doc["minimal"] is True


def test_linearize_reducible_plant(tmp_path):
    f = tmp_path / "p.json"
    run("generate", "--kind", "split_bimodule", "--p", "2", "--n", "3",
        "--torsion", "5", "--seed", "7", "--plant-witness", "-o", str(f))
    # planted instances linearize with the witness reported, since the plant
    # is declared; an undeclared reducible instance exits 1
    doc = json.loads(f.read_text())
    doc["info"] = {}
    f2 = tmp_path / "p2.json"
    f2.write_text(json.dumps(doc))
    r = run("linearize", str(f2))
    assert r.returncode == 1
    diag = json.loads(r.stdout)
    assert "witness_order" in diag or "witness" in diag


def test_oracle_flag(tmp_path):
    r = run("audit", "--suite", "prering", "--random", "3", "--seed", "2",
            "--oracle", "--workers", "1")
    assert r.returncode == 0
    assert json.loads(r.stdout)["violations"] == []


def test_env_seed(tmp_path):
    import os

    env = dict(os.environ)
    env["ENDOKAT_SEED"] = "99"
    f1 = tmp_path / "e1.json"
    r = subprocess.run(
        CLI + ["generate", "--kind", "matrix_bimodule", "--p", "2", "--k", "1",
               "--m", "2", "-o", str(f1)],
        capture_output=True, text=True, env=env,
    )
    assert r.returncode == 0
    f2 = tmp_path / "e2.json"
    run("generate", "--kind", "matrix_bimodule", "--p", "2", "--k", "1", "--m", "2",
        "--seed", "99", "-o", str(f2))
    assert f1.read_bytes() == f2.read_bytes()

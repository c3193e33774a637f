import json

import pytest

from qsample.cli import main


def _run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_chain_ladder(capsys):
    code, out, _ = _run(capsys, "chain", "--ladder", "2x2", "--beta", "0.3", "--lazy")
    data = json.loads(out)
    assert code == 0 and data["delta"] > 0
    assert data["config"]["beta"] == 0.3


def test_chain_file(tmp_path, capsys):
    f = tmp_path / "two_state.json"
    f.write_text(json.dumps({"n": 2, "P": [[0.5, 0.5], [0.5, 0.5]]}))
    code, out, _ = _run(capsys, "chain", "--file", str(f))
    assert code == 0 and json.loads(out)["delta"] == pytest.approx(1.0)


def test_chain_file_invalid_rows(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text(json.dumps({"n": 2, "P": [[0.5, 0.6], [0.5, 0.5]]}))
    code, _, err = _run(capsys, "chain", "--file", str(f))
    assert code == 2 and "sums to" in err


def test_chain_file_malformed(tmp_path, capsys):
    f = tmp_path / "bad.json"
    f.write_text('{"n": 2,\n "P": [[1, 0] [0, 1]]}')
    code, _, err = _run(capsys, "chain", "--file", str(f))
    assert code == 2 and "line 2" in err


def test_anneal(capsys):
    code, out, _ = _run(capsys, "anneal", "--ladder", "2x2", "--betas", "0,0.3,0.6,0.9,1.2", "--eps", "0.1")
    data = json.loads(out)
    assert code == 0 and data["final_d_tr"] <= 0.1 and data["ancilla_count"] == 1


def test_anneal_trivial_and_exact(capsys):
    code, out, _ = _run(capsys, "anneal", "--eps", "0.9999")
    assert code == 0
    code, out, _ = _run(capsys, "anneal", "--mode", "exact")
    assert code == 0 and json.loads(out)["mode"] == "exact"


def test_anneal_precondition_names_stage(capsys):
    code, _, err = _run(capsys, "anneal", "--betas", "0,0.3", "--p-lower", "0.9999")
    assert code == 2 and "stage 0" in err


def test_benchmark_default_grid(capsys):
    code, out, _ = _run(capsys, "benchmark")
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "log10_inv_eps,our_queries,wocjan_queries,our_ancillas,wocjan_ancillas"
    assert len(lines) == 7
    assert all(line.split(",")[3] == "1" for line in lines[1:])


def test_benchmark_single_point(capsys):
    code, out, _ = _run(capsys, "benchmark", "--ladder", "2x2", "--eps-grid", "0.01")
    assert len(out.strip().splitlines()) == 2


def test_config_file_and_flag_precedence(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"p-lower": 0.5, "eps_fp": 0.01}))
    code, out, _ = _run(capsys, "fpaa-angles", "--config", str(cfg), "--eps-fp", "0.1")
    data = json.loads(out)
    assert data["config"]["p_lower"] == 0.5 and data["config"]["eps_fp"] == 0.1
    assert data["eps_fp"] == 0.1


def test_unknown_config_key(tmp_path, capsys):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"bogus": 1}))
    code, _, err = _run(capsys, "filter", "--config", str(cfg))
    assert code == 2 and "bogus" in err


def test_output_deterministic(tmp_path, capsys):
    runs = [_run(capsys, "gadget-check", "--random-n", "5", "--seed", "7")[1] for _ in range(2)]
    assert runs[0] == runs[1]
    assert json.loads(runs[0])["config"]["seed"] == 7
    f = tmp_path / "out.json"
    assert main(["benchmark", "--ladder", "2x2", "--eps-grid", "0.1", "--output", str(f)]) == 0
    assert f.read_text().startswith("log10_inv_eps,")


def test_walk_filter_fpaa(capsys):
    code, out, _ = _run(capsys, "walk", "--random-n", "4", "--phases")
    assert code == 0 and len(json.loads(out)["busy_phases"]) == 7
    code, out, _ = _run(capsys, "filter", "--delta", "1.0471975511965976", "--eps", "1e-3")
    assert json.loads(out)["filters"][0]["d"] == 7
    code, out, _ = _run(capsys, "fpaa-angles", "--p-lower", "0.25", "--eps-fp", "0.1")
    assert json.loads(out)["L"] == 7


def test_gibbs(tmp_path, capsys):
    code, out, _ = _run(capsys, "gibbs", "--ladder", "2x2")
    assert code == 0 and json.loads(out)["report"]["final_d_tr"] <= 0.1
    model = tmp_path / "m.json"
    model.write_text(json.dumps({"rows": 2, "cols": 4, "betas": [0, 50], "eps": 0.1}))
    code, out, _ = _run(capsys, "gibbs", "--model", str(model))
    assert code == 1 and json.loads(out)["schedule"]["pass"] is False


def test_verify_prop1(capsys):
    code, out, _ = _run(capsys, "verify", "--suite", "prop1", "--trials", "20")
    data = json.loads(out)
    checks = data["suites"]["prop1"]["checks"]
    assert code == 0 and len(checks) == 20
    assert all(c["ratio"] <= 1 for c in checks)


def test_verify_fpaa_grid(capsys):
    code, out, _ = _run(capsys, "verify", "--suite", "fpaa", "--p-grid", "50")
    assert code == 0 and len(json.loads(out)["suites"]["fpaa"]["checks"]) == 12


def test_verify_unknown_suite(capsys):
    code, _, err = _run(capsys, "verify", "--suite", "nope")
    assert code == 2

import json

import pytest

from cathybrid.cli import EXIT_CONFIG, EXIT_NUMERIC, EXIT_OK, cli_main
from cathybrid.sweep import from_csv


def run(capsys, *argv):
    code = cli_main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_state_odd_cat(capsys):
    code, out, _ = run(capsys, "state", "--kind", "sdlps", "--sign", "-", "--l", "0", "--beta", "2")
    assert code == EXIT_OK
    amps = json.loads(out)["amplitudes"]
    assert all(re == 0 and im == 0 for re, im in amps[0::2])
    assert any(re != 0 for re, _ in amps[1::2])


def test_entangle_table_point(capsys):
    code, out, _ = run(capsys, "entangle", "--kind", "sdlps", "--sign", "+", "--l", "0", "--beta", "0.5",
                       "--t", "0.25", "--n", "0", "--a0", "0.7071", "--a1", "0.7071")
    assert code == EXIT_OK
    data = json.loads(out)
    assert data["negativity"] >= 0.98
    assert data["probability"] == pytest.approx(0.939, abs=0.02)


def test_entangle_ppt_agrees(capsys):
    args = ["entangle", "--kind", "superposition", "--sign", "-", "--b", "1", "0.5j", "--beta", "1.2",
            "--t", "0.4", "--n", "2"]
    _, out, _ = run(capsys, *args)
    _, out_ppt, _ = run(capsys, *args, "--ppt")
    assert json.loads(out)["negativity"] == pytest.approx(json.loads(out_ppt)["negativity"], abs=1e-9)


def test_unknown_flag(capsys):
    code, _, err = run(capsys, "state", "--bogus")
    assert code == EXIT_CONFIG and "bogus" in err


def test_missing_fields(capsys):
    assert run(capsys, "state", "--kind", "sdlps")[0] == EXIT_CONFIG
    assert run(capsys, "entangle", "--kind", "sdlps", "--sign", "+", "--l", "0", "--beta", "1", "--n", "0")[0] \
        == EXIT_CONFIG


def test_numeric_errors(capsys):
    code, _, err = run(capsys, "state", "--kind", "sdlps", "--sign", "-", "--l", "0", "--beta", "0")
    assert code == EXIT_NUMERIC and "numerical" in err
    code, _, _ = run(capsys, "state", "--kind", "sdlps", "--sign", "+", "--l", "0", "--beta", "5",
                     "--cutoff", "20")
    assert code == EXIT_NUMERIC


def test_sweep_csv_deterministic(capsys, tmp_path):
    args = ["sweep", "--kind", "sdlps", "--sign", "+", "--l", "1", "--beta-range", "0.5", "1.5", "3",
            "--t-range", "0.2", "0.8", "3", "--outcomes", "0", "1"]
    code, first, _ = run(capsys, *args)
    assert code == EXIT_OK
    target = tmp_path / "grid.csv"
    assert run(capsys, *args, "--output", str(target))[0] == EXIT_OK
    assert target.read_text() == first
    header, rows = from_csv(first)
    assert header[:3] == ["beta", "t", "n"] and len(rows) == 18


def test_sweep_json(capsys):
    code, out, _ = run(capsys, "sweep", "--kind", "sdlps", "--sign", "+", "--l", "0", "--beta", "0.5",
                       "--t", "0.25", "--format", "json")
    assert code == EXIT_OK
    (cell,) = json.loads(out)
    assert cell["probability"] == pytest.approx(0.939, abs=0.02)


def test_config_file_and_override(capsys, tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"state": {"kind": "sdlps", "sign": "+", "l": 0, "beta": 0.5},
                               "t": 0.25, "n": 0, "photon": {"a0": 1, "a1": 1}}))
    code, out, _ = run(capsys, "entangle", "--config", str(cfg))
    assert code == EXIT_OK and json.loads(out)["probability"] == pytest.approx(0.939, abs=0.02)
    code, out, _ = run(capsys, "entangle", "--config", str(cfg), "--n", "1")
    assert json.loads(out)["n"] == 1


def test_bad_config_file(capsys, tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text('{"state": {"kind": "sdlps",\n "sign": }')
    code, _, err = run(capsys, "entangle", "--config", str(cfg))
    assert code == EXIT_CONFIG and ":2:" in err
    assert run(capsys, "entangle", "--config", str(tmp_path / "missing.json"))[0] == EXIT_CONFIG


def test_cutoff_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("CATHYBRID_CUTOFF", "30")
    _, out, _ = run(capsys, "state", "--kind", "sdlps", "--sign", "+", "--l", "0", "--beta", "1")
    assert json.loads(out)["cutoff"] == 30
    monkeypatch.setenv("CATHYBRID_CUTOFF", "lots")
    assert run(capsys, "state", "--kind", "sdlps", "--sign", "+", "--l", "0", "--beta", "1")[0] == EXIT_CONFIG


def test_moments_and_quadrature(capsys):
    code, out, _ = run(capsys, "moments", "--kind", "sdlps", "--sign", "-", "--l", "0",
                       "--beta-range", "0.1", "1", "4")
    assert code == EXIT_OK
    header, rows = from_csv(out)
    assert header == ["beta", "sigma_x1", "sigma_x2", "fano"] and rows[0][3] < 1
    code, out, _ = run(capsys, "quadrature", "--kind", "sdlps", "--sign", "+", "--l", "0", "--beta", "2",
                       "--points", "51", "--axis", "X2")
    assert code == EXIT_OK and len(from_csv(out)[1]) == 51
    code, out, _ = run(capsys, "wigner", "--kind", "sdlps", "--sign", "+", "--l", "0", "--beta", "1",
                       "--points", "11")
    assert code == EXIT_OK and len(from_csv(out)[1]) == 121


def test_search_command(capsys):
    code, out, _ = run(capsys, "search", "--kind", "sdlps", "--sign", "+", "--l", "0",
                       "--beta-range", "0.3", "0.6", "7", "--t-range", "0.6", "0.9", "7")
    assert code == EXIT_OK and out.strip() == "beta,t,n,probability,negativity"


def test_help_exits_cleanly(capsys):
    assert cli_main(["--help"]) == 0

import json

import pytest

from solenoid.cli import main, parse_levels, ConfigError


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_morita_all_pass(capsys):
    code, out = run(capsys, "verify", "--suite", "morita", "-p", "2", "--levels", "0..3")
    rep = json.loads(out)
    assert code == 0
    assert set(rep) == {"suite", "config_echo", "checks", "summary"}
    assert rep["summary"]["failed"] == 0 and rep["summary"]["total"] == 5
    assert set(rep["checks"][0]) == {"name", "paper_ref", "verdict", "discrepancy"}


def test_poisson_discrepancy(capsys):
    code, out = run(capsys, "verify", "--suite", "poisson", "-p", "2", "-j", "1", "--theta", "0.5477")
    rep = json.loads(out)
    assert code == 0 and rep["summary"]["max_discrepancy"] < 1e-8


def test_vacuous_pass(capsys):
    code, out = run(capsys, "verify", "--suite", "cocycle", "--samples", "0")
    rep = json.loads(out)
    assert code == 0 and rep["checks"] == [] and rep["summary"]["total"] == 0


def test_deterministic_output(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    for path in (a, b):
        assert main(["verify", "--suite", "phi", "--seed", "5", "--samples", "3", "--out", str(path)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_csv_format(capsys):
    code, out = run(capsys, "verify", "--suite", "generators", "--levels", "0..1", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "suite,name,paper_ref,verdict,discrepancy" and len(lines) == 9


@pytest.mark.parametrize("argv", [
    ["verify", "-p", "4"],
    ["verify", "--theta", "1.5"],
    ["verify", "--theta", "0"],
    ["verify", "--levels", "2..1"],
    ["verify", "--suite", "nope"],
    ["verify", "--format", "xml"],
    ["verify", "--radius", "-1"],
    ["verify", "--fourier-range", "0"],
    ["verify", "-p", "two"],
    ["bogus"],
])
def test_config_errors(argv, capsys):
    assert main(argv) == 2


def test_config_file(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# morita run\nsuite = morita\np = 3\nlevels = 0..2\n")
    code, out = run(capsys, "verify", "--config", str(cfg))
    rep = json.loads(out)
    assert code == 0 and rep["config_echo"]["p"] == 3 and rep["summary"]["total"] == 4
    code, out = run(capsys, "verify", "--config", str(cfg), "-p", "2")
    assert json.loads(out)["config_echo"]["p"] == 2
    bad = tmp_path / "bad.cfg"
    bad.write_text("colour = blue\n")
    assert main(["verify", "--config", str(bad)]) == 2
    assert main(["verify", "--config", str(tmp_path / "missing.cfg")]) == 2


def test_failing_check_gives_exit_one(monkeypatch, capsys):
    import solenoid.cli as cli

    def broken(cfg, name):
        return [{"name": "forced", "paper_ref": "n/a", "verdict": "fail", "discrepancy": 1.0}]

    monkeypatch.setattr(cli, "run_suite", broken)
    assert main(["verify", "--suite", "morita"]) == 1


def test_parse_levels():
    assert parse_levels("0..3") == (0, 3)
    assert parse_levels("2") == (2, 2)
    with pytest.raises(ConfigError):
        parse_levels("a..b")

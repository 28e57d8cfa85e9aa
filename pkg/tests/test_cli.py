import os

import pytest

from lp_sensitivity_lib.cli import build_parser, main


def _lines(capsys):
    return capsys.readouterr().out.splitlines()


def test_subcommand_is_required():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_settings_show_and_set(capsys, environment):
    assert main(["settings", "show"]) == 0
    assert "samples=10000" in _lines(capsys)

    assert main(["settings", "set", "samples", "42"]) == 0
    assert "samples=42" in _lines(capsys)
    assert environment.settings.samples == 42

    assert main(["settings", "reset"]) == 0
    assert "samples=10000" in _lines(capsys)


def test_invalid_setting_value(capsys, environment):
    assert main(["settings", "set", "backend", "gurobi"]) == 1
    assert "[!]" in capsys.readouterr().err


def test_analyze_keyvalue(capsys):
    code = main(["analyze", "smoke", "--format", "keyvalue", "--seed", "1"])
    lines = _lines(capsys)
    assert code == 0
    assert "instance=smoke" in lines
    assert "q_minus.source=convex_exact" in lines
    assert "option.seed=1" in lines
    assert "sandwich=true" in lines
    assert not any(line.startswith("time.") for line in lines)


def test_analyze_text(capsys):
    assert main(["analyze", "smoke"]) == 0
    assert "Sandwich: ok" in capsys.readouterr().out


def test_missing_instance(capsys):
    assert main(["analyze", "no_such_instance"]) == 1
    assert "no_such_instance" in capsys.readouterr().err


def test_unknown_corpus(capsys):
    assert main(["reproduce", "nope"]) == 1
    assert "Unknown corpus nope" in capsys.readouterr().err


def test_reproduce_smoke(capsys):
    assert main(["reproduce", "smoke", "--format", "keyvalue"]) == 0
    lines = _lines(capsys)
    assert lines[0] == "corpus=smoke"
    assert "check.smoke.sandwich=pass" in lines
    assert lines[-1] == "passed=true"


def test_oracle(capsys):
    assert main(["oracle", "example_2_1"]) == 0
    lines = _lines(capsys)
    assert float(lines[0].split("=")[1]) == pytest.approx(0.5)
    assert float(lines[1].split("=")[1]) == pytest.approx(3.0)
    assert lines[2] == "oracle_exact=true"


def test_sample_with_trial_log(capsys, tmp_path):
    log = str(tmp_path / "trials.csv")
    assert main(["sample", "example_2_1", "--samples", "8",
                 "--trial-log", log]) == 0
    lines = _lines(capsys)
    assert "trials=8" in lines
    assert "failures=0" in lines
    assert os.path.isfile(log)


def test_dump_conic(capsys, tmp_path):
    output = str(tmp_path / "dump" / "example.txt")
    assert main(["dump-conic", "example_2_1", "--sense", "best",
                 "-o", output, "--no-rlt"]) == 0
    assert capsys.readouterr().out.strip() == "[ok] {}".format(output)
    with open(output) as f:
        text = f.read()
    assert text.startswith("# conic program dump")
    assert " rlt " not in text
    assert " complementarity " in text

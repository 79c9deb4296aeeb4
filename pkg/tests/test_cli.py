import json
import os
import subprocess
import sys

import pytest

from wordlab.cli import COMMANDS, EXIT_BUDGET, EXIT_OK, EXIT_ORACLE, EXIT_USAGE, ExperimentConfig, parse_header, run

FAST = {
    "word-measure": ["--p", "5", "--word", "abAB"],
    "mixing-time": ["--p", "7", "--word", "abAB", "--q", "inf"],
    "char-table": ["--p", "5"],
    "zeta": ["--p", "5", "--s", "1"],
    "fiber-count": ["--p", "5", "--word", "abAB"],
    "centralizer-tail": ["--p", "5", "--word", "abAB", "--delta", "0.5"],
    "spectral-decay": ["--p", "5", "--word", "aab"],
    "cayley-gap": ["--p", "5", "--pairs", "2", "--seed", "3"],
    "walk-bound": ["--p", "5", "--pairs", "2", "--seed", "3", "--steps", "20"],
    "kesten": ["--samples", "5000", "--lmax", "16", "--seed", "2"],
    "trace-poly": ["--word", "abAB"],
    "charvariety-count": ["--word", "bs32", "--primes", "5:31"],
    "charvariety-dim": ["--word", "abAB", "--primes", "5:61"],
    "chebotarev-avg": ["--window", "100:400"],
    "random-relator-survey": ["--samples", "1", "--lengths", "6", "--primes", "11:40", "--seed", "1"],
    "pgl-contrast": ["--primes", "5:5"],
}


def test_every_command_has_a_fast_case():
    assert set(FAST) == set(COMMANDS)


@pytest.mark.parametrize("command", COMMANDS)
@pytest.mark.parametrize("fmt", ["json", "csv"])
def test_artifacts_roundtrip_and_repeat(command, fmt, tmp_path, capsys):
    outs = []
    for i in range(2):
        path = tmp_path / f"out.{fmt}"
        assert run([command, *FAST[command], "--format", fmt, "--output", str(path)]) == EXIT_OK
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]
    text = outs[0].decode()
    cfg = parse_header(text)
    assert cfg.command == command and cfg.format == fmt
    if fmt == "json":
        assert json.loads(text)["schema_version"] == 1
    else:
        assert text.startswith("# schema_version=1")


def test_mixing_time_prints_one(capsys):
    assert run(["mixing-time", "--group", "sl2", "--p", "13", "--word", "abAB", "--q", "2"]) == EXIT_OK
    assert capsys.readouterr().out.strip() == "1"


def test_exit_codes(capsys, monkeypatch):
    assert run(["word-measure", "--p", "5", "--word", "abz"]) == EXIT_USAGE
    assert run(["word-measure", "--p", "9", "--word", "ab"]) == EXIT_USAGE
    assert run(["no-such-command"]) == EXIT_USAGE
    assert run([]) == EXIT_USAGE
    assert run(["word-measure", "--p", "101", "--word", "abAB"]) == EXIT_BUDGET
    assert run(["word-measure", "--p", "7", "--word", "abAB", "--pair-budget", "10"]) == EXIT_BUDGET

    import wordlab.cli as cli
    from wordlab.fricke import OracleFailure

    def broken(*a, **k):
        raise OracleFailure("mismatch")

    monkeypatch.setattr(cli, "trace_poly", broken)
    assert run(["trace-poly", "--word", "ab"]) == EXIT_ORACLE


def test_config_dict_roundtrip():
    cfg = ExperimentConfig(command="kesten", seed=4, samples=10)
    assert ExperimentConfig.from_dict(cfg.to_dict()) == cfg


def test_console_entry_point():
    env = dict(os.environ, WORDLAB_THREADS="1")
    out = subprocess.run(
        [sys.executable, "-m", "wordlab", "trace-poly", "--word", "abAB"], capture_output=True, text=True, env=env
    )
    assert out.returncode == 0
    assert "x*y*z" in out.stdout
    bad = subprocess.run([sys.executable, "-m", "wordlab", "zeta", "--bogus"], capture_output=True, env=env)
    assert bad.returncode == EXIT_USAGE

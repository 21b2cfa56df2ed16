import io
import os
import subprocess
import sys
from pathlib import Path

import pytest

from nilkit.cli import EXIT_FAIL, EXIT_LIMIT, EXIT_OK, EXIT_USAGE, main

HERE = Path(__file__).parent
GOLDEN = HERE / "golden"

# name -> argv; outputs are byte-compared with tests/golden/<name>.txt
CASES = {
    "collect": ["collect", "--rank", "2", "--step", "2", "x2 x1"],
    "collect_trace": ["collect", "--rank", "2", "--step", "3", "--trace", "x2^-1 x1"],
    "basics": ["basics", "--rank", "2", "--step", "3", "--lengths", "2,1"],
    "decompose_power": ["decompose", "power", "--form", "[#1,#2]", "--lengths", "2,2", "--step", "3"],
    "decompose_ball": ["decompose", "ball", "--form", "[#1,#2]", "--lengths", "2,2", "--step", "2", "--m", "4"],
    "decompose_product": ["decompose", "product", "--form", "[#1,#2]", "--lengths", "2,1", "--step", "3"],
    "prog_chain": ["prog", "chain", "--group", "ut:3", "--gens", "x1;x2", "--lens", "1,1"],
    "prog_ball": ["prog", "enum", "--group", "ut:3", "--gens", "x1;x2", "--lens", "1,1", "--kind", "ball"],
    "prog_star_count": ["prog", "enum", "--group", "ut:3", "--gens", "x1;x2", "--lens", "1,1", "--kind", "star", "--count-only"],
    "approx_doubling": ["approx", "doubling", "--set", "data/interval.txt"],
    "approx_witness": ["approx", "witness", "--set", "data/interval.txt"],
    "approx_growth": ["approx", "growth", "--set", "data/interval.txt", "--n", "3"],
    "approx_chang": ["approx", "chang", "--set", "data/interval.txt"],
    "approx_split": ["approx", "split", "--set", "data/interval.txt", "--normal-index", "2"],
    "approx_pullback": ["approx", "pullback", "--group", "cyclic:2", "--source", "cyclic:4", "--set", "data/z2_all.txt"],
    "approx_freiman": ["approx", "freiman-search", "--group", "cyclic:12", "--set", "data/z12_block.txt", "--rank-cap", "1"],
    "approx_converse": ["approx", "converse"],
    "pgroup_rank": ["pgroup", "rank", "--group", "product:cyclic:4,cyclic:2"],
    "pgroup_frattini": ["pgroup", "frattini", "--group", "ut:3:mod=2"],
    "pgroup_basis": ["pgroup", "basis", "--group", "product:cyclic:4,cyclic:2"],
    "pgroup_lcs": ["pgroup", "lcs", "--group", "ut:4:mod=2"],
    "pgroup_sylow": ["pgroup", "sylow", "--group", "product:ut:3:mod=2,cyclic:3"],
    "pgroup_span": ["pgroup", "span", "--group", "product:cyclic:3,cyclic:3", "--set", "data/axes.txt"],
}


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


@pytest.fixture(autouse=True)
def in_tests_dir(monkeypatch):
    monkeypatch.chdir(HERE)


@pytest.mark.parametrize("name", sorted(CASES))
def test_golden(name):
    code, text = run(CASES[name])
    path = GOLDEN / f"{name}.txt"
    if os.environ.get("NILKIT_REGEN_GOLDEN"):
        path.write_text(text)
    assert code == EXIT_OK
    assert text == path.read_text()


def test_deterministic():
    assert run(CASES["approx_split"]) == run(CASES["approx_split"])


class TestExitCodes:
    def test_unknown_suite(self, capsys):
        code, _ = run(["accept", "unknown"])
        assert code == EXIT_USAGE
        assert "unknown suite" in capsys.readouterr().err

    def test_unknown_flag(self, capsys):
        assert run(["collect", "--rank", "2", "--step", "2", "--bogus", "x1"])[0] == EXIT_USAGE

    def test_syntax_error(self, capsys):
        code, _ = run(["collect", "--rank", "2", "--step", "2", "[x1,x2"])
        assert code == EXIT_USAGE
        assert "column 7" in capsys.readouterr().err

    def test_rank_mismatch(self, capsys):
        assert run(["collect", "--rank", "1", "--step", "2", "x2"])[0] == EXIT_USAGE

    def test_budget(self, capsys):
        code, _ = run(["collect", "--rank", "2", "--step", "3", "--budget", "1", "x2 x2 x1 x1"])
        assert code == EXIT_LIMIT

    def test_nilprogression_budget(self, capsys):
        code, _ = run(["prog", "enum", "--group", "ut:3", "--gens", "x1;x2", "--lens", "7,7", "--kind", "star"])
        assert code == EXIT_LIMIT

    def test_not_pgroup(self, capsys):
        code, _ = run(["pgroup", "span", "--group", "cyclic:6", "--set", "data/z6_union.txt"])
        assert code == EXIT_USAGE
        assert "not a prime power" in capsys.readouterr().err

    def test_missing_file(self, capsys):
        assert run(["approx", "doubling", "--set", "data/nope.txt"])[0] == EXIT_USAGE

    def test_missing_set(self, capsys):
        assert run(["approx", "witness"])[0] == EXIT_USAGE

    def test_version(self, capsys):
        assert run(["--version"])[0] == EXIT_OK

    def test_cap_exceeded(self, capsys):
        # a cap of 1 cannot reach P inside P_ord^m, but the containments still hold
        code, text = run(["prog", "chain", "--group", "ut:3", "--gens", "x1;x2", "--lens", "1,1", "--cap", "1"])
        assert code == EXIT_OK and "m=cap-exceeded" in text


def test_accept_suite_collection_subset():
    code, text = run(["accept", "pgroups"])
    assert code == EXIT_OK
    assert text.splitlines()[-1] == "passed=1/1"


def test_console_script():
    res = subprocess.run([sys.executable, "-m", "nilkit", "collect", "--rank", "2", "--step", "2", "x2 x1"], capture_output=True, text=True)
    assert res.returncode == 0
    assert res.stdout == (GOLDEN / "collect.txt").read_text()

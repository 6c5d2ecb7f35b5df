import io
import json
import subprocess
import sys

import pytest

from xintersect import cli, verify
from xintersect.verify import SuiteReport


def run(*argv):
    out = io.StringIO()
    code = cli.run(list(argv), stdout=out)
    return code, json.loads(out.getvalue())


def strip_volatile(report):
    return {k: v for k, v in report.items() if k not in ("elapsed_ms", "version")}


def test_search_report_envelope():
    code, rep = run("search", "--p", "3,3,3,3,3", "--r", "4", "--mode", "monotone")
    assert code == 0
    assert rep["command"] == "search"
    assert rep["p"] == [3, 3, 3, 3, 3] and rep["r"] == 4
    assert rep["normalized_p"] == [3, 3, 3, 3, 3] and rep["normalized_r"] == 4
    assert rep["result"]["max_product"] == "11"
    assert rep["result"]["witnesses"][0]["S_A"] == [0]
    assert isinstance(rep["elapsed_ms"], int) and rep["version"]


def test_search_normalizes_unit_coordinates():
    code, rep = run("search", "--p", "1,3,3", "--r", "2")
    assert code == 0
    assert rep["normalized_p"] == [3, 3] and rep["normalized_r"] == 1
    assert rep["result"]["max_product"] == "9"


def test_search_full_enumerates_optima():
    code, rep = run("search", "--p", "2,2", "--r", "1", "--mode", "full", "--enumerate-optima")
    assert code == 0
    assert rep["result"]["optima"] == 6
    assert len(rep["result"]["witnesses"]) == 6
    assert {"A": [[1, 1], [2, 2]], "B": [[1, 2], [2, 1]], "size_A": "2", "size_B": "2"} \
        in rep["result"]["witnesses"]


def test_search_no_pruning_flag():
    _, pruned = run("search", "--p", "3,3,3,3,3", "--r", "1")
    _, plain = run("search", "--p", "3,3,3,3,3", "--r", "1", "--no-pruning")
    assert pruned["result"]["max_product"] == plain["result"]["max_product"] == "6561"
    assert plain["result"]["stats"]["pruned"] == 0 < pruned["result"]["stats"]["pruned"]


def test_bounds_command():
    code, rep = run("bounds", "--p", "3,4", "--r", "1")
    assert code == 0
    assert rep["result"]["theorem1"] == "16"
    assert rep["result"]["lemma2"]["holds"] is True
    code, rep = run("bounds", "--p", "3,3,3", "--r", "1", "--T", "1,2,3")
    assert rep["result"]["theorem5"].startswith("13.5")
    assert rep["result"]["theorem6_admissible"] is True


def test_balls_command():
    code, rep = run("balls", "--p", "3,3,3,3,3", "--r", "4")
    assert code == 0
    assert rep["result"]["product"] == "11"
    assert rep["result"]["best"]["radius_a"] == 0 and rep["result"]["best"]["radius_b"] == 1


def test_commgame_command(tmp_path):
    dump = tmp_path / "m.txt"
    code, rep = run("commgame", "--p", "2,2", "--r", "1", "--dump", str(dump))
    assert code == 0
    assert rep["result"]["max_area"] == "4"
    assert dump.read_text().splitlines() == ["1110", "1101", "1011", "0111"]


def test_verify_conjecture3():
    code, rep = run("verify", "--suite", "conjecture3", "--p", "3,3,3,3", "--r", "2")
    assert code in (0, 2)
    assert rep["result"]["details"]["search_product"] == "81"


@pytest.mark.parametrize("suite", ["logconcavity", "dual", "shift", "ballsize", "compress", "support"])
def test_verify_random_suites(suite):
    code, rep = run("verify", "--suite", suite, "--trials", "25", "--seed", "7")
    assert code == 0
    assert rep["result"]["failures"] == 0 and rep["result"]["seed"] == 7


@pytest.mark.parametrize("suite", ["lemma9", "theorem5"])
def test_verify_conformance_suites(suite):
    code, rep = run("verify", "--suite", suite, "--p", "2,2,2", "--r", "2")
    assert code == 0 and rep["result"]["trials"] > 0


def test_verify_counterexample_exit(monkeypatch):
    def broken(rng, trials, p=None, r=None):
        return SuiteReport("dual", trials, failures=1, certificate={"A": [[1]]})

    monkeypatch.setitem(verify.SUITES, "dual", broken)
    code, rep = run("verify", "--suite", "dual")
    assert code == 2
    assert rep["result"]["certificate"] == {"A": [[1]]}


@pytest.mark.parametrize(
    "argv",
    [
        ("search", "--p", "3,3", "--r", "3"),
        ("search", "--p", "2,2,2,2,2,2,2", "--r", "2"),
        ("search", "--p", "3,3,3", "--r", "1", "--mode", "full"),
        ("search", "--p", "3,3"),
        ("verify", "--suite", "lemma9"),
    ],
)
def test_errors_exit_one(argv):
    code, rep = run(*argv)
    assert code == 1
    assert "error" in rep


def test_reports_are_deterministic():
    argv = ("verify", "--suite", "dual", "--trials", "30", "--seed", "11")
    first, second = run(*argv)[1], run(*argv)[1]
    assert json.dumps(strip_volatile(first)) == json.dumps(strip_volatile(second))


def test_pretty_table():
    out = io.StringIO()
    assert cli.run(["bounds", "--p", "3,4", "--r", "1", "--pretty"], stdout=out) == 0
    assert any(line.startswith("result.theorem1") and line.rstrip().endswith("16")
               for line in out.getvalue().splitlines())


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "xintersect", "bounds", "--p", "3,4", "--r", "1"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["result"]["theorem1"] == "16"

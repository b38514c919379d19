import json
import subprocess
import sys
import time

import pytest

from sautfn import automorphisms as auto
from sautfn import harness
from sautfn.cli import main


def test_registry_has_one_anchor_per_check():
    assert len(harness.CHECKS) == 12
    assert all(c.paper_ref for c in harness.CHECKS.values())


@pytest.mark.parametrize("name, params, key, value", [
    ("counting-identity", {"n": 3}, "product", 20160),
    ("c-subgroups", {"n_plus_1": 3}, "distinct", 7),
    ("torelli", {"n": 5}, "integer_identity", True),
    ("abelianization", {}, "invariants", [12]),
])
def test_run_check_examples(name, params, key, value):
    rep = harness.run_check(name, params)
    assert rep.status == harness.PASS
    assert rep.counts[key] == value


def test_report_schema():
    d = harness.run_check("sl-order", {"n": 3}).to_dict()
    assert list(d) == ["check", "params", "status", "counts", "elapsed_ms", "paper_ref"]
    assert d["elapsed_ms"] is None
    assert harness.run_check("sl-order", {"n": 3}).to_dict(timing=True)["elapsed_ms"] >= 0


def test_fail_requires_witness():
    with pytest.raises(ValueError):
        harness.CheckReport("x", {}, harness.FAIL)


def test_unknown_and_refused():
    with pytest.raises(KeyError):
        harness.run_check("no-such-check", {})
    rep = harness.run_check("lemma-a", {"n": 9})
    assert rep.status == harness.REFUSED and "reason" in rep.witness
    assert harness.run_check("sl-order", {"n": 5}).status == harness.REFUSED
    assert harness.run_check("torelli", {}).status == harness.REFUSED
    assert harness.exit_code([rep]) == 2


def test_exit_codes():
    ok = harness.CheckReport("a", {}, harness.PASS)
    bad = harness.CheckReport("b", {}, harness.FAIL, witness={"x": 1})
    assert harness.exit_code([ok]) == 0
    assert harness.exit_code([ok, bad]) == 1


def test_reports_deterministic():
    a = [r.to_json() for r in harness.run_all("quick")]
    b = [r.to_json() for r in harness.run_all("quick")]
    assert a == b


def test_seed_recorded_and_used():
    r0 = harness.run_check("conjugation-stability", {"n": 2})
    assert r0.params["seed"] == 0 and r0.passed
    assert harness.run_check("conjugation-stability", {"n": 2, "seed": 5}).params["seed"] == 5


def test_quick_profile_under_ten_seconds():
    t0 = time.perf_counter()
    reports = harness.run_all("quick")
    assert time.perf_counter() - t0 < 10
    assert all(r.passed for r in reports)


def test_profiles():
    quick = harness.profile_runs("quick")
    full = harness.profile_runs("full")
    assert [n for n, _ in quick if n == "c-subgroups"] and max(
        p["n_plus_1"] for n, p in quick if n == "c-subgroups") == 3
    assert max(p["n_plus_1"] for n, p in full if n == "c-subgroups") == 4
    with pytest.raises(ValueError):
        harness.profile_runs("huge")


def reversed_commutator(phi, psi):
    return auto.compose_all(phi.rank, [auto.inverse(phi), auto.inverse(psi), phi, psi])


def test_mutation_reversed_commutator_is_caught(monkeypatch):
    monkeypatch.setattr(auto, "commutator", reversed_commutator)
    rep = harness.run_check("gersten-relations", {"n": 3})
    assert rep.status == harness.FAIL
    assert rep.witness["family"] == "B" and len(rep.witness["indices"]) == 3
    assert harness.exit_code([rep]) == 1


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_cli_check(capsys):
    code, out, _ = run_cli(capsys, "check", "counting-identity", "--n", "2", "--json")
    assert code == 0 and json.loads(out)["status"] == "pass"
    code, out, _ = run_cli(capsys, "check", "c-subgroups", "--n", "3")
    assert code == 0 and out.startswith("PASS")
    assert run_cli(capsys, "check", "lemma-a", "--n", "9")[0] == 2
    assert run_cli(capsys, "check", "bogus")[0] == 2
    assert run_cli(capsys, "check", "torelli")[0] == 2
    code, out, _ = run_cli(capsys, "check", "conjugation-stability", "--n", "2", "--seed", "4", "--json")
    assert json.loads(out)["params"]["seed"] == 4


def test_cli_check_fail_exit(monkeypatch, capsys):
    monkeypatch.setattr(auto, "commutator", reversed_commutator)
    code, out, _ = run_cli(capsys, "check", "gersten-relations", "--n", "4", "--json")
    assert code == 1 and "witness" in json.loads(out)


def test_cli_all(capsys, tmp_path):
    code, out, err = run_cli(capsys, "all", "--profile", "quick")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == len(harness.profile_runs("quick"))
    assert all(json.loads(x)["status"] == "pass" for x in lines)
    path = tmp_path / "r.ndjson"
    assert run_cli(capsys, "all", "--output", str(path))[0] == 0
    assert path.read_text() == out


def test_cli_tools(capsys):
    code, out, _ = run_cli(capsys, "word", "x2*x2^-1*x3*x1")
    assert code == 0 and json.loads(out)["reduced"] == "x3*x1"
    assert run_cli(capsys, "word", "x1**x2")[0] == 2
    code, out, _ = run_cli(capsys, "hyperplane", "001")
    d = json.loads(out)
    assert d["s_basis"] == ["x1*x2^-1", "x3"] and d["completed_basis"][-1] == "x1"
    code, out, _ = run_cli(capsys, "lemma-a", "11000", "00011")
    assert code == 0 and json.loads(out)["verified"]
    assert run_cli(capsys, "lemma-a", "110", "110")[0] == 2
    code, out, _ = run_cli(capsys, "homs", "<a,b ; a^4, a^2*b^-3>", "S3")
    d = json.loads(out)
    assert (d["count"], len(d["surjection_classes"])) == (12, 1)
    code, out, _ = run_cli(capsys, "homs", "<a,b ; a^4, a^2*b^-3>", "SL(2,2)")
    assert len(json.loads(out)["surjection_classes"]) == 1
    assert run_cli(capsys, "homs", "<a ; q>", "S3")[0] == 2
    assert run_cli(capsys, "homs", "<a ; a^2>", "A5")[0] == 2


def test_cli_usage_error_exit_code():
    proc = subprocess.run([sys.executable, "-m", "sautfn", "check"], capture_output=True)
    assert proc.returncode == 2
    proc = subprocess.run([sys.executable, "-m", "sautfn", "hyperplane", "111"], capture_output=True, text=True)
    assert proc.returncode == 2 and "all-ones" in proc.stderr

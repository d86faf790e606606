import json

import pytest
from click.testing import CliRunner

from crossbiprod.cli import main


@pytest.fixture
def run():
    runner = CliRunner()

    def go(*args):
        return runner.invoke(main, list(args), catch_exceptions=False)
    return go


def test_check_pass_exit_zero_and_json(run):
    r = run("check", "LB1", "D21", "trivial_222", "--json")
    assert r.exit_code == 0
    doc = json.loads(r.output)
    assert doc["field"] == "q" and [x["id"] for x in doc["records"]] == ["LB1", "D21"]
    assert all(x["verdict"] == "pass" for x in doc["records"]) and "seconds" not in doc["records"][0]


def test_check_failure_prints_witness(run):
    r = run("check", "I1", "kc2_kc4")
    assert r.exit_code == 1
    assert "a: x⊗1⊗x != 1⊗1⊗1" in r.output


def test_check_gate_on_kc2_kc4(run):
    """The gate for the two-sided crossed product is expected to pass on this instance.

    It does not: the cocycle data fail associativity at a⊗a⊗a (see the ledger)."""
    r = run("check", "thm2.3", "kc2_kc4")
    assert r.exit_code == 0, r.output


def test_check_gate_on_repaired_instance(run):
    r = run("check", "thm2.3", "kc2_kc4_x2")
    assert r.exit_code == 0, r.output


def test_usage_errors_exit_two(run):
    assert run("check", "NOPE1", "trivial_222").exit_code == 2
    assert run("check", "LB1", "no_such_instance").exit_code == 2
    assert run("check", "LB1", "random:2,9,2").exit_code == 2
    assert run("check", "LB1", "trivial_222", "--field", "fp:4").exit_code == 2


def test_missing_role_is_named(run, tmp_path):
    r = run("catalog", "dump", "trivial_222")
    text = r.output.splitlines()
    start = next(i for i, l in enumerate(text) if l.startswith("tensor tau"))
    end = next(i for i in range(start, len(text)) if text[i].rstrip().endswith("}"))
    p = tmp_path / "no_tau.inst"
    p.write_text("\n".join(text[:start] + text[end + 1:]) + "\n", encoding="utf-8")
    r = run("check", "RTC2", str(p))
    assert r.exit_code == 2 and "tau" in r.output


def test_bad_file_reports_line(run, tmp_path):
    p = tmp_path / "bad.inst"
    p.write_text("# x\nfield q\nwhat is this\n", encoding="utf-8")
    r = run("check", "LB1", str(p))
    assert r.exit_code == 2 and "line 3" in r.output


def test_output_is_byte_stable_and_independent_of_jobs(run):
    ids = ["thm2.3", "LB1", "LB2", "RB1", "C1", "D21", "I1"]
    a = run("check", *ids, "trivial_222", "--json").output
    b = run("check", *ids, "trivial_222", "--json").output
    c = run("check", *ids, "trivial_222", "--json", "--jobs", "4").output
    assert a == b == c
    t1 = run("check", *ids, "trivial_222").output
    assert t1 == run("check", *ids, "trivial_222", "--jobs", "3").output


def test_random_instances_need_finite_field(run):
    assert run("check", "LB1", "random:2,2,2", "--field", "q").exit_code == 2
    a = run("check", "LB1", "random:2,2,2", "--seed", "5").output
    assert a == run("check", "LB1", "random:2,2,2", "--seed", "5").output


def test_build_then_oracle(run, tmp_path):
    out = tmp_path / "tc.struct"
    r = run("build", "two_sided_bialgebra", "trivial_221", "-o", str(out), "--antipode")
    assert r.exit_code == 0 and out.exists()
    for axiom in ("assoc", "coassoc", "bialg", "antipode"):
        r = run("oracle", axiom, str(out))
        assert r.exit_code == 0, (axiom, r.output)


def test_oracle_antipode_on_kc2_kc4(run, tmp_path):
    out = tmp_path / "kc.struct"
    assert run("build", "two_sided_bialgebra", "kc2_kc4", "-o", str(out), "--antipode").exit_code == 0
    r = run("oracle", "antipode", str(out), "--json")
    assert r.exit_code == 1
    first = next(x for x in json.loads(r.output)["records"] if x["verdict"] == "fail")
    assert first["witness"].startswith("1⊗a⊗1")


def test_oracle_without_antipode_is_usage_error(run, tmp_path):
    out = tmp_path / "s.struct"
    run("build", "two_sided_crossed", "trivial_111", "-o", str(out))
    assert run("oracle", "antipode", str(out)).exit_code == 2


def test_catalog_list_and_dump(run):
    r = run("catalog", "list", "--json")
    names = [x["name"] for x in json.loads(r.output)]
    assert {"kc2_kc4", "majid", "majid_graded"} <= set(names)
    assert run("catalog", "dump", "majid").output.startswith("# catalog majid")


def test_concordance(run):
    r = run("concordance", "--json")
    rows = json.loads(r.output)
    assert r.exit_code == 0 and any(x["id"] == "LB1" for x in rows)
    assert "D4" in run("concordance").output

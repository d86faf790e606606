import pytest

from crossbiprod.catalog import RandomSpec, entries, entry, random_bundle
from crossbiprod.conditions import (CLOSED_IDS, EQUIVALENCES, GATES, ORACLES, UnboundRole, check, concordance,
                                    concordance_json, equivalence_suite, gate, hypothesis, load_registry,
                                    parse_registry, prepare, prerequisites_hold)
from crossbiprod.sweedler.parser import DSLError


def test_closed_set_is_complete_and_anchored():
    reg = load_registry()
    assert len(CLOSED_IDS) == len(set(CLOSED_IDS))
    for cid in CLOSED_IDS:
        assert cid in reg, cid
        assert reg[cid].anchor.strip(), cid


def test_aliases():
    reg = load_registry()
    assert reg.aliases["D4"].target == "C4" and "unresolved" in reg.aliases["D4"].status
    for d, c in (("D5", "C5"), ("D6", "C6")):
        assert reg.aliases[d].target == c and "inferred" in reg.aliases[d].status
    e, only = reg.resolve("D5")
    assert e.id == "C5" and only is None
    e, only = reg.resolve("C1@2")
    assert e.id == "C1" and only == 2
    with pytest.raises(KeyError):
        reg.resolve("ZZ9")


def test_alias_checks_like_target():
    b = entry("kc2_kc4").bundle
    assert check("D4", b, lift=True).passed == check("C4", b, lift=True).passed


def test_parse_registry_errors():
    bad = parse_registry("#@ Q1 | here | anchor\nQ1 : a_1 % (a_2 == a\n")
    with pytest.raises(DSLError):
        bad["Q1"].equation
    with pytest.raises(ValueError):
        parse_registry("Q1 : a == a\n")
    reg = parse_registry("#@ Q1 | here | anchor\nQ1 : a == a\n")
    assert reg["Q1"].anchor == "anchor"


def test_every_closed_id_holds_on_trivial_data():
    for name in ("trivial_111", "trivial_222", "trivial_221", "trivial_122"):
        b = entry(name).bundle
        assert [c for c in CLOSED_IDS if not check(c, b).passed] == [], name


def test_unbound_role_is_an_error_not_a_verdict():
    b = entry("kc2_kc4").bundle
    with pytest.raises(UnboundRole):
        check("LB1", b)
    with pytest.raises(UnboundRole):
        check("LU1", b, lift=True)


def test_clause_selector():
    b = entry("trivial_222").bundle
    assert check("C1@1", b).passed and check("C1@2", b).passed


def test_i1_witness_on_kc2_kc4():
    r = check("I1", entry("kc2_kc4").bundle, lift=True)
    assert not r.passed
    assert (r.witness.input, r.witness.lhs) == ("a", "x⊗1⊗x")


def test_x2_variant_is_associative_but_still_not_hopf():
    b = entry("kc2_kc4_x2").bundle
    assert hypothesis("st:algebra", prepare("thm2.3", b)).passed
    assert not check("I1", b, lift=True).passed


def test_gate_table_is_well_formed():
    reg = load_registry()
    for g in GATES.values():
        assert g.oracle in ORACLES
        for cid in g.main:
            reg.resolve(cid)
        for h in g.prerequisites:
            assert h.startswith("st:") or h in reg, (g.id, h)


@pytest.mark.parametrize("gid", sorted(GATES))
def test_all_gates_pass_on_trivial_222(gid):
    assert gate(gid, entry("trivial_222").bundle).passed


@pytest.mark.parametrize("cid", ["LB1", "RB1", "LTC3", "RTC2", "LU1", "RU1"])
def test_enforced_normalisation_holds(cid):
    for seed in range(5):
        b = random_bundle(RandomSpec(dims=(2, 2, 2), p=2, seed=seed, enforce=(cid,)))
        assert check(cid, b).passed


def test_prerequisites_hold_for_gate_enforced_bundles():
    for gid in ("prop1.1", "thm2.3", "thm_D"):
        b = random_bundle(RandomSpec(dims=(2, 2, 2), p=2, seed=3, gate=gid))
        assert prerequisites_hold(gid, b)


def test_equivalences_on_catalog():
    for e in entries():
        reps = equivalence_suite(e.bundle)
        assert [r.pair for r in reps] == list(EQUIVALENCES)
        assert all(r.equivalent for r in reps), e.name


def test_equivalence_outside_hypotheses_is_flagged():
    reps = equivalence_suite(entry("majid_graded").bundle)
    assert all(r.outside == "C3" for r in reps)
    assert not any(r.discrepancy for r in reps)


def test_concordance_rows():
    rows = concordance()
    ids = [r["id"] for r in rows]
    assert ids[:len(CLOSED_IDS)] == list(CLOSED_IDS)
    assert {"D4", "D5", "D6"} <= set(ids)
    assert all(r["anchor"] and r["dsl"] for r in rows)
    assert '"LB1"' in concordance_json(rows)
    aux = concordance(include_auxiliary=True)
    assert any(r["id"].startswith("ax:") for r in aux)

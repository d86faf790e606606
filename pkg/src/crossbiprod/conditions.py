"""Condition registry, batch checks, theorem gates and the C/D equivalence suite.

The registry is the data file ``data/conditions.eqn``; every entry is a
Sweedler equation compiled on first use.  A condition id may carry a clause
selector, ``C1@1`` meaning the first ``&&``-clause of C1 only.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from importlib import resources
from typing import Callable, Mapping

from .products import (SIGMA_TRIVIAL, TAU_TRIVIAL, Bundle, BundleError, _lift, combine, direct_product,
                       left_brzezinski, lift_left, lift_right, right_brzezinski, sbar_reports, smash_coproduct2,
                       tensor_coalgebra3, two_sided_crossed, two_sided_specialize)
from .structures import (Bialgebra, ConditionReport, algebra_of, algebra_reports, coalgebra_of,
                         coalgebra_reports, comodule_coalgebra_reports, compare, compatibility_reports,
                         field_hopf, module_reports, trivial_right_action, trivial_right_coaction,
                         trivial_left_action, trivial_left_coaction, weak_action_reports, antipode_reports)
from .sweedler.diagram import Equation, UnboundRoleError, compile_equation


def _span(prefix: str, lo: int, hi: int) -> list[str]:
    return [f"{prefix}{i}" for i in range(lo, hi + 1)]


CLOSED_IDS: tuple[str, ...] = tuple(
    _span("LB", 1, 5) + _span("LTC", 3, 5) + _span("LC", 2, 3) + _span("L", 2, 3) + _span("LU", 1, 5)
    + ["LT3"] + _span("RB", 1, 5) + _span("RTC", 2, 4) + _span("RU", 1, 5) + _span("RF", 2, 3)
    + _span("R", 2, 3) + ["RT3"] + _span("RC", 2, 3) + _span("BT", 1, 4) + _span("TC", 1, 3)
    + _span("G", 1, 5) + _span("J", 1, 6) + ["P1"] + _span("I", 1, 2) + _span("C", 1, 13)
    + _span("D", 7, 22) + _span("E", 1, 3) + _span("F", 1, 4) + ["DB"])


class UnboundRole(BundleError):
    """The bundle lacks a generator the equation uses."""


@dataclass(frozen=True)
class Entry:
    id: str
    location: str
    anchor: str
    note: str
    text: str
    line: int

    @property
    def dsl(self) -> str:
        return self.text[re.match(r"\S+?\s*:(?=\s)", self.text).end():].strip()

    @property
    def equation(self) -> Equation:
        return _compiled(self.text, self.line)


@dataclass(frozen=True)
class Alias:
    id: str
    target: str
    status: str


@dataclass(frozen=True)
class Registry:
    entries: Mapping[str, Entry]
    aliases: Mapping[str, Alias]

    def __getitem__(self, cid: str) -> Entry:
        return self.entries[cid]

    def __contains__(self, cid: str) -> bool:
        return cid in self.entries or cid in self.aliases

    def resolve(self, cid: str) -> tuple[Entry, int | None]:
        base, _, clause = cid.partition("@")
        base = self.aliases[base].target if base in self.aliases else base
        if base not in self.entries:
            raise KeyError(f"unknown condition {cid!r}")
        return self.entries[base], (int(clause) if clause else None)


@lru_cache(maxsize=None)
def _compiled(text: str, line: int) -> Equation:
    return compile_equation(text, line)


def parse_registry(text: str) -> Registry:
    entries: dict[str, Entry] = {}
    aliases: dict[str, Alias] = {}
    meta = None
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line.startswith("#@"):
            parts = [p.strip() for p in line[2:].split(" | ")]
            meta = (parts[0], parts[1], parts[2], parts[3] if len(parts) > 3 else "")
        elif line.startswith("#="):
            m = re.match(r"#=\s*(\S+)\s*->\s*(\S+)\s*\|\s*(.*)", line)
            if m is None:
                raise ValueError(f"line {n}: bad alias line")
            aliases[m.group(1)] = Alias(m.group(1), m.group(2), m.group(3))
        elif line and not line.startswith("#"):
            cid = re.match(r"(\S+?)\s*:(?=\s)", line).group(1)
            if meta is None or meta[0] != cid:
                raise ValueError(f"line {n}: {cid} has no anchor line")
            if cid in entries:
                raise ValueError(f"line {n}: duplicate id {cid}")
            entries[cid] = Entry(cid, meta[1], meta[2], meta[3], line, n)
            meta = None
    return Registry(entries, aliases)


@lru_cache(maxsize=1)
def load_registry() -> Registry:
    text = resources.files("crossbiprod").joinpath("data/conditions.eqn").read_text(encoding="utf-8")
    return parse_registry(text)


# -- checking ----------------------------------------------------------------------

def as_bundle(bundle) -> Bundle:
    return bundle if isinstance(bundle, Bundle) else Bundle(dict(bundle))


def check(cid: str, bundle, lift: bool = False) -> ConditionReport:
    """Exact verdict of one condition over every basis tuple of its boundary.

    With ``lift`` a bundle lacking G, R, T, F is first completed by the two-sided lift.
    """
    bundle = as_bundle(bundle)
    if lift and not all(r in bundle for r in ("G", "R", "T", "F")):
        bundle = _auto_two_sided(bundle)
    entry, only = load_registry().resolve(cid)
    eq = entry.equation
    clauses = list(enumerate(eq.clauses, 1))
    if only is not None:
        clauses = [clauses[only - 1]]
    bindings, spaces, f = bundle.bindings(), bundle.spaces(), bundle.field
    for k, clause in clauses:
        try:
            lhs = clause.lhs.evaluate(bindings, spaces, f)
            rhs = clause.rhs.evaluate(bindings, spaces, f)
        except UnboundRoleError as exc:
            raise UnboundRole(f"{cid} uses {exc.args[0]}, which the bundle does not bind") from None
        except KeyError as exc:
            raise UnboundRole(f"{cid} needs space {exc.args[0]}, which the bundle does not bind") from None
        r = compare(cid, lhs, rhs, detail=f"clause {k}" if len(eq.clauses) > 1 else "")
        if not r.passed:
            return r
    return ConditionReport(cid, True)


def check_many(ids, bundle, lift: bool = False) -> list[ConditionReport]:
    bundle = as_bundle(bundle)
    if lift and not all(r in bundle for r in ("G", "R", "T", "F")):
        bundle = _auto_two_sided(bundle)
    return [check(i, bundle) for i in ids]


# -- structural hypotheses ------------------------------------------------------------

def _fold(name: str, reports) -> ConditionReport:
    for r in reports:
        if not r.passed:
            return ConditionReport(name, False, r.witness, r.id)
    return ConditionReport(name, True)


def _bialg(s) -> list[ConditionReport]:
    return (algebra_reports(algebra_of(s)) + coalgebra_reports(coalgebra_of(s))
            + compatibility_reports(Bialgebra(algebra_of(s), coalgebra_of(s))))


def _hopf(s) -> list[ConditionReport]:
    anti = getattr(s, "antipode", None)
    if anti is None:
        return [ConditionReport("antipode", False, detail="no antipode")]
    return _bialg(s) + antipode_reports(s, anti)


_STRUCTURAL: dict[str, Callable[[Bundle], list]] = {}
for _r in "AHB":
    _STRUCTURAL[f"st:alg_{_r}"] = lambda b, r=_r: algebra_reports(algebra_of(b[r]))
    _STRUCTURAL[f"st:coalg_{_r}"] = lambda b, r=_r: coalgebra_reports(coalgebra_of(b[r]))
    _STRUCTURAL[f"st:bialg_{_r}"] = lambda b, r=_r: _bialg(b[r])
    _STRUCTURAL[f"st:hopf_{_r}"] = lambda b, r=_r: _hopf(b[r])
_STRUCTURAL.update({
    "st:weak_left": lambda b: weak_action_reports("left", b["H"], b["A"], b["act_left"]),
    "st:weak_right": lambda b: weak_action_reports("right", b["H"], b["B"], b["act_right"]),
    "st:module_left": lambda b: (weak_action_reports("left", b["H"], b["A"], b["act_left"])
                                 + module_reports("left", b["H"], b["A"], b["act_left"])),
    "st:module_right": lambda b: (weak_action_reports("right", b["H"], b["B"], b["act_right"])
                                  + module_reports("right", b["H"], b["B"], b["act_right"])),
    "st:comodcoalg_left": lambda b: comodule_coalgebra_reports("left", b["H"], b["A"], b["coact_left"]),
    "st:comodcoalg_right": lambda b: comodule_coalgebra_reports("right", b["H"], b["B"], b["coact_right"]),
})


# -- gates ------------------------------------------------------------------------------

def _auto_two_sided(b: Bundle) -> Bundle:
    if "G" in b and "R" in b and "T" in b:
        return b
    if "act_left" in b and "act_right" in b:
        return two_sided_specialize("crossed", b)
    return two_sided_specialize("twisted_crossed", b)


def _dcb(b: Bundle) -> Bundle:
    return two_sided_specialize("crossed", b)


def _dcb_tau_trivial(b: Bundle) -> Bundle:
    return _dcb(b.replace(tau=_lift(TAU_TRIVIAL, b)))


def _dcb_smash(b: Bundle) -> Bundle:
    return _dcb(b.replace(tau=_lift(TAU_TRIVIAL, b), sigma=_lift(SIGMA_TRIVIAL, b)))


def _dcb_left(b: Bundle) -> Bundle:
    """B = K: the left crossed product with the left smash coproduct."""
    K = field_hopf(b.field)
    b = b.replace(B=K, act_right=trivial_right_action(K, b["H"]), coact_right=trivial_right_coaction(K, b["H"]))
    return _dcb(b.replace(tau=_lift(TAU_TRIVIAL, b)))


def _dcb_right(b: Bundle) -> Bundle:
    K = field_hopf(b.field)
    b = b.replace(A=K, act_left=trivial_left_action(K, b["H"]), coact_left=trivial_left_coaction(K, b["H"]))
    return _dcb(b.replace(sigma=_lift(SIGMA_TRIVIAL, b)))


def _alg(built) -> list[ConditionReport]:
    return algebra_reports(algebra_of(built.structure))


def _dcb_built(b: Bundle):
    return combine("double_crossed_biproduct", two_sided_crossed(b), smash_coproduct2(b))


ORACLES: dict[str, tuple[str, Callable[[Bundle], list]]] = {
    "left_brzezinski": ("associativity and unit of A#H", lambda b: _alg(left_brzezinski(b))),
    "right_brzezinski": ("associativity and unit of H#B", lambda b: _alg(right_brzezinski(b))),
    "two_sided": ("associativity and unit of A#H#B", lambda b: _alg(two_sided_crossed(b))),
    "two_sided_bialgebra": ("bialgebra compatibility with the tensor coalgebra",
                            lambda b: compatibility_reports(
                                Bialgebra(algebra_of(two_sided_crossed(b).structure),
                                          coalgebra_of(tensor_coalgebra3(b).structure)))),
    "antipode": ("S̄ is a convolution inverse of the identity",
                 lambda b: sbar_reports(combine("two_sided_bialgebra", two_sided_crossed(b),
                                                tensor_coalgebra3(b)), b)),
    "dcb": ("bialgebra compatibility with the smash coproduct",
            lambda b: compatibility_reports(_dcb_built(b).structure)),
}
for _fam, _kinds in (("left", ("twisted_crossed", "crossed", "twisted", "unified", "twisted_tensor")),
                     ("right", ("twisted_crossed", "unified", "f_twist", "twist", "twisted_tensor", "crossed")),
                     ("two", ("twisted_crossed", "twisted", "twisted_tensor", "crossed"))):
    for _k in _kinds:
        ORACLES[f"direct:{_fam}:{_k}"] = (f"associativity and unit of the {_fam} {_k} product",
                                          lambda b, fam=_fam, k=_k: _alg(direct_product(fam, k, b)))

# Hypotheses about the product itself, used where a statement presupposes it.
_STRUCTURAL.update({
    "st:algebra": lambda b: _alg(two_sided_crossed(b)),
    "st:bialgebra": lambda b: _bialg(combine("t", two_sided_crossed(b), tensor_coalgebra3(b)).structure),
    # coassociativity and counit only; Δ(1) = 1⊗1 belongs to the bialgebra side
    "st:coalgebra_dcb": lambda b: coalgebra_reports(coalgebra_of(smash_coproduct2(b).structure))[:3],
})


@dataclass(frozen=True)
class GateSpec:
    id: str
    prepare: Callable[[Bundle], Bundle]
    prerequisites: tuple[str, ...]
    main: tuple[str, ...]
    oracle: str


_LEFT = ("st:alg_A",)
_RIGHT = ("st:alg_B",)
_TWO = ("st:alg_A", "st:alg_B", "st:coalg_H")
_BIALG = ("st:bialg_A", "st:bialg_B", "st:coalg_H", "ax:one_H", "ax:eps_tau", "st:algebra")
_LEMMA = ("st:bialg_H", "st:alg_A", "st:alg_B", "st:coalg_A", "st:coalg_B", "st:comodcoalg_left",
          "st:comodcoalg_right", "ax:eps_1A", "ax:eps_1B", "ax:eps_sigma", "ax:eps_tau", "st:weak_left",
          "st:weak_right", "st:algebra", "st:coalgebra_dcb")
_TWO_PRE = ("LB1", "LB2", "LB3", "RB1", "RB2", "RTC2")


def _ident(b: Bundle) -> Bundle:
    return b


def _l(kind):
    return lambda b: lift_left(kind, b)


def _r(kind):
    return lambda b: lift_right(kind, b)


def _two(kind):
    return lambda b: two_sided_specialize(kind, b)


GATES: dict[str, GateSpec] = {g.id: g for g in [
    GateSpec("prop1.1", _ident, _LEFT + ("LB1",), ("LB2", "LB3", "LB4", "LB5"), "left_brzezinski"),
    GateSpec("ex1.2", _l("twisted_crossed"), _LEFT + ("st:bialg_H", "LB1"), ("LB2", "LTC3", "LTC4", "LTC5"),
             "direct:left:twisted_crossed"),
    GateSpec("ex1.3", _l("crossed"), _LEFT + ("st:bialg_H", "st:weak_left"), ("LTC3", "LC2", "LC3"),
             "direct:left:crossed"),
    GateSpec("ex1.4", _l("twisted"), _LEFT + ("st:bialg_H",), ("LTC3", "L2", "L3"), "direct:left:twisted"),
    GateSpec("ex1.5", _l("unified"), _LEFT + ("st:bialg_H", "LU1"), ("LU2", "LU3", "LU4", "LU5"),
             "direct:left:unified"),
    GateSpec("ex1.6", _l("twisted_tensor"), _LEFT + ("st:alg_H",), ("LB1", "LB2", "LT3"),
             "direct:left:twisted_tensor"),
    GateSpec("prop2.1", _ident, _RIGHT + ("RB1",), ("RB2", "RB3", "RB4", "RB5"), "right_brzezinski"),
    GateSpec("ex2.2.1", _r("twisted_crossed"), _RIGHT + ("st:bialg_H", "RB1"), ("RB2", "RTC2", "RTC3", "RTC4"),
             "direct:right:twisted_crossed"),
    GateSpec("ex2.2.2", _r("unified"), _RIGHT + ("st:bialg_H", "RU1"), ("RU2", "RU3", "RU4", "RU5"),
             "direct:right:unified"),
    GateSpec("ex2.2.3", _r("f_twist"), _RIGHT + ("st:alg_H",), ("RB3", "RF2", "RF3"), "direct:right:f_twist"),
    GateSpec("ex2.2.4", _r("twisted_tensor"), _RIGHT + ("st:alg_H",), ("RB1", "RB2", "RT3"),
             "direct:right:twisted_tensor"),
    GateSpec("ex2.2.5", _r("crossed"), _RIGHT + ("st:bialg_H", "st:weak_right"), ("RTC2", "RC2", "RC3"),
             "direct:right:crossed"),
    GateSpec("ex2.2.3t", _r("twist"), _RIGHT + ("st:bialg_H",), ("RTC2", "R2", "R3"), "direct:right:twist"),
    GateSpec("thm2.3", _auto_two_sided, _TWO + _TWO_PRE, ("BT1", "BT2", "BT3", "BT4"), "two_sided"),
    GateSpec("ex2.5.1", _two("twisted_crossed"), _TWO + ("st:bialg_H", "LB1", "LB2", "RB1", "RB2", "LTC3", "RTC2"),
             ("BT4", "TC1", "TC2", "TC3"), "direct:two:twisted_crossed"),
    GateSpec("ex2.5.2", _two("twisted"), _TWO + ("st:bialg_H", "LTC3", "RTC2"), ("BT4", "TC1", "TC2", "TC3"),
             "direct:two:twisted"),
    GateSpec("ex2.5.3", _two("twisted_tensor"), _TWO + ("st:alg_H", "LB1", "LB2", "LT3", "RB1", "RB2", "RT3"),
             ("BT4",), "direct:two:twisted_tensor"),
    GateSpec("ex2.5.4", _two("crossed"), _TWO + ("st:bialg_H", "st:weak_left", "st:weak_right", "LTC3", "RTC2"),
             ("BT4", "TC1", "TC2", "TC3"), "direct:two:crossed"),
    GateSpec("thm_bialg_2sec", _auto_two_sided, _BIALG, ("G1", "G2", "G3", "G4", "G5"), "two_sided_bialgebra"),
    GateSpec("cor_J", _two("twisted_crossed"), _BIALG + ("st:bialg_H",),
             ("G2", "G3", "G4", "J1", "J2", "J3", "J4", "J5", "J6"), "two_sided_bialgebra"),
    GateSpec("cor_P", _two("crossed"), _BIALG + ("st:bialg_H", "st:weak_left", "st:weak_right", "J1", "ax:eps_1B"),
             ("J2", "J3", "J4", "J5", "J6", "D4", "F3", "F4", "P1"), "two_sided_bialgebra"),
    GateSpec("prop_antipode", _auto_two_sided, ("st:hopf_A", "st:hopf_B", "st:bialgebra"), ("I1", "I2"),
             "antipode"),
    GateSpec("lem_C", _dcb, _LEMMA, tuple(_span("C", 1, 13)), "dcb"),
    GateSpec("thm_D", _dcb, _LEMMA, tuple(_span("C", 1, 6) + _span("D", 7, 22)), "dcb"),
    GateSpec("prop_E", _dcb_tau_trivial, _LEMMA + ("st:module_right",),
             tuple(_span("C", 1, 5)) + ("D7", "D8", "D10", "D11", "D12", "D15", "D16", "D17", "D20", "D21",
                                        "E1", "E2", "E3"), "dcb"),
    GateSpec("cor_F", _dcb_smash, _LEMMA + ("st:module_left", "st:module_right"),
             tuple(_span("C", 1, 4)) + ("D8", "D10", "D16", "D17", "D21", "F1", "F2", "F3", "F4"), "dcb"),
    GateSpec("cor_left", _dcb_left, _LEMMA, ("C1@1", "C2@1", "C3@1", "C4@1", "D5", "D7", "D8", "D11", "D12",
                                             "D15", "D16"), "dcb"),
    GateSpec("cor_right", _dcb_right, _LEMMA, ("C1@2", "C2@2", "C3@2", "C4@2", "D6", "D9", "D10", "D13", "D14",
                                               "D17", "D18"), "dcb"),
]}


@dataclass
class GateReport:
    id: str
    prerequisites: list[ConditionReport]
    main: list[ConditionReport]
    oracle: list[ConditionReport]
    oracle_name: str = ""

    prereqs_ok = property(lambda self: all(r.passed for r in self.prerequisites))
    main_ok = property(lambda self: all(r.passed for r in self.main))
    oracle_ok = property(lambda self: all(r.passed for r in self.oracle))

    @property
    def consistent(self) -> bool:
        return self.main_ok == self.oracle_ok

    @property
    def passed(self) -> bool:
        return self.prereqs_ok and self.main_ok and self.oracle_ok

    def first_failure(self) -> ConditionReport | None:
        for r in self.main + self.oracle:
            if not r.passed:
                return r
        return None

    def as_dict(self) -> dict:
        return {"gate": self.id, "verdict": "pass" if self.passed else "fail",
                "prerequisites": [r.as_dict() for r in self.prerequisites],
                "main": [r.as_dict() for r in self.main],
                "oracle": {"name": self.oracle_name, "verdict": "pass" if self.oracle_ok else "fail",
                           "reports": [r.as_dict() for r in self.oracle]},
                "iff_consistent": self.consistent}


def hypothesis(name: str, bundle: Bundle) -> ConditionReport:
    if name in _STRUCTURAL:
        return _fold(name, _STRUCTURAL[name](bundle))
    return check(name, bundle)


def prepare(gid: str, bundle) -> Bundle:
    return GATES[gid].prepare(as_bundle(bundle))


def gate(gid: str, bundle, prerequisites_only: bool = False) -> GateReport:
    """Prerequisite, main and oracle verdicts of one theorem gate."""
    if gid not in GATES:
        raise KeyError(f"unknown gate {gid!r}")
    spec = GATES[gid]
    b = spec.prepare(as_bundle(bundle))
    pre = [hypothesis(p, b) for p in spec.prerequisites]
    if prerequisites_only:
        return GateReport(gid, pre, [], [], spec.oracle)
    main = [check(i, b) for i in spec.main]
    name, fn = ORACLES[spec.oracle]
    return GateReport(gid, pre, main, [ConditionReport(f"oracle:{r.id}", r.passed, r.witness) for r in fn(b)], name)


def prerequisites_hold(gid: str, bundle) -> bool:
    spec = GATES[gid]
    b = spec.prepare(as_bundle(bundle))
    return all(hypothesis(p, b).passed for p in spec.prerequisites)


# -- C/D equivalences ------------------------------------------------------------------

EQUIVALENCES: dict[str, tuple[str, ...]] = {
    "C7": ("D7", "D8"), "C8": ("D9", "D10"), "C9": ("D11", "D12"), "C10": ("D13", "D14"),
    "C11": ("D15", "D16"), "C12": ("D17", "D18"), "C13": ("D19", "D20", "D21", "D22"),
}


@dataclass
class EquivalenceReport:
    pair: str
    left: ConditionReport
    right: list[ConditionReport] = dc_field(default_factory=list)
    outside: str = ""   # the first hypothesis that fails, if any

    @property
    def equivalent(self) -> bool:
        return self.left.passed == all(r.passed for r in self.right)

    @property
    def discrepancy(self) -> bool:
        """Disagreement while every hypothesis holds."""
        return not self.outside and not self.equivalent

    def as_dict(self) -> dict:
        return {"pair": self.pair, "left": self.left.as_dict(), "right": [r.as_dict() for r in self.right],
                "equivalent": self.equivalent, "outside_hypotheses": self.outside or None}


def equivalence_suite(bundle, pairs=None) -> list[EquivalenceReport]:
    """Each C-condition against the conjunction of its D-conditions.

    The equivalences are asserted under the lemma hypotheses and C1–C6; both
    sides are evaluated either way and ``outside`` names a failing hypothesis.
    """
    b = as_bundle(bundle)
    b = _dcb(b) if "G" not in b else b
    pairs = list(EQUIVALENCES) if pairs is None else list(pairs)
    outside = ""
    for h in _LEMMA[:-2] + tuple(_span("C", 1, 6)):
        if not hypothesis(h, b).passed:
            outside = h
            break
    return [EquivalenceReport(p, check(p, b), [check(d, b) for d in EQUIVALENCES[p]], outside) for p in pairs]


# -- concordance ------------------------------------------------------------------------

def concordance(include_auxiliary: bool = False) -> list[dict]:
    reg = load_registry()
    rows = []
    for cid in CLOSED_IDS:
        e = reg[cid]
        rows.append({"id": cid, "location": e.location, "anchor": e.anchor, "dsl": e.dsl, "note": e.note})
    for a in reg.aliases.values():
        rows.append({"id": a.id, "location": f"alias of {a.target}", "anchor": reg[a.target].anchor,
                     "dsl": reg[a.target].dsl, "note": a.status})
    if include_auxiliary:
        for cid, e in reg.entries.items():
            if cid.startswith("ax:"):
                rows.append({"id": cid, "location": e.location, "anchor": e.anchor, "dsl": e.dsl,
                             "note": e.note})
    return rows


def concordance_text(rows=None) -> str:
    rows = concordance() if rows is None else rows
    out = []
    for r in rows:
        out.append(f"{r['id']}\t{r['location']}\t{r['anchor']}")
        out.append(f"\t{r['dsl']}")
        if r["note"]:
            out.append(f"\tnote: {r['note']}")
    return "\n".join(out) + "\n"


def concordance_json(rows=None) -> str:
    return json.dumps(concordance() if rows is None else rows, ensure_ascii=False, indent=1)

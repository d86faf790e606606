"""Algebra, coalgebra, bialgebra and Hopf algebra carriers with exhaustive axiom checks.

Every check here contracts structure tensors directly with einsum and never
goes through the Sweedler compiler, so the checks double as
independent oracles for the equation registry.
"""
from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

import numpy as np

from .field import Field, Q
from .tensor import LinMap, Space, compose, identity, swap, tensor_of


class StructureError(ValueError):
    """Invalid structure data, e.g. a Cayley table that is not a group."""


@dataclass
class Witness:
    index: tuple[int, ...]   # basis indices of the failing input tuple
    input: str
    lhs: str
    rhs: str

    def as_dict(self) -> dict:
        return {"index": list(self.index), "input": self.input, "lhs": self.lhs, "rhs": self.rhs}


@dataclass
class ConditionReport:
    id: str
    passed: bool
    witness: Witness | None = None
    detail: str = ""

    def __bool__(self):
        return self.passed

    def as_dict(self) -> dict:
        out = {"id": self.id, "verdict": "pass" if self.passed else "fail"}
        if self.witness is not None:
            out["witness"] = self.witness.as_dict()
        if self.detail:
            out["detail"] = self.detail
        return out


def basis_word(spaces: Sequence[Space], idx: Sequence[int], sep: str = "⊗") -> str:
    if not spaces:
        return "1"
    words = [sp.labels[i].replace("|", sep) for sp, i in zip(spaces, idx)]
    if len(words) > 1 and any(sep in w for w in words):
        words = [f"({w})" for w in words]
    return sep.join(words)


def vector_text(spaces: Sequence[Space], arr, field: Field) -> str:
    if not spaces:
        return field.format(arr[()] if isinstance(arr, np.ndarray) else arr)
    terms = []
    for idx in zip(*np.nonzero(arr != 0)):
        cs = field.format(arr[idx])
        word = basis_word(spaces, idx)
        terms.append(word if cs == "1" else f"{cs}·{word}")
    return " + ".join(terms) if terms else "0"


def compare(name: str, f: LinMap, g: LinMap, detail: str = "") -> ConditionReport:
    """Exact comparison; the witness is the smallest failing input tuple in lexicographic order."""
    if f.codomain != g.codomain or f.domain != g.domain:
        raise ValueError(f"{name}: the two sides have different signatures")
    k = len(f.codomain)
    diff = f.data != g.data
    if not np.any(diff):
        return ConditionReport(name, True, detail=detail)
    n = diff.ndim
    dom_major = np.transpose(diff, list(range(k, n)) + list(range(k)))
    first = np.argwhere(dom_major)[0]
    idx = tuple(int(i) for i in first[: n - k])
    w = Witness(idx, basis_word(f.domain, idx), vector_text(f.codomain, f.column(idx), f.field),
                vector_text(g.codomain, g.column(idx), g.field))
    return ConditionReport(name, False, w, detail)


def _c(*maps: LinMap) -> LinMap:
    """Right-to-left composite: _c(f, g, h) = f∘g∘h."""
    out = maps[-1]
    for m in reversed(maps[:-1]):
        out = compose(m, out)
    return out


def _t(*maps: LinMap) -> LinMap:
    out = maps[0]
    for m in maps[1:]:
        out = tensor_of(out, m)
    return out


def scalar_one(field: Field) -> LinMap:
    data = field.zeros(())
    data[()] = 1
    return LinMap([], [], data, field)


# -- carriers -----------------------------------------------------------------

@dataclass(frozen=True)
class Algebra:
    space: Space
    mult: LinMap
    unit: LinMap

    @property
    def field(self) -> Field:
        return self.mult.field

    def one(self):
        return self.unit.data


@dataclass(frozen=True)
class CoalgebraWithOne:
    space: Space
    comult: LinMap
    counit: LinMap
    one: int | None = None

    @property
    def field(self) -> Field:
        return self.comult.field


@dataclass(frozen=True)
class Bialgebra:
    algebra: Algebra
    coalgebra: CoalgebraWithOne

    def __post_init__(self):
        if self.algebra.space != self.coalgebra.space:
            raise StructureError("algebra and coalgebra live on different spaces")

    space = property(lambda self: self.algebra.space)
    mult = property(lambda self: self.algebra.mult)
    unit = property(lambda self: self.algebra.unit)
    comult = property(lambda self: self.coalgebra.comult)
    counit = property(lambda self: self.coalgebra.counit)
    field = property(lambda self: self.algebra.field)


@dataclass(frozen=True)
class HopfAlgebra:
    bialgebra: Bialgebra
    antipode: LinMap

    space = property(lambda self: self.bialgebra.space)
    mult = property(lambda self: self.bialgebra.mult)
    unit = property(lambda self: self.bialgebra.unit)
    comult = property(lambda self: self.bialgebra.comult)
    counit = property(lambda self: self.bialgebra.counit)
    field = property(lambda self: self.bialgebra.field)
    algebra = property(lambda self: self.bialgebra.algebra)
    coalgebra = property(lambda self: self.bialgebra.coalgebra)


@dataclass(frozen=True)
class ActionData:
    """kind is left-weak-action (H⊗A→A) or right-weak-action (B⊗H→B)."""
    kind: str
    map: LinMap
    over: tuple = dc_field(default=())


@dataclass(frozen=True)
class CoactionData:
    """kind is left-coaction (A→H⊗A) or right-coaction (B→B⊗H)."""
    kind: str
    map: LinMap
    over: tuple = dc_field(default=())


def algebra_of(s):
    return s if isinstance(s, Algebra) else s.algebra


def coalgebra_of(s):
    return s if isinstance(s, CoalgebraWithOne) else s.coalgebra


# -- axiom checks ---------------------------------------------------------------

def _map(arr, cod, dom, field: Field) -> LinMap:
    return LinMap(list(cod), list(dom), field.normalize(np.asarray(arr).astype(field.dtype)), field)


def _eye(n: int, field: Field):
    out = field.zeros((n, n))
    for i in range(n):
        out[i, i] = 1
    return out


def algebra_reports(a: Algebra) -> list[ConditionReport]:
    V, f = a.space, a.field
    m, u = a.mult.data, a.unit.data
    i = _eye(V.dim, f)
    return [
        compare("assoc", _map(f.contract("pxk,xij->pijk", m, m), [V], [V] * 3, f),
                _map(f.contract("pix,xjk->pijk", m, m), [V], [V] * 3, f)),
        compare("unit_left", _map(f.contract("pij,i->pj", m, u), [V], [V], f), _map(i, [V], [V], f)),
        compare("unit_right", _map(f.contract("pij,j->pi", m, u), [V], [V], f), _map(i, [V], [V], f)),
    ]


def coalgebra_reports(c: CoalgebraWithOne) -> list[ConditionReport]:
    V, f = c.space, c.field
    d, e = c.comult.data, c.counit.data
    ident = _map(_eye(V.dim, f), [V], [V], f)
    out = [
        compare("coassoc", _map(f.contract("ijx,xka->ijka", d, d), [V] * 3, [V], f),
                _map(f.contract("jkx,ixa->ijka", d, d), [V] * 3, [V], f)),
        compare("counit_left", _map(f.contract("i,ija->ja", e, d), [V], [V], f), ident),
        compare("counit_right", _map(f.contract("j,ija->ia", e, d), [V], [V], f), ident),
    ]
    if c.one is not None:
        one = f.zeros((V.dim,))
        one[c.one] = 1
        out.append(compare("comult_one", _map(d[:, :, c.one], [V, V], [], f),
                           _map(np.multiply.outer(one, one), [V, V], [], f)))
        out.append(compare("counit_one", _map(e[c.one], [], [], f), scalar_one(f)))
    return out


def compatibility_reports(b: Bialgebra) -> list[ConditionReport]:
    V, f = b.space, b.field
    m, u, d, e = b.mult.data, b.unit.data, b.comult.data, b.counit.data
    n = V.dim
    lhs = f.contract("pqx,xab->pqab", d, m)
    # (μ⊗μ)(id⊗τ⊗id)(Δ⊗Δ) one input pair at a time, over the nonzero terms of Δ
    terms = []
    for a in range(n):
        i, j = np.nonzero(d[:, :, a] != 0)
        terms.append((i, j, d[i, j, a]))
    rhs = f.zeros((n, n, n, n))
    for a, (i, j, ca) in enumerate(terms):
        for b, (k, l, cb) in enumerate(terms):
            if len(ca) and len(cb):
                rhs[:, :, a, b] = f.contract("pxy,qxy,xy->pq", m[:, i[:, None], k[None, :]],
                                             m[:, j[:, None], l[None, :]], np.multiply.outer(ca, cb))
    return [
        compare("comult_mult", _map(lhs, [V, V], [V, V], f), _map(rhs, [V, V], [V, V], f)),
        compare("counit_mult", _map(f.contract("p,pab->ab", e, m), [], [V, V], f),
                _map(np.multiply.outer(e, e), [], [V, V], f)),
        compare("comult_unit", _map(f.contract("pqx,x->pq", d, u), [V, V], [], f),
                _map(np.multiply.outer(u, u), [V, V], [], f)),
        compare("counit_unit", _map(f.contract("p,p->", e, u), [], [], f), scalar_one(f)),
    ]


def antipode_reports(b, s: LinMap) -> list[ConditionReport]:
    """Convolution inverse test S∗id = id∗S = η∘ε on every basis element."""
    V, f = b.space, b.field
    m, d, S = b.mult.data, b.comult.data, s.data
    ue = _map(np.multiply.outer(b.unit.data, b.counit.data), [V], [V], f)
    return [
        compare("antipode_left", _map(f.contract("pij,ik,kja->pa", m, S, d), [V], [V], f), ue),
        compare("antipode_right", _map(f.contract("pij,jk,ika->pa", m, S, d), [V], [V], f), ue),
    ]


def check_axioms(s) -> list[ConditionReport]:
    """One report per axiom of ``s``; all pass iff ``s`` is a valid structure."""
    if isinstance(s, Algebra):
        return algebra_reports(s)
    if isinstance(s, CoalgebraWithOne):
        return coalgebra_reports(s)
    if isinstance(s, Bialgebra):
        return algebra_reports(s.algebra) + coalgebra_reports(s.coalgebra) + compatibility_reports(s)
    if isinstance(s, HopfAlgebra):
        return check_axioms(s.bialgebra) + antipode_reports(s.bialgebra, s.antipode)
    raise TypeError(f"no axioms known for {type(s).__name__}")


# -- module / comodule checks ----------------------------------------------------

def weak_action_reports(kind: str, H, A, act: LinMap) -> list[ConditionReport]:
    """Measuring identities: h⊳(ab)=(h₁⊳a)(h₂⊳b), h⊳1=ε(h)1, 1⊳a=a (and the mirror)."""
    f = A.field
    Hs, As = H.space, A.space
    t, m, u, d, e, uh = act.data, A.mult.data, A.unit.data, H.comult.data, H.counit.data, H.unit.data
    ident = _map(_eye(As.dim, f), [As], [As], f)
    if kind == "left":
        return [
            compare("measuring", _map(f.contract("phx,xab->phab", t, m), [As], [Hs, As, As], f),
                    _map(f.contract("pxy,xia,yjb,ijh->phab", m, t, t, d), [As], [Hs, As, As], f)),
            compare("act_unit", _map(f.contract("phx,x->ph", t, u), [As], [Hs], f),
                    _map(np.multiply.outer(u, e), [As], [Hs], f)),
            compare("unit_act", _map(f.contract("pha,h->pa", t, uh), [As], [As], f), ident),
        ]
    return [
        compare("measuring", _map(f.contract("pxh,xab->pabh", t, m), [As], [As, As, Hs], f),
                _map(f.contract("pxy,xai,ybj,ijh->pabh", m, t, t, d), [As], [As, As, Hs], f)),
        compare("act_unit", _map(f.contract("pxh,x->ph", t, u), [As], [Hs], f),
                _map(np.multiply.outer(u, e), [As], [Hs], f)),
        compare("unit_act", _map(f.contract("pah,h->pa", t, uh), [As], [As], f), ident),
    ]


def module_reports(kind: str, H, A, act: LinMap) -> list[ConditionReport]:
    """Action associativity h⊳(h'⊳a)=(hh')⊳a (and the mirror)."""
    f = A.field
    Hs, As = H.space, A.space
    t, mh = act.data, H.mult.data
    if kind == "left":
        return [compare("module", LinMap([As], [Hs, Hs, As], f.contract("phx,xka->phka", t, t), f),
                        LinMap([As], [Hs, Hs, As], f.contract("pxa,xhk->phka", t, mh), f))]
    return [compare("module", LinMap([As], [As, Hs, Hs], f.contract("pxk,xah->pahk", t, t), f),
                    LinMap([As], [As, Hs, Hs], f.contract("pax,xhk->pahk", t, mh), f))]


def comodule_reports(kind: str, H, C, co: LinMap) -> list[ConditionReport]:
    f = C.field
    Hs, Cs = H.space, C.space
    r, d, e = co.data, H.comult.data, H.counit.data
    ident = _map(_eye(Cs.dim, f), [Cs], [Cs], f)
    if kind == "left":
        return [
            compare("comodule_coassoc", LinMap([Hs, Hs, Cs], [Cs], f.contract("ijx,xca->ijca", d, r), f),
                    LinMap([Hs, Hs, Cs], [Cs], f.contract("jcx,ixa->ijca", r, r), f)),
            compare("comodule_counit", LinMap([Cs], [Cs], f.contract("i,ica->ca", e, r), f), ident),
        ]
    return [
        compare("comodule_coassoc", LinMap([Cs, Hs, Hs], [Cs], f.contract("cix,xja->cija", r, r), f),
                LinMap([Cs, Hs, Hs], [Cs], f.contract("ijx,cxa->cija", d, r), f)),
        compare("comodule_counit", LinMap([Cs], [Cs], f.contract("i,cia->ca", e, r), f), ident),
    ]


def comodule_coalgebra_reports(kind: str, H, C, co: LinMap) -> list[ConditionReport]:
    """Comodule axioms plus compatibility of the coaction with Δ_C and ε_C."""
    f = C.field
    Hs, Cs = H.space, C.space
    r, dc, ec, mh, uh = co.data, C.comult.data, C.counit.data, H.mult.data, H.unit.data
    out = comodule_reports(kind, H, C, co)
    unit_eps = LinMap([Hs], [Cs], np.multiply.outer(uh, ec), f)
    if kind == "left":
        lhs = f.contract("hxa,pqx->hpqa", r, dc)
        rhs = f.contract("hij,ipy,jqz,yza->hpqa", mh, r, r, dc)
        out.append(compare("coaction_comult", LinMap([Hs, Cs, Cs], [Cs], lhs, f),
                           LinMap([Hs, Cs, Cs], [Cs], rhs, f)))
        out.append(compare("coaction_counit", LinMap([Hs], [Cs], f.contract("hxa,x->ha", r, ec), f), unit_eps))
    else:
        lhs = f.contract("xha,pqx->pqha", r, dc)
        rhs = f.contract("hij,piy,qjz,yza->pqha", mh, r, r, dc)
        out.append(compare("coaction_comult", LinMap([Cs, Cs, Hs], [Cs], lhs, f),
                           LinMap([Cs, Cs, Hs], [Cs], rhs, f)))
        out.append(compare("coaction_counit", LinMap([Hs], [Cs], f.contract("xha,x->ha", r, ec), f), unit_eps))
    return out


def check_yd(side: str, H, A, act: LinMap, co: LinMap) -> list[ConditionReport]:
    """Module-algebra and comodule-coalgebra axioms plus the concrete compatibility equations."""
    from .conditions import check  # local import: conditions depends on this module

    kind = "left" if side == "left" else "right"
    out = [ConditionReport(f"module:{r.id}", r.passed, r.witness)
           for r in weak_action_reports(kind, H, A, act) + module_reports(kind, H, A, act)]
    out += [ConditionReport(f"comodule:{r.id}", r.passed, r.witness)
            for r in comodule_coalgebra_reports(kind, H, A, co)]
    if side == "left":
        roles = {"A": A, "H": H, "act_left": act, "coact_left": co}
        ids = ("F1", "F3", "D8", "D16")
    else:
        roles = {"B": A, "H": H, "act_right": act, "coact_right": co}
        ids = ("F2", "F4", "D10", "D17")
    if side == "left":
        roles.setdefault("B", _field_bialgebra(A.field))
        roles["act_right"] = _trivial_right(roles["B"], H)
        roles["coact_right"] = _trivial_right_co(roles["B"], H)
    else:
        roles.setdefault("A", _field_bialgebra(A.field))
        roles["act_left"] = _trivial_left(roles["A"], H)
        roles["coact_left"] = _trivial_left_co(roles["A"], H)
    for cid in ids:
        out.append(check(cid, roles))
    return out


# -- constructors ------------------------------------------------------------------

def _basis_vector(space: Space, i: int, field: Field) -> LinMap:
    data = field.zeros((space.dim,))
    data[i] = 1
    return LinMap([space], [], data, field)


def algebra_from_table(space: Space, table, field: Field = Q, one: int | None = None) -> Algebra:
    """``table[i][j]`` is the basis index (or {index: coeff}) of e_i e_j."""
    def prod(idx):
        v = table[idx[0]][idx[1]]
        return v if isinstance(v, dict) else {(v,): 1}

    mult = LinMap.from_function([space], [space, space], prod, field)
    one = space.one if one is None else one
    if one is None:
        raise StructureError("algebra_from_table needs a unit index")
    return Algebra(space, mult, _basis_vector(space, one, field))


def grouplike_coalgebra(space: Space, field: Field = Q) -> CoalgebraWithOne:
    comult = LinMap.from_function([space, space], [space], lambda i: {(i[0], i[0]): 1}, field)
    counit = LinMap.from_function([], [space], lambda i: {(): 1}, field)
    return CoalgebraWithOne(space, comult, counit, space.one)


def group_algebra(cayley, labels: Sequence[str] | None = None, name: str = "KG",
                  field: Field = Q) -> HopfAlgebra:
    """Group Hopf algebra from a Cayley table ``cayley[i][j] = index of g_i g_j``."""
    n = len(cayley)
    if n == 0 or any(len(row) != n for row in cayley):
        raise StructureError("Cayley table must be square and nonempty")
    if any(not (0 <= v < n) for row in cayley for v in row):
        raise StructureError("Cayley table entry out of range")
    ids = [e for e in range(n) if all(cayley[e][g] == g and cayley[g][e] == g for g in range(n))]
    if not ids:
        raise StructureError("Cayley table has no identity")
    e = ids[0]
    for g in range(n):
        for h in range(n):
            for k in range(n):
                if cayley[cayley[g][h]][k] != cayley[g][cayley[h][k]]:
                    raise StructureError(f"Cayley table is not associative at ({g},{h},{k})")
    inv = []
    for g in range(n):
        cands = [h for h in range(n) if cayley[g][h] == e and cayley[h][g] == e]
        if not cands:
            raise StructureError(f"element {g} has no inverse")
        inv.append(cands[0])
    labels = tuple(labels) if labels is not None else tuple(f"g{i}" if i != e else "1" for i in range(n))
    space = Space(name, labels, one=e)
    alg = algebra_from_table(space, cayley, field, e)
    antipode = LinMap.from_function([space], [space], lambda i: {(inv[i[0]],): 1}, field)
    return HopfAlgebra(Bialgebra(alg, grouplike_coalgebra(space, field)), antipode)


def cyclic_group_algebra(n: int, gen: str, name: str, field: Field = Q) -> HopfAlgebra:
    """K C_n with basis 1, g, g^2, ... written as e.g. ``1, x, x^2, x^3``."""
    labels = ["1"] + [gen if k == 1 else f"{gen}^{k}" for k in range(1, n)]
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    return group_algebra(table, labels, name, field)


def dual_group_algebra(cayley, labels: Sequence[str] | None = None, name: str = "K^G",
                       field: Field = Q) -> HopfAlgebra:
    """Function algebra K^G: idempotents δ_g, Δ(δ_g) = Σ_{hk=g} δ_h⊗δ_k."""
    g = group_algebra(cayley, labels, name, field)
    n = len(cayley)
    e = g.space.one
    labels = tuple(f"d{l}" for l in g.space.labels)
    space = Space(name, labels, one=None)
    mult = LinMap.from_function([space], [space, space], lambda i: {(i[0],): 1} if i[0] == i[1] else {}, field)
    unit = LinMap(([space]), [], field.array([1] * n), field)
    comult = LinMap.from_function([space, space], [space], lambda i: {(h, k): 1 for h in range(n) for k in range(n)
                                                                      if cayley[h][k] == i[0]}, field)
    counit = LinMap.from_function([], [space], lambda i: {(): 1} if i[0] == e else {}, field)
    inv = [next(h for h in range(n) if cayley[k][h] == e) for k in range(n)]
    antipode = LinMap.from_function([space], [space], lambda i: {(inv[i[0]],): 1}, field)
    return HopfAlgebra(Bialgebra(Algebra(space, mult, unit), CoalgebraWithOne(space, comult, counit)), antipode)


def _field_bialgebra(field: Field, name: str = "K") -> HopfAlgebra:
    return group_algebra([[0]], ["1"], name, field)


def _trivial_left(A, H) -> LinMap:
    """h⊳a = ε(h)a."""
    return LinMap.from_function([A.space], [H.space, A.space], lambda i: {(i[1],): H.counit.data[i[0]]}, A.field)


def _trivial_right(B, H) -> LinMap:
    return LinMap.from_function([B.space], [B.space, H.space], lambda i: {(i[0],): H.counit.data[i[1]]}, B.field)


def _trivial_left_co(A, H) -> LinMap:
    """ρ(a) = 1_H⊗a."""
    return _c(_t(H.unit, identity(A.space, A.field)), identity(A.space, A.field))


def _trivial_right_co(B, H) -> LinMap:
    return _c(_t(identity(B.space, B.field), H.unit), identity(B.space, B.field))


trivial_left_action = _trivial_left
trivial_right_action = _trivial_right
trivial_left_coaction = _trivial_left_co
trivial_right_coaction = _trivial_right_co
field_hopf = _field_bialgebra

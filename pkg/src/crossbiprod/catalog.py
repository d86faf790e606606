"""Built-in instances: the KC2/KC4 example, degenerate controls and seeded random bundles.

Random bundles are drawn over F_p from a small library of commutative and
cocommutative Hopf algebras whose unit is basis element 0.  Normalisation
conditions are imposed column by column; actions and coactions that must be
(weak) module or comodule-coalgebra structures are drawn from pools found by
exhaustive search; whatever is left over is rejection-sampled.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

import numpy as np

from .field import GF, Field, PrimeField, Q
from .products import Bundle, BundleError
from .structures import (Algebra, Bialgebra, CoalgebraWithOne, HopfAlgebra, comodule_coalgebra_reports,
                         cyclic_group_algebra, dual_group_algebra, field_hopf, module_reports,
                         trivial_left_action, trivial_left_coaction, trivial_right_action, trivial_right_coaction,
                         weak_action_reports)
from .tensor import LinMap, Space


class InfeasibleSpec(ValueError):
    """No bundle satisfying the requested enforcement was found."""


# -- library --------------------------------------------------------------------------

GENERATORS = {"H": "g", "A": "u", "B": "v"}
LIBRARY = {1: ("K",), 2: ("KC2", "K^C2", "K[t]/t2"), 3: ("KC3", "K^C3"), 4: ("KC4", "K^C4")}


def library_names(dim: int, p: int) -> tuple[str, ...]:
    """Library algebras of a dimension that are Hopf over F_p (t² = 0 needs 2 = 0)."""
    return tuple(n for n in LIBRARY[dim] if p == 2 or n != "K[t]/t2")


def _hopf_from_arrays(role: str, labels, mult, unit, comult, counit, anti, f: Field) -> HopfAlgebra:
    sp = Space(role, labels, one=0)
    n = f.normalize
    alg = Algebra(sp, LinMap([sp], [sp, sp], n(mult), f), LinMap([sp], [], n(unit), f))
    co = CoalgebraWithOne(sp, LinMap([sp, sp], [sp], n(comult), f), LinMap([], [sp], n(counit), f), 0)
    return HopfAlgebra(Bialgebra(alg, co), LinMap([sp], [sp], n(anti), f))


def _dual_cyclic(n: int, role: str, f: Field) -> HopfAlgebra:
    """K^{C_n} in the basis 1, δ_g, δ_{g^2}, ... so that the unit is a basis element."""
    gen = GENERATORS.get(role, "g")
    table = [[(i + j) % n for j in range(n)] for i in range(n)]
    d = dual_group_algebra(table, None, role, Q)
    P = np.eye(n, dtype=np.int64)
    P[:, 0] = 1
    Pi = np.eye(n, dtype=np.int64)
    Pi[1:, 0] = -1
    m, u = d.mult.data.astype(np.int64), d.unit.data.astype(np.int64)
    c, e, s = d.comult.data.astype(np.int64), d.counit.data.astype(np.int64), d.antipode.data.astype(np.int64)
    mult = np.einsum("pa,abc,bi,cj->pij", Pi, m, P, P)
    comult = np.einsum("pa,qb,abc,ci->pqi", Pi, Pi, c, P)
    labels = ["1"] + [f"d{gen}" if k == 1 else f"d{gen}{k}" for k in range(1, n)]
    return _hopf_from_arrays(role, labels, mult, Pi @ u, comult, e @ P, Pi @ s @ P, f)


def _dual_numbers(role: str, f: Field) -> HopfAlgebra:
    """K[t]/t² with t primitive."""
    mult = np.zeros((2, 2, 2), dtype=np.int64)
    mult[0, 0, 0] = mult[1, 0, 1] = mult[1, 1, 0] = 1
    comult = np.zeros((2, 2, 2), dtype=np.int64)
    comult[0, 0, 0] = comult[1, 0, 1] = comult[0, 1, 1] = 1
    t = "t" if role == "H" else f"t{GENERATORS.get(role, '')}"
    return _hopf_from_arrays(role, ["1", t], mult, np.array([1, 0]), comult, np.array([1, 0]),
                             np.array([[1, 0], [0, -1]]), f)


def library(name: str, role: str, field: Field = Q) -> HopfAlgebra:
    gen = GENERATORS.get(role, "g")
    if name == "K":
        return field_hopf(field, role)
    if name.startswith("KC"):
        return cyclic_group_algebra(int(name[2:]), gen, role, field)
    if name.startswith("K^C"):
        return _dual_cyclic(int(name[3:]), role, field)
    if name == "K[t]/t2":
        if field.characteristic != 2:
            raise ValueError("K[t]/t² with t primitive is a bialgebra only in characteristic 2")
        return _dual_numbers(role, field)
    raise KeyError(f"unknown library algebra {name!r}")


# -- exhaustive pools ---------------------------------------------------------------------

def _matrices(d: int, p: int, fixed_col0=None, row_zero=None):
    """All d×d matrices over F_p with column 0 fixed and/or ``row_zero @ M == 0``."""
    free = [(i, j) for i in range(d) for j in range(d) if not (fixed_col0 is not None and j == 0)]
    out = []
    for vals in itertools.product(range(p), repeat=len(free)):
        M = np.zeros((d, d), dtype=np.int64)
        if fixed_col0 is not None:
            M[:, 0] = fixed_col0
        for (i, j), v in zip(free, vals):
            M[i, j] = v
        if row_zero is not None and np.any((row_zero @ M) % p):
            continue
        out.append(M)
    return out


POOL_LIMIT = 20_000


def _families(first, options, limit: int = POOL_LIMIT):
    """Operator families (k+1, d, d): slot 0 from ``first``, slot j+1 from ``options[j]``.

    Exhaustive when the product is small, otherwise a fixed pseudo-random sample.
    """
    arrs = [np.array(o, dtype=np.int64) for o in options]
    sizes = [len(a) for a in arrs]
    total = int(np.prod(sizes)) if sizes else 1
    if total <= limit:
        combos = itertools.product(*(range(n) for n in sizes))
    else:
        rng = random.Random(0)
        combos = (tuple(rng.randrange(n) for n in sizes) for _ in range(limit))
    for combo in combos:
        ms = np.stack([a[c] for a, c in zip(arrs, combo)]) if arrs else np.zeros((0,) + first(None).shape,
                                                                                 dtype=np.int64)
        yield np.concatenate([first(ms)[None], ms], axis=0)


def _chunks(it, size=4096):
    buf = []
    for x in it:
        buf.append(x)
        if len(buf) == size:
            yield np.array(buf)
            buf = []
    if buf:
        yield np.array(buf)


def _all_rows(a: np.ndarray) -> np.ndarray:
    return np.all(a.reshape(len(a), -1), axis=1)


@lru_cache(maxsize=None)
def _weak_pool(hname: str, aname: str, p: int, module: bool) -> tuple:
    """Left H-weak actions (optionally modules) on A, as arrays [h, p, a]."""
    f = GF(p)
    H, A = library(hname, "H", f), library(aname, "A", f)
    dH, dA = H.space.dim, A.space.dim
    m, u, d, e, mh = (x.data for x in (A.mult, A.unit, H.comult, H.counit, H.mult))
    eye = np.eye(dA, dtype=np.int64)
    if dH == 1:
        return (eye[None],)
    mats = _matrices(dA, p)
    options = [[M for M in mats if np.all((M[:, 0] - e[h] * u) % p == 0)] for h in range(1, dH)]
    out = []
    for T in _chunks(_families(lambda ms: eye, options)):   # [n, h, p, a]
        ok = _all_rows((np.einsum("nhpx,xab->nphab", T, m) -
                        np.einsum("pxy,nixa,njyb,ijh->nphab", m, T, T, d)) % p == 0)
        if module:
            ok &= _all_rows((np.einsum("nhpx,nkxa->nphka", T, T) -
                             np.einsum("nxpa,xhk->nphka", T, mh)) % p == 0)
        out.extend(T[ok])
    return tuple(out)


@lru_cache(maxsize=None)
def _coact_pool(hname: str, aname: str, p: int) -> tuple:
    """Left H-comodule-coalgebra structures on A, as arrays [h, p, a]."""
    f = GF(p)
    H, A = library(hname, "H", f), library(aname, "A", f)
    dH, dA = H.space.dim, A.space.dim
    d, e, mh, uh = (x.data for x in (H.comult, H.counit, H.mult, H.unit))
    dc, ec = A.comult.data, A.counit.data
    eye = np.eye(dA, dtype=np.int64)
    if dH == 1:
        return (eye[None],)
    mats = _matrices(dA, p, row_zero=ec[None, :])

    def first(ms):
        return (eye - np.einsum("k,kij->ij", e[1:], ms)) % p

    out = []
    for r in _chunks(_families(first, [mats] * (dH - 1))):   # [n, h, p, a]
        ok = _all_rows((np.einsum("ijx,nxca->nijca", d, r) - np.einsum("njcx,nixa->nijca", r, r)) % p == 0)
        ok &= _all_rows((np.einsum("nhxa,pqx->nhpqa", r, dc) -
                         np.einsum("hij,nipy,njqz,yza->nhpqa", mh, r, r, dc)) % p == 0)
        ok &= _all_rows((np.einsum("nhxa,x->nha", r, ec) - np.multiply.outer(uh, ec)) % p == 0)
        out.extend(r[ok])
    return tuple(out)


def weak_actions(H: HopfAlgebra, A: HopfAlgebra, side: str, module: bool = False) -> list[LinMap]:
    """Pool of weak actions (or module actions) for library algebras; every member is re-verified."""
    f = A.field
    hname, aname = _library_name(H), _library_name(A)
    out = []
    for T in _weak_pool(hname, aname, f.p, module):
        if side == "left":
            m = LinMap([A.space], [H.space, A.space], np.ascontiguousarray(np.transpose(T, (1, 0, 2))), f)
        else:
            m = LinMap([A.space], [A.space, H.space], np.ascontiguousarray(np.transpose(T, (1, 2, 0))), f)
        reps = weak_action_reports(side, H, A, m) + (module_reports(side, H, A, m) if module else [])
        if all(r.passed for r in reps):
            out.append(m)
    return out


def comodule_coalgebra_coactions(H: HopfAlgebra, A: HopfAlgebra, side: str) -> list[LinMap]:
    f = A.field
    out = []
    for r in _coact_pool(_library_name(H), _library_name(A), f.p):
        if side == "left":
            m = LinMap([H.space, A.space], [A.space], r, f)
        else:
            m = LinMap([A.space, H.space], [A.space], np.ascontiguousarray(np.transpose(r, (1, 0, 2))), f)
        if all(x.passed for x in comodule_coalgebra_reports(side, H, A, m)):
            out.append(m)
    return out


_NAMES: dict[int, str] = {}


def _library_name(s) -> str:
    name = _NAMES.get(id(s))
    if name is None:
        raise BundleError("pools are only available for library algebras")
    return name


def _lib(name: str, role: str, f: Field) -> HopfAlgebra:
    h = _lib_cached(name, role, f.p)
    _NAMES[id(h)] = name
    return h


@lru_cache(maxsize=None)
def _lib_cached(name: str, role: str, p: int) -> HopfAlgebra:
    return library(name, role, GF(p))


# -- random bundles ---------------------------------------------------------------------------

CONSTRUCTIVE = {"LB1", "LB3", "RB1", "RB3", "LTC3", "RTC2", "LU1", "RU1", "J1", "ax:eps_sigma", "ax:eps_tau",
                "ax:eps_1A", "ax:eps_1B", "ax:one_H", "st:weak_left", "st:weak_right", "st:module_left",
                "st:module_right", "st:comodcoalg_left", "st:comodcoalg_right"} | {
    f"st:{k}_{r}" for k in ("alg", "coalg", "bialg", "hopf") for r in "AHB"}


@dataclass(frozen=True)
class RandomSpec:
    dims: tuple[int, int, int] = (2, 2, 2)   # (A, H, B)
    p: int = 2
    seed: int = 0
    enforce: tuple[str, ...] = ()
    gate: str | None = None      # enforce this gate's prerequisites (after its lifts)
    noise: float | None = None   # chance that a free column leaves its trivial value
    max_tries: int = 400


class _Gen:
    def __init__(self, rng: random.Random, f: PrimeField, A, H, B, noise: float, enforce: set):
        self.rng, self.f, self.p = rng, f, f.p
        self.A, self.H, self.B = A, H, B
        self.noise, self.enforce = noise, enforce

    def vec(self, shape, trivial: np.ndarray) -> np.ndarray:
        r = self.rng.random()
        if r >= self.noise:
            return trivial.copy()
        out = np.zeros(shape, dtype=np.int64)
        if self.rng.random() < 0.5:
            out[tuple(self.rng.randrange(n) for n in shape)] = 1
        else:
            for idx in np.ndindex(*shape):
                out[idx] = self.rng.randrange(self.p)
        return out

    def map(self, cod, dom, trivial_fn, fixed_fn=lambda idx: False, adjust=None) -> LinMap:
        cshape = tuple(s.dim for s in cod)
        data = np.zeros(cshape + tuple(s.dim for s in dom), dtype=np.int64)
        for idx in np.ndindex(*(s.dim for s in dom)):
            triv = trivial_fn(idx)
            col = triv if fixed_fn(idx) else self.vec(cshape, triv)
            if adjust is not None:
                col = adjust(idx, col)
            data[(Ellipsis,) + idx] = col % self.p
        return LinMap(cod, dom, data, self.f)


def _e(s, i) -> np.ndarray:
    v = np.zeros(s.space.dim, dtype=np.int64)
    v[i] = 1
    return v


def _generate(spec: RandomSpec, attempt: int) -> Bundle:
    rng = random.Random(f"crossbiprod/{spec.seed}/{attempt}")
    f = GF(spec.p)
    enforce = set(spec.enforce)
    if spec.gate is not None:
        from .conditions import GATES
        enforce |= set(GATES[spec.gate].prerequisites)
    names = [rng.choice(library_names(d, spec.p)) for d in spec.dims]
    A, H, B = (_lib(n, r, f) for n, r in zip(names, "AHB"))
    noise = spec.noise if spec.noise is not None else rng.choice([0.0, 0.15, 0.35, 0.7])
    g = _Gen(rng, f, A, H, B, noise, enforce)
    As, Hs, Bs = A.space, H.space, B.space
    eH, eA, eB = H.counit.data, A.counit.data, B.counit.data
    mH = H.mult.data

    def outer(*vs):
        out = vs[0]
        for v in vs[1:]:
            out = np.multiply.outer(out, v)
        return out

    def eps_adjust(target_space, enabled):
        def fix(idx, col):
            if not enabled:
                return col
            col = col.copy()
            want = eH[idx[0]] * eH[idx[1]]
            have = int(target_space.counit.data @ col)
            col[0] += want - have
            return col
        return fix

    roles: dict[str, object] = {"A": A, "H": H, "B": B}
    lb1, lb3, rb1, rb3 = ("LB1" in enforce), ("LB3" in enforce), ("RB1" in enforce), ("RB3" in enforce)
    roles["R"] = g.map([As, Hs], [Hs, As], lambda i: outer(_e(A, i[1]), _e(H, i[0])),
                       lambda i: lb1 and (i[0] == 0 or i[1] == 0))
    roles["G"] = g.map([As, Hs], [Hs, Hs], lambda i: outer(_e(A, 0), mH[:, i[0], i[1]]),
                       lambda i: lb3 and (i[0] == 0 or i[1] == 0))
    roles["T"] = g.map([Hs, Bs], [Bs, Hs], lambda i: outer(_e(H, i[1]), _e(B, i[0])),
                       lambda i: rb1 and (i[0] == 0 or i[1] == 0))
    roles["F"] = g.map([Hs, Bs], [Hs, Hs], lambda i: outer(mH[:, i[0], i[1]], _e(B, 0)),
                       lambda i: rb3 and (i[0] == 0 or i[1] == 0))
    norm_s = bool(enforce & {"LTC3", "LU3"})
    norm_t = bool(enforce & {"RTC2", "RU3"})
    roles["sigma"] = g.map([As], [Hs, Hs], lambda i: eH[i[0]] * eH[i[1]] * _e(A, 0),
                           lambda i: norm_s and (i[0] == 0 or i[1] == 0),
                           eps_adjust(A, bool(enforce & {"ax:eps_sigma", "J1"})))
    roles["tau"] = g.map([Bs], [Hs, Hs], lambda i: eH[i[0]] * eH[i[1]] * _e(B, 0),
                         lambda i: norm_t and (i[0] == 0 or i[1] == 0),
                         eps_adjust(B, "ax:eps_tau" in enforce))
    lu1, ru1 = "LU1" in enforce, "RU1" in enforce
    roles["act_ha"] = g.map([Hs], [Hs, As], lambda i: eA[i[1]] * _e(H, i[0]),
                            lambda i: lu1 and (i[0] == 0 or i[1] == 0))
    roles["act_bh"] = g.map([Hs], [Bs, Hs], lambda i: eB[i[0]] * _e(H, i[1]),
                            lambda i: ru1 and (i[0] == 0 or i[1] == 0))
    roles["act_bb"] = g.map([Bs], [Bs, Hs], lambda i: eH[i[1]] * _e(B, i[0]),
                            lambda i: ru1 and (i[0] == 0 or i[1] == 0))

    def pick(pool, trivial):
        if not pool or rng.random() >= max(noise, 0.5 if noise else 0.0):
            return trivial
        return rng.choice(pool)

    for side, S, co_role, act_role in (("left", A, "coact_left", "act_left"), ("right", B, "coact_right", "act_right")):
        triv_act = trivial_left_action(S, H) if side == "left" else trivial_right_action(S, H)
        triv_co = trivial_left_coaction(S, H) if side == "left" else trivial_right_coaction(S, H)
        if f"st:module_{side}" in enforce:
            roles[act_role] = pick(weak_actions(H, S, side, module=True), triv_act)
        elif f"st:weak_{side}" in enforce:
            roles[act_role] = pick(weak_actions(H, S, side), triv_act)
        elif side == "left":
            roles[act_role] = g.map([As], [Hs, As], lambda i: eH[i[0]] * _e(A, i[1]),
                                    lambda i: i[0] == 0 or i[1] == 0)
        else:
            roles[act_role] = g.map([Bs], [Bs, Hs], lambda i: eH[i[1]] * _e(B, i[0]),
                                    lambda i: i[0] == 0 or i[1] == 0)
        if f"st:comodcoalg_{side}" in enforce:
            roles[co_role] = pick(comodule_coalgebra_coactions(H, S, side), triv_co)
        elif side == "left":
            roles[co_role] = g.map([Hs, As], [As], lambda i: outer(_e(H, 0), _e(A, i[0])))
        else:
            roles[co_role] = g.map([Bs, Hs], [Bs], lambda i: outer(_e(B, i[0]), _e(H, 0)))
    return Bundle(roles)


def random_bundle(spec: RandomSpec) -> Bundle:
    """Deterministic in ``spec``; enforced prerequisites are verified before returning."""
    from .conditions import GATES, hypothesis, load_registry, prepare

    if spec.p not in (2, 3):
        raise InfeasibleSpec("random bundles are drawn over F_2 or F_3")
    if len(spec.dims) != 3 or any(not 1 <= d <= 4 for d in spec.dims):
        raise InfeasibleSpec("factor dimensions must lie in 1..4")
    reg = load_registry()
    for e in spec.enforce:
        if not (e.startswith("st:") or e in reg):
            raise InfeasibleSpec(f"cannot enforce unknown condition {e!r}")
    if spec.gate is not None and spec.gate not in GATES:
        raise InfeasibleSpec(f"unknown gate {spec.gate!r}")
    for attempt in range(spec.max_tries):
        b = _generate(spec, attempt)
        try:
            if not all(hypothesis(e, b).passed for e in spec.enforce):
                continue
            if spec.gate is not None:
                pb = prepare(spec.gate, b)
                if not all(hypothesis(e, pb).passed for e in GATES[spec.gate].prerequisites):
                    continue
        except BundleError:
            continue
        return b
    raise InfeasibleSpec(f"no bundle satisfying {sorted(spec.enforce) or spec.gate} in {spec.max_tries} tries")


def random_dims(rng: random.Random, small: bool = False) -> tuple[int, int, int]:
    if small:
        return tuple(rng.choice((1, 2, 2, 2)) for _ in range(3))
    return tuple(rng.choice((1, 2, 2, 2, 3)) for _ in range(3))


# -- mutations ---------------------------------------------------------------------------------

MUTABLE = ("G", "R", "T", "F", "sigma", "tau", "act_left", "act_right", "act_ha", "act_bh", "act_bb",
           "coact_left", "coact_right")


def mutate(bundle: Bundle, role: str, index, value) -> Bundle:
    """Change one entry of one role map (index is the full multi-index, value a scalar)."""
    m = bundle[role]
    data = m.data.copy()
    data[tuple(index)] = value
    return bundle.replace(**{role: LinMap(m.codomain, m.domain, m.field.normalize(data), m.field)})


def single_entry_mutations(bundle: Bundle, roles=MUTABLE, rng: random.Random | None = None, limit=None):
    """Yield (role, index, new value, mutated bundle), in a seeded shuffled order."""
    cands = []
    for role in roles:
        if role not in bundle:
            continue
        m = bundle[role]
        values = range(m.field.p) if m.field.characteristic else (0, 1, -1, 2)
        for idx in np.ndindex(*m.data.shape):
            for v in values:
                if v != m.data[idx]:
                    cands.append((role, idx, v))
    if rng is not None:
        rng.shuffle(cands)
    for k, (role, idx, v) in enumerate(cands):
        if limit is not None and k >= limit:
            return
        yield role, idx, v, mutate(bundle, role, idx, v)


# -- catalog entries ----------------------------------------------------------------------------

@dataclass(frozen=True)
class Expectation:
    target: str            # condition id or gate id
    aspect: str            # check | gate | prereqs | main | oracle
    verdict: bool
    witness: str | None = None   # expected witness input
    lhs: str | None = None       # expected witness lhs value


@dataclass
class CatalogEntry:
    name: str
    bundle: Bundle
    expected: list[Expectation] = dc_field(default_factory=list)
    description: str = ""

    def run(self) -> list[tuple[Expectation, bool, str]]:
        """(expectation, reproduced?, what was observed) for each expectation."""
        from .conditions import check, gate

        out = []
        for ex in self.expected:
            if ex.aspect == "check":
                r = check(ex.target, self.bundle, lift=True)
                verdict, w = r.passed, r.witness
            else:
                g = gate(ex.target, self.bundle)
                verdict = {"gate": g.passed, "prereqs": g.prereqs_ok, "main": g.main_ok,
                           "oracle": g.oracle_ok}[ex.aspect]
                pool = {"main": g.main, "oracle": g.oracle, "prereqs": g.prerequisites}.get(ex.aspect,
                                                                                           g.main + g.oracle)
                w = next((r.witness for r in pool if not r.passed), None)
            ok = verdict == ex.verdict
            if ok and ex.witness is not None:
                ok = w is not None and w.input == ex.witness
            if ok and ex.lhs is not None:
                ok = w is not None and w.lhs == ex.lhs
            seen = ("pass" if verdict else "fail") + (f" at {w.input}: {w.lhs} vs {w.rhs}" if w else "")
            out.append((ex, ok, seen))
        return out


def _kc_bundle(power: int, field: Field = Q) -> Bundle:
    H = cyclic_group_algebra(2, "a", "H", field)
    A = cyclic_group_algebra(4, "x", "A", field)
    B = cyclic_group_algebra(4, "x", "B", field)
    inv = {0: 0, 1: 3, 2: 2, 3: 1}
    act = LinMap.from_function([A.space], [H.space, A.space], lambda i: {(inv[i[1]] if i[0] else i[1],): 1}, field)
    ract = LinMap.from_function([B.space], [B.space, H.space], lambda i: {(inv[i[0]] if i[1] else i[0],): 1}, field)
    sig = LinMap.from_function([A.space], [H.space, H.space], lambda i: {(power if i == (1, 1) else 0,): 1}, field)
    tau = LinMap.from_function([B.space], [H.space, H.space], lambda i: {(power if i == (1, 1) else 0,): 1}, field)
    return Bundle({"A": A, "H": H, "B": B, "sigma": sig, "tau": tau, "act_left": act, "act_right": ract,
                   "coact_left": trivial_left_coaction(A, H), "coact_right": trivial_right_coaction(B, H)})


def example_kc2_kc4(field: Field = Q) -> CatalogEntry:
    """H = KC2, A = B = KC4, ⊳ and ⊲ invert, σ(a,a) = τ(a,a) = x, coactions trivial."""
    ex = [
        Expectation("I1", "check", False, "a", "x⊗1⊗x"),
        Expectation("D21", "check", True),
        Expectation("thm2.3", "oracle", False, "(1⊗a⊗1)⊗(1⊗a⊗1)⊗(1⊗a⊗1)", "x⊗a⊗x^3"),
        Expectation("thm2.3", "main", False, "a⊗a⊗a", "x⊗a⊗x^3"),
        Expectation("thm_D", "main", True),
        Expectation("thm_D", "oracle", True),
        Expectation("thm_D", "prereqs", False),
        Expectation("cor_P", "main", True),
        Expectation("cor_P", "oracle", True),
        Expectation("prop_antipode", "main", False, "a", "x⊗1⊗x"),
        Expectation("prop_antipode", "oracle", False),
    ]
    return CatalogEntry("kc2_kc4", _kc_bundle(1, field), ex,
                        "H=KC2, A=B=KC4, inversion actions, sigma(a,a)=tau(a,a)=x, trivial coactions")


def example_kc2_kc4_x2(field: Field = Q) -> CatalogEntry:
    """The same data with σ(a,a) = τ(a,a) = x²; this product is associative."""
    ex = [
        Expectation("thm2.3", "gate", True),
        Expectation("thm_D", "gate", True),
        Expectation("cor_P", "gate", True),
        Expectation("I1", "check", False, "a", "x^2⊗1⊗x^2"),
        Expectation("prop_antipode", "oracle", False),
    ]
    return CatalogEntry("kc2_kc4_x2", _kc_bundle(2, field), ex,
                        "variant of kc2_kc4 with sigma(a,a)=tau(a,a)=x^2")


ALL_GATES_PASS = ("prop1.1", "prop2.1", "thm2.3", "ex2.5.1", "ex2.5.2", "ex2.5.3", "ex2.5.4",
                  "thm_bialg_2sec", "cor_J", "cor_P", "prop_antipode", "lem_C", "thm_D", "prop_E", "cor_F",
                  "cor_left", "cor_right", "ex1.2", "ex1.3", "ex1.4", "ex1.5", "ex1.6", "ex2.2.1", "ex2.2.2",
                  "ex2.2.3", "ex2.2.4", "ex2.2.5")


def trivial_bundle(A: HopfAlgebra, H: HopfAlgebra, B: HopfAlgebra) -> Bundle:
    """Every twist, cocycle, action and coaction trivial; every map R, G, T, F the flip or product."""
    f = A.field
    As, Hs, Bs = A.space, H.space, B.space
    eH, eA, eB = H.counit.data, A.counit.data, B.counit.data
    mH = H.mult.data

    def fn(cod, dom, g):
        return LinMap.from_function(cod, dom, g, f)

    def pairs(vec, lead=None, tail=None):
        out = {}
        for k in np.nonzero(vec)[0]:
            key = ((lead,) if lead is not None else ()) + (int(k),) + ((tail,) if tail is not None else ())
            out[key] = vec[k]
        return out

    roles = {
        "A": A, "H": H, "B": B,
        "R": fn([As, Hs], [Hs, As], lambda i: {(i[1], i[0]): 1}),
        "G": fn([As, Hs], [Hs, Hs], lambda i: pairs(mH[:, i[0], i[1]], lead=As.one)),
        "T": fn([Hs, Bs], [Bs, Hs], lambda i: {(i[1], i[0]): 1}),
        "F": fn([Hs, Bs], [Hs, Hs], lambda i: pairs(mH[:, i[0], i[1]], tail=Bs.one)),
        "sigma": fn([As], [Hs, Hs], lambda i: {(As.one,): eH[i[0]] * eH[i[1]]}),
        "tau": fn([Bs], [Hs, Hs], lambda i: {(Bs.one,): eH[i[0]] * eH[i[1]]}),
        "act_left": trivial_left_action(A, H), "act_right": trivial_right_action(B, H),
        "act_ha": fn([Hs], [Hs, As], lambda i: {(i[0],): eA[i[1]]}),
        "act_bh": fn([Hs], [Bs, Hs], lambda i: {(i[1],): eB[i[0]]}),
        "act_bb": fn([Bs], [Bs, Hs], lambda i: {(i[0],): eH[i[1]]}),
        "coact_left": trivial_left_coaction(A, H), "coact_right": trivial_right_coaction(B, H),
    }
    return Bundle(roles)


def trivial_family(dims=((1, 1, 1), (2, 2, 2), (2, 2, 1), (1, 2, 2)), field: Field = Q) -> list[CatalogEntry]:
    """Group algebras of the given (A, H, B) dimensions with everything trivial."""
    out = []
    for d in dims:
        A, H, B = (field_hopf(field, r) if n == 1 else cyclic_group_algebra(n, GENERATORS[r], r, field)
                   for n, r in zip(d, "AHB"))
        ex = [Expectation(gid, "gate", True) for gid in ALL_GATES_PASS]
        out.append(CatalogEntry(f"trivial_{d[0]}{d[1]}{d[2]}", trivial_bundle(A, H, B), ex,
                                f"trivial data on group algebras of dimensions {d}"))
    return out


def _majid(mutated: bool, field: Field = Q) -> Bundle:
    """Smash data: A = K^{C2} with trivial action, B = KC3 inverted by H = KC2."""
    H = cyclic_group_algebra(2, "g", "H", field)
    A = library("K^C2", "A", field)
    B = cyclic_group_algebra(3, "v", "B", field)
    b = trivial_bundle(A, H, B)
    ract = LinMap.from_function([B.space], [B.space, H.space], lambda i: {((-i[0]) % 3 if i[1] else i[0],): 1}, field)
    b = b.replace(act_right=ract)
    if mutated:
        # grade A by C2: δ_g ↦ g⊗δ_g, 1 = δ_1 + δ_g ↦ 1⊗δ_1 + g⊗δ_g
        co = field.zeros((2, 2, 2))
        co[0, 0, 0] = 1          # 1 ↦ 1⊗1 - 1⊗δ_g + g⊗δ_g
        co[0, 1, 0] = -1
        co[1, 1, 0] = 1
        co[1, 1, 1] = 1          # δ_g ↦ g⊗δ_g
        b = b.replace(coact_left=LinMap([H.space, A.space], [A.space], field.normalize(co), field))
    return b


def majid_double_biproduct(field: Field = Q) -> CatalogEntry:
    ex = [Expectation("D21", "check", True), Expectation("thm_D", "gate", True),
          Expectation("DB", "check", True)]
    return CatalogEntry("majid", _majid(False, field), ex,
                        "double biproduct: trivial cocycles, trivial coactions, B=KC3 inverted by KC2")


def majid_mutated(field: Field = Q) -> CatalogEntry:
    ex = [Expectation("D21", "check", False), Expectation("thm_D", "prereqs", True),
          Expectation("thm_D", "oracle", False)]
    return CatalogEntry("majid_graded", _majid(True, field), ex,
                        "the double biproduct with A graded by C2, so that (D21) fails")


def entries(field: Field = Q) -> list[CatalogEntry]:
    return [example_kc2_kc4(field), example_kc2_kc4_x2(field), majid_double_biproduct(field),
            majid_mutated(field)] + trivial_family(field=field)


def entry(name: str, field: Field = Q) -> CatalogEntry:
    for e in entries(field):
        if e.name == name:
            return e
    raise KeyError(f"no catalog entry named {name!r}")

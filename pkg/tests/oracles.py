"""Independent reference implementations used to freeze derived values.

Everything here loops over basis indices with plain Python arithmetic on the
raw structure constants; nothing goes through the equation compiler.
"""
from __future__ import annotations

import itertools
from collections import defaultdict

import numpy as np


def nz(arr):
    """{index tuple: coefficient} for the nonzero entries of an array."""
    return {tuple(int(i) for i in idx): arr[idx] for idx in zip(*np.nonzero(arr != 0))}


def col(m, *idx):
    """Nonzero entries of the column of a LinMap at domain index ``idx``."""
    k = len(m.codomain)
    return nz(np.asarray(m.data)[(slice(None),) * k + tuple(idx)])


def alg_prod(s, u: dict, v: dict) -> dict:
    """u·v for vectors {(i,): c} in algebra ``s``."""
    out = defaultdict(int)
    for (i,), c in u.items():
        for (j,), d in v.items():
            for (k,), e in col(s.mult, i, j).items():
                out[(k,)] += c * d * e
    return dict(out)


def e(i):
    return {(i,): 1}


def _reduce(out: dict, p: int | None):
    clean = {}
    for k, v in out.items():
        if p is not None:
            v = v % p
        if v != 0:
            clean[k] = v
    return clean


def two_sided_product(b, i: tuple, j: tuple, p=None) -> dict:
    """(a⊗x⊗b)(a'⊗x'⊗b') from R, T, G, τ, Δ_H by nested loops."""
    A, H, B = b["A"], b["H"], b["B"]
    a, x, bb = i
    a2, x2, b2 = j
    out = defaultdict(int)
    for (ar, xr), c1 in col(b["R"], x, a2).items():               # R(x⊗a') = a'_R⊗x_R
        for (xt, bt), c2 in col(b["T"], bb, x2).items():          # T(b⊗x') = x'_T⊗b_T
            for (r1, r2), c3 in col(H.comult, xr).items():
                for (t1, t2), c4 in col(H.comult, xt).items():
                    for (ga, gh), c5 in col(b["G"], r1, t1).items():
                        left = alg_prod(A, alg_prod(A, e(a), e(ar)), e(ga))
                        for (tb,), c6 in col(b["tau"], r2, t2).items():
                            right = alg_prod(B, alg_prod(B, e(tb), e(bt)), e(b2))
                            for (pa,), ca in left.items():
                                for (pb,), cb in right.items():
                                    out[(pa, gh, pb)] += c1 * c2 * c3 * c4 * c5 * c6 * ca * cb
    return _reduce(out, p)


def left_product(b, i, j, p=None) -> dict:
    """(a⊗x)(a'⊗x') = a a'_R x_R^G ⊗ x'_G."""
    A = b["A"]
    a, x = i
    a2, x2 = j
    out = defaultdict(int)
    for (ar, xr), c1 in col(b["R"], x, a2).items():
        for (ga, gh), c2 in col(b["G"], xr, x2).items():
            for (pa,), ca in alg_prod(A, alg_prod(A, e(a), e(ar)), e(ga)).items():
                out[(pa, gh)] += c1 * c2 * ca
    return _reduce(out, p)


def right_product(b, i, j, p=None) -> dict:
    """(x⊗b)(x'⊗b') = x_F ⊗ x'_T^F b_T b'."""
    B = b["B"]
    x, bb = i
    x2, b2 = j
    out = defaultdict(int)
    for (xt, bt), c1 in col(b["T"], bb, x2).items():
        for (fh, fb), c2 in col(b["F"], x, xt).items():
            for (pb,), cb in alg_prod(B, alg_prod(B, e(fb), e(bt)), e(b2)).items():
                out[(fh, pb)] += c1 * c2 * cb
    return _reduce(out, p)


def smash_coproduct(b, i, p=None) -> dict:
    """Δ(a⊗x⊗b) = (a_1 ⊗ a_{2(-1)} x_1 ⊗ b_{1[0]}) ⊗ (a_{2(0)} ⊗ x_2 b_{1[1]} ⊗ b_2)."""
    A, H, B = b["A"], b["H"], b["B"]
    a, x, bb = i
    out = defaultdict(int)
    for (a1, a2), c1 in col(A.comult, a).items():
        for (hm, a20), c2 in col(b["coact_left"], a2).items():
            for (x1, x2), c3 in col(H.comult, x).items():
                for (b1, bb2), c4 in col(B.comult, bb).items():
                    for (b10, hp), c5 in col(b["coact_right"], b1).items():
                        for (h1,), d1 in alg_prod(H, e(hm), e(x1)).items():
                            for (h2,), d2 in alg_prod(H, e(x2), e(hp)).items():
                                out[(a1, h1, b10, a20, h2, bb2)] += c1 * c2 * c3 * c4 * c5 * d1 * d2
    return _reduce(out, p)


def carrier_index(idx, dims):
    return int(np.ravel_multi_index(idx, dims))


def associator_failures(prod, dims, p=None, limit=1):
    """Basis triples where (uv)w != u(vw), using the pointwise product ``prod``."""
    inputs = list(itertools.product(*(range(d) for d in dims)))

    def mul(u: dict, v: dict) -> dict:
        out = defaultdict(int)
        for i, c in u.items():
            for j, d in v.items():
                for k, f in prod(i, j).items():
                    out[k] += c * d * f
        return _reduce(out, p)

    bad = []
    for i, j, k in itertools.product(inputs, repeat=3):
        if mul(mul({i: 1}, {j: 1}), {k: 1}) != mul({i: 1}, mul({j: 1}, {k: 1})):
            bad.append((i, j, k))
            if len(bad) >= limit:
                break
    return bad


def built_mismatches(built, fn, p=None) -> list:
    """Inputs where a built (co)multiplication differs from the pointwise reference ``fn``."""
    dims = tuple(f.dim for f in built.factors)
    s = built.structure
    is_mult = hasattr(s, "mult")
    D = np.asarray((s.mult if is_mult else s.comult).data)
    inputs = list(itertools.product(*(range(d) for d in dims)))
    bad = []
    for args in itertools.product(inputs, repeat=2 if is_mult else 1):
        ref = fn(*args, p=p)
        if is_mult:
            column = D[:, carrier_index(args[0], dims), carrier_index(args[1], dims)]
            got = {tuple(int(t) for t in np.unravel_index(k, dims)): column[k] for k in np.nonzero(column)[0]}
        else:
            column = D[:, :, carrier_index(args[0], dims)]
            got = {tuple(int(t) for t in np.unravel_index(k, dims)) + tuple(int(t) for t in np.unravel_index(l, dims)):
                   column[k, l] for k, l in zip(*np.nonzero(column))}
        if got != ref:
            bad.append(args)
    return bad

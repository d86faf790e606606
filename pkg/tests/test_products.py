import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from crossbiprod.catalog import RandomSpec, entry, random_bundle, random_dims, trivial_bundle
from crossbiprod.conditions import prepare
from crossbiprod.field import GF, Q
from crossbiprod.products import (LEFT_KINDS, RIGHT_KINDS, TWO_SIDED_KINDS, BundleError, ConditionFailure,
                                  combine, direct_product, left_brzezinski, lift_left, lift_right,
                                  right_brzezinski, sbar_reports, smash_coproduct2, smash_product2,
                                  tensor_coalgebra3, two_sided_crossed, two_sided_specialize)
from crossbiprod.structures import cyclic_group_algebra
from oracles import (built_mismatches, left_product, right_product, smash_coproduct, two_sided_product)

import random


def _rb(seed, dims=(2, 2, 2)):
    return random_bundle(RandomSpec(dims=dims, p=2, seed=seed))


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_products_match_pointwise_oracle(seed):
    rng = random.Random(seed)
    b = prepare("thm2.3", _rb(seed, random_dims(rng, small=True)))
    assert not built_mismatches(two_sided_crossed(b), lambda i, j, p: two_sided_product(b, i, j, p), 2)
    assert not built_mismatches(left_brzezinski(b), lambda i, j, p: left_product(b, i, j, p), 2)
    assert not built_mismatches(right_brzezinski(b), lambda i, j, p: right_product(b, i, j, p), 2)
    assert not built_mismatches(smash_coproduct2(b), lambda i, p: smash_coproduct(b, i, p), 2)


def test_trivial_data_give_tensor_products():
    A = cyclic_group_algebra(2, "u", "A", Q)
    H = cyclic_group_algebra(3, "g", "H", Q)
    B = cyclic_group_algebra(2, "v", "B", Q)
    b = trivial_bundle(A, H, B)
    m = two_sided_crossed(b).structure.mult.data
    ref = np.einsum("pij,qkl,rmn->pqrikmjln", A.mult.data, H.mult.data, B.mult.data).reshape(12, 12, 12)
    assert np.array_equal(m.astype(int), ref.astype(int))
    c = smash_coproduct2(b).structure.comult.data
    refc = np.einsum("pqi,rsj,tuk->prtqsuijk", A.comult.data, H.comult.data, B.comult.data).reshape(12, 12, 12)
    assert np.array_equal(c.astype(int), refc.astype(int))
    assert np.array_equal(tensor_coalgebra3(b).structure.comult.data.astype(int), refc.astype(int))


def test_smash_product_value_on_kc2_kc4():
    """(1⊗a⊗1)(x⊗1⊗x) = (a⊳x)⊗a⊗x = x³⊗a⊗x; frozen from the pointwise group-like formula."""
    b = entry("kc2_kc4").bundle
    built = smash_product2(b)
    A, H, B = (b[r].space for r in "AHB")
    i = built.index("1", "a", "1")
    j = built.index("x", "1", "x")
    col = built.structure.mult.data[:, i, j]
    assert list(np.nonzero(col)[0]) == [built.index("x^3", "a", "x")]
    # independent: crossed lift, then the nested-loop product
    lifted = prepare("thm2.3", b)
    ref = two_sided_product(lifted, (0, 1, 0), (A.index("x"), 0, B.index("x")))
    assert ref == {(A.index("x^3"), 1, B.index("x")): 1}


def test_kc2_kc4_square_of_a():
    """(1⊗a⊗1)² = x⊗1⊗x: σ(a,a) = x on the left and τ(a,a) = x on the right."""
    lifted = prepare("thm2.3", entry("kc2_kc4").bundle)
    assert two_sided_product(lifted, (0, 1, 0), (0, 1, 0)) == {(1, 0, 1): 1}
    built = two_sided_crossed(lifted)
    i = built.index("1", "a", "1")
    assert list(np.nonzero(built.structure.mult.data[:, i, i])[0]) == [built.index("x", "1", "x")]


@pytest.mark.parametrize("kind", sorted(LEFT_KINDS))
def test_left_specialisations_cohere(kind):
    for seed in range(20):
        b = _rb(seed, random_dims(random.Random(seed), small=True))
        general = left_brzezinski(lift_left(kind, b)).structure.mult
        assert general == direct_product("left", kind, b).structure.mult, seed


@pytest.mark.parametrize("kind", sorted(RIGHT_KINDS))
def test_right_specialisations_cohere(kind):
    for seed in range(20):
        b = _rb(seed, random_dims(random.Random(seed), small=True))
        general = right_brzezinski(lift_right(kind, b)).structure.mult
        assert general == direct_product("right", kind, b).structure.mult, seed


@pytest.mark.parametrize("kind", sorted(TWO_SIDED_KINDS))
def test_two_sided_specialisations_cohere(kind):
    for seed in range(20):
        b = _rb(seed, random_dims(random.Random(seed), small=True))
        general = two_sided_crossed(two_sided_specialize(kind, b)).structure.mult
        assert general == direct_product("two", kind, b).structure.mult, seed


def test_smash_product_is_crossed_with_trivial_cocycles():
    for seed in range(20):
        b = _rb(seed)
        triv = trivial_bundle(b["A"], b["H"], b["B"])
        b = b.replace(sigma=triv["sigma"], tau=triv["tau"])
        assert smash_product2(b).structure.mult == two_sided_crossed(two_sided_specialize("crossed", b)).structure.mult


def test_strict_builder_refuses_and_lenient_builds():
    b = prepare("thm2.3", entry("kc2_kc4").bundle)
    bad_r = b["R"].data.copy()
    bad_r[:, :, 0, 0] = 0                  # R(1⊗1) = 0 breaks LB1
    from crossbiprod.tensor import LinMap
    broken = b.replace(R=LinMap(b["R"].codomain, b["R"].domain, bad_r, b.field))
    with pytest.raises(ConditionFailure) as exc:
        two_sided_crossed(broken, strict=True)
    assert exc.value.report.id == "LB1"
    assert two_sided_crossed(broken).carrier.dim == 32


def test_missing_role_is_named():
    b = entry("kc2_kc4").bundle.replace(tau=None)
    with pytest.raises(BundleError, match="tau"):
        two_sided_crossed(prepare("thm2.3", entry("kc2_kc4").bundle).replace(tau=None))
    with pytest.raises(BundleError):
        smash_product2(b.replace(act_left=None))


def test_sbar_is_antipode_on_group_data():
    A = cyclic_group_algebra(3, "u", "A", GF(3))
    H = cyclic_group_algebra(2, "g", "H", GF(3))
    B = cyclic_group_algebra(2, "v", "B", GF(3))
    b = trivial_bundle(A, H, B)
    built = combine("t", two_sided_crossed(b), tensor_coalgebra3(b))
    assert all(r.passed for r in sbar_reports(built, b))


def test_combine_rejects_mismatched_carriers():
    b = entry("trivial_222").bundle
    with pytest.raises(BundleError):
        combine("x", left_brzezinski(b), tensor_coalgebra3(b))

import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from crossbiprod.contract import ContractionPlan, PlanError, contract_arrays
from crossbiprod.field import GF, FieldError, FpElement, Q, parse_field
from crossbiprod.tensor import (LinMap, ParseError, SignatureError, Space, compose, format_tensor, identity,
                                maps_equal, parse_tensor, permute_legs, product_space, swap, tensor_of)

PRIMES = [2, 3, 5, 7, 257]


def test_parse_field():
    assert parse_field("q") is Q or parse_field("q") == Q
    assert parse_field("fp:5") == GF(5)
    with pytest.raises(FieldError):
        parse_field("fp:4")
    with pytest.raises(FieldError):
        parse_field("reals")
    with pytest.raises(FieldError):
        GF(263)


@given(st.sampled_from(PRIMES), st.integers(), st.integers(), st.integers())
def test_fp_ring_axioms(p, a, b, c):
    x, y, z = (FpElement(v, p) for v in (a, b, c))
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert x - x == 0
    if x != 0:
        assert x * x.inverse() == 1


@given(st.sampled_from(PRIMES), st.fractions(max_denominator=50))
def test_fp_scalar_of_fraction(p, q):
    F = GF(p)
    if q.denominator % p == 0:
        with pytest.raises(ZeroDivisionError):
            F.scalar(q)
    else:
        v = F.scalar(q)
        assert v * q.denominator == q.numerator


@given(st.fractions())
def test_q_format_parse_roundtrip(q):
    assert Q.parse(Q.format(q)) == q


def test_fp_mixing_rejected():
    with pytest.raises(FieldError):
        FpElement(1, 3) + FpElement(1, 5)


def test_q_contract_large_values_stay_exact():
    big = Q.array([[10**18, 1], [1, 10**18]])
    out = Q.contract("ij,jk->ik", big, big)
    assert out[0, 0] == 10**36 + 1
    half = Q.array([Fraction(1, 2), Fraction(1, 3)])
    assert Q.contract("i,i->", half, half)[()] == Fraction(13, 36)


V = Space("V", ["1", "v", "w"], one=0)
W = Space("W", ["p", "q"])


def rand_map(rng, cod, dom, field):
    shape = tuple(s.dim for s in cod) + tuple(s.dim for s in dom)
    if field.characteristic:
        data = np.array([rng.randrange(field.p) for _ in range(int(np.prod(shape)))]).reshape(shape)
    else:
        data = field.array(np.array([Fraction(rng.randint(-3, 3), rng.randint(1, 3))
                                     for _ in range(int(np.prod(shape)))], dtype=object).reshape(shape))
    return LinMap(cod, dom, data, field)


def test_space_validation():
    with pytest.raises(ValueError):
        Space("X", [])
    with pytest.raises(ValueError):
        Space("X", ["a", "a"])
    with pytest.raises(ValueError):
        Space("X", ["a"], one=2)
    assert V.index("v") == 1
    with pytest.raises(KeyError):
        V.index("z")


def test_product_space_labels_and_one():
    P = product_space("VW", [V, W])
    assert P.dim == 6 and P.labels[0] == "1|p" and P.one is None
    P2 = product_space("VV", [V, V])
    assert P2.one == 0


def test_signature_mismatch():
    with pytest.raises(SignatureError):
        LinMap([V], [W], np.zeros(7, dtype=np.int64), GF(2))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.sampled_from([Q, GF(2), GF(3)]))
def test_format_parse_roundtrip(seed, field):
    rng = random.Random(seed)
    m = rand_map(rng, [V, W], [W], field)
    name, back = parse_tensor(format_tensor("m", m), {"V": V, "W": W}, field)
    assert name == "m" and back == m


def test_parse_tensor_errors():
    with pytest.raises(ParseError):
        parse_tensor("tensor m : V -> Z { }", {"V": V}, Q, line=4)
    with pytest.raises(ParseError) as exc:
        parse_tensor("tensor m : V -> V { 0,5 = 1; }", {"V": V}, Q, line=4)
    assert exc.value.line == 4
    with pytest.raises(ParseError):
        parse_tensor("tnsr m : V -> V { }", {"V": V}, Q)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_compose_matches_matrix_product(seed):
    rng = random.Random(seed)
    F = GF(5)
    f = rand_map(rng, [V], [W], F)
    g = rand_map(rng, [W], [V], F)
    fg = compose(f, g)
    assert np.array_equal(fg.data, (f.data @ g.data) % 5)
    assert compose(identity(V, F), f) == f


def test_swap_and_permute():
    F = GF(3)
    s = swap(V, W, F)
    assert s.codomain == (W, V) and s.domain == (V, W)
    m = rand_map(random.Random(1), [V, W], [W], F)
    back = permute_legs(permute_legs(m, cod_perm=(1, 0)), cod_perm=(1, 0))
    assert back == m
    t = tensor_of(identity(V, F), identity(W, F))
    assert t.codomain == (V, W)


def test_maps_equal_reports_first_difference():
    F = GF(2)
    a = LinMap([V], [V], np.eye(3, dtype=np.int64), F)
    data = np.eye(3, dtype=np.int64)
    data[2, 1] = 1
    b = LinMap([V], [V], data, F)
    v = maps_equal(a, b)
    assert not v and v.index == (2, 1)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_contraction_order_independent(seed):
    """A chain of random matrices contracts to the same result in any pairing order."""
    rng = random.Random(seed)
    F = GF(7)
    dims = [rng.randint(1, 3) for _ in range(5)]
    mats = [np.array([[rng.randrange(7) for _ in range(dims[i + 1])] for _ in range(dims[i])])
            for i in range(4)]
    plan = ContractionPlan([(0, 1), (1, 2), (2, 3), (3, 4)], (0, 4))
    ref = mats[0]
    for m in mats[1:]:
        ref = (ref @ m) % 7
    for k in range(3):
        got = contract_arrays(plan, mats, F, random.Random(seed + k))
        assert np.array_equal(got, ref)
    assert np.array_equal(contract_arrays(plan, mats, F), ref)


def test_plan_errors():
    with pytest.raises(PlanError):
        ContractionPlan([(0, 1), (1,)], (0, 2))
    with pytest.raises(PlanError):
        ContractionPlan([(0, 1), (1, 0), (0,)], ())
    with pytest.raises(PlanError):
        ContractionPlan([(0, 1), (1, 0)], (), (("out", "in"), ("out", "in")))
    plan = ContractionPlan([(0, 1), (1, 2)], (0, 2))
    with pytest.raises(PlanError):
        contract_arrays(plan, [np.zeros((2, 2)), np.zeros((3, 2))], GF(2))

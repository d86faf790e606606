import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from crossbiprod.catalog import entry, library, trivial_bundle
from crossbiprod.conditions import load_registry
from crossbiprod.field import GF, Q
from crossbiprod.products import Bundle
from crossbiprod.structures import cyclic_group_algebra
from crossbiprod.sweedler.ast import unparse
from crossbiprod.sweedler.diagram import UnboundRoleError, compile_equation, formula, var_type
from crossbiprod.sweedler.parser import DSLError, parse_equation_line, parse_side


def test_unicode_aliases_parse_like_ascii():
    assert parse_side("σ(x_1, y) ⊗ x_2 ⊳ a") == parse_side("sigma(x_1, y) % x_2 |> a")


def test_unparse_reparses_every_registry_side():
    for e in load_registry().entries.values():
        eq = parse_equation_line(e.text)
        for lhs, rhs in eq.clauses:
            for side in (lhs, rhs):
                assert parse_side(unparse(side)) == side, e.id


def test_equation_line_shapes():
    eq = parse_equation_line("Z9 : a_1 % a_2 == a_2 % a_1 && eps(a) == eps(a) requires LB1, ax:one_H")
    assert eq.id == "Z9" and len(eq.clauses) == 2 and eq.requires == ("LB1", "ax:one_H")
    chain = parse_equation_line("Z8 : a == a == a")
    assert len(chain.clauses) == 2
    assert parse_equation_line("ax:x : eps(a) == eps(a)").id == "ax:x"


@pytest.mark.parametrize("text, column", [
    ("a_1 % (a_2", 11),
    ("a_1 %% a_2", 6),
    ("a ? b", 3),
])
def test_parse_errors_carry_columns(text, column):
    with pytest.raises(DSLError) as exc:
        parse_side(text)
    assert exc.value.column == column


def test_equation_errors():
    with pytest.raises(DSLError):
        parse_equation_line("no colon here")
    with pytest.raises(DSLError):
        parse_equation_line("Z : a_1 % a_2")
    with pytest.raises(DSLError):
        compile_equation("Z : a == b")          # variable on one side only
    with pytest.raises(DSLError):
        compile_equation("Z : a == x")          # sides land in different spaces


def test_var_types():
    assert [var_type(v) for v in ("x", "x'", "y", "h2", "a", "a'", "b")] == list("HHHHAAB")
    with pytest.raises(DSLError):
        var_type("q")


def _group_bundle(field=Q):
    A = cyclic_group_algebra(3, "u", "A", field)
    H = cyclic_group_algebra(2, "g", "H", field)
    B = cyclic_group_algebra(2, "v", "B", field)
    return trivial_bundle(A, H, B)


def test_comultiplication_diagram_on_grouplikes():
    b = _group_bundle()
    d = formula("a_1 % a_2", ("a",))
    m = d.evaluate(b.bindings(), b.spaces(), Q)
    assert m == b["A"].comult


def test_iterated_comultiplication_is_coassociative_diagram():
    b = Bundle({"A": library("K^C3", "A", GF(3)), "H": library("KC2", "H", GF(3))})
    left = formula("a_1 % a_2 % a_3", ("a",)).evaluate(b.bindings(), b.spaces(), GF(3))
    d = b["A"].comult.data
    ref = np.einsum("ijx,xka->ijka", d, d) % 3
    assert np.array_equal(left.data, ref)


def test_product_and_action_diagram():
    """x_1 |> a % x_2 on the kc2_kc4 data: a ↦ inverse, group-like x."""
    b = entry("kc2_kc4").bundle
    m = formula("x_1 |> a % x_2", ("x", "a")).evaluate(b.bindings(), b.spaces(), Q)
    A, H = b["A"].space, b["H"].space
    col = m.column([H.index("a"), A.index("x")])
    assert col[A.index("x^3"), H.index("a")] == 1 and sum(col.flatten()) == 1


def test_unbound_generator_is_reported():
    b = Bundle({"A": cyclic_group_algebra(2, "u", "A", Q), "H": cyclic_group_algebra(2, "g", "H", Q)})
    d = formula("sigma(x, y)", ("x", "y"))
    with pytest.raises(UnboundRoleError):
        d.evaluate(b.bindings(), b.spaces(), Q)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10**6))
def test_counit_diagram_matches_contraction(seed):
    """eps(a_1) a_2 == a over a random coalgebra-shaped tensor: diagram equals explicit einsum."""
    rng = random.Random(seed)
    F = GF(2)
    A = library(rng.choice(["KC2", "K^C2", "K[t]/t2"]), "A", F)
    b = Bundle({"A": A})
    got = formula("eps(a_1) a_2", ("a",)).evaluate(b.bindings(), b.spaces(), F)
    ref = np.einsum("i,ija->ja", A.counit.data, A.comult.data) % 2
    assert np.array_equal(got.data, ref)
    assert np.array_equal(ref, np.eye(A.space.dim, dtype=np.int64))


def test_every_registry_entry_compiles():
    reg = load_registry()
    assert all(e.equation.clauses for e in reg.entries.values())

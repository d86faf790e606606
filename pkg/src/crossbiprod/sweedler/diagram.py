"""Compile Sweedler-notation expressions into string diagrams.

Every occurrence of a root (a variable, a unit, or a parenthesised compound
that carries subscripts) is placed in a trie keyed by its subscript path.
Sibling structure in the trie decides which structure map splits a leg:

* numeric children ``1..n`` -> iterated comultiplication, left nested;
* ``-1`` and ``0`` -> left coaction on A;
* ``[0]`` and ``[1..k]`` -> right coaction on B followed by comultiplication
  of the H leg;
* one instance letter -> a leg of a two-input structure map (R, G, T, F).

A diagram is a list of boxes joined by integer wires. It evaluates to a
``LinMap`` whose domain is the ordered list of input variables.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from typing import Mapping, Sequence

import numpy as np

from ..contract import ContractionPlan, contract_arrays
from ..field import Field, Q
from ..tensor import LinMap, Space
from .ast import Act, Call, Num, Prod, Sub, TensorExpr, Tok, Unit, Var, unparse
from .parser import DSLError, parse_equation_line, parse_side

SCALAR = "K"

# (operator, left type, right type) -> (generator, result type)
ACTIONS = {
    ("|>", "H", "A"): ("act_left", "A"),
    ("<|", "B", "H"): ("act_right", "B"),
    ("<|", "H", "A"): ("act_ha", "H"),
    ("|>>", "B", "H"): ("act_bh", "H"),
    ("<<|", "B", "H"): ("act_bb", "B"),
}

# map role -> (domain types, codomain types)
MAP_ROLES = {"R": (("H", "A"), ("A", "H")), "G": (("H", "H"), ("A", "H")),
             "T": (("B", "H"), ("H", "B")), "F": (("H", "H"), ("H", "B"))}

# Signature of every generator whose name does not end in a space letter.
FIXED_SIGNATURES = {
    "map_sigma": (("H", "H"), ("A",)), "map_tau": (("H", "H"), ("B",)),
    "coact_left": (("A",), ("H", "A")), "coact_right": (("B",), ("B", "H")),
    **{f"map_{r}": sig for r, sig in MAP_ROLES.items()},
    **{gen: ((l, r), (t,)) for (_, l, r), (gen, t) in ACTIONS.items()},
}


def generator_signature(gen: str) -> tuple[tuple[str, ...], tuple[str, ...]]:
    """(domain types, codomain types) of a generator name such as ``mult_A``."""
    if gen in FIXED_SIGNATURES:
        return FIXED_SIGNATURES[gen]
    kind, _, t = gen.rpartition("_")
    table = {"mult": ((t, t), (t,)), "unit": ((), (t,)), "comult": ((t,), (t, t)),
             "counit": ((t,), ()), "antipode": ((t,), (t,)), "id": ((t,), (t,))}
    if kind not in table or t not in "AHB" or not t:
        raise KeyError(f"unknown generator {gen!r}")
    return table[kind]


def var_type(name: str) -> str:
    c = name[0]
    if c in "xyh":
        return "H"
    if c == "a":
        return "A"
    if c == "b":
        return "B"
    raise DSLError(f"cannot infer the space of variable {name!r} (use x/y/h, a or b)")


class UnboundRoleError(KeyError):
    """A diagram needs a generator the bindings do not provide."""

    def __str__(self):
        return f"unbound role {self.args[0]!r}"


@dataclass(frozen=True)
class Box:
    gen: str
    ins: tuple[int, ...]
    outs: tuple[int, ...]
    value: object = None  # constant scalar for gen == "const"


@dataclass
class _Node:
    type: str
    label: int | None = None
    leaf_uses: int = 0
    children: dict = dc_field(default_factory=dict)  # Tok (pos-normalised) -> _Node
    map_pos: dict = dc_field(default_factory=dict)   # map letter -> "_" or "^"


def _child_type(parent: str, tok: Tok, where: str) -> str:
    if tok.kind == "delta":
        return parent
    if tok.kind == "rho":
        if parent != "A":
            raise DSLError(f"left coaction leg on a {parent}-valued term {where}")
        return "H" if tok.value == -1 else "A"
    if tok.kind == "psi":
        if parent != "B":
            raise DSLError(f"right coaction leg on a {parent}-valued term {where}")
        return "B" if tok.value == 0 else "H"
    role = tok.value.upper()
    if role not in MAP_ROLES:
        raise DSLError(f"unknown map instance letter {tok.value!r} {where}")
    if role in "RT":
        return parent
    if parent != "H":
        raise DSLError(f"map {tok.value} applied to a {parent}-valued term {where}")
    if role == "G":
        return "A" if tok.pos == "^" else "H"
    return "B" if tok.pos == "^" else "H"


def variables(expr) -> list[str]:
    """Variable names in order of first textual appearance."""
    out: list[str] = []

    def walk(e):
        if isinstance(e, Var):
            if e.name not in out:
                out.append(e.name)
        elif isinstance(e, Sub):
            walk(e.base)
        elif isinstance(e, Call):
            for a in e.args:
                walk(a)
        elif isinstance(e, (Prod, TensorExpr)):
            for f in e.factors:
                walk(f)
        elif isinstance(e, Act):
            walk(e.left)
            walk(e.right)

    walk(expr)
    return out


@dataclass
class Diagram:
    boxes: list[Box]
    inputs: tuple[str, ...]
    input_types: tuple[str, ...]
    input_labels: tuple[int, ...]
    outputs: tuple[int, ...]
    output_types: tuple[str, ...]
    source: str = ""

    def generators(self) -> set[str]:
        return {b.gen for b in self.boxes if b.gen != "const"}

    def plan(self) -> ContractionPlan:
        legs = [b.outs + b.ins for b in self.boxes]
        pol = [("out",) * len(b.outs) + ("in",) * len(b.ins) for b in self.boxes]
        return ContractionPlan(legs, self.outputs + self.input_labels, pol)

    def evaluate(self, bindings: Mapping[str, LinMap], spaces: Mapping[str, Space], field: Field = Q,
                 rng: random.Random | None = None) -> LinMap:
        arrays = []
        for b in self.boxes:
            if b.gen == "const":
                arr = field.zeros(())
                arr[()] = b.value
                arrays.append(field.normalize(arr))
                continue
            if b.gen.startswith("id_"):
                n = spaces[b.gen[3:]].dim
                arr = field.zeros((n, n))
                for i in range(n):
                    arr[i, i] = 1
                arrays.append(arr)
                continue
            if b.gen not in bindings:
                raise UnboundRoleError(b.gen)
            m = bindings[b.gen]
            dom, cod = generator_signature(b.gen)
            want = tuple(spaces[t].dim for t in cod + dom)
            if tuple(m.data.shape) != want:
                raise DSLError(f"binding {b.gen} has shape {m.data.shape}, expected {want}")
            arrays.append(m.data)
        data = contract_arrays(self.plan(), arrays, field, rng)
        return LinMap([spaces[t] for t in self.output_types], [spaces[t] for t in self.input_types],
                      data, field)


class _Compiler:
    def __init__(self, side: TensorExpr, inputs: Sequence[str], source: str):
        self.side = side
        self.source = source
        self.inputs = tuple(inputs)
        self.next = 0
        self.boxes: list[Box] = []
        self.types: dict[int, str] = {}
        self.roots: dict[tuple, _Node] = {}       # root key -> trie root
        self.compounds: dict[str, object] = {}    # compound key -> base expr (collection order)
        self.compound_label: dict[str, int] = {}
        self.var_labels = {}
        for name in self.inputs:
            self.var_labels[name] = self.fresh(var_type(name))

    def err(self, msg: str):
        raise DSLError(f"{msg} in {self.source!r}" if self.source else msg)

    def fresh(self, t: str) -> int:
        self.next += 1
        self.types[self.next] = t
        return self.next

    def box(self, gen: str, ins, outs, value=None):
        self.boxes.append(Box(gen, tuple(ins), tuple(outs), value))

    # -- typing --------------------------------------------------------------
    def type_of(self, e) -> str:
        if isinstance(e, Var):
            return var_type(e.name)
        if isinstance(e, Unit):
            return e.space
        if isinstance(e, Num):
            return SCALAR
        if isinstance(e, Call):
            want = {"sigma": ("H", "H"), "tau": ("H", "H"), "S": ("H",), "SA": ("A",), "SB": ("B",)}
            got = tuple(self.type_of(a) for a in e.args)
            if e.fn == "eps":
                if len(got) != 1 or got[0] == SCALAR:
                    self.err("eps takes one vector argument")
                return SCALAR
            if got != want[e.fn]:
                self.err(f"{e.fn} expects arguments in {want[e.fn]}, got {got}")
            return {"sigma": "A", "tau": "B", "S": "H", "SA": "A", "SB": "B"}[e.fn]
        if isinstance(e, Prod):
            ts = {self.type_of(f) for f in e.factors} - {SCALAR}
            if len(ts) > 1:
                self.err(f"product mixes spaces {sorted(ts)} in {unparse(e)!r}")
            return ts.pop() if ts else SCALAR
        if isinstance(e, Act):
            key = (e.op, self.type_of(e.left), self.type_of(e.right))
            if key not in ACTIONS:
                self.err(f"no action {e.op} on ({key[1]}, {key[2]}) in {unparse(e)!r}")
            return ACTIONS[key][1]
        if isinstance(e, Sub):
            t = self.type_of(e.base)
            if t == SCALAR:
                self.err(f"subscripted scalar {unparse(e)!r}")
            for tok in e.path:
                t = _child_type(t, tok, f"in {unparse(e)!r}")
            return t
        self.err(f"unexpected term {e!r}")

    # -- phase 1: occurrences ------------------------------------------------
    def root_for(self, base) -> tuple:
        if isinstance(base, Var):
            if base.name not in self.var_labels:
                self.err(f"variable {base.name} is not an input")
            key = ("var", base.name)
        elif isinstance(base, Unit):
            key = ("unit", base.space)
        else:
            text = unparse(base)
            key = ("compound", text)
            if text not in self.compounds:
                self.compounds[text] = base
                self.collect(base)
        if key not in self.roots:
            self.roots[key] = _Node(self.type_of(base))
        return key

    def occurrence(self, key, path):
        node = self.roots[key]
        for tok in path:
            norm = tok if tok.kind != "map" else Tok("map", tok.value, "")
            if norm not in node.children:
                node.children[norm] = _Node(_child_type(node.type, tok, "in " + self.source))
            if tok.kind == "map":
                node.map_pos[tok.value] = tok.pos
            node = node.children[norm]
        node.leaf_uses += 1

    def collect(self, e):
        if isinstance(e, Var):
            self.occurrence(self.root_for(e), ())
        elif isinstance(e, Sub):
            self.occurrence(self.root_for(e.base), e.path)
        elif isinstance(e, Call):
            for a in e.args:
                self.collect(a)
        elif isinstance(e, (Prod, TensorExpr)):
            for f in e.factors:
                self.collect(f)
        elif isinstance(e, Act):
            self.collect(e.left)
            self.collect(e.right)

    # -- phase 2: labels -----------------------------------------------------
    def assign(self, node: _Node):
        for child in node.children.values():
            child.label = self.fresh(child.type)
            self.assign(child)

    # -- phase 3: expressions ------------------------------------------------
    def compile(self, e) -> int | None:
        """Emit boxes for ``e``; returns its output wire or None for scalars."""
        if isinstance(e, Var):
            return self.node(("var", e.name), ()).label
        if isinstance(e, Sub):
            key = self.key_of(e.base)
            return self.node(key, e.path).label
        if isinstance(e, Unit):
            out = self.fresh(e.space)
            self.box(f"unit_{e.space}", (), (out,))
            return out
        if isinstance(e, Num):
            self.box("const", (), (), e.value)
            return None
        if isinstance(e, Call):
            args = [self.compile(a) for a in e.args]
            if e.fn == "eps":
                self.box(f"counit_{self.types[args[0]]}", args, ())
                return None
            gen, t = {"sigma": ("map_sigma", "A"), "tau": ("map_tau", "B"), "S": ("antipode_H", "H"),
                      "SA": ("antipode_A", "A"), "SB": ("antipode_B", "B")}[e.fn]
            out = self.fresh(t)
            self.box(gen, args, (out,))
            return out
        if isinstance(e, Prod):
            t = self.type_of(e)
            acc = None
            for f in e.factors:
                lab = self.compile(f)
                if lab is None:
                    continue
                if acc is None:
                    acc = lab
                else:
                    out = self.fresh(t)
                    self.box(f"mult_{t}", (acc, lab), (out,))
                    acc = out
            return acc
        if isinstance(e, Act):
            key = (e.op, self.type_of(e.left), self.type_of(e.right))
            gen, t = ACTIONS[key]
            l, r = self.compile(e.left), self.compile(e.right)
            out = self.fresh(t)
            self.box(gen, (l, r), (out,))
            return out
        self.err(f"unexpected term {e!r}")

    def key_of(self, base) -> tuple:
        if isinstance(base, Var):
            return ("var", base.name)
        if isinstance(base, Unit):
            return ("unit", base.space)
        return ("compound", unparse(base))

    def node(self, key, path) -> _Node:
        node = self.roots[key]
        for tok in path:
            node = node.children[tok if tok.kind != "map" else Tok("map", tok.value, "")]
        return node

    # -- phase 4: trie structure maps ----------------------------------------
    def split(self, node: _Node, name: str, instances: dict):
        kids = node.children
        if not kids:
            if node.leaf_uses != 1:
                self.err(f"{name} is used {node.leaf_uses} times; split it with Sweedler legs first")
            return
        if node.leaf_uses:
            self.err(f"dangling Sweedler index: {name} is used both whole and split")
        kinds = {t.kind for t in kids}
        if len(kinds) > 1:
            self.err(f"dangling Sweedler index: mixed legs under {name}")
        kind = kinds.pop()
        vals = sorted(t.value for t in kids)
        if kind == "delta":
            n = len(vals)
            if vals != list(range(1, n + 1)) or n < 2:
                self.err(f"dangling Sweedler index: legs {vals} of {name} are not 1..n")
            legs = [kids[Tok("delta", i)].label for i in range(1, n + 1)]
            self.comult_chain(node.label, legs, node.type)
        elif kind == "rho":
            if vals != [-1, 0]:
                self.err(f"dangling Sweedler index: coaction of {name} needs legs -1 and 0")
            self.box("coact_left", (node.label,), (kids[Tok("rho", -1)].label, kids[Tok("rho", 0)].label))
        elif kind == "psi":
            k = len(vals) - 1
            if vals != list(range(k + 1)) or k < 1:
                self.err(f"dangling Sweedler index: coaction of {name} needs legs [0]..[k]")
            legs = [kids[Tok("psi", i)].label for i in range(1, k + 1)]
            h = legs[0] if k == 1 else self.fresh("H")
            self.box("coact_right", (node.label,), (kids[Tok("psi", 0)].label, h))
            if k > 1:
                self.comult_chain(h, legs, "H")
        else:
            if len(kids) != 1:
                self.err(f"dangling Sweedler index: {name} enters several maps")
            tok = next(iter(kids))
            instances.setdefault(tok.value, []).append((node, node.map_pos[tok.value], kids[tok]))
        for tok, child in kids.items():
            self.split(child, name + tok.text(), instances)

    def comult_chain(self, src: int, legs: list[int], t: str):
        # (Δ⊗id⊗...)...(Δ⊗id)Δ: peel the last leg off each time.
        cur = src
        for i in range(len(legs) - 1, 0, -1):
            first = legs[0] if i == 1 else self.fresh(t)
            self.box(f"comult_{t}", (cur,), (first, legs[i]))
            cur = first

    def emit_maps(self, instances: dict):
        for letter, uses in instances.items():
            role = letter.upper()
            if len(uses) != 2:
                self.err(f"map instance {letter} has {len(uses)} inputs, expected 2")
            dom, cod = MAP_ROLES[role]
            if role in "RT":
                by_type = {n.type: (n, c) for n, _, c in uses}
                if set(by_type) != set(dom):
                    self.err(f"map instance {letter} needs inputs of types {dom}")
                ins = [by_type[t][0].label for t in dom]
                outs = [by_type[t][1].label for t in (("A", "H") if role == "R" else ("H", "B"))]
            else:
                first = [u for u in uses if u[1] == ("^" if role == "G" else "_")]
                second = [u for u in uses if u[1] == ("_" if role == "G" else "^")]
                if len(first) != 1 or len(second) != 1:
                    self.err(f"map instance {letter} needs one {'^' if role == 'G' else '_'} and one "
                             f"{'_' if role == 'G' else '^'} input")
                ins = [first[0][0].label, second[0][0].label]
                outs = [first[0][2].label, second[0][2].label]
            self.box(f"map_{role}", ins, outs)

    def run(self) -> Diagram:
        self.collect(self.side)
        used = {k[1] for k in self.roots if k[0] == "var"}
        missing = [v for v in self.inputs if v not in used]
        if missing:
            self.err(f"input(s) {', '.join(missing)} do not occur")
        for key, node in self.roots.items():
            if key[0] == "var":
                node.label = self.var_labels[key[1]]
            elif key[0] == "unit":
                node.label = self.fresh(key[1])
                self.box(f"unit_{key[1]}", (), (node.label,))
            self.assign(node)
        for text, base in self.compounds.items():
            self.roots[("compound", text)].label = self.compile(base)
        instances: dict = {}
        for key, node in self.roots.items():
            self.split(node, key[1] if key[0] != "unit" else "1" + key[1], instances)
        self.emit_maps(instances)
        outs, types = [], []
        for f in self.side.factors:
            lab = self.compile(f)
            if lab is None:
                if len(self.side.factors) > 1:
                    self.err("a scalar cannot be a tensor factor")
                continue
            if lab in self.var_labels.values():
                new = self.fresh(self.types[lab])
                self.box(f"id_{self.types[lab]}", (lab,), (new,))
                lab = new
            outs.append(lab)
            types.append(self.types[lab])
        d = Diagram(self.boxes, self.inputs, tuple(var_type(v) for v in self.inputs),
                    tuple(self.var_labels[v] for v in self.inputs), tuple(outs), tuple(types), self.source)
        try:
            d.plan()
        except ValueError as exc:
            self.err(f"ill-formed diagram ({exc})")
        return d


def compile_side(side: TensorExpr | str, inputs: Sequence[str] | None = None, source: str = "") -> Diagram:
    """Compile one side; ``inputs`` fixes the domain order (default: textual order)."""
    if isinstance(side, str):
        source = source or side
        side = parse_side(side)
    if inputs is None:
        inputs = variables(side)
    return _Compiler(side, inputs, source or unparse(side)).run()


def formula(text: str, inputs: Sequence[str] | None = None) -> Diagram:
    return compile_side(text, inputs, text)


@dataclass
class Clause:
    lhs: Diagram
    rhs: Diagram

    @property
    def inputs(self) -> tuple[str, ...]:
        return self.lhs.inputs


@dataclass
class Equation:
    id: str
    clauses: list[Clause]
    requires: tuple[str, ...]
    source: str

    def generators(self) -> set[str]:
        out = set()
        for c in self.clauses:
            out |= c.lhs.generators() | c.rhs.generators()
        return out


def compile_equation(text: str, line: int | None = None) -> Equation:
    """Parse and compile ``ID : lhs == rhs ...``; boundary = union of variables, LHS first."""
    eq = parse_equation_line(text, line)
    clauses = []
    for lhs, rhs in eq.clauses:
        lv, rv = variables(lhs), variables(rhs)
        if set(lv) != set(rv):
            odd = sorted(set(lv) ^ set(rv))
            raise DSLError(f"{eq.id}: variable(s) {', '.join(odd)} occur on one side only", text, None, line)
        inputs = lv + [v for v in rv if v not in lv]
        try:
            clauses.append(Clause(compile_side(lhs, inputs, unparse(lhs)), compile_side(rhs, inputs, unparse(rhs))))
        except DSLError as exc:
            raise DSLError(f"{eq.id}: {exc.message}", text, None, line) from None
        if clauses[-1].lhs.output_types != clauses[-1].rhs.output_types:
            raise DSLError(f"{eq.id}: sides land in {clauses[-1].lhs.output_types} and "
                           f"{clauses[-1].rhs.output_types}", text, None, line)
    return Equation(eq.id, clauses, eq.requires, eq.source)

"""Abstract syntax for Sweedler-notation expressions and equations."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union


@dataclass(frozen=True)
class Tok:
    """One Sweedler subscript token.

    kind is ``delta`` (numeric leg of an iterated comultiplication), ``rho``
    (left coaction leg, -1 or 0), ``psi`` (right coaction leg [k]) or ``map``
    (instance letter of a two-in/two-out structure map; ``pos`` records
    whether it was written as a subscript ``_`` or a superscript ``^``).
    """

    kind: str
    value: object
    pos: str = "_"

    def text(self) -> str:
        if self.kind == "delta":
            return str(self.value)
        if self.kind == "rho":
            return "-1" if self.value == -1 else "0"
        if self.kind == "psi":
            return f"[{self.value}]"
        return str(self.value)


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Unit:
    space: str  # "A", "H" or "B"


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Call:
    fn: str
    args: tuple


@dataclass(frozen=True)
class Prod:
    factors: tuple


@dataclass(frozen=True)
class Act:
    op: str  # one of |> <| |>> <<|
    left: object
    right: object


@dataclass(frozen=True)
class Sub:
    base: object
    path: tuple  # of Tok


@dataclass(frozen=True)
class TensorExpr:
    factors: tuple


Expr = Union[Var, Unit, Num, Call, Prod, Act, Sub, TensorExpr]


def _subs_text(path) -> str:
    out = []
    i = 0
    while i < len(path):
        pos = path[i].pos
        j = i
        while j < len(path) and path[j].pos == pos:
            j += 1
        body = "".join(t.text() for t in path[i:j])
        out.append(f"{pos}{{{body}}}")
        i = j
    return "".join(out)


def unparse(e) -> str:
    """Canonical DSL text; re-parsing it yields an equal AST."""
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Unit):
        return "1" + e.space
    if isinstance(e, Num):
        return str(e.value)
    if isinstance(e, Call):
        return f"{e.fn}(" + ", ".join(unparse(a) for a in e.args) + ")"
    if isinstance(e, Prod):
        return " ".join(_atom(f) for f in e.factors)
    if isinstance(e, Act):
        return f"{_operand(e.left)} {e.op} {_operand(e.right)}"
    if isinstance(e, Sub):
        base = e.base
        inner = unparse(base) if isinstance(base, (Var, Unit, Call)) else f"({unparse(base)})"
        return inner + _subs_text(e.path)
    if isinstance(e, TensorExpr):
        return " % ".join(unparse(f) for f in e.factors)
    raise TypeError(f"not an expression: {e!r}")


def _atom(e) -> str:
    return f"({unparse(e)})" if isinstance(e, (Prod, Act)) else unparse(e)


def _operand(e) -> str:
    return f"({unparse(e)})" if isinstance(e, Act) else unparse(e)

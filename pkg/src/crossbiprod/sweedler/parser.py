"""Recursive-descent parser for the Sweedler equation DSL.

Expression grammar (whitespace insensitive)::

    side   := tfac ('%' tfac)*
    tfac   := prod [ACT prod]            ACT in |> <| |>> <<|
    prod   := atom+                      juxtaposition is multiplication
    atom   := base (('_'|'^') subs)*
    base   := VAR | 1A | 1H | 1B | INT | FN '(' tfac (',' tfac)* ')' | '(' tfac ')'
    subs   := '{' tok* '}' | tok
    tok    := DIGIT | '0' | '-1' | '(-1)' | '[' INT ']' | LETTER

Equation lines::

    ID : side == side [== side ...] [&& side == side ...] [requires ID, ID, ...]

Unicode ⊗ ⊳ ⊲ ▸ ◂ σ τ ε are accepted as aliases of % |> <| |>> <<| sigma tau eps.
"""
from __future__ import annotations

import re

from dataclasses import dataclass

from .ast import Act, Call, Num, Prod, Sub, TensorExpr, Tok, Unit, Var

FUNCTIONS = {"sigma", "tau", "S", "SA", "SB", "eps"}
ACT_OPS = ("|>>", "<<|", "|>", "<|")
_ALIASES = {"⊗": "%", "⊳": "|>", "⊲": "<|", "▸": "|>>", "◂": "<<|", "σ": "sigma", "τ": "tau", "ε": "eps",
            "−": "-"}


class DSLError(ValueError):
    """Malformed DSL text; carries the column (1-based) of the problem."""

    def __init__(self, message: str, text: str = "", column: int | None = None, line: int | None = None):
        self.message, self.text, self.column, self.line = message, text, column, line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if column is not None:
            where.append(f"column {column}")
        super().__init__((", ".join(where) + ": " if where else "") + message)


def normalize(text: str) -> str:
    for k, v in _ALIASES.items():
        text = text.replace(k, v)
    return text


class _Parser:
    def __init__(self, text: str, line: int | None = None):
        self.s = normalize(text)
        self.i = 0
        self.line = line

    def error(self, msg: str):
        raise DSLError(msg, self.s, self.i + 1, self.line)

    def ws(self):
        while self.i < len(self.s) and self.s[self.i].isspace():
            self.i += 1

    def peek(self, lit: str) -> bool:
        self.ws()
        return self.s.startswith(lit, self.i)

    def eat(self, lit: str) -> bool:
        if self.peek(lit):
            self.i += len(lit)
            return True
        return False

    def expect(self, lit: str):
        if not self.eat(lit):
            self.error(f"expected {lit!r}")

    def at_end(self) -> bool:
        self.ws()
        return self.i >= len(self.s)

    # -- expressions ---------------------------------------------------------
    def side(self):
        factors = [self.tfac()]
        while self.eat("%"):
            factors.append(self.tfac())
        return TensorExpr(tuple(factors))

    def tfac(self):
        left = self.prod()
        op = self._act_op()
        if op is None:
            return left
        right = self.prod()
        if self._act_op(peek_only=True) is not None:
            self.error("chained actions need parentheses")
        return Act(op, left, right)

    def _act_op(self, peek_only: bool = False):
        self.ws()
        for op in ACT_OPS:
            if self.s.startswith(op, self.i):
                if not peek_only:
                    self.i += len(op)
                return op
        return None

    def _starts_atom(self) -> bool:
        self.ws()
        if self.i >= len(self.s):
            return False
        c = self.s[self.i]
        if c == "(":
            return True
        if c.isdigit():
            return True
        if c.isalpha():
            return not self.s.startswith("requires", self.i)
        return False

    def prod(self):
        if not self._starts_atom():
            self.error("expected a term")
        factors = [self.atom()]
        while self._starts_atom():
            factors.append(self.atom())
        return factors[0] if len(factors) == 1 else Prod(tuple(factors))

    def atom(self):
        base = self.base()
        path = []
        while True:
            if self.s.startswith("_", self.i):
                self.i += 1
                path.extend(self.subs("_"))
            elif self.s.startswith("^", self.i):
                self.i += 1
                path.extend(self.subs("^"))
            else:
                break
        if not path:
            return base
        if isinstance(base, Sub):
            return Sub(base.base, base.path + tuple(path))
        return Sub(base, tuple(path))

    def base(self):
        self.ws()
        s, i = self.s, self.i
        if s[i] == "(":
            self.i += 1
            inner = self.tfac()
            self.expect(")")
            return inner
        if s[i].isdigit():
            j = i
            while j < len(s) and s[j].isdigit():
                j += 1
            if s[i:j] == "1" and j < len(s) and s[j] in "AHB" and not (j + 1 < len(s) and (s[j + 1].isalnum())):
                self.i = j + 1
                return Unit(s[j])
            self.i = j
            return Num(int(s[i:j]))
        j = i
        while j < len(s) and s[j].isalnum():
            j += 1
        name = s[i:j]
        while j < len(s) and s[j] == "'":
            j += 1
        full = s[i:j]
        self.i = j
        if name in FUNCTIONS and full == name:
            self.expect("(")
            args = [self.tfac()]
            while self.eat(","):
                args.append(self.tfac())
            self.expect(")")
            return Call(name, tuple(args))
        if not name[:1].isalpha():
            self.error("expected a variable")
        return Var(full)

    def subs(self, pos: str) -> list[Tok]:
        s = self.s
        if self.i < len(s) and s[self.i] == "{":
            self.i += 1
            toks = []
            while True:
                self.ws()
                if self.i >= len(s):
                    self.error("unterminated subscript group")
                if s[self.i] == "}":
                    self.i += 1
                    break
                toks.append(self.tok(pos))
            if not toks:
                self.error("empty subscript group")
            return toks
        return [self.tok(pos)]

    def tok(self, pos: str) -> Tok:
        s = self.s
        if self.i >= len(s):
            self.error("missing subscript")
        c = s[self.i]
        if pos == "^" and not c.isalpha():
            self.error("superscripts must be map instance letters")
        if c == "[":
            j = s.find("]", self.i)
            if j < 0 or not s[self.i + 1:j].isdigit():
                self.error("bad right-coaction leg")
            k = int(s[self.i + 1:j])
            self.i = j + 1
            return Tok("psi", k)
        if s.startswith("(-1)", self.i):
            self.i += 4
            return Tok("rho", -1)
        if s.startswith("-1", self.i):
            self.i += 2
            return Tok("rho", -1)
        if c == "0":
            self.i += 1
            return Tok("rho", 0)
        if c.isdigit():
            self.i += 1
            return Tok("delta", int(c))
        if c.isalpha():
            self.i += 1
            return Tok("map", c, pos)
        self.error(f"unexpected {c!r} in subscript")


def parse_side(text: str, line: int | None = None) -> TensorExpr:
    """Parse one side (a ``%``-separated tensor of factors)."""
    p = _Parser(text, line)
    out = p.side()
    if not p.at_end():
        p.error("unexpected trailing text")
    return out


@dataclass(frozen=True)
class EquationText:
    id: str
    clauses: tuple  # of (TensorExpr, TensorExpr)
    requires: tuple
    source: str


def parse_equation_line(text: str, line: int | None = None) -> EquationText:
    """Parse ``ID : lhs == rhs [...] [requires ...]``."""
    m = re.match(r"\s*(\S+?)\s*:(?=\s)", text)
    if m is None:
        raise DSLError("expected 'ID : ...'", text, None, line)
    ident, rest = m.group(1), text[m.end():]
    if not ident or any(c.isspace() for c in ident):
        raise DSLError(f"bad equation id {ident!r}", text, 1, line)
    p = _Parser(rest, line)
    clauses = []
    while True:
        sides = [p.side()]
        while p.eat("=="):
            sides.append(p.side())
        if len(sides) < 2:
            p.error("expected '=='")
        clauses.extend(zip(sides, sides[1:]))
        if not p.eat("&&"):
            break
    requires = []
    if p.eat("requires"):
        p.ws()
        rest_ids = p.s[p.i:]
        requires = [r.strip() for r in rest_ids.split(",") if r.strip()]
        p.i = len(p.s)
    if not p.at_end():
        p.error("unexpected trailing text")
    return EquationText(ident, tuple(clauses), tuple(requires), text.strip())

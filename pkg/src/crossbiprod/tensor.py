"""Finite-dimensional spaces, dense exact tensors and linear maps."""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field as dc_field
from typing import Callable, Iterable, Sequence

import numpy as np

from .field import Field, FpElement, Q


class SignatureError(TypeError):
    """Domain/codomain legs do not line up."""


@dataclass(frozen=True)
class Space:
    """A vector space with a named basis and an optional distinguished element 1."""

    name: str
    labels: tuple[str, ...]
    one: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(self.labels))
        if not self.labels:
            raise ValueError(f"space {self.name!r} must have positive dimension")
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"space {self.name!r} has repeated basis labels")
        if self.one is not None and not 0 <= self.one < len(self.labels):
            raise ValueError(f"space {self.name!r}: distinguished one {self.one} out of range")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"{label!r} is not a basis label of {self.name}") from None

    def __repr__(self):
        return f"Space({self.name}, dim={self.dim})"


def product_space(name: str, factors: Sequence[Space], sep: str = "|") -> Space:
    """The tensor product space with basis in C order over ``factors``."""
    labels = tuple(sep.join(t) for t in itertools.product(*(f.labels for f in factors)))
    one = None
    if all(f.one is not None for f in factors):
        one = int(np.ravel_multi_index([f.one for f in factors], [f.dim for f in factors]))
    return Space(name, labels, one)


class Tensor:
    """Dense multiway array with a signature of (space, polarity) legs."""

    def __init__(self, signature, data, field: Field = Q):
        self.signature = tuple((sp, pol) for sp, pol in signature)
        for sp, pol in self.signature:
            if pol not in ("in", "out"):
                raise ValueError(f"bad polarity {pol!r}")
        self.field = field
        arr = data if isinstance(data, np.ndarray) and data.dtype == field.dtype else field.array(data)
        shape = tuple(sp.dim for sp, _ in self.signature)
        if arr.shape != shape:
            if arr.size != int(np.prod(shape, dtype=np.int64)):
                raise SignatureError(f"entry count {arr.size} does not match signature shape {shape}")
            arr = arr.reshape(shape)
        self.data = arr
        self.data.flags.writeable = False

    @property
    def shape(self):
        return self.data.shape

    def __getitem__(self, idx):
        v = self.data[idx]
        if isinstance(v, np.ndarray):
            return v
        return FpElement(int(v), self.field.p) if self.field.characteristic else v

    def nonzero(self) -> list[tuple[tuple[int, ...], object]]:
        return [(idx, self[idx]) for idx in zip(*np.nonzero(self.data != 0))]

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        return (self.signature == other.signature and self.field == other.field
                and bool(np.all(self.data == other.data)))

    def __hash__(self):
        return id(self)

    def __repr__(self):
        sig = ",".join(f"{sp.name}^{pol}" for sp, pol in self.signature)
        return f"Tensor[{sig}]"


class LinMap(Tensor):
    """Linear map ``domain -> codomain``; array axes are codomain legs then domain legs."""

    def __init__(self, codomain: Sequence[Space], domain: Sequence[Space], data, field: Field = Q):
        self.codomain = tuple(codomain)
        self.domain = tuple(domain)
        super().__init__([(s, "out") for s in self.codomain] + [(s, "in") for s in self.domain], data, field)

    @classmethod
    def from_function(cls, codomain, domain, fn: Callable, field: Field = Q) -> "LinMap":
        """Build a map from ``fn(basis index tuple) -> {output index tuple: coefficient}``."""
        codomain, domain = tuple(codomain), tuple(domain)
        data = field.zeros(tuple(s.dim for s in codomain) + tuple(s.dim for s in domain))
        for idx in itertools.product(*(range(s.dim) for s in domain)):
            for out, c in fn(idx).items():
                if not isinstance(out, tuple):
                    out = (out,)
                v = field.scalar(c)
                if field.characteristic:
                    data[out + idx] = (data[out + idx] + v.value) % field.p
                else:
                    data[out + idx] = field.scalar(data[out + idx] + v)
        return cls(codomain, domain, field.normalize(data), field)

    def column(self, idx: Sequence[int]) -> np.ndarray:
        """Image of the basis tuple ``idx`` as an array over the codomain."""
        k = len(self.codomain)
        return self.data[(slice(None),) * k + tuple(idx)]

    def __call__(self, *labels: str) -> np.ndarray:
        idx = [sp.index(l) for sp, l in zip(self.domain, labels)]
        return self.column(idx)

    def __repr__(self):
        dom = "⊗".join(s.name for s in self.domain) or "k"
        cod = "⊗".join(s.name for s in self.codomain) or "k"
        return f"LinMap({dom} -> {cod})"


def identity(space: Space, field: Field = Q) -> LinMap:
    data = field.zeros((space.dim, space.dim))
    for i in range(space.dim):
        data[i, i] = 1
    return LinMap([space], [space], data, field)


def swap(u: Space, v: Space, field: Field = Q) -> LinMap:
    """u⊗v -> v⊗u."""
    data = field.zeros((v.dim, u.dim, u.dim, v.dim))
    for i in range(u.dim):
        for j in range(v.dim):
            data[j, i, i, j] = 1
    return LinMap([v, u], [u, v], data, field)


def _same_legs(got: Sequence[Space], want: Sequence[Space], what: str) -> None:
    if len(got) != len(want):
        raise SignatureError(f"{what}: expected {len(want)} legs, got {len(got)}")
    for i, (g, w) in enumerate(zip(got, want)):
        if g != w:
            raise SignatureError(f"{what}: leg {i} is {g.name}, expected {w.name}")


def compose(f: LinMap, g: LinMap) -> LinMap:
    """f∘g."""
    f.field.check_same(g.field)
    _same_legs(g.codomain, f.domain, "compose")
    k = len(f.domain)
    nf = len(f.codomain)
    data = f.field.tensordot(f.data, g.data, axes=(list(range(nf, nf + k)), list(range(k))))
    return LinMap(f.codomain, g.domain, data, f.field)


def compose_at(f: LinMap, g: LinMap, pos: int = 0) -> LinMap:
    """f∘(id⊗g⊗id): feed g's outputs into f's domain legs pos, pos+1, ...

    Equivalent to composing with identities on the other legs, without ever
    materialising them.
    """
    f.field.check_same(g.field)
    k = len(g.codomain)
    _same_legs(g.codomain, f.domain[pos:pos + k], "compose_at")
    nf, ng = len(f.codomain), len(g.domain)
    res = f.field.tensordot(f.data, g.data, axes=(list(range(nf + pos, nf + pos + k)), list(range(k))))
    # res axes: f.cod, f.dom[:pos], f.dom[pos+k:], g.dom -> move g.dom into place
    before = nf + pos
    rest = len(f.domain) - pos - k
    perm = (list(range(before)) + list(range(before + rest, before + rest + ng))
            + list(range(before, before + rest)))
    data = np.ascontiguousarray(np.transpose(res, perm))
    return LinMap(f.codomain, f.domain[:pos] + g.domain + f.domain[pos + k:], data, f.field)


def apply_at(g: LinMap, f: LinMap, pos: int = 0) -> LinMap:
    """(id⊗g⊗id)∘f: apply g to f's codomain legs pos, pos+1, ..."""
    f.field.check_same(g.field)
    k = len(g.domain)
    _same_legs(f.codomain[pos:pos + k], g.domain, "apply_at")
    ng, nf = len(g.codomain), len(f.codomain)
    res = g.field.tensordot(g.data, f.data, axes=(list(range(ng, ng + k)), list(range(pos, pos + k))))
    # res axes: g.cod, f.cod[:pos], f.cod[pos+k:], f.dom
    perm = (list(range(ng, ng + pos)) + list(range(ng)) + list(range(ng + pos, res.ndim)))
    data = np.ascontiguousarray(np.transpose(res, perm))
    return LinMap(f.codomain[:pos] + g.codomain + f.codomain[pos + k:], f.domain, data, f.field)


def permute_legs(f: LinMap, cod_perm=None, dom_perm=None) -> LinMap:
    """Reorder legs: new codomain leg i is old leg cod_perm[i] (likewise for the domain)."""
    nc, nd = len(f.codomain), len(f.domain)
    cp = list(range(nc)) if cod_perm is None else list(cod_perm)
    dp = list(range(nd)) if dom_perm is None else list(dom_perm)
    data = np.ascontiguousarray(np.transpose(f.data, cp + [nc + i for i in dp]))
    return LinMap([f.codomain[i] for i in cp], [f.domain[i] for i in dp], data, f.field)


def tensor_of(f: LinMap, g: LinMap) -> LinMap:
    """f⊗g with legs ordered (cod f, cod g) <- (dom f, dom g)."""
    f.field.check_same(g.field)
    outer = f.field.tensordot(f.data, g.data, axes=([], []))
    cf, df, cg, dg = len(f.codomain), len(f.domain), len(g.codomain), len(g.domain)
    perm = (list(range(cf)) + list(range(cf + df, cf + df + cg))
            + list(range(cf, cf + df)) + list(range(cf + df + cg, cf + df + cg + dg)))
    return LinMap(f.codomain + g.codomain, f.domain + g.domain, np.ascontiguousarray(outer.transpose(perm)), f.field)


def add_maps(f: LinMap, g: LinMap, alpha=1, beta=1) -> LinMap:
    f.field.check_same(g.field)
    _same_legs(g.codomain, f.codomain, "add")
    _same_legs(g.domain, f.domain, "add")
    a = f.field.scalar(alpha)
    b = f.field.scalar(beta)
    if f.field.characteristic:
        data = f.field.normalize(f.data * a.value + g.data * b.value)
    else:
        data = f.field.normalize(f.data * a + g.data * b)
    return LinMap(f.codomain, f.domain, data, f.field)


@dataclass
class Verdict:
    """Outcome of an exact equality test; on failure carries the smallest differing index."""

    equal: bool
    index: tuple[int, ...] | None = None
    lhs: object = None
    rhs: object = None

    def __bool__(self):
        return self.equal


def maps_equal(f: Tensor, g: Tensor) -> Verdict:
    if f.signature != g.signature:
        for i, ((a, pa), (b, pb)) in enumerate(zip(f.signature, g.signature)):
            if a != b or pa != pb:
                raise SignatureError(f"maps_equal: leg {i} is {a.name}^{pa} vs {b.name}^{pb}")
        raise SignatureError("maps_equal: signatures differ in length")
    diff = f.data != g.data
    if not diff.any():
        return Verdict(True)
    idx = tuple(int(i) for i in np.argwhere(diff)[0])  # argwhere is C-ordered: lexicographic minimum
    return Verdict(False, idx, f[idx], g[idx])


def format_vector(spaces: Sequence[Space], arr: np.ndarray, field: Field = Q, sep: str = "⊗") -> str:
    """Render an element of ⊗spaces, e.g. ``x⊗1⊗x`` or ``2·a⊗1 + x⊗x``."""
    if not spaces:
        return field.format(arr[()] if isinstance(arr, np.ndarray) else arr)
    terms = []
    for idx in zip(*np.nonzero(arr != 0)):
        c = arr[idx]
        word = sep.join(sp.labels[i] for sp, i in zip(spaces, idx))
        cs = field.format(c)
        terms.append(word if cs == "1" else f"{cs}·{word}")
    return " + ".join(terms) if terms else "0"


# -- text serialization -------------------------------------------------------

def format_tensor(name: str, t: LinMap) -> str:
    """``tensor <name> : <dom> -> <cod> { i,j,k = v; ... }`` with zero entries omitted."""
    dom = ",".join(s.name for s in t.domain)
    cod = ",".join(s.name for s in t.codomain)
    entries = []
    for idx in zip(*np.nonzero(t.data != 0)):
        entries.append(",".join(str(int(i)) for i in idx) + " = " + t.field.format(t.data[idx]))
    body = "; ".join(entries)
    return f"tensor {name} : {dom} -> {cod} {{ {body}{';' if entries else ''} }}"


_TENSOR_RE = re.compile(r"^\s*tensor\s+(\S+)\s*:\s*([^{]*?)\s*->\s*([^{]*?)\s*\{(.*)\}\s*$", re.S)


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line, self.column = line, column
        where = f"line {line}" + (f", column {column}" if column is not None else "") + ": " if line else ""
        super().__init__(where + message)


def parse_tensor(text: str, spaces: dict[str, Space], field: Field = Q, line: int | None = None) -> tuple[str, LinMap]:
    m = _TENSOR_RE.match(text)
    if not m:
        raise ParseError("expected 'tensor <name> : <dom> -> <cod> { ... }'", line)
    name, dom, cod, body = m.groups()

    def legs(s):
        out = []
        for part in filter(None, (p.strip() for p in s.split(","))):
            if part not in spaces:
                raise ParseError(f"unknown space {part!r} in tensor {name}", line)
            out.append(spaces[part])
        return out

    domain, codomain = legs(dom), legs(cod)
    data = field.zeros(tuple(s.dim for s in codomain) + tuple(s.dim for s in domain))
    for entry in filter(None, (e.strip() for e in body.split(";"))):
        if "=" not in entry:
            raise ParseError(f"bad entry {entry!r} in tensor {name}", line)
        lhs, rhs = entry.split("=", 1)
        try:
            idx = tuple(int(i) for i in lhs.split(",") if i.strip())
        except ValueError:
            raise ParseError(f"bad multi-index {lhs.strip()!r} in tensor {name}", line) from None
        if len(idx) != data.ndim or any(not 0 <= i < n for i, n in zip(idx, data.shape)):
            raise ParseError(f"multi-index {idx} out of range for tensor {name}", line)
        v = field.scalar(rhs.strip())
        data[idx] = v.value if field.characteristic else v
    return name, LinMap(codomain, domain, data, field)

"""Line-oriented text format for bundles and built structures.

    # provenance comment
    field q                                   (or fp:<p>)
    space A : 1 x x^2 x^3 one=0
    tensor mult_A : A,A -> A { 0,0,0 = 1; ... }
    tensor sigma : H,H -> A { ... }
    built two_sided_crossed on AHB factors A H B

A role X in {A, H, B} is assembled from whichever of mult_X, unit_X, comult_X,
counit_X, antipode_X are present; every other tensor is bound to the role of
the same name.  A file with a ``built`` line describes a built structure whose
tensors are named mult, unit, comult, counit and (optionally) antipode.
"""
from __future__ import annotations

from .field import Field, FieldError, parse_field
from .products import MAP_ROLES, SPACE_ROLES, Bundle, BuiltStructure
from .structures import Algebra, Bialgebra, CoalgebraWithOne, HopfAlgebra, StructureError
from .tensor import LinMap, ParseError, Space, format_tensor, parse_tensor

OPS = ("mult", "unit", "comult", "counit", "antipode")


def field_token(f: Field) -> str:
    return f"fp:{f.p}" if f.characteristic else "q"


def _space_line(s: Space) -> str:
    one = f" one={s.one}" if s.one is not None else ""
    return f"space {s.name} : {' '.join(s.labels)}{one}"


def _structure_tensors(s, suffix: str) -> list[tuple[str, LinMap]]:
    out = []
    for op in OPS:
        m = getattr(s, op, None)
        if isinstance(m, LinMap):
            out.append((f"{op}{suffix}", m))
    return out


def _header(provenance: str | None) -> list[str]:
    return [f"# {line}" if line else "#" for line in (provenance or "").splitlines()]


def _spaces_of(tensors, first=()) -> list[Space]:
    seen: dict[str, Space] = {}
    for s in list(first) + [s for _, m in tensors for s in m.codomain + m.domain]:
        if s.name in seen and seen[s.name] != s:
            raise ValueError(f"two different spaces are both named {s.name!r}")
        seen.setdefault(s.name, s)
    return list(seen.values())


def dump_bundle(bundle: Bundle, provenance: str | None = None) -> str:
    tensors: list[tuple[str, LinMap]] = []
    extra_spaces = []
    for role in SPACE_ROLES:
        if role in bundle:
            s = bundle[role]
            extra_spaces.append(s.space)
            tensors += _structure_tensors(s, f"_{role}")
    for role in MAP_ROLES:
        if role in bundle:
            tensors.append((role, bundle[role]))
    spaces = _spaces_of(tensors, extra_spaces)
    lines = _header(provenance) + [f"field {field_token(bundle.field)}"]
    lines += [_space_line(s) for s in spaces]
    lines += [format_tensor(name, m) for name, m in tensors]
    return "\n".join(lines) + "\n"


def dump_built(built: BuiltStructure, provenance: str | None = None, antipode: LinMap | None = None) -> str:
    s = built.structure
    tensors = _structure_tensors(s, "")
    if antipode is not None and not any(n == "antipode" for n, _ in tensors):
        tensors.append(("antipode", antipode))
    prov = provenance if provenance is not None else built.provenance
    lines = _header(prov) + [f"field {field_token(built.field)}"]
    spaces = _spaces_of(tensors, built.factors)
    lines += [_space_line(x) for x in spaces]
    lines.append(f"built {built.name} on {built.carrier.name} factors {' '.join(f.name for f in built.factors)}")
    lines += [format_tensor(name, m) for name, m in tensors]
    return "\n".join(lines) + "\n"


# -- parsing ----------------------------------------------------------------------------------

class _Doc:
    def __init__(self):
        self.field: Field | None = None
        self.spaces: dict[str, Space] = {}
        self.tensors: dict[str, tuple[LinMap, int]] = {}
        self.built: tuple[str, str, list[str], int] | None = None
        self.comments: list[str] = []


def _parse_space(body: str, lineno: int) -> Space:
    if ":" not in body:
        raise ParseError("expected 'space NAME : label ... [one=i]'", lineno)
    name, rest = (x.strip() for x in body.split(":", 1))
    if not name or " " in name:
        raise ParseError(f"bad space name {name!r}", lineno, 7)
    tokens = rest.split()
    one = None
    if tokens and tokens[-1].startswith("one="):
        try:
            one = int(tokens.pop()[4:])
        except ValueError:
            raise ParseError("one= expects a basis index", lineno) from None
    try:
        return Space(name, tokens, one)
    except ValueError as exc:
        raise ParseError(str(exc), lineno) from None


def _parse(text: str, field: Field | None = None) -> _Doc:
    """``field`` overrides the declared field (entries are re-read in it)."""
    doc = _Doc()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            doc.comments.append(line[1:].strip())
            continue
        word, _, body = line.partition(" ")
        if word == "field":
            try:
                doc.field = field or parse_field(body)
            except FieldError as exc:
                raise ParseError(str(exc), lineno, 7) from None
        elif word == "space":
            s = _parse_space(body, lineno)
            if s.name in doc.spaces:
                raise ParseError(f"space {s.name} declared twice", lineno)
            doc.spaces[s.name] = s
        elif word == "tensor":
            if doc.field is None:
                raise ParseError("the field must be declared before any tensor", lineno)
            try:
                name, m = parse_tensor(line, doc.spaces, doc.field, lineno)
            except (ValueError, FieldError) as exc:
                if isinstance(exc, ParseError):
                    raise
                raise ParseError(str(exc), lineno) from None
            if name in doc.tensors:
                raise ParseError(f"tensor {name} declared twice", lineno)
            doc.tensors[name] = (m, lineno)
        elif word == "built":
            parts = body.split()
            if len(parts) < 3 or parts[1] != "on" or (len(parts) > 3 and parts[3] != "factors"):
                raise ParseError("expected 'built NAME on SPACE [factors F ...]'", lineno)
            doc.built = (parts[0], parts[2], parts[4:], lineno)
        else:
            raise ParseError(f"unknown directive {word!r}", lineno, 1)
    if doc.field is None:
        raise ParseError("missing 'field' line", None)
    return doc


def _assemble(ops: dict[str, LinMap], where: str, line: int | None):
    """Algebra, coalgebra, bialgebra or Hopf algebra from the operations present."""
    space = None
    for op, m in ops.items():
        s = m.codomain[0] if op in ("mult", "unit", "antipode", "comult") else m.domain[0]
        if space is not None and s != space:
            raise ParseError(f"operations of {where} live on different spaces", line)
        space = s
    try:
        alg = coalg = None
        if "mult" in ops or "unit" in ops:
            if not ("mult" in ops and "unit" in ops):
                raise ParseError(f"{where} has only one of mult/unit", line)
            alg = Algebra(space, ops["mult"], ops["unit"])
        if "comult" in ops or "counit" in ops:
            if not ("comult" in ops and "counit" in ops):
                raise ParseError(f"{where} has only one of comult/counit", line)
            coalg = CoalgebraWithOne(space, ops["comult"], ops["counit"], space.one)
        if alg is not None and coalg is not None:
            b = Bialgebra(alg, coalg)
            return HopfAlgebra(b, ops["antipode"]) if "antipode" in ops else b
        if "antipode" in ops:
            raise ParseError(f"{where} has an antipode but is not a bialgebra", line)
        return alg if alg is not None else coalg
    except StructureError as exc:
        raise ParseError(str(exc), line) from None


def load_bundle(text: str, field: Field | None = None) -> Bundle:
    doc = _parse(text, field)
    if doc.built is not None:
        raise ParseError("this file describes a built structure, not a bundle", doc.built[3])
    roles: dict[str, object] = {}
    grouped: dict[str, dict[str, LinMap]] = {}
    first_line: dict[str, int] = {}
    for name, (m, line) in doc.tensors.items():
        op, _, role = name.rpartition("_")
        if op in OPS and role in SPACE_ROLES:
            grouped.setdefault(role, {})[op] = m
            first_line.setdefault(role, line)
        elif name in MAP_ROLES:
            roles[name] = m
        else:
            raise ParseError(f"tensor {name} names no role", line)
    for role in SPACE_ROLES:
        if role in grouped:
            roles[role] = _assemble(grouped[role], f"role {role}", first_line[role])
    return Bundle(roles)


def load_built(text: str, field: Field | None = None) -> BuiltStructure:
    doc = _parse(text, field)
    if doc.built is None:
        raise ParseError("missing 'built' line", None)
    name, carrier, factors, line = doc.built
    if carrier not in doc.spaces:
        raise ParseError(f"unknown carrier space {carrier}", line)
    try:
        fac = tuple(doc.spaces[f] for f in factors)
    except KeyError as exc:
        raise ParseError(f"unknown factor space {exc.args[0]}", line) from None
    ops = {}
    for tname, (m, tline) in doc.tensors.items():
        if tname not in OPS:
            raise ParseError(f"unexpected tensor {tname} in a built structure", tline)
        ops[tname] = m
    if not ops:
        raise ParseError("built structure has no tensors", line)
    s = _assemble(ops, name, line)
    return BuiltStructure(name, doc.spaces[carrier], fac, s, None, "\n".join(doc.comments))


def bundles_equal(a: Bundle, b: Bundle) -> bool:
    if set(a.roles) != set(b.roles) or a.field != b.field:
        return False
    for role in a.roles:
        x, y = a[role], b[role]
        if isinstance(x, LinMap):
            if not isinstance(y, LinMap) or x != y:
                return False
            continue
        if type(x) is not type(y) or x.space != y.space:
            return False
        for op in OPS:
            mx, my = getattr(x, op, None), getattr(y, op, None)
            if isinstance(mx, LinMap) != isinstance(my, LinMap) or (isinstance(mx, LinMap) and mx != my):
                return False
        if isinstance(x, CoalgebraWithOne) and x.one != y.one:
            return False
    return True

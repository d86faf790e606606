"""Exact scalar fields: the rationals and prime fields F_p.

Dense arrays over a field are numpy arrays. Over the rationals they have
``dtype=object`` and hold ``int`` or ``Fraction`` entries (integral fractions
are stored as ``int``); over F_p they are ``int64`` arrays reduced into
``[0, p)``. No floating point is ever involved.
"""
from __future__ import annotations

import math
from fractions import Fraction
from functools import total_ordering

import numpy as np

_INT64_SAFE = 2**62


class FieldError(ValueError):
    """Raised on mixing fields or on malformed scalar literals."""


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


@total_ordering
class FpElement:
    """An element of the prime field F_p."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = int(value) % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, FpElement):
            if other.p != self.p:
                raise FieldError(f"cannot mix F_{self.p} and F_{other.p}")
            return other.value
        if isinstance(other, int):
            return other % self.p
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElement(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElement(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElement(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else FpElement(self.value * o, self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpElement(-self.value, self.p)

    def inverse(self) -> FpElement:
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse in F_p")
        return FpElement(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self * FpElement(o, self.p).inverse()

    def __eq__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self.value == o

    def __lt__(self, other):
        return self.value < self._coerce(other)

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"FpElement({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


class Field:
    """Base class; use :data:`Q` or :func:`GF`."""

    name: str
    characteristic: int

    def __eq__(self, other):
        return isinstance(other, Field) and self.name == other.name

    def __hash__(self):
        return hash(self.name)

    def __repr__(self):
        return f"<field {self.name}>"

    def check_same(self, other: Field) -> None:
        if self != other:
            raise FieldError(f"field mismatch: {self.name} vs {other.name}")


class RationalField(Field):
    name = "q"
    characteristic = 0
    dtype = object

    def scalar(self, v) -> int | Fraction:
        if isinstance(v, FpElement):
            raise FieldError("cannot use an F_p element over the rationals")
        if isinstance(v, str):
            return self.parse(v)
        f = Fraction(v)
        return f.numerator if f.denominator == 1 else f

    def parse(self, text: str) -> int | Fraction:
        try:
            return self.scalar(Fraction(text.strip()))
        except (ValueError, ZeroDivisionError) as exc:
            raise FieldError(f"bad rational literal {text!r}") from exc

    def format(self, v) -> str:
        f = Fraction(v)
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"

    def zeros(self, shape) -> np.ndarray:
        out = np.empty(shape, dtype=object)
        out.fill(0)
        return out

    def array(self, data) -> np.ndarray:
        arr = np.array(data, dtype=object)
        flat = arr.reshape(-1)
        for i, v in enumerate(flat):
            flat[i] = self.scalar(v)
        return arr

    def element(self, v):
        return self.scalar(v)

    def normalize(self, arr: np.ndarray) -> np.ndarray:
        flat = arr.reshape(-1)
        for i, v in enumerate(flat):
            if isinstance(v, Fraction) and v.denominator == 1:
                flat[i] = v.numerator
        return arr

    def _as_int64(self, arr: np.ndarray):
        """Return an int64 view of an all-integer object array, or None."""
        bound = 0
        for v in arr.flat:
            if type(v) is not int:
                return None, 0
            if abs(v) > bound:
                bound = abs(v)
        if bound >= _INT64_SAFE:
            return None, 0
        return arr.astype(np.int64), bound

    def tensordot(self, a: np.ndarray, b: np.ndarray, axes) -> np.ndarray:
        ia, ba = self._as_int64(a)
        if ia is not None:
            ib, bb = self._as_int64(b)
            summed = int(np.prod([a.shape[i] for i in axes[0]], dtype=object)) if axes[0] else 1
            if ib is not None and ba * bb * max(summed, 1) < _INT64_SAFE:
                return np.tensordot(ia, ib, axes=axes).astype(object)
        return self.normalize(np.tensordot(a, b, axes=axes))

    def einsum(self, spec: str, *ops) -> np.ndarray:
        res = np.einsum(spec, *ops)
        if not isinstance(res, np.ndarray):
            res = np.array(res, dtype=object)
        return self.normalize(res.astype(object))

    def contract(self, spec: str, *ops) -> np.ndarray:
        """Multi-operand einsum; runs in int64 when every entry is a small integer."""
        ins, out = spec.split("->")
        dims = {}
        for letters, op in zip(ins.split(","), ops):
            dims.update(zip(letters, op.shape))
        summed = 1
        for l in set(dims) - set(out):
            summed *= dims[l]
        bound = summed
        conv = []
        for op in ops:
            iv, b = self._as_int64(op)
            if iv is None:
                break
            bound *= max(b, 1)
            conv.append(iv)
        if len(conv) == len(ops) and bound < _INT64_SAFE:
            res = np.einsum(spec, *conv, optimize=True)
            return np.asarray(res, dtype=np.int64).astype(object)
        return self.einsum(spec, *ops)

    def equal(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return a == b


class PrimeField(Field):
    dtype = np.int64

    def __init__(self, p: int):
        if not _is_prime(p) or p > 257:
            raise FieldError(f"F_p requires a prime p <= 257, got {p}")
        self.p = p
        self.characteristic = p
        self.name = f"fp:{p}"

    def scalar(self, v) -> FpElement:
        if isinstance(v, FpElement):
            if v.p != self.p:
                raise FieldError(f"cannot mix F_{v.p} and F_{self.p}")
            return v
        if isinstance(v, str):
            return self.parse(v)
        f = Fraction(v)
        return FpElement(f.numerator, self.p) / FpElement(f.denominator, self.p)

    def parse(self, text: str) -> FpElement:
        text = text.strip()
        try:
            return self.scalar(Fraction(text))
        except (ValueError, ZeroDivisionError) as exc:
            raise FieldError(f"bad F_{self.p} literal {text!r}") from exc

    def format(self, v) -> str:
        if isinstance(v, FpElement):
            return str(v.value)
        return str(int(v) % self.p)

    def zeros(self, shape) -> np.ndarray:
        return np.zeros(shape, dtype=np.int64)

    def array(self, data) -> np.ndarray:
        arr = np.array(data, dtype=object)
        out = np.zeros(arr.shape, dtype=np.int64)
        for idx, v in np.ndenumerate(arr):
            out[idx] = self.scalar(v).value
        return out

    def element(self, v) -> FpElement:
        return self.scalar(v)

    def normalize(self, arr: np.ndarray) -> np.ndarray:
        return np.mod(arr.astype(np.int64), self.p)

    def tensordot(self, a: np.ndarray, b: np.ndarray, axes) -> np.ndarray:
        return np.mod(np.tensordot(a, b, axes=axes), self.p)

    def einsum(self, spec: str, *ops) -> np.ndarray:
        return np.mod(np.asarray(np.einsum(spec, *ops), dtype=np.int64), self.p)

    def contract(self, spec: str, *ops) -> np.ndarray:
        """Multi-operand einsum reduced mod p (pairwise, so intermediates stay small)."""
        ops = list(ops)
        if len(ops) <= 2:
            return self.einsum(spec, *ops)
        path, _ = np.einsum_path(spec, *ops, optimize="greedy")
        ins, out = spec.split("->")
        terms = ins.split(",")
        for pair in path[1:]:
            pair = sorted(pair, reverse=True)
            picked = [terms.pop(i) for i in pair]
            arrs = [ops.pop(i) for i in pair]
            rest = "".join(terms) + out
            keep = "".join(dict.fromkeys(l for l in "".join(picked) if l in rest))
            ops.append(self.einsum(",".join(picked) + "->" + keep, *arrs))
            terms.append(keep)
        return self.einsum(",".join(terms) + "->" + out, *ops)

    def equal(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return a == b


Q = RationalField()


def GF(p: int) -> PrimeField:
    """Return the prime field F_p (p prime, p <= 257)."""
    return PrimeField(p)


def parse_field(text: str) -> Field:
    """Parse ``q`` or ``fp:<p>``."""
    text = text.strip().lower()
    if text in ("q", "qq", "rationals"):
        return Q
    if text.startswith("fp:"):
        try:
            return GF(int(text[3:]))
        except ValueError as exc:
            raise FieldError(f"bad field spec {text!r}") from exc
    raise FieldError(f"unknown field {text!r}; expected 'q' or 'fp:<p>'")

"""Contraction plans over dense exact tensors.

A plan names one integer label per axis of each input. A label shared by two
axes is summed over (a wire); a label occurring once is a free leg and must
appear in ``output``. Pairwise contractions are chosen greedily by smallest
intermediate size unless an explicit random order is requested.
"""
from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .field import Field, Q
from .tensor import Tensor


class PlanError(ValueError):
    """Dimension mismatch on a wire, malformed labels, or a cyclic plan."""


@dataclass(frozen=True)
class ContractionPlan:
    legs: tuple[tuple[int, ...], ...]
    output: tuple[int, ...]
    # Optional per-axis polarity ("in"/"out"); enables directed-cycle detection.
    polarity: tuple[tuple[str, ...], ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "legs", tuple(tuple(l) for l in self.legs))
        object.__setattr__(self, "output", tuple(self.output))
        counts = Counter(l for legs in self.legs for l in legs)
        for lab, n in counts.items():
            if n > 2:
                raise PlanError(f"label {lab} used {n} times; hyperedges are not supported")
        out = Counter(self.output)
        if any(n > 1 for n in out.values()):
            raise PlanError("repeated output label")
        for lab in self.output:
            if counts.get(lab, 0) != 1:
                raise PlanError(f"output label {lab} must occur on exactly one input axis")
        for lab, n in counts.items():
            if n == 1 and lab not in out:
                raise PlanError(f"label {lab} is dangling (not wired and not an output)")
        if self.polarity is not None:
            self._check_acyclic()

    def _check_acyclic(self):
        where = {}
        for t, (legs, pols) in enumerate(zip(self.legs, self.polarity)):
            for lab, pol in zip(legs, pols):
                where.setdefault(lab, []).append((t, pol))
        succ = {t: set() for t in range(len(self.legs))}
        for lab, ends in where.items():
            if len(ends) != 2:
                continue
            (t1, p1), (t2, p2) = ends
            if t1 == t2:
                continue  # self-wire is a trace
            if p1 == p2:
                raise PlanError(f"wire {lab} joins two {p1}-legs")
            prod, cons = (t1, t2) if p1 == "out" else (t2, t1)
            succ[prod].add(cons)
        state = {}

        def visit(t):
            state[t] = 1
            for s in succ[t]:
                if state.get(s) == 1:
                    raise PlanError("plan wiring is cyclic")
                if s not in state:
                    visit(s)
            state[t] = 2

        for t in succ:
            if t not in state:
                visit(t)


def _trace_repeats(field: Field, arr: np.ndarray, labels: list[int]):
    seen = Counter(labels)
    if all(n == 1 for n in seen.values()):
        return arr, labels
    letters = {}
    for lab in labels:
        letters.setdefault(lab, chr(ord("a") + len(letters)))
    keep = [lab for lab in dict.fromkeys(labels) if seen[lab] == 1]
    spec = "".join(letters[l] for l in labels) + "->" + "".join(letters[l] for l in keep)
    return field.einsum(spec, arr), keep


def _pair(field: Field, a, la, b, lb):
    shared = [l for l in la if l in lb]
    ax_a = [la.index(l) for l in shared]
    ax_b = [lb.index(l) for l in shared]
    res = field.tensordot(a, b, axes=(ax_a, ax_b))
    labels = [l for l in la if l not in shared] + [l for l in lb if l not in shared]
    return res, labels


def _size(dims, la, lb):
    shared = set(la) & set(lb)
    n = 1
    for l in la + lb:
        if l not in shared:
            n *= dims[l]
    return n


def contract_arrays(plan: ContractionPlan, arrays: Sequence[np.ndarray], field: Field = Q,
                    rng: random.Random | None = None) -> np.ndarray:
    """Contract raw arrays; returns an array whose axes follow ``plan.output``."""
    if len(arrays) != len(plan.legs):
        raise PlanError(f"plan expects {len(plan.legs)} tensors, got {len(arrays)}")
    dims: dict[int, int] = {}
    for t, (arr, legs) in enumerate(zip(arrays, plan.legs)):
        if arr.ndim != len(legs):
            raise PlanError(f"tensor {t} has {arr.ndim} axes but the plan gives {len(legs)} labels")
        for lab, n in zip(legs, arr.shape):
            if dims.setdefault(lab, n) != n:
                raise PlanError(f"dimension mismatch on wire {lab}: {dims[lab]} vs {n}")
    work = [_trace_repeats(field, arr, list(legs)) for arr, legs in zip(arrays, plan.legs)]
    if not work:
        one = field.zeros(())
        one[()] = 1
        return one
    while len(work) > 1:
        if rng is not None:
            i, j = sorted(rng.sample(range(len(work)), 2))
        else:
            best = None
            for i in range(len(work)):
                for j in range(i + 1, len(work)):
                    connected = bool(set(work[i][1]) & set(work[j][1]))
                    key = (not connected, _size(dims, work[i][1], work[j][1]), i, j)
                    if best is None or key < best:
                        best = key
            i, j = best[2], best[3]
        a, la = work[i]
        b, lb = work[j]
        merged = _pair(field, a, la, b, lb)
        work = [w for k, w in enumerate(work) if k not in (i, j)] + [merged]
    arr, labels = work[0]
    perm = [labels.index(l) for l in plan.output]
    return np.ascontiguousarray(np.transpose(arr, perm)) if perm else arr


def contract(plan: ContractionPlan, inputs: Sequence[Tensor], rng: random.Random | None = None) -> Tensor:
    """Contract ``inputs`` along ``plan``; free legs keep their space and polarity."""
    field = inputs[0].field if inputs else Q
    for t in inputs:
        field.check_same(t.field)
    sig = {}
    for t, legs in zip(inputs, plan.legs):
        for (sp, pol), lab in zip(t.signature, legs):
            sig[lab] = (sp, pol)
    for t, legs in zip(inputs, plan.legs):
        for (sp, _), lab in zip(t.signature, legs):
            if sig[lab][0] != sp:
                raise PlanError(f"wire {lab} joins {sig[lab][0].name} to {sp.name}")
    arr = contract_arrays(plan, [t.data for t in inputs], field, rng)
    return Tensor([sig[l] for l in plan.output], arr, field)

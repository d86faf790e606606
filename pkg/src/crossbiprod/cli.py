"""Command-line front end.

Exit status: 0 when every requested check passes, 1 when one fails, 2 on a
usage, parse or incomplete-bundle error.
"""
from __future__ import annotations

import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dc_field
from pathlib import Path

import click

from . import catalog as cat
from . import products
from .conditions import (GATES, UnboundRole, _auto_two_sided, check, concordance, concordance_json,
                         concordance_text, gate, hypothesis, load_registry)
from .field import Field, FieldError, Q, parse_field
from .instance_io import dump_built, dump_bundle, load_built, load_bundle
from .products import Bundle, BundleError
from .structures import algebra_of, algebra_reports, antipode_reports, coalgebra_of, coalgebra_reports, \
    compatibility_reports
from .sweedler.parser import DSLError
from .tensor import ParseError

CONSTRUCTIONS = {
    "left_brzezinski": (products.left_brzezinski, True),
    "right_brzezinski": (products.right_brzezinski, True),
    "two_sided_crossed": (products.two_sided_crossed, True),
    "smash_product2": (products.smash_product2, False),
    "smash_coproduct2": (products.smash_coproduct2, False),
    "tensor_coalgebra3": (products.tensor_coalgebra3, False),
    "two_sided_bialgebra": (products.two_sided_bialgebra, True),
    "double_crossed_biproduct": (products.double_crossed_biproduct, False),
}
AXIOMS = ("assoc", "coassoc", "bialg", "antipode")


class UsageProblem(click.ClickException):
    exit_code = 2


@dataclass
class Record:
    id: str
    passed: bool
    witness: str | None = None
    detail: str = ""
    seconds: float | None = None

    def as_dict(self, timings: bool) -> dict:
        d = {"id": self.id, "verdict": "pass" if self.passed else "fail", "witness": self.witness,
             "detail": self.detail}
        if timings:
            d["seconds"] = round(self.seconds or 0.0, 3)
        return d


@dataclass
class RunReport:
    command: str
    field: str
    records: list[Record] = dc_field(default_factory=list)

    @property
    def exit_code(self) -> int:
        return 0 if all(r.passed for r in self.records) else 1

    def as_dict(self, timings: bool = False) -> dict:
        return {"command": self.command, "field": self.field,
                "records": [r.as_dict(timings) for r in self.records],
                "status": "pass" if self.exit_code == 0 else "fail", "exit": self.exit_code}

    def render(self, as_json: bool, timings: bool = False) -> str:
        if as_json:
            return json.dumps(self.as_dict(timings), indent=2, ensure_ascii=False)
        rows = [("ID", "VERDICT", "WITNESS", "DETAIL") + (("SECONDS",) if timings else ())]
        for r in self.records:
            row = (r.id, "pass" if r.passed else "fail", r.witness or "-", r.detail or "-")
            rows.append(row + ((f"{r.seconds or 0.0:.3f}",) if timings else ()))
        widths = [max(len(row[i]) for row in rows) for i in range(len(rows[0]))]
        lines = [f"command: {self.command}", f"field: {self.field}"]
        lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows]
        lines.append(f"status: {'pass' if self.exit_code == 0 else 'fail'} (exit {self.exit_code})")
        return "\n".join(lines)


def _witness_text(w) -> str | None:
    return None if w is None else f"{w.input}: {w.lhs} != {w.rhs}"


def _field_name(f: Field) -> str:
    return f"fp:{f.p}" if f.characteristic else "q"


# -- instance resolution ------------------------------------------------------------------------

def _random_spec(text: str, f: Field | None, seed: int) -> cat.RandomSpec:
    try:
        dims = tuple(int(x) for x in text.split(",")) if text else (2, 2, 2)
    except ValueError:
        raise UsageProblem(f"bad dimensions {text!r}; expected random:a,h,b") from None
    if f is not None and not f.characteristic:
        raise UsageProblem("random instances live over F_p; pass --field fp:2 or fp:3")
    return cat.RandomSpec(dims=dims, p=f.p if f is not None else 2, seed=seed)


def resolve_instance(name: str, f: Field | None, seed: int) -> tuple[Bundle, str]:
    """A path to an instance file, a catalog entry name, or ``random:a,h,b``."""
    path = Path(name)
    if path.is_file():
        try:
            return load_bundle(path.read_text(encoding="utf-8"), f), f"file {name}"
        except ParseError as exc:
            raise UsageProblem(f"{name}: {exc}") from None
        except FieldError as exc:
            raise UsageProblem(f"{name}: {exc}") from None
    if name.startswith("random"):
        spec = _random_spec(name.partition(":")[2], f, seed)
        try:
            return cat.random_bundle(spec), f"random bundle dims={spec.dims} p={spec.p} seed={spec.seed}"
        except cat.InfeasibleSpec as exc:
            raise UsageProblem(str(exc)) from None
    try:
        return cat.entry(name, f or Q).bundle, f"catalog {name}"
    except KeyError:
        raise UsageProblem(f"{name!r} is neither an instance file nor a catalog entry") from None


def _run(fn, *args):
    t = time.perf_counter()
    try:
        out = fn(*args)
    except (UnboundRole, BundleError) as exc:
        raise UsageProblem(f"incomplete bundle: {exc}") from None
    return out, time.perf_counter() - t


def _check_one(cid: str, bundle: Bundle) -> Record:
    if cid in GATES:
        g, dt = _run(gate, cid, bundle)
        first = g.first_failure()
        parts = [f"prereqs {'ok' if g.prereqs_ok else 'fail'}", f"main {'ok' if g.main_ok else 'fail'}",
                 f"oracle {'ok' if g.oracle_ok else 'fail'}", "consistent" if g.consistent else "INCONSISTENT"]
        if first is not None:
            parts.append(f"first failure {first.id}")
        w = first.witness if first is not None else None
        return Record(cid, g.passed, _witness_text(w), ", ".join(parts), dt)
    if cid.startswith("st:"):
        r, dt = _run(hypothesis, cid, bundle)
    else:
        r, dt = _run(check, cid, bundle, True)
    return Record(cid, r.passed, _witness_text(r.witness), r.detail, dt)


# -- commands -----------------------------------------------------------------------------------

def _parse_field_option(ctx, param, value):
    if value is None:
        return None
    try:
        return parse_field(value)
    except FieldError as exc:
        raise click.BadParameter(str(exc)) from None


field_option = click.option("--field", "field", callback=_parse_field_option, default=None,
                            help="q or fp:<p>; overrides the field of the instance")
seed_option = click.option("--seed", default=0, show_default=True, help="seed for random:a,h,b instances")
json_option = click.option("--json", "as_json", is_flag=True, help="machine-readable report")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main():
    """Exact workbench for crossed products and double crossed biproducts."""


@main.command()
@click.argument("construction", type=click.Choice(sorted(CONSTRUCTIONS)))
@click.argument("instance")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None, help="write here instead of stdout")
@click.option("--antipode", is_flag=True, help="also serialize S̄ (bialgebra constructions)")
@field_option
@seed_option
def build(construction, instance, output, antipode, field, seed):
    """Build CONSTRUCTION on INSTANCE and print the structure file."""
    bundle, origin = resolve_instance(instance, field, seed)
    fn, lifts = CONSTRUCTIONS[construction]
    if lifts and not all(r in bundle for r in ("G", "R", "T")):
        bundle, _ = _run(_auto_two_sided, bundle)
    built, _ = _run(fn, bundle)
    s = None
    if antipode:
        try:
            s = products.sbar(built, bundle)
        except (BundleError, AttributeError) as exc:
            raise UsageProblem(f"cannot form S̄: {exc}") from None
    text = dump_built(built, f"built {construction} from {origin}\n{built.provenance}".rstrip(), s)
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@main.command("check")
@click.argument("ids", nargs=-1, required=True)
@click.argument("instance")
@field_option
@seed_option
@json_option
@click.option("--jobs", default=1, show_default=True, help="worker threads; output order does not depend on it")
@click.option("--timings", is_flag=True, help="add wall times (reports are then not byte-stable)")
def check_cmd(ids, instance, field, seed, as_json, jobs, timings):
    """Check gate or condition IDS on INSTANCE."""
    reg = load_registry()
    for cid in ids:
        if cid not in GATES and not cid.startswith("st:"):
            try:
                reg.resolve(cid)
            except KeyError:
                raise UsageProblem(f"unknown gate or condition {cid!r}") from None
    bundle, _ = resolve_instance(instance, field, seed)
    ordered = [c for c in ids if c in GATES] + [c for c in ids if c not in GATES]
    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as ex:
            records = list(ex.map(lambda c: _check_one(c, bundle), ordered))
    else:
        records = [_check_one(c, bundle) for c in ordered]
    report = RunReport("check " + " ".join(ids) + " " + instance, _field_name(bundle.field), records)
    click.echo(report.render(as_json, timings))
    sys.exit(report.exit_code)


def _oracle_reports(axiom: str, built):
    s = built.structure
    if axiom == "assoc":
        return algebra_reports(algebra_of(s))
    if axiom == "coassoc":
        return coalgebra_reports(coalgebra_of(s))[:3]
    if axiom == "bialg":
        return compatibility_reports(s)
    anti = getattr(s, "antipode", None)
    if anti is None:
        raise UsageProblem("the structure file carries no antipode tensor (build with --antipode)")
    return antipode_reports(s.bialgebra, anti)


@main.command()
@click.argument("axiom", type=click.Choice(AXIOMS))
@click.argument("structure_file", type=click.Path(exists=True, dir_okay=False))
@field_option
@json_option
@click.option("--timings", is_flag=True)
def oracle(axiom, structure_file, field, as_json, timings):
    """Brute-force AXIOM on every basis tuple of a built structure."""
    try:
        built = load_built(Path(structure_file).read_text(encoding="utf-8"), field)
    except (ParseError, FieldError) as exc:
        raise UsageProblem(f"{structure_file}: {exc}") from None
    t = time.perf_counter()
    try:
        reports = _oracle_reports(axiom, built)
    except AttributeError:
        raise UsageProblem(f"{built.name} has no structure for the {axiom} axiom") from None
    dt = time.perf_counter() - t
    records = [Record(f"{axiom}:{r.id}", r.passed, _witness_text(r.witness), r.detail, dt) for r in reports]
    report = RunReport(f"oracle {axiom} {structure_file}", _field_name(built.field), records)
    click.echo(report.render(as_json, timings))
    sys.exit(report.exit_code)


@main.group("catalog")
def catalog_group():
    """Built-in instances."""


@catalog_group.command("list")
@json_option
def catalog_list(as_json):
    rows = [(e.name, e.description) for e in cat.entries()]
    if as_json:
        click.echo(json.dumps([{"name": n, "description": d} for n, d in rows], indent=2, ensure_ascii=False))
        return
    w = max(len(n) for n, _ in rows)
    for n, d in rows:
        click.echo(f"{n.ljust(w)}  {d}")


@catalog_group.command("dump")
@click.argument("name")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None)
@field_option
@seed_option
def catalog_dump(name, output, field, seed):
    """Write the instance file of catalog entry NAME (or random:a,h,b)."""
    if Path(name).is_file():
        raise UsageProblem(f"{name!r} is a file, not a catalog entry")
    bundle, origin = resolve_instance(name, field, seed)
    text = dump_bundle(bundle, origin)
    if output:
        Path(output).write_text(text, encoding="utf-8")
    else:
        click.echo(text, nl=False)


@main.command("concordance")
@json_option
@click.option("--aux", is_flag=True, help="include auxiliary ax: entries")
def concordance_cmd(as_json, aux):
    """List every condition id with its location, verbatim anchor and DSL."""
    try:
        rows = concordance(include_auxiliary=aux)
    except (DSLError, ParseError) as exc:
        raise UsageProblem(f"registry does not parse: {exc}") from None
    click.echo(concordance_json(rows) if as_json else concordance_text(rows))


if __name__ == "__main__":  # pragma: no cover
    main()

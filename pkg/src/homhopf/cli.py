"""Command-line front end.

Exit codes: 0 every check passed, 1 a mathematical check failed, 2 the input
could not be read or has the wrong shape.  Skipped checks (for example the
inverse braiding when S is singular) count as passes unless --strict is given.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import catalog, serialize
from .covmonoidal import braiding_bicov, braiding_checks, braiding_closed_forms, hexagons_bicov, tensor_over_h
from .errors import (ShapeError, SingularAntipodeError, StructuralError, TwistError, UnverifiedInputError)
from .exactlin import Matrix, field_from_spec
from .homcore import (HomAlgebra, HomBialgebra, HomCoalgebra, HomHopfAlgebra, VerificationReport,
                      verify_hom_algebra, verify_hom_bialgebra, verify_hom_coalgebra, verify_hom_hopf,
                      yau_twist)
from .homrep import (HomRepresentation, coinvariants_left, coinvariants_right, projector_left,
                     projector_right, verify_bicovariant, verify_bimodule, verify_comodule,
                     verify_left_covariant, verify_module, verify_right_covariant)
from .serialize import FormatError
from .yd import (YDModule, equivalence_round_trips, phi2_checks, phi2_coherence, verify_braided_equivalence,
                 verify_yd, yd_braiding, yd_braiding_checks, yd_hexagons)

EXIT_PASS, EXIT_FAIL, EXIT_ERROR = 0, 1, 2

PREBRAIDED = "pass (prebraided: inverse braiding unavailable, antipode not invertible)"


class _Usage(Exception):
    pass


# ---------------------------------------------------------------- verification by kind

def verify_structure(obj) -> VerificationReport:
    if isinstance(obj, HomHopfAlgebra):
        return verify_hom_hopf(obj)
    if isinstance(obj, HomBialgebra):
        return verify_hom_bialgebra(obj)
    if isinstance(obj, HomAlgebra):
        return verify_hom_algebra(obj)
    if isinstance(obj, HomCoalgebra):
        return verify_hom_coalgebra(obj)
    rep = VerificationReport().extend(verify_hom_hopf(obj.over), prefix="H: ")
    if isinstance(obj, YDModule):
        return rep.extend(verify_yd(obj))
    m = obj
    kind = serialize.representation_kind(m)
    if kind == "module":
        return rep.extend(verify_module(m, "left" if m.has("left_action") else "right"))
    if kind == "comodule":
        rep.extend(verify_comodule(m, "left" if m.has("left_coaction") else "right"))
        return rep
    if kind == "bimodule":
        return rep.extend(verify_bimodule(m))
    if m.has("left_coaction", "right_coaction"):
        return rep.extend(verify_bicovariant(m))
    if m.has("left_coaction"):
        return rep.extend(verify_left_covariant(m))
    return rep.extend(verify_right_covariant(m))


def _verdict(rep: VerificationReport, strict: bool) -> tuple[str, int]:
    if not rep.passed:
        return "fail", EXIT_FAIL
    if rep.strict_passed():
        return "pass", EXIT_PASS
    if strict:
        return "fail (skipped checks under --strict)", EXIT_FAIL
    return "pass (with skipped checks)", EXIT_PASS


# ---------------------------------------------------------------- output

class Run:
    """Collects what a command produced and writes it in the chosen format."""

    def __init__(self, args, command: str):
        self.args = args
        self.command = command
        self.inputs: list[str] = []
        self.report = VerificationReport()
        self.data: dict = {}
        self.verdict = None
        self.code = None

    @property
    def field(self):
        return field_from_spec(self.args.field)

    def load(self, path: str):
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
        self.inputs.append(text)
        obj = serialize.loads(text)
        f = obj.field
        if f != self.field and self.args.field_given:
            raise FormatError(f"file is over {f.spec} but --field is {self.field.spec}", path)
        return obj

    def finish(self, verdict=None, code=None) -> int:
        if verdict is None:
            verdict, code = _verdict(self.report, self.args.strict)
        self.verdict, self.code = verdict, code
        doc = serialize.report_document(self.command, self.report, field=self._field_spec(), seed=self.args.seed,
                                        inputs=self.inputs, verdict=verdict, data=self.data)
        out = self.args.output_stream
        if self.args.out == "json":
            out.write(serialize.dumps(doc))
        else:
            out.write(render_text(doc))
        fig = getattr(self.args, "figure", None)
        if fig:
            self.render_figure(fig)
        return code

    def _field_spec(self) -> str:
        return self.data.pop("_field", None) or self.field.spec

    def render_figure(self, path: str):
        from .figures import check_chart
        check_chart(self.report.checks, path, title=self.command)


def render_text(doc: dict) -> str:
    """Tab-delimited: header comments, one line per check, then the verdict."""
    lines = [f"# tool\t{doc['tool']} {doc['tool_version']}", f"# command\t{doc['command']}",
             f"# field\t{doc['field']}", f"# seed\t{'' if doc['seed'] is None else doc['seed']}"]
    lines += [f"# input\t{d}" for d in doc["inputs"]]
    lines.append("status\tcheck\twitness\tdetail")
    for c in doc["checks"]:
        w = c.get("witness")
        wt = "" if w is None else f"basis={tuple(w['basis'])} residual=[{', '.join(w['residual'])}]"
        lines.append(f"{c['status']}\t{c['name']}\t{wt}\t{c.get('detail', '')}")
    for key, value in doc["data"].items():
        lines.append(f"# data\t{key}\t{json.dumps(value, ensure_ascii=False)}")
    lines.append(f"verdict\t{doc['verdict']}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- commands

def cmd_verify(args) -> int:
    run = Run(args, "verify")
    obj = run.load(args.path)
    run.data["_field"] = obj.field.spec
    run.data["kind"] = serialize.structure_kind(obj)
    run.report = verify_structure(obj)
    return run.finish()


def _load_automorphism(run: Run, path: str) -> Matrix:
    with open(path, encoding="utf-8") as fh:
        text = fh.read()
    run.inputs.append(text)
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(e.msg, f"{path} line {e.lineno} column {e.colno}") from None
    serialize._check_keys(doc, ("format_version", "kind", "field", "dim", "alpha"),
                          ("format_version", "kind", "field", "dim", "alpha"), "")
    if doc["kind"] != "automorphism" or doc["format_version"] != serialize.FORMAT_VERSION:
        raise FormatError("expected an automorphism file of the current format version", "kind")
    f = serialize._field(doc, "")
    d = serialize._count(doc, "dim", "")
    return serialize._read_matrix(doc, "alpha", f, d, d, "")


def automorphism_document(m: Matrix) -> dict:
    return {"format_version": serialize.FORMAT_VERSION, "kind": "automorphism", "field": m.field.spec,
            "dim": m.rows, "alpha": serialize._matrix(m)}


def cmd_twist(args) -> int:
    run = Run(args, "twist")
    h = run.load(args.path)
    aut = _load_automorphism(run, args.aut)
    if not isinstance(h, HomHopfAlgebra):
        raise FormatError("twist needs a hom_hopf file", args.path)
    run.data["_field"] = h.field.spec
    run.report.extend(verify_hom_hopf(h), prefix="input: ")
    if not run.report.passed:
        return run.finish()
    try:
        t = yau_twist(h, aut)
    except TwistError as e:
        run.report.add("automorphism admissible", False, detail=str(e))
        return run.finish()
    run.report.add("automorphism admissible", True)
    run.report.extend(verify_hom_hopf(t), prefix="twisted: ")
    text = serialize.emit(t)
    if args.emit:
        with open(args.emit, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        run.data["structure"] = json.loads(text)
    return run.finish()


def _need_rep(obj, path, what="a covariant bimodule"):
    if not isinstance(obj, HomRepresentation):
        raise FormatError(f"expected {what}", path)
    return obj


def cmd_coinv(args) -> int:
    run = Run(args, "coinv")
    m = run.load(args.path)
    if isinstance(m, YDModule):
        m = m.representation
    m = _need_rep(m, args.path)
    run.data["_field"] = m.field.spec
    verify = verify_left_covariant if args.side == "left" else verify_right_covariant
    run.report.extend(verify(m) if m.has(f"{args.side}_coaction") and m.has("left_action", "right_action")
                      else _missing(f"{args.side} covariant structure"))
    if not run.report.passed:
        return run.finish()
    sub = coinvariants_left(m) if args.side == "left" else coinvariants_right(m)
    P = projector_left(m) if args.side == "left" else projector_right(m)
    f = m.field
    run.report.compare("projector idempotent", P @ P, P, [m.dim])
    run.report.compare("projector image is the coinvariants", P @ sub.inclusion(), sub.inclusion(), [sub.dim])
    run.report.add("projector rank = dim coinvariants", P.rank() == sub.dim, detail=f"rank {P.rank()}")
    run.data.update(side=args.side, dim=m.dim, coinvariant_dim=sub.dim,
                    basis=[[f.format(x) for x in col] for col in sub.inclusion().a.T],
                    projector=serialize._matrix(P))
    return run.finish()


def _missing(what: str) -> VerificationReport:
    rep = VerificationReport()
    rep.add(f"has {what}", False)
    return rep


def cmd_tensor_h(args) -> int:
    run = Run(args, "tensor-h")
    a = _need_rep(run.load(args.path_a), args.path_a, "a bimodule")
    b = _need_rep(run.load(args.path_b), args.path_b, "a bimodule")
    run.data["_field"] = a.field.spec
    for tag, m in (("A", a), ("B", b)):
        run.report.extend(verify_structure(m), prefix=f"{tag}: ")
    if not run.report.passed:
        return run.finish()
    try:
        t = tensor_over_h(a, b)
    except StructuralError as e:
        run.report.add("tensor over H well defined", False, e.witness, str(e))
        return run.finish()
    run.report.extend(t.descent)
    run.data.update(dim_a=a.dim, dim_b=b.dim, dim_ambient=a.dim * b.dim, dim_tensor=t.dim,
                    relations_rank=a.dim * b.dim - t.dim)
    text = serialize.emit(t.structure)
    if args.emit:
        with open(args.emit, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        run.data["structure"] = json.loads(text)
    return run.finish()


def _singular(h) -> bool:
    try:
        h.S_inv
        return False
    except SingularAntipodeError:
        return True


def cmd_braid_check(args) -> int:
    run = Run(args, "braid-check")
    a = run.load(args.path_a)
    b = run.load(args.path_b)
    c = run.load(args.third) if args.third else b
    run.data["_field"] = a.field.spec
    run.data["category"] = args.category
    for tag, m in (("A", a), ("B", b), ("C", c)):
        if tag == "C" and not args.third:
            continue
        run.report.extend(verify_structure(m), prefix=f"{tag}: ")
    if args.category == "yd":
        if not all(isinstance(x, YDModule) for x in (a, b, c)):
            raise FormatError("--category yd needs yd files")
        if not run.report.passed:
            return run.finish()
        run.report.extend(yd_braiding_checks(a, b))
        run.report.extend(yd_hexagons(a, b, c))
        braid = yd_braiding(a, b)
    else:
        a, b, c = (x.representation if isinstance(x, YDModule) else x for x in (a, b, c))
        a, b, c = (_as_bicov(x) for x in (a, b, c))
        if not run.report.passed:
            return run.finish()
        if not all(x.flags.is_bicovariant for x in (a, b, c)):
            run.report.add("inputs bicovariant", False)
            return run.finish()
        try:
            run.report.extend(braiding_checks(a, b))
            run.report.extend(braiding_closed_forms(a, b))
            run.report.extend(hexagons_bicov(a, b, c))
            braid = braiding_bicov(a, b)
        except StructuralError as e:
            run.report.add("braiding well defined", False, e.witness, str(e))
            return run.finish()
    run.data["braiding_shape"] = list(braid.shape)
    if args.figure:
        from .figures import matrix_heatmap
        matrix_heatmap(braid, args.figure, title=f"braiding ({args.category})", xlabel="source basis",
                       ylabel="target basis")
        args.figure = None
    if run.report.passed and _singular(a.over):
        return run.finish(PREBRAIDED if not args.strict else "fail (skipped checks under --strict)",
                          EXIT_PASS if not args.strict else EXIT_FAIL)
    return run.finish()


def _as_bicov(x):
    if isinstance(x, HomRepresentation):
        return x
    raise FormatError("--category bicov needs covariant files")


def cmd_yd_check(args) -> int:
    run = Run(args, "yd-check")
    v = run.load(args.path)
    if not isinstance(v, YDModule):
        raise FormatError("expected a yd file", args.path)
    run.data["_field"] = v.field.spec
    run.report = verify_structure(v)
    return run.finish()


def cmd_equivalence_check(args) -> int:
    run = Run(args, "equivalence-check")
    v = run.load(args.path_v)
    w = run.load(args.path_w)
    for tag, x, p in (("V", v, args.path_v), ("W", w, args.path_w)):
        if not isinstance(x, YDModule):
            raise FormatError("expected a yd file", p)
        run.report.extend(verify_structure(x), prefix=f"{tag}: ")
    run.data["_field"] = v.field.spec
    if not run.report.passed:
        return run.finish()
    run.report.extend(phi2_checks(v, w))
    run.report.extend(phi2_coherence(v, w, v))
    run.report.extend(verify_braided_equivalence(v, w))
    run.report.extend(equivalence_round_trips(v), prefix="V: ")
    run.report.extend(equivalence_round_trips(w), prefix="W: ")
    h = v.over
    run.data.update(dim_H=h.dim, dim_V=v.dim, dim_W=w.dim,
                    dim_tensor_over_H=tensor_over_h(_F(v), _F(w)).dim)
    return run.finish()


def _F(v):
    from .yd import functor_F
    return functor_F(v)


def _params(items) -> dict:
    out = {}
    for item in items or []:
        if "=" not in item:
            raise _Usage(f"parameter {item!r} is not of the form key=value")
        k, v = item.split("=", 1)
        out[k] = v
    return out


def cmd_catalog(args) -> int:
    if args.action == "list":
        for name, (params, desc) in catalog.INSTANCES.items():
            args.output_stream.write(f"{name}\t{params}\t{desc}\n")
        return EXIT_PASS
    if not args.name:
        raise _Usage("catalog emit needs an instance name")
    obj = catalog.build_instance(args.name, _params(args.params), field_from_spec(args.field))
    args.output_stream.write(serialize.emit(obj))
    return EXIT_PASS


FUZZ_FAMILIES = ("group_algebra", "cyclic_twist", "sweedler", "sweedler_twist", "graded_yd", "trivial_yd",
                 "regular_bicovariant")
_FUZZ_DEFAULTS = {"group_algebra": {"n": "3"}, "cyclic_twist": {"n": "3", "k": "2"},
                  "sweedler_twist": {"c": "2"}, "graded_yd": {"n": "2", "d": "1", "chi": "-1"}}


def _perturbable(obj) -> list[str]:
    if isinstance(obj, HomHopfAlgebra):
        return ["mul", "unit", "comul", "counit", "antipode", "alpha"]
    if isinstance(obj, YDModule):
        return ["mu", "action", "coaction"]
    return ["mu"] + [k for k in ("left_action", "right_action", "left_coaction", "right_coaction")
                     if getattr(obj, k) is not None]


def fuzz_trials(family: str, params: dict, field, seed: int, trials: int) -> list[dict]:
    """Seeded single-entry perturbations, one record per trial in trial order."""
    base = catalog.build_instance(family, {**_FUZZ_DEFAULTS.get(family, {}), **params}, field)
    names = _perturbable(base)
    rng = np.random.default_rng(seed)
    out = []
    for t in range(trials):
        name = names[int(rng.integers(len(names)))]
        size = getattr(base, name).a.size
        index = int(rng.integers(size))
        if field.characteristic:
            delta = int(rng.integers(1, field.characteristic))
        else:
            delta = int(rng.choice([-3, -2, -1, 1, 2, 3]))
        bad = catalog.perturb(base, name, index, delta)
        try:
            rep = verify_structure(bad)
            failures = [c.name for c in rep.failures]
        except (ShapeError, np.linalg.LinAlgError) as e:  # pragma: no cover - defensive
            failures = [f"error: {e}"]
        out.append({"trial": t, "tensor": name, "index": index, "delta": str(delta),
                    "exit_class": EXIT_FAIL if failures else EXIT_PASS, "failures": failures})
    return out


def cmd_fuzz(args) -> int:
    run = Run(args, "fuzz")
    seed = 0 if args.seed is None else args.seed
    args.seed = seed
    records = fuzz_trials(args.family, _params(args.params), run.field, seed, args.trials)
    for r in records:
        run.report.add(f"trial {r['trial']}: {r['tensor']}[{r['index']}] += {r['delta']} detected",
                       r["exit_class"] == EXIT_FAIL,
                       detail="; ".join(r["failures"][:3]))
    run.data.update(family=args.family, trials=args.trials, records=records)
    return run.finish()


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", default=None, help="q or fp:<p> (default q)")
    common.add_argument("--seed", type=int, default=None, help="seed recorded in the report")
    common.add_argument("--out", choices=("json", "text"), default="text")
    common.add_argument("--strict", action="store_true", help="treat skipped checks as failures")
    common.add_argument("--figure", default=None, metavar="PATH", help="also render a figure to PATH")

    p = argparse.ArgumentParser(prog="homhopf", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify", parents=[common], help="run the verifier matching the file kind")
    s.add_argument("path")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("twist", parents=[common], help="Yau twist of a classical Hopf algebra")
    s.add_argument("path")
    s.add_argument("--aut", required=True, help="automorphism file")
    s.add_argument("--emit", default=None, metavar="PATH", help="write the twisted structure here")
    s.set_defaults(func=cmd_twist)

    s = sub.add_parser("coinv", parents=[common], help="coinvariants and projector of a covariant bimodule")
    s.add_argument("path")
    s.add_argument("--side", choices=("left", "right"), default="left")
    s.set_defaults(func=cmd_coinv)

    s = sub.add_parser("tensor-h", parents=[common], help="tensor product over H of two bimodules")
    s.add_argument("path_a")
    s.add_argument("path_b")
    s.add_argument("--emit", default=None, metavar="PATH", help="write the product structure here")
    s.set_defaults(func=cmd_tensor_h)

    s = sub.add_parser("braid-check", parents=[common], help="braiding, inverse, closed forms and hexagons")
    s.add_argument("path_a")
    s.add_argument("path_b")
    s.add_argument("--third", default=None, help="third object for the hexagons (default: B)")
    s.add_argument("--category", choices=("bicov", "yd"), default="bicov")
    s.set_defaults(func=cmd_braid_check)

    s = sub.add_parser("yd-check", parents=[common], help="verify a Yetter-Drinfeld module")
    s.add_argument("path")
    s.set_defaults(func=cmd_yd_check)

    s = sub.add_parser("equivalence-check", parents=[common], help="phi2, round trips and braided equivalence")
    s.add_argument("path_v")
    s.add_argument("path_w")
    s.set_defaults(func=cmd_equivalence_check)

    s = sub.add_parser("catalog", parents=[common], help="list or emit catalog instances")
    s.add_argument("action", choices=("list", "emit"))
    s.add_argument("name", nargs="?")
    s.add_argument("params", nargs="*", help="key=value parameters")
    s.set_defaults(func=cmd_catalog)

    s = sub.add_parser("fuzz", parents=[common], help="seeded single-entry perturbation trials")
    s.add_argument("--family", choices=FUZZ_FAMILIES, default="cyclic_twist")
    s.add_argument("--trials", type=int, default=25)
    s.add_argument("--param", dest="params", action="append", help="key=value instance parameter")
    s.set_defaults(func=cmd_fuzz)
    return p


def main(argv=None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else EXIT_PASS
    args.field_given = args.field is not None
    args.field = args.field or "q"
    args.output_stream = stdout
    try:
        field_from_spec(args.field)
        return args.func(args)
    except (FormatError, ShapeError, _Usage, OSError, ValueError) as e:
        if isinstance(e, UnverifiedInputError):
            stdout.write(f"verdict\tfail\t{e}\n")
            return EXIT_FAIL
        sys.stderr.write(f"homhopf: error: {e}\n")
        return EXIT_ERROR
    except StructuralError as e:
        sys.stderr.write(f"homhopf: {e}\n")
        return EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

"""Command-line front end: ``bihomconf COMMAND [options]``.

Exit status is 0 when every verdict holds (or a solver ran), 1 on a
mathematical violation and 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from importlib import resources
from pathlib import Path
from typing import Callable, Dict, List, Optional, Tuple

from . import __version__
from .algebra import Algebra, AssocConformal, CheckReport, DMap, check_algebra, check_associative, parity_name
from .cohomology import (Cochain, check_d_squared, check_o_operator, cocycle_space, generic_cochain,
                         homomorphism_residual, induced_bracket, select_variant, solve_cochain_space,
                         truncated_cohomology_report)
from .constructions import (HypothesisError, SuperAlgebraFD, composition_twist, cur, cur_associative,
                            direct_sum, from_associative, power_twist, semidirect, tensor_superalgebra,
                            yau_twist)
from .derivations import (ConfMap, WitnessSolver, classify_map, is_derivation, solve_class,
                          solve_generalized, solve_quasiderivations)
from .dsl import DSLError, Document, MapDef, OOperatorDef, parse, serialize_algebra
from .library import BUILTINS
from .representations import RepModule, adjoint_module, check_module

SCHEMA = "bihomconf-report/1"


class UsageError(Exception):
    pass


def builtin_text(name: str) -> str:
    return resources.files("bihomconf").joinpath("data", f"{name}.alg").read_text(encoding="utf-8")


def load_document(args) -> Document:
    if args.input and args.builtin:
        raise UsageError("give either --input or --builtin, not both")
    if args.builtin:
        if args.builtin not in BUILTINS:
            raise UsageError(f"unknown builtin {args.builtin!r}; choose from {', '.join(BUILTINS)}")
        return parse(builtin_text(args.builtin))
    if not args.input:
        raise UsageError("an input is required (--input FILE or --builtin NAME)")
    try:
        text = Path(args.input).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {args.input}: {exc.strerror or exc}") from None
    return parse(text)


def _algebra(doc: Document, name: Optional[str]) -> Tuple[str, Algebra]:
    if name:
        return name, doc.get(name, Algebra)
    return doc.first(Algebra)


def _module(doc: Document, A: Algebra, name: Optional[str]) -> Tuple[str, RepModule]:
    if name:
        M = doc.get(name, RepModule)
        if M.algebra is not A:
            raise UsageError(f"module {name!r} is not over the selected algebra")
        return name, M
    return "adjoint", adjoint_module(A)


def _confmap(doc: Document, name: Optional[str], A: Algebra) -> Tuple[str, ConfMap]:
    if name:
        d = doc.get(name, MapDef)
    else:
        name, d = doc.first(MapDef)
    if doc.get(d.algebra) is not A:
        raise UsageError(f"map {name!r} is not on the selected algebra")
    return name, d.map


def _endomorphism(doc: Document, name: str, A: Algebra) -> DMap:
    _, f = _confmap(doc, name, A)
    if any(v != 0 for im in f.images for c in im for v in c.variables()):
        raise UsageError(f"map {name!r} depends on x; twisting needs a Q[d]-linear map")
    if f.parity:
        raise UsageError(f"map {name!r} must be even")
    return DMap(f.images, A.rank)


def _pair(value: Optional[str], what: str) -> List[str]:
    parts = [p.strip() for p in (value or "").split(",") if p.strip()]
    if len(parts) != 2:
        raise UsageError(f"{what} expects two comma-separated map names")
    return parts


def _parities(value: str) -> List[int]:
    return {"even": [0], "odd": [1], "both": [0, 1], "0": [0], "1": [1]}[value]


def _render_maps(maps: List[ConfMap], A: Algebra) -> List[dict]:
    return [{"parity": parity_name(f.parity), "images": f.render(A.names)} for f in maps]


def _built(name: str, B: Algebra) -> Tuple[bool, dict]:
    rep = B.check()
    return rep.ok, {"result_name": name, "result": serialize_algebra(name, B), "check": rep.to_dict(B.names)}


# --- commands -------------------------------------------------------------------

def cmd_check(doc, args):
    name, A = _algebra(doc, args.algebra)
    rep = A.check()
    kind = "associative" if isinstance(A, AssocConformal) else "lie"
    return rep.ok, {"algebra": name, "kind": kind, "report": rep.to_dict(A.names)}


def cmd_check_assoc(doc, args):
    name, A = _algebra(doc, args.algebra)
    if not isinstance(A, AssocConformal):
        raise UsageError(f"{name!r} is not declared associative")
    rep = check_associative(A)
    return rep.ok, {"algebra": name, "report": rep.to_dict(A.names)}


def cmd_check_module(doc, args):
    name, A = _algebra(doc, args.algebra)
    mname, M = _module(doc, A, args.module)
    rep = check_module(A, M)
    return rep.ok, {"algebra": name, "module": mname, "report": rep.to_dict(M.names)}


def cmd_twist(doc, args):
    name, A = _algebra(doc, args.algebra)
    a, b = (_endomorphism(doc, n, A) for n in _pair(args.maps, "--maps"))
    return _built(f"{name}_twisted", yau_twist(A, a, b))


def cmd_compose_twist(doc, args):
    name, A = _algebra(doc, args.algebra)
    if args.power is not None:
        return _built(f"{name}_power{args.power}", power_twist(A, args.power))
    a, b = (_endomorphism(doc, n, A) for n in _pair(args.maps, "--maps"))
    return _built(f"{name}_composed", composition_twist(A, a, b))


def cmd_dsum(doc, args):
    name, A = _algebra(doc, args.algebra)
    if not args.other:
        raise UsageError("dsum needs --other ALGEBRA")
    B = doc.get(args.other, Algebra)
    return _built(f"{name}_plus_{args.other}", direct_sum(A, B))


def _superalgebra(doc, name):
    if name:
        return name, doc.get(name, SuperAlgebraFD)
    return doc.first(SuperAlgebraFD)


def cmd_cur(doc, args):
    name, g = _superalgebra(doc, args.superalgebra)
    if args.associative:
        return _built(f"cur_{name}", cur_associative(g))
    return _built(f"cur_{name}", cur(g))


def cmd_tensor(doc, args):
    name, A = _algebra(doc, args.algebra)
    bname, B = _superalgebra(doc, args.superalgebra)
    return _built(f"{name}_tensor_{bname}", tensor_superalgebra(A, B))


def cmd_from_assoc(doc, args):
    name, A = _algebra(doc, args.algebra)
    if not isinstance(A, AssocConformal):
        raise UsageError(f"{name!r} is not declared associative")
    return _built(f"{name}_commutator", from_associative(A))


def cmd_semidirect(doc, args):
    name, A = _algebra(doc, args.algebra)
    mname, M = _module(doc, A, args.module)
    return _built(f"{name}_semidirect_{mname}", semidirect(A, M))


def _variant_info(A, M, arities, deg):
    vs = select_variant(A, M, arities, deg)
    return vs, vs.to_dict()


def cmd_d2check(doc, args):
    name, A = _algebra(doc, args.algebra)
    mname, M = _module(doc, A, args.module)
    vs, info = _variant_info(A, M, [args.n], args.deg)
    variant = vs.chosen
    rows, ok = [], variant is not None
    for parity in _parities(args.parity):
        space = solve_cochain_space(A, M, args.n, parity, args.deg)
        row = {"parity": parity_name(parity), "cochain_dimension": len(space)}
        if space and variant is not None:
            rep = check_d_squared(A, M, generic_cochain(space), variant)
            row["d_squared"] = rep.to_dict(M.names)
            ok = ok and rep.ok
        rows.append(row)
    return ok, {"algebra": name, "module": mname, "n": args.n, "degree_bound": args.deg,
                "variant_search": info, "results": rows}


def _render_cochain(c: Cochain) -> Dict[str, str]:
    return c.render()


def cmd_cocycles(doc, args):
    name, A = _algebra(doc, args.algebra)
    mname, M = _module(doc, A, args.module)
    vs, info = _variant_info(A, M, [args.n], args.deg)
    if vs.chosen is None:
        return False, {"algebra": name, "module": mname, "variant_search": info}
    out = []
    for parity in _parities(args.parity):
        basis = cocycle_space(A, M, args.n, parity, args.deg, vs.chosen)
        out.append({"parity": parity_name(parity), "dimension": len(basis),
                    "basis": [_render_cochain(c) for c in basis]})
    return True, {"algebra": name, "module": mname, "n": args.n, "degree_bound": args.deg,
                  "variant_search": info, "cocycles": out}


def cmd_cohomology_report(doc, args):
    name, A = _algebra(doc, args.algebra)
    mname, M = _module(doc, A, args.module)
    vs, info = _variant_info(A, M, [args.n - 1, args.n], args.deg)
    if vs.chosen is None:
        return False, {"algebra": name, "module": mname, "variant_search": info}
    out = [truncated_cohomology_report(A, M, args.n, p, args.deg, vs.chosen).to_dict()
           for p in _parities(args.parity)]
    return True, {"algebra": name, "module": mname, "variant_search": info, "truncated": out,
                  "note": "dimensions of degree-bounded slices; truncation indicators, not cohomology"}


def cmd_solve_der(doc, args):
    name, A = _algebra(doc, args.algebra)
    out = []
    for parity in _parities(args.parity):
        row = {"parity": parity_name(parity)}
        if args.cls == "qder":
            pairs = solve_quasiderivations(A, args.k, args.l, parity, args.deg)
            row["dimension"] = len(pairs)
            row["basis"] = [{"map": f.render(A.names), "companion": c.render(A.names)} for f, c in pairs]
        elif args.cls == "gder":
            triples = solve_generalized(A, args.k, args.l, parity, args.deg)
            row["dimension"] = len(triples)
            row["basis"] = [{"map": f.render(A.names), "f_prime": f1.render(A.names),
                             "f_double_prime": f2.render(A.names)} for f, f1, f2 in triples]
        else:
            basis = solve_class(A, args.cls, args.k, args.l, parity, args.deg)
            row["dimension"] = len(basis)
            row["basis"] = [f.render(A.names) for f in basis]
        out.append(row)
    return True, {"algebra": name, "class": args.cls, "k": args.k, "l": args.l, "degree_bound": args.deg,
                  "spaces": out}


def cmd_classify(doc, args):
    name, A = _algebra(doc, args.algebra)
    fname, f = _confmap(doc, args.map, A)
    cls = classify_map(A, f, args.k, args.l)
    return True, {"algebra": name, "map": fname, "k": args.k, "l": args.l, "flags": cls.to_dict()}


def cmd_gder_witness(doc, args):
    name, A = _algebra(doc, args.algebra)
    fname, f = _confmap(doc, args.map, A)
    w = WitnessSolver(A, args.k, args.l, f.parity, args.deg, args.mode).solve(f)
    payload = {"algebra": name, "map": fname, "k": args.k, "l": args.l, "degree_bound": args.deg,
               "mode": args.mode}
    if w is None:
        payload["witness"] = None
        payload["verdict"] = f"not witnessed at degree <= {args.deg}"
        return False, payload
    payload["witness"] = w.to_dict(A.names)
    payload["verdict"] = "witnessed"
    return True, payload


def _ooperator(doc, args):
    if args.ooperator:
        d = doc.get(args.ooperator, OOperatorDef)
    else:
        _, d = doc.first(OOperatorDef)
    return d, doc.get(d.algebra, Algebra), doc.get(d.module, RepModule)


def cmd_ooperator_check(doc, args):
    d, A, M = _ooperator(doc, args)
    rep = check_o_operator(A, M, d.map)
    return rep.ok, {"operator": d.name, "module": d.module, "algebra": d.algebra, "report": rep.to_dict(A.names)}


def cmd_induced(doc, args):
    d, A, M = _ooperator(doc, args)
    rep = check_o_operator(A, M, d.map)
    payload = {"operator": d.name, "o_operator": rep.to_dict(A.names)}
    if not rep.ok:
        return False, payload
    B = induced_bracket(A, M, d.map, check=False)
    chk = check_algebra(B)
    hom = homomorphism_residual(A, M, d.map, B)
    payload.update({"induced": serialize_algebra(f"{d.module}_induced", B), "check": chk.to_dict(B.names),
                    "homomorphism": hom.to_dict(A.names)})
    return chk.ok and hom.ok, payload


COMMANDS: Dict[str, Callable] = {
    "check": cmd_check, "check-assoc": cmd_check_assoc, "check-module": cmd_check_module,
    "twist": cmd_twist, "compose-twist": cmd_compose_twist, "dsum": cmd_dsum, "cur": cmd_cur,
    "tensor": cmd_tensor, "from-assoc": cmd_from_assoc, "semidirect": cmd_semidirect,
    "d2check": cmd_d2check, "cocycles": cmd_cocycles, "cohomology-report": cmd_cohomology_report,
    "solve-der": cmd_solve_der, "classify": cmd_classify, "gder-witness": cmd_gder_witness,
    "ooperator-check": cmd_ooperator_check, "induced": cmd_induced,
}


# --- argument parsing and output ------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", help="definition file")
    common.add_argument("--builtin", help="built-in example: " + ", ".join(BUILTINS))
    common.add_argument("--format", choices=("text", "json"), default="text")
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--algebra", help="algebra to use (default: first in the file)")
    common.add_argument("--module", help="module to use (default: adjoint)")

    p = argparse.ArgumentParser(prog="bihomconf", description="BiHom-Lie conformal superalgebra toolkit")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", metavar="COMMAND")
    sub.required = True
    simple = {"check": "check the algebra axioms", "check-assoc": "check BiHom-associativity",
              "check-module": "check the module axioms", "from-assoc": "commutator algebra of an associative one",
              "semidirect": "semidirect product with a module",
              "ooperator-check": "check an O-operator", "induced": "bracket induced by an O-operator"}
    for name, helptext in simple.items():
        s = sub.add_parser(name, parents=[common], help=helptext)
        if name in ("ooperator-check", "induced"):
            s.add_argument("--ooperator", help="operator to use (default: first in the file)")
    s = sub.add_parser("twist", parents=[common], help="Yau twist by two maps")
    s.add_argument("--maps", required=True, help="a,b")
    s = sub.add_parser("compose-twist", parents=[common], help="twist composing with the structure maps")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--maps", help="a2,b2")
    g.add_argument("--power", type=int, help="use alpha^k, beta^k")
    s = sub.add_parser("dsum", parents=[common], help="direct sum")
    s.add_argument("--other", required=True)
    for name in ("cur", "tensor"):
        s = sub.add_parser(name, parents=[common], help="current algebra" if name == "cur" else "tensor with a superalgebra")
        s.add_argument("--superalgebra")
        if name == "cur":
            s.add_argument("--associative", action="store_true")
    for name in ("d2check", "cocycles", "cohomology-report"):
        s = sub.add_parser(name, parents=[common])
        s.add_argument("--n", type=int, required=True)
        s.add_argument("--deg", type=int, required=True)
        s.add_argument("--parity", choices=("even", "odd", "both"), default="both")
    s = sub.add_parser("solve-der", parents=[common], help="solve a derivation-type class")
    s.add_argument("--k", type=int, default=0)
    s.add_argument("--l", type=int, default=0)
    s.add_argument("--deg", type=int, required=True)
    s.add_argument("--parity", choices=("even", "odd", "both"), default="both")
    s.add_argument("--class", dest="cls", default="der", choices=("der", "c", "qc", "zder", "omega", "qder", "gder"))
    s = sub.add_parser("classify", parents=[common], help="centroid/quasicentroid/central flags of a map")
    s.add_argument("--k", type=int, default=0)
    s.add_argument("--l", type=int, default=0)
    s.add_argument("--map")
    s = sub.add_parser("gder-witness", parents=[common], help="search a generalized-derivation witness")
    s.add_argument("--k", type=int, default=0)
    s.add_argument("--l", type=int, default=0)
    s.add_argument("--deg", type=int, required=True)
    s.add_argument("--map")
    s.add_argument("--mode", choices=("gder", "zero", "qder"), default="gder")
    return p


def _text(value, indent: int = 0) -> List[str]:
    pad = "  " * indent
    lines = []
    if isinstance(value, dict):
        for k, v in value.items():
            if isinstance(v, (dict, list)) and v:
                lines.append(f"{pad}{k}:")
                lines.extend(_text(v, indent + 1))
            elif isinstance(v, str) and "\n" in v:
                lines.append(f"{pad}{k}: |")
                lines.extend(f"{pad}  {ln}" for ln in v.rstrip("\n").split("\n"))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
    elif isinstance(value, list):
        for item in value:
            if isinstance(item, (dict, list)):
                sub = _text(item, indent + 1)
                lines.append(f"{pad}- " + sub[0].strip() if sub else f"{pad}-")
                lines.extend(sub[1:])
            else:
                lines.append(f"{pad}- {_scalar(item)}")
    else:
        lines.append(pad + _scalar(value))
    return lines


def _scalar(v) -> str:
    if v is None:
        return "none"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (dict, list)):
        return "{}" if isinstance(v, dict) else "[]"
    return str(v)


def render(report: dict, fmt: str, elapsed: Optional[float] = None) -> str:
    if fmt == "json":
        return json.dumps(report, indent=2, sort_keys=False) + "\n"
    lines = _text(report)
    if elapsed is not None:
        lines.append(f"time: {elapsed:.3f}s")
    return "\n".join(lines) + "\n"


def run(argv: Optional[List[str]] = None) -> Tuple[int, str, Optional[str]]:
    """Run a command; returns (exit code, rendered report, --out path).

    Argument errors raise SystemExit(2) from argparse.
    """
    args = build_parser().parse_args(argv)
    start = time.perf_counter()
    header = {"schema": SCHEMA, "command": args.command}
    try:
        doc = load_document(args)
        ok, payload = COMMANDS[args.command](doc, args)
        code = 0 if ok else 1
    except (DSLError, UsageError) as exc:
        return 2, render({**header, "status": "error", "error": str(exc)}, args.format), args.out
    except HypothesisError as exc:
        payload = {"error": str(exc)}
        if exc.report is not None:
            payload["report"] = exc.report.to_dict()
        ok, code = False, 1
    body = {**header, "status": "ok" if ok else "violation", **payload}
    elapsed = time.perf_counter() - start
    return code, render(body, args.format, elapsed if args.format == "text" else None), args.out


def main(argv: Optional[List[str]] = None) -> int:
    try:
        code, text, out = run(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    if code == 2:
        sys.stderr.write(text)
        return code
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

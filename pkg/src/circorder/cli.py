"""Command line front end.

Exit codes: 0 success (or an inconclusive search), 1 a negative answer such
as a failed validation, 2 malformed input, 10 a non-orderability
certificate was found, 70 an internal invariant broke.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import abelian, freeprod, obstruction, realization
from .errors import CircOrderError, InternalInvariantError, SchemaError
from .groups import (
    FreeProduct,
    ball,
    cyclic_table,
    element_from_json,
    element_to_json,
    group_from_json,
    group_to_json,
)
from .orders import validate
from .serialize import order_from_json, order_to_json

EXIT_OK = 0
EXIT_NO = 1
EXIT_SCHEMA = 2
EXIT_NOT_ORDERABLE = 10
EXIT_INTERNAL = 70

DEFAULT_SEED = 20240101


def _load_json(path: str, what: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"{what} file {path} is not valid JSON ({exc.msg} at line {exc.lineno})") from exc
    except OSError as exc:
        raise SchemaError("$", f"cannot read {what} file {path}: {exc.strerror}") from exc


def _parse_token(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("$", f"{what} {text!r} is not valid JSON") from exc


def _group(args, order_doc=None):
    if getattr(args, "group", None):
        return group_from_json(_load_json(args.group, "group"))
    if isinstance(order_doc, dict) and "group" in order_doc:
        return group_from_json(order_doc["group"], "$.group")
    raise SchemaError("$.group", "no group given (use --group or embed \"group\" in the order)")


def _order(args):
    doc = _load_json(args.order, "order")
    G = _group(args, doc)
    return G, order_from_json(doc, G)


def _element(G, text, what):
    return element_from_json(G, _parse_token(text, what), f"$.{what}")


def _emit(obj, args=None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True)
    out = getattr(args, "out", None) if args is not None else None
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _sample(G, args):
    return ball(G, args.radius)


# ---------------------------------------------------------------------------
# Subcommands


def cmd_validate(args) -> int:
    G, c = _order(args)
    report = validate(c, _sample(G, args), max_violations=args.max_violations)
    _emit(report.to_json(lambda x: element_to_json(G, x)), args)
    return EXIT_OK if report.ok else EXIT_NO


def cmd_search(args) -> int:
    G = _group(args)
    res = obstruction.search(G, args.max_radius, args.mode, threads=args.threads)
    if isinstance(res, obstruction.NotOrderable):
        doc = res.certificate.to_json()
        doc["radius"] = res.radius
        _emit(doc, args)
        return EXIT_NOT_ORDERABLE
    inst = res.instance
    _emit({"result": "inconclusive", "mode": args.mode, "max_radius": res.max_radius,
           "variables": len(inst.variables), "clauses": len(inst.clauses), "note": inst.note}, args)
    return EXIT_OK


def cmd_enumerate(args) -> int:
    if args.cyclic is not None:
        if args.cyclic < 1:
            raise SchemaError("$.cyclic", "m must be positive")
        G = cyclic_table(args.cyclic)
    else:
        G = _group(args)
    orders = obstruction.enumerate_orders(G, threads=args.threads)
    if args.count:
        print(len(orders))
        return EXIT_OK
    _emit({"count": len(orders), "group": group_to_json(G), "orders": [order_to_json(c) for c in orders]}, args)
    return EXIT_OK


def cmd_eval(args) -> int:
    G, c = _order(args)
    if len(args.triple) != 3:
        raise SchemaError("$.triple", "expected three elements")
    t = [_element(G, x, f"triple[{i}]") for i, x in enumerate(args.triple)]
    v = c(*t)
    print({1: "+1", -1: "-1", 0: "0"}[v])
    return EXIT_OK


def cmd_realize(args) -> int:
    G, c = _order(args)
    elems = ball(G, args.radius)
    if args.count is not None:
        if args.count > len(elems):
            raise SchemaError("$.count", f"ball of radius {args.radius} has only {len(elems)} elements")
        elems = elems[: args.count]
    m = realization.realize(c, elems)
    data = realization.export(m, args.format)
    if args.out:
        with open(args.out, "wb") as fh:
            fh.write(data)
    else:
        sys.stdout.write(data.decode())
    return EXIT_OK


def cmd_density(args) -> int:
    G, c = _order(args)
    params = abelian.density_search(c, _sample(G, args), budget=args.budget)
    rot = abelian.RotationOrder(params, G)
    _emit({"params": params.to_json(), "order": order_to_json(rot)}, args)
    return EXIT_OK


def cmd_archimedean(args) -> int:
    G, c = _order(args)
    g = _element(G, args.g, "g")
    h = _element(G, args.h, "h")
    res = abelian.archimedean_witness(c, g, h, N=args.N)
    if isinstance(res, abelian.ArchimedeanWitness):
        _emit({"witness": res.n}, args)
        return EXIT_OK
    _emit({"none_up_to": res.N}, args)
    return EXIT_NO


def cmd_verify_cert(args) -> int:
    doc = _load_json(args.certificate, "certificate")
    G = group_from_json(_load_json(args.group, "group")) if args.group else None
    check = obstruction.verify_certificate(doc, G)
    _emit({"unsat": check.unsat, "derivable": check.derivable, "message": check.message}, args)
    return EXIT_OK if check.ok else EXIT_NO


def cmd_reduce(args) -> int:
    G = _group(args)
    if not isinstance(G, FreeProduct):
        raise SchemaError("$.type", "reduce needs a free_product group")
    if len(args.triple) != 3:
        raise SchemaError("$.triple", "expected three elements")
    t = [_element(G, x, f"triple[{i}]") for i, x in enumerate(args.triple)]
    rng = random.Random(args.seed)
    tr = freeprod.reduce_triple(G, t, strategy=args.strategy, rng=rng, trace=args.trace)
    doc = tr.to_json(G)
    if not args.trace:
        del doc["steps"]
    _emit(doc, args)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="circorder", description="Circular and linear orders on groups.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, order=True):
        sp.add_argument("--group", help="group descriptor JSON file")
        if order:
            sp.add_argument("--order", required=True, help="order JSON file")
        sp.add_argument("--out", help="write output here instead of stdout")

    sp = sub.add_parser("validate", help="check the order axioms on a ball")
    common(sp)
    sp.add_argument("--radius", type=int, default=2)
    sp.add_argument("--max-violations", type=int, default=None)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("search", help="look for a non-orderability certificate")
    common(sp, order=False)
    sp.add_argument("--mode", choices=("co", "lo"), default="co")
    sp.add_argument("--max-radius", type=int, default=2)
    sp.add_argument("--threads", type=int, default=1)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("enumerate", help="all circular orders of a finite group")
    common(sp, order=False)
    sp.add_argument("--cyclic", type=int, default=None, metavar="M", help="use Z/M")
    sp.add_argument("--count", action="store_true", help="print only the number of orders")
    sp.add_argument("--threads", type=int, default=1)
    sp.set_defaults(func=cmd_enumerate)

    sp = sub.add_parser("eval", help="evaluate an order on a triple")
    common(sp)
    sp.add_argument("triple", nargs="+", help="three elements as JSON")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("realize", help="place ball elements on the circle")
    common(sp)
    sp.add_argument("--radius", type=int, default=2)
    sp.add_argument("--count", type=int, default=None, help="only the first COUNT ball elements")
    sp.add_argument("--format", choices=("csv", "svg"), default="csv")
    sp.set_defaults(func=cmd_realize)

    sp = sub.add_parser("density", help="rotation order agreeing with an order on a ball")
    common(sp)
    sp.add_argument("--radius", type=int, default=2)
    sp.add_argument("--budget", type=int, default=64)
    sp.set_defaults(func=cmd_density)

    sp = sub.add_parser("archimedean", help="smallest n with c(e,g,h) != c(e,g^n,h)")
    common(sp)
    sp.add_argument("--g", required=True)
    sp.add_argument("--h", required=True)
    sp.add_argument("--N", type=int, default=100)
    sp.set_defaults(func=cmd_archimedean)

    sp = sub.add_parser("verify-cert", help="replay a certificate")
    sp.add_argument("certificate")
    sp.add_argument("--group", help="also re-derive every clause from this group")
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_verify_cert)

    sp = sub.add_parser("reduce", help="reduce a free-product triple to its minimal triple")
    common(sp, order=False)
    sp.add_argument("triple", nargs="+", help="three words as JSON")
    sp.add_argument("--trace", action="store_true")
    sp.add_argument("--strategy", choices=("deterministic", "random"), default="deterministic")
    sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
    sp.set_defaults(func=cmd_reduce)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"error: invalid input at {exc.path}: {exc.message}", file=sys.stderr)
        return EXIT_SCHEMA
    except InternalInvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except CircOrderError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO


if __name__ == "__main__":
    sys.exit(main())

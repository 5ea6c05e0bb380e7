"""Command-line front end: ``infhecke VERB ...``.

Exit codes: 0 success, 1 verification failure, 2 usage error.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from typing import Sequence

from .classification import GroupData, classify
from .closure import (
    bracket_closure,
    closure_mod_p,
    reflection_images,
    verify_rep,
    verify_theorem1,
)
from .cyclotomic import BadPrime
from .groups import DEFAULT_CAP, GroupParams, GroupTooLarge, construct
from .representations import inner, orbit_representatives, restriction_mults
from .unitary import ModelError, builtin_d4, load_model, signature_scan, solve_form


class UsageError(Exception):
    pass


def _params(args) -> GroupParams:
    try:
        return GroupParams(args.d, args.e, args.r)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _group_json(p: GroupParams) -> dict:
    return {"d": p.d, "e": p.e, "r": p.r, "name": p.name(), "order": p.order()}


@lru_cache(maxsize=4)
def _data(d: int, e: int, r: int, cap: int) -> GroupData:
    return GroupData(construct(GroupParams(d, e, r), cap))


def _load(p: GroupParams, cap: int) -> GroupData:
    if p.order() > cap:
        raise UsageError(f"{p.name()} is larger than --max-order {cap}")
    return _data(p.d, p.e, p.r, cap)


def _jobs(args) -> int:
    return args.jobs if args.jobs else (os.cpu_count() or 1)


# ------------------------------------------------------------ verbs


def cmd_irreps(args) -> tuple[dict, int]:
    p = _params(args)
    rows = []
    total = 0
    for lam, A in orbit_representatives(p):
        dim = lam.dimension()
        comp = dim // A
        total += A * comp * comp
        rows.append({
            "multipartition": lam.label(),
            "A": A,
            "components": [comp] * A,
            "labels": [lam.label() if A == 1 else f"{lam.label()}:{j}" for j in range(A)],
        })
    return {"group": _group_json(p), "irreps": rows, "sum_dim_squares": total}, 0


def cmd_classify(args) -> tuple[dict, int]:
    p = _params(args)
    data = _load(p, args.max_order)
    return classify(data).to_json(), 0


def _select(data: GroupData, label: str | None) -> list[int]:
    if label is None:
        return list(range(len(data.irr)))
    hits = [i for i, rho in enumerate(data.irr) if rho.label == label]
    if not hits:
        raise UsageError(f"no irreducible labelled {label!r}; try the irreps verb")
    return hits


def _lie_dim_one(d, e, r, cap, i, prime, exact) -> dict:
    data = _data(d, e, r, cap)
    rho = data.irr[i]
    ri = reflection_images(rho, data)
    out = {"label": rho.label, "dim": rho.dim}
    if prime is not None:
        try:
            mp = closure_mod_p(ri.primes(), p=prime)
            out["modp"] = {"prime": prime, "root": mp.root, "dim_H_prime": mp.dim,
                           "dim_H": closure_mod_p(ri.images, p=prime).dim}
        except BadPrime as exc:
            out["modp"] = {"prime": prime, "error": str(exc)}
    if exact or prime is None:
        out["dim_H"] = bracket_closure(ri.images).dim
        out["dim_H_prime"] = bracket_closure(ri.primes()).dim
    return out


def _pool_map(fn, jobs: int, arglist: list[tuple]) -> list:
    if jobs <= 1 or len(arglist) <= 1:
        return [fn(*a) for a in arglist]
    with ProcessPoolExecutor(max_workers=min(jobs, len(arglist))) as ex:
        futs = [ex.submit(fn, *a) for a in arglist]
        return [f.result() for f in futs]


def cmd_lie_dim(args) -> tuple[dict, int]:
    p = _params(args)
    data = _load(p, args.max_order)
    if args.mod_p is not None and args.mod_p < 2:
        raise UsageError("--mod-p needs a prime")
    idx = _select(data, args.rep)
    rows = _pool_map(_lie_dim_one, _jobs(args),
                     [(p.d, p.e, p.r, args.max_order, i, args.mod_p, args.exact) for i in idx])
    return {"group": _group_json(p), "representations": rows}, 0


def _verify_one(d, e, r, cap, i, exact, prime):
    data = _data(d, e, r, cap)
    return verify_rep(data, classify(data), i, exact, prime)


def cmd_verify(args) -> tuple[dict, int]:
    p = _params(args)
    data = _load(p, args.max_order)
    result = classify(data)
    verdicts = _pool_map(_verify_one, _jobs(args),
                         [(p.d, p.e, p.r, args.max_order, i, args.exact, args.mod_p) for i in range(len(data.irr))])
    report = verify_theorem1(data, result, oracle=args.oracle, rep_verdicts=verdicts)
    doc = report.to_json()
    doc["notes"] = report.notes
    return doc, 0 if report.ok else 1


def cmd_branch(args) -> tuple[dict, int]:
    p = _params(args)
    if p.r < 2:
        raise UsageError("branching needs r >= 2")
    try:
        p0 = GroupParams(p.d, p.e, p.r - 1)
    except ValueError as exc:
        raise UsageError(f"subgroup: {exc}") from exc
    data = _load(p, args.max_order)
    data0 = _load(p0, args.max_order)
    chars0 = data0.chars
    rows = []
    for rho, chi in zip(data.irr, data.chars):
        mults = restriction_mults(chi, data0.W, chars0)
        rows.append({
            "label": rho.label,
            "dim": rho.dim,
            "restriction": [{"label": r0.label, "mult": int(m)} for r0, m in zip(data0.irr, mults) if m],
        })
    return {"group": _group_json(p), "subgroup": _group_json(p0), "branching": rows}, 0


def cmd_unitary(args) -> tuple[dict, int]:
    if (args.builtin is None) == (args.model is None):
        raise UsageError("give exactly one of --builtin d4 or --model FILE")
    if args.builtin is not None:
        if args.builtin != "d4":
            raise UsageError(f"unknown builtin model {args.builtin!r}")
        model = builtin_d4()
        model.check_relations()
    else:
        model = load_model(args.model)
    form = solve_form(model)
    scan = signature_scan(form, samples=args.scan)
    doc = {
        "model": model.label,
        "dim": model.dim,
        "form": form.to_json(),
        "boundaries": scan.boundaries,
        "boundaries_over_pi": [b / math.pi for b in scan.boundaries],
        "scan": scan.intervals,
        "indeterminate": scan.indeterminate,
    }
    return doc, 0


# ------------------------------------------------------------ output


def _table(verb: str, doc: dict) -> str:
    lines = []
    if "group" in doc and isinstance(doc["group"], dict):
        g = doc["group"]
        lines.append(f"{g['name']}  |W| = {g['order']}")
    if verb == "irreps":
        for row in doc["irreps"]:
            lines.append(f"{row['multipartition']:<32} A={row['A']:<3} dims={row['components']}")
        lines.append(f"sum of squares: {doc['sum_dim_squares']}")
    elif verb == "classify":
        lines.append(f"linear characters: {', '.join(doc['linear_characters'])}")
        for r in doc["records"]:
            flags = ("R" if r["is_reflection_rep"] else "-") + ("Q" if r["in_QRef"] else "-") + (
                "L" if r["in_LambdaRef"] else "-")
            lines.append(f"{r['label']:<32} {r['dim']:>4} {flags} {r['L_type']:<11} class {r['approx_class_id']:<3}"
                         f" predicted {r['predicted_dim']}")
        pr = doc["prediction"]
        lines.append(f"center {pr['center_dim']}  total {pr['total_dim']}")
    elif verb == "lie-dim":
        for r in doc["representations"]:
            parts = [f"{r['label']:<32} {r['dim']:>4}"]
            if "dim_H" in r:
                parts.append(f"H {r['dim_H']:>5} H' {r['dim_H_prime']:>5}")
            if "modp" in r:
                m = r["modp"]
                parts.append(f"mod {m['prime']}: " + (m["error"] if "error" in m else f"H {m['dim_H']} H' {m['dim_H_prime']}"))
            lines.append("  ".join(parts))
    elif verb == "verify":
        lines = [f"{doc['group']}  |W| = {doc['order']}"]
        for r in doc["representations"]:
            ex = r.get("exact_dim", "-")
            lines.append(f"{r['label']:<32} {r['dim']:>4} {r['predicted_L']:<11} predicted {r['predicted_dim']:>5}"
                         f"  mod {r['modp_prime']}: {r['modp_dim']:>5}  exact {ex!s:>5}  {r['verdict']}")
        lines.append(f"center {doc['center_dim']}  predicted total {doc['predicted_total']}"
                     f"  oracle {doc['oracle_dim']}")
        lines.append("PASS" if doc["ok"] else "FAIL")
    elif verb == "branch":
        lines.append(f"restriction to {doc['subgroup']['name']}")
        for r in doc["branching"]:
            parts = " + ".join(f"{x['mult']}*{x['label']}" if x["mult"] > 1 else x["label"] for x in r["restriction"])
            lines.append(f"{r['label']:<32} -> {parts}")
    elif verb == "unitary":
        lines.append(f"model: {doc['model']} (dim {doc['dim']})")
        for i, row in enumerate(doc["form"]["J_text"]):
            lines.append(f"J[{i}] = {row}")
        for iv in doc["scan"]:
            lines.append(f"({iv['from']:.9f}, {iv['to']:.9f}]  signature {tuple(iv['signature']) if iv['signature'] else '?'}")
        lines.append("boundaries / pi: " + ", ".join(f"{b:.9f}" for b in doc["boundaries_over_pi"]))
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "table"], default="table")
    common.add_argument("--max-order", type=int, default=DEFAULT_CAP,
                        help=f"refuse groups larger than this (default {DEFAULT_CAP})")
    common.add_argument("--jobs", type=int, default=0, help="worker processes (default: all cores)")

    parser = argparse.ArgumentParser(prog="infhecke", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="verb", required=True)

    def group_args(sp):
        sp.add_argument("d", type=int)
        sp.add_argument("e", type=int)
        sp.add_argument("r", type=int)

    sp = sub.add_parser("irreps", parents=[common], help="irreducibles of G(de,e,r)")
    group_args(sp)
    sp = sub.add_parser("classify", parents=[common], help="reflection-type classification")
    group_args(sp)
    sp = sub.add_parser("lie-dim", parents=[common], help="closure dimensions per representation")
    group_args(sp)
    sp.add_argument("--rep", help="restrict to one label")
    sp.add_argument("--mod-p", type=int, dest="mod_p")
    sp.add_argument("--exact", action="store_true")
    sp = sub.add_parser("verify", parents=[common], help="check closure dimensions against the prediction")
    group_args(sp)
    sp.add_argument("--oracle", action="store_true", help="also close inside the group algebra")
    sp.add_argument("--exact", action="store_true", help="always run the exact closure")
    sp.add_argument("--mod-p", type=int, dest="mod_p")
    sp = sub.add_parser("branch", parents=[common], help="restriction to G(de,e,r-1)")
    group_args(sp)
    sp = sub.add_parser("unitary", parents=[common], help="invariant form of a Hecke model")
    sp.add_argument("--builtin")
    sp.add_argument("--model")
    sp.add_argument("--scan", type=int, default=2000, help="number of sample points")
    return parser


VERBS = {
    "irreps": cmd_irreps,
    "classify": cmd_classify,
    "lie-dim": cmd_lie_dim,
    "verify": cmd_verify,
    "branch": cmd_branch,
    "unitary": cmd_unitary,
}


def run(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    try:
        doc, code = VERBS[args.verb](args)
    except (UsageError, GroupTooLarge, ModelError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.format == "json":
        out.write(json.dumps(doc, indent=1, sort_keys=False) + "\n")
    else:
        out.write(_table(args.verb, doc) + "\n")
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command-line front end.

Exit codes: 0 success, 2 the array (or a family) was proved infeasible,
1 usage or operational error.
"""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .constraints import apply_rules, builtin_rules, load_ruleset
from .drgcore import (
    MOORE_57,
    IntersectionArray,
    eigenmatrices,
    intersection_numbers,
    krein_table,
    spectrum,
)
from .errors import DRGError, Infeasible
from .oracle import (
    DEFAULT_SAMPLES,
    EXHAUSTIVE_LIMIT,
    brute_force_p_table,
    build_graph,
    check_against_family,
)
from .pipeline import INFEASIBLE, run_moore_proof
from .serialize import compact, dumps
from .symmetry import symmetrize_families
from .triples import TripleConfig, enumerate_points, family_for, index_name, realizable_configs

EXIT_OK, EXIT_ERROR, EXIT_INFEASIBLE = 0, 1, 2

ARRAY_HELP = (
    "intersection array {b0,...,b_{d-1};c1,...,cd}, e.g. '{55,54,2;1,1,54}'; "
    "braces and whitespace are optional, c1 must be 1"
)

EPILOG = """\
array grammar:
  {b0,b1,...,b_{d-1};c1,c2,...,cd}   b_i, c_i positive integers, c1 = 1
  quote the literal in the shell: drgtriples params "{3,2;1,1}"

exit codes:
  0  success (including FEASIBLE_UNRESOLVED verdicts)
  1  usage or operational error
  2  infeasible: non-integral parameters, negative Krein parameter,
     empty triple family or an INFEASIBLE proof verdict
"""


class _Done(Exception):
    def __init__(self, code: int, doc):
        self.code = code
        self.doc = doc


def _array(text: str) -> IntersectionArray:
    return IntersectionArray.parse(text)


def _rules(args, pt):
    if not getattr(args, "rules", None):
        return None
    rs = load_ruleset(None if args.rules == "builtin" else args.rules)
    return builtin_rules(pt, rs)


# ---------------------------------------------------------------- commands

def cmd_params(args) -> dict:
    arr = _array(args.array)
    pt = intersection_numbers(arr)
    return {"array": str(arr), "d": arr.d, "v": pt.v, "k": list(pt.k), "p": pt.p}


def cmd_spectrum(args) -> dict:
    arr = _array(args.array)
    pt = intersection_numbers(arr)
    spec = spectrum(arr, pt)
    em = eigenmatrices(arr, pt, spec)
    return {
        "array": str(arr),
        "v": pt.v,
        "eigenvalues": list(spec.eigenvalues),
        "multiplicities": list(spec.multiplicities),
        "P": em.P.tolist(),
        "Q": em.Q.tolist(),
    }


def cmd_krein(args) -> dict:
    arr = _array(args.array)
    pt = intersection_numbers(arr)
    em = eigenmatrices(arr, pt)
    kt = krein_table(arr, pt, em)
    return {
        "array": str(arr),
        "q": kt.q,
        "vanishing": [list(t) for t in kt.vanishing],
        "vanishing_nontrivial": [list(t) for t in kt.vanishing if 0 not in t],
    }


def _family_doc(fam, pts) -> dict:
    return {
        "config": fam.config.label,
        "dimension": fam.solution.dim,
        "free": [index_name(f) for f in fam.free],
        "entries": {index_name(i): e for i, e in fam.entries().items()},
        "ranges": {index_name(i): list(r) for i, r in fam.ranges.items()},
        "points": [dict(zip((index_name(v) for v in fam.variables), p)) for p in pts],
        "notes": list(fam.notes),
    }


def _base_family(args):
    arr = _array(args.array)
    pt = intersection_numbers(arr)
    cfg = TripleConfig.parse(args.config)
    kw = {}
    if args.use_krein:
        em = eigenmatrices(arr, pt)
        kw = {"kt": krein_table(arr, pt, em), "em": em, "use_krein": True}
    fam = family_for(pt, cfg, **kw)
    rules = _rules(args, pt)
    if rules:
        fam = apply_rules(fam, rules)
    return arr, fam


def _empty(doc: dict, cfg: str):
    if not doc["points"]:
        raise _Done(EXIT_INFEASIBLE, {**doc, "certificate": {"kind": "empty-family", "config": cfg}})
    return doc


def cmd_triples(args) -> dict:
    arr, fam = _base_family(args)
    doc = {"array": str(arr), **_family_doc(fam, enumerate_points(fam))}
    return _empty(doc, fam.config.label)


def cmd_symmetrize(args) -> dict:
    arr, fam = _base_family(args)
    res = symmetrize_families(fam)
    doc = {
        "array": str(arr),
        "group": [s.name for s in res.group],
        "relations": [str(r) for r in res.relations],
        **_family_doc(res.family, enumerate_points(res.family)),
    }
    return _empty(doc, fam.config.label)


def cmd_prove_moore(args):
    arr = _array(args.array) if args.array else MOORE_57
    ruleset = load_ruleset(None if args.rules in (None, "builtin") else args.rules)
    report = run_moore_proof(arr, use_krein=args.use_krein, ruleset=ruleset)
    code = EXIT_INFEASIBLE if report.verdict == INFEASIBLE else EXIT_OK
    raise _Done(code, report)


def cmd_oracle_check(args) -> dict:
    g = build_graph(args.graph)
    D = g.distances()
    bt = brute_force_p_table(g, D)
    pt = intersection_numbers(bt.array)
    doc = {
        "graph": g.name,
        "vertices": g.n,
        "array": str(bt.array),
        "p_table_match": bt.p == pt.p and bt.k == pt.k,
        "exhaustive": g.n <= EXHAUSTIVE_LIMIT,
        "seed": None if g.n <= EXHAUSTIVE_LIMIT else args.sample_seed,
        "checks": [],
    }
    configs = [TripleConfig.parse(args.config)] if args.config else realizable_configs(pt)
    for cfg in configs:
        cfg.check(pt)
        fam = family_for(pt, cfg)
        sym = symmetrize_families(fam).family
        for label, f in (("counting", fam), ("symmetrized", sym)):
            rep = check_against_family(g, f, D, seed=args.sample_seed, samples=args.samples)
            doc["checks"].append({"family": label, **rep.to_json()})
    doc["violations"] = sum(len(c["violations"]) for c in doc["checks"])
    if not doc["p_table_match"] or doc["violations"]:
        raise _Done(EXIT_ERROR, doc)
    return doc


# ---------------------------------------------------------------- rendering

def _text(doc) -> str:
    if hasattr(doc, "to_text"):
        return doc.to_text()
    lines = []
    for key, val in doc.items():
        if key == "points" and isinstance(val, list):
            lines.append(f"points: {len(val)}")
            continue
        if isinstance(val, dict) and key in ("entries", "ranges"):
            lines.append(f"{key}:")
            lines.extend(f"  {k} = {v}" for k, v in val.items())
            continue
        if isinstance(val, list) and val and isinstance(val[0], (dict, str)):
            lines.append(f"{key}:")
            lines.extend(f"  {v if isinstance(v, str) else compact(v)}" for v in val)
            continue
        lines.append(f"{key}: {val if isinstance(val, str) else compact(val)}")
    return "\n".join(lines) + "\n"


def _emit(doc, as_json: bool) -> None:
    out = dumps(doc) if as_json else _text(doc)
    sys.stdout.write(out)


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="drgtriples",
        description="Exact distance-regular graph parameters and triple intersection numbers.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, func, help_, array=True, optional_array=False):
        sp = sub.add_parser(name, help=help_, epilog=EPILOG, formatter_class=argparse.RawDescriptionHelpFormatter)
        if array:
            sp.add_argument("array", nargs="?" if optional_array else None, help=ARRAY_HELP)
        sp.add_argument("--json", action="store_true", help="emit a machine-readable JSON document")
        sp.set_defaults(func=func)
        return sp

    add("params", cmd_params, "intersection numbers p^h_ij")
    add("spectrum", cmd_spectrum, "eigenvalues, multiplicities and eigenmatrices")
    add("krein", cmd_krein, "Krein parameters and the vanishing ones")
    for name, func, help_ in (
        ("triples", cmd_triples, "parametric triple-intersection family for one configuration"),
        ("symmetrize", cmd_symmetrize, "family narrowed by relabelling the base triple"),
    ):
        sp = add(name, func, help_)
        sp.add_argument("--config", required=True, help="distances d(u,v),d(u,w),d(v,w), e.g. 2,2,3")
        sp.add_argument("--use-krein", action="store_true", help="add equations from vanishing Krein parameters")
        sp.add_argument("--rules", help="rule file to apply, or 'builtin' for the bundled one")
    sp = add("prove-moore", cmd_prove_moore, "run the full feasibility pipeline", optional_array=True)
    sp.add_argument("--use-krein", action="store_true", help="add equations from vanishing Krein parameters")
    sp.add_argument("--rules", help="rule file (default: bundled)")
    sp = add("oracle-check", cmd_oracle_check, "compare solver output with brute force on an explicit graph",
             array=False)
    sp.add_argument("graph", help="pentagon, petersen, cube3, odd4, hoffman_singleton or rook(n)")
    sp.add_argument("--config", help="check one configuration only")
    sp.add_argument("--sample-seed", type=int, default=0, help="seed for sampled triples on large graphs")
    sp.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="sampled triples per family")
    return p


def run_command(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_ERROR
    as_json = getattr(args, "json", False)
    try:
        doc = args.func(args)
        code = EXIT_OK
    except _Done as done:
        doc, code = done.doc, done.code
    except Infeasible as exc:
        doc = {"verdict": INFEASIBLE, "reason": str(exc), "certificate": exc.certificate}
        code = EXIT_INFEASIBLE
    except (DRGError, ValueError, OSError) as exc:
        print(f"drgtriples: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    _emit(doc, as_json)
    return code


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()

"""End-to-end feasibility run for an intersection array.

For an array whose distance-3 graph passes the lattice gate of the rule file
(the {55,54,2;1,1,54} case) the run walks the triple configurations (2,1,1),
(2,2,3), (2,2,1), (2,2,2), applies rules, relabelling and the pair count,
and then tries the final common-neighbour count. Other arrays get the
generic steps only. Every step is recorded with digests of its inputs and
outputs so that two runs can be compared byte for byte.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Any, Iterable, Sequence

from .constraints import (
    PairLink,
    RuleSet,
    apply_rules,
    builtin_rules,
    link_pair_count,
    load_ruleset,
)
from .drgcore import (
    MOORE_57,
    IntersectionArray,
    ParameterTable,
    distance_graph_srg_params,
    eigenmatrices,
    intersection_numbers,
    krein_table,
    spectrum,
)
from .errors import (
    EnumerationTooLarge,
    Infeasible,
    LatticeCheckFailed,
    NoContradiction,
)
from .exactmath import IrrationalSpectrum
from .serialize import compact, digest, dumps, to_jsonable
from .symmetry import (
    Relation,
    TriplePermutation,
    integer_closure,
    stabilizer,
    symmetrize_families,
)
from .triples import (
    LinearEquation,
    TripleConfig,
    TripleFamily,
    enumerate_points,
    family_for,
    index_name,
    realizable_configs,
)

INFEASIBLE = "INFEASIBLE"
FEASIBLE_UNRESOLVED = "FEASIBLE_UNRESOLVED"

CFG_211 = TripleConfig(2, 1, 1)
CFG_223 = TripleConfig(2, 2, 3)
CFG_221 = TripleConfig(2, 2, 1)
CFG_222 = TripleConfig(2, 2, 2)
CFG_213 = TripleConfig(2, 1, 3)

# [233] of (2,2,1) counted against [213] of (2,2,3)
LINK_221_223 = PairLink(base=2, cell_a=(2, 1), cell_b=(2, 3), t=3)
# [133] of (2,2,1) counted against [213] of (2,1,3)
LINK_221_213 = PairLink(base=2, cell_a=(2, 1), cell_b=(1, 3), t=3)

HYPOTHESIS_213 = LinearEquation.build({(2, 1, 3): 1}, 0, "hypothesis [213]=0 on (2,2,3)")


def _rel(terms: dict, rhs: int) -> Relation:
    return Relation.build(terms, rhs)


# Relabelling identities for (2,2,2) that the coupled system must imply.
CROSS_CHECKS_222 = (
    ("[112] = [121]^uwv", _rel({("uvw", (1, 1, 2)): 1, ("uwv", (1, 2, 1)): -1}, 0)),
    ("[313] + [113] + [231]^uwv = 2",
     _rel({("uvw", (3, 1, 3)): 1, ("uvw", (1, 1, 3)): 1, ("uwv", (2, 3, 1)): 1}, 2)),
    ("52 - [212] = [123]^vuw + [121]^vuw",
     _rel({("uvw", (2, 1, 2)): 1, ("vuw", (1, 2, 3)): 1, ("vuw", (1, 2, 1)): 1}, 52)),
    ("[231]^uwv = [213]", _rel({("uwv", (2, 3, 1)): 1, ("uvw", (2, 1, 3)): -1}, 0)),
    ("[213] = [123]^vuw", _rel({("uvw", (2, 1, 3)): 1, ("vuw", (1, 2, 3)): -1}, 0)),
)


def anchor_table() -> dict[str, str]:
    text = resources.files("drgtriples.data").joinpath("anchors.json").read_text(encoding="utf-8")
    return json.loads(text)


@dataclass(frozen=True)
class Step:
    name: str
    anchor: str
    inputs_digest: str
    outputs_digest: str
    summary: dict

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "anchor": self.anchor,
            "inputs_digest": self.inputs_digest,
            "outputs_digest": self.outputs_digest,
            "summary": self.summary,
        }


@dataclass
class ProofReport:
    array: str
    options: dict
    steps: list[Step] = field(default_factory=list)
    verdict: str = FEASIBLE_UNRESOLVED
    certificate: dict | None = None
    gaps: list[dict] = field(default_factory=list)
    conditional: dict | None = None
    assumptions: list[str] = field(default_factory=list)

    def __post_init__(self):
        self._outputs: dict[str, Any] = {}

    def record(self, name: str, anchor: str, inputs: dict, outputs: Any, summary: dict | None = None) -> Step:
        step = Step(name, anchor, digest(inputs), digest(outputs), to_jsonable(summary or {}))
        self.steps.append(step)
        self._outputs[name] = outputs
        return step

    def step(self, name: str) -> Step:
        for s in self.steps:
            if s.name == name:
                return s
        raise KeyError(name)

    def output_digest(self, name: str) -> str:
        return self.step(name).outputs_digest

    def fail(self, certificate: dict) -> "ProofReport":
        self.verdict = INFEASIBLE
        self.certificate = certificate
        return self

    def missing_anchors(self) -> list[str]:
        table = anchor_table()
        anchors = [s.anchor for s in self.steps]
        if self.conditional:
            anchors += [s["anchor"] for s in self.conditional.get("steps", [])]
        return sorted({a for a in anchors if a not in table})

    def to_json(self) -> dict:
        if self.verdict == INFEASIBLE and not self.certificate:
            raise ValueError("an INFEASIBLE verdict needs a certificate")
        return {
            "format": "drgtriples-report",
            "array": self.array,
            "options": self.options,
            "steps": [s.to_json() for s in self.steps],
            "verdict": self.verdict,
            "certificate": self.certificate,
            "gaps": self.gaps,
            "conditional": self.conditional,
            "assumptions": self.assumptions,
        }

    def dumps(self) -> str:
        return dumps(self.to_json())

    def to_text(self) -> str:
        lines = [f"array {self.array}"]
        for n, s in enumerate(self.steps, 1):
            lines.append(f"{n:2d}. {s.name} [{s.anchor}] out={s.outputs_digest[:12]}")
            for k, v in sorted(s.summary.items()):
                lines.append(f"      {k}: {compact(v)}")
        lines.append(f"verdict: {self.verdict}")
        if self.certificate:
            lines.append(f"certificate: {compact(to_jsonable(self.certificate))}")
        for g in self.gaps:
            lines.append(f"gap [{g['step']}]: {g['reason']}")
        for a in self.assumptions:
            lines.append(f"assumption: {a}")
        if self.conditional:
            c = self.conditional
            lines.append(f"conditional on {c['hypothesis']}: {c['verdict']}")
            if c.get("certificate"):
                lines.append(f"  certificate: {compact(to_jsonable(c['certificate']))}")
        return "\n".join(lines) + "\n"


# ---------------------------------------------------------------- helpers

def family_summary(fam: TripleFamily, points: Sequence[Sequence[int]] | None = None,
                   keys: Iterable = ()) -> dict:
    """Dimension, free entries, point count and the entries that vary."""
    pts = enumerate_points(fam) if points is None else list(points)
    out: dict[str, Any] = {
        "config": fam.config.label,
        "dimension": fam.solution.dim,
        "free": [index_name(f) for f in fam.free],
        "points": len(pts),
    }
    varying = {}
    for idx in fam.variables:
        pos = fam.position(idx)
        vals = sorted({p[pos] for p in pts})
        if len(vals) > 1:
            varying[index_name(idx)] = vals
    out["varying"] = varying
    for idx in keys:
        pos = fam.position(idx)
        out[index_name(idx)] = sorted({p[pos] for p in pts})
    return out


def _family_outputs(fam: TripleFamily, points) -> dict:
    return {
        "config": fam.config.label,
        "entries": {index_name(i): e for i, e in fam.entries().items()},
        "points": [list(p) for p in sorted(points)],
    }


@dataclass(frozen=True)
class LambdaBounds:
    e: tuple[int, int]
    lam: tuple[Fraction, Fraction]

    @property
    def lam_3dp(self) -> tuple[str, str]:
        """Outward rounding to three decimals."""
        lo = math.floor(self.lam[0] * 1000)
        hi = math.ceil(self.lam[1] * 1000)
        return _milli(lo), _milli(hi)

    def to_json(self) -> dict:
        return {"e": list(self.e), "lambda": list(self.lam), "lambda_3dp": list(self.lam_3dp)}


def _milli(n: int) -> str:
    sign = "-" if n < 0 else ""
    q, r = divmod(abs(n), 1000)
    return f"{sign}{q}.{r:03d}"


def _values(src, idx) -> list[int]:
    if isinstance(src, TripleFamily):
        return src.value_set(idx)
    return sorted({int(x) for x in src})


def lambda_average_bounds(pt: ParameterTable, fam221, fam223) -> LambdaBounds:
    """Edge count e and average lambda of the distance-2 graph.

    ``fam221``/``fam223`` are families or plain collections of admissible
    [222] values. e = p^2_21 [222]_221 + p^2_23 [222]_223 and
    lambda = (p^2_22 - 1) - e / p^2_22.
    """
    v221 = _values(fam221, (2, 2, 2))
    v223 = _values(fam223, (2, 2, 2))
    if not v221 or not v223:
        raise ValueError("no [222] values to bound")
    n21, n23, k = pt(2, 2, 1), pt(2, 2, 3), pt(2, 2, 2)
    e = (n21 * v221[0] + n23 * v223[0], n21 * v221[-1] + n23 * v223[-1])
    lam = (Fraction(k - 1) - Fraction(e[1], k), Fraction(k - 1) - Fraction(e[0], k))
    return LambdaBounds(e, lam)


def final_contradiction_check(pt: ParameterTable, table221: TripleFamily) -> dict:
    """Demand/capacity count on the distance-3 graph.

    Fix u, v at distance 2 and let X be the p^2_13 neighbours of u at distance
    3 from v. If every (2,2,1) table has [133] = |X|, each of the p^2_21
    vertices w with d(u,w)=2, d(v,w)=1 is at distance 3 from all of X. Two
    members of X are at distance at most 2, so they have at most
    max(p^1_33, p^2_33) common distance-3 neighbours, one of which is v.
    """
    if table221.config != CFG_221:
        raise ValueError(f"expected a {CFG_221} family, got {table221.config}")
    if pt.d < 3:
        raise NoContradiction("the count needs diameter at least 3")
    pair = pt(2, 1, 3)
    if pair < 2:
        raise NoContradiction(f"p^2_13 = {pair}: fewer than two vertices to pin w")
    vals = table221.value_set((1, 3, 3))
    if not vals:
        raise ValueError("the (2,2,1) family has no integer points")
    if vals != [pair]:
        raise NoContradiction(
            f"[133] takes values {vals} on (2,2,1); the count needs [133] = {pair} on every table"
        )
    common = max(pt(1, 3, 3), pt(2, 3, 3))
    demand = pt(2, 2, 1)
    capacity = common - 1
    if demand <= capacity:
        raise NoContradiction(f"demand {demand} fits within capacity {capacity}")
    return {
        "kind": "common-neighbour-count",
        "demand": demand,
        "capacity": capacity,
        "demand_derivation": f"p^2_21 = {demand} vertices w with d(u,w)=2, d(v,w)=1, each with [133] = {pair}",
        "capacity_derivation": (
            f"two neighbours of u have max(p^1_33, p^2_33) = {common} common distance-3 neighbours; "
            f"one of them is v"
        ),
        "inputs": {"p^2_21": demand, "p^2_13": pair, "[133]": pair,
                   "p^1_33": pt(1, 3, 3), "p^2_33": pt(2, 3, 3)},
    }


def _link(pt, fam_a, fam_b, link):
    """Run the pair count and fold any tightening back into both families."""
    res = link_pair_count(pt, fam_a, fam_b, link)
    rels_a, rels_b = res.relations("a"), res.relations("b")

    def fold(fam, rels):
        if not rels:
            return fam
        eqs = [r for r in rels if isinstance(r, LinearEquation)]
        ineqs = [r for r in rels if not isinstance(r, LinearEquation)]
        out = fam.constrained(eqs, ineqs, note="pair count")
        return out.restricted(enumerate_points(out))

    return res, fold(fam_a, rels_a), fold(fam_b, rels_b)


# ---------------------------------------------------------------- runner

def run_moore_proof(arr: IntersectionArray = MOORE_57, use_krein: bool = False,
                    ruleset: RuleSet | None = None) -> ProofReport:
    report = ProofReport(str(arr), {"use_krein": use_krein})
    arr_in = {"array": str(arr)}

    try:
        pt = intersection_numbers(arr)
    except Infeasible as exc:
        report.record("intersection-numbers", "parameters", arr_in, {"error": str(exc)})
        return report.fail(exc.certificate)
    report.record("intersection-numbers", "parameters", arr_in, {"k": pt.k, "p": pt.p},
                  {"v": pt.v, "k": pt.k})

    em = kt = None
    try:
        spec = spectrum(arr, pt)
    except IrrationalSpectrum as exc:
        report.record("spectrum", "spectrum", {"parameters": report.output_digest("intersection-numbers")},
                      {"irrational": str(exc)}, {"irrational": True})
        spec = None
    except Infeasible as exc:
        report.record("spectrum", "spectrum", arr_in, {"error": str(exc)})
        return report.fail(exc.certificate)
    if spec is not None:
        report.record("spectrum", "spectrum", {"parameters": report.output_digest("intersection-numbers")},
                      {"eigenvalues": spec.eigenvalues, "multiplicities": spec.multiplicities},
                      {"pairs": [[t, m] for t, m in spec.pairs()]})
        em = eigenmatrices(arr, pt, spec)
        report.record("eigenmatrices", "q-matrix", {"spectrum": report.output_digest("spectrum")},
                      {"P": em.P.tolist(), "Q": em.Q.tolist()}, {"Q_row1": list(em.Q.tolist()[1])})
        try:
            kt = krein_table(arr, pt, em)
        except Infeasible as exc:
            report.record("krein", "krein", {"eigenmatrices": report.output_digest("eigenmatrices")},
                          {"error": str(exc)})
            return report.fail(exc.certificate)
        nontrivial = [t for t in kt.vanishing if 0 not in t]
        report.record("krein", "krein", {"eigenmatrices": report.output_digest("eigenmatrices")},
                      {"q": kt.q}, {"vanishing_nontrivial": [list(t) for t in nontrivial]})
    if use_krein and kt is None:
        use_krein = False
        report.options["use_krein"] = "unavailable: irrational spectrum"

    ruleset = ruleset or load_ruleset()
    gate_in = {"parameters": report.output_digest("intersection-numbers"), "gate": ruleset.gate_srg}
    try:
        rules = builtin_rules(pt, ruleset)
    except LatticeCheckFailed as exc:
        report.record("lattice-gate", "lattice", gate_in, {"passed": False, "reason": str(exc)},
                      {"passed": False, "reason": str(exc)})
        return _generic_chain(report, pt, use_krein, kt, em)
    report.record("lattice-gate", "lattice", gate_in,
                  {"passed": True, "srg": distance_graph_srg_params(pt, ruleset.gate_distance)},
                  {"passed": True, "srg": list(ruleset.gate_srg), "rules": [r.id for r in rules]})
    report.assumptions = [str(r) for r in rules if r.assumption]
    kw = {"kt": kt, "em": em, "use_krein": use_krein}
    try:
        return _lattice_chain(report, pt, rules, kw)
    except Infeasible as exc:
        return report.fail(exc.certificate)


def _generic_chain(report: ProofReport, pt: ParameterTable, use_krein, kt, em) -> ProofReport:
    kw = {"kt": kt, "em": em, "use_krein": use_krein}
    parent = report.output_digest("intersection-numbers")
    for cfg in realizable_configs(pt):
        name = f"triples-{cfg.label}"
        inputs = {"parameters": parent, "config": cfg.label, "use_krein": use_krein}
        try:
            fam = family_for(pt, cfg, **kw)
            pts = enumerate_points(fam)
        except EnumerationTooLarge as exc:
            report.record(name, "generic-config", inputs, {"skipped": str(exc)}, {"skipped": True})
            continue
        except Infeasible as exc:
            report.record(name, "generic-config", inputs, {"error": str(exc)})
            return report.fail(exc.certificate)
        group = stabilizer(cfg)
        closed = integer_closure(pts, group, fam.d)
        report.record(name, "generic-config", inputs, _family_outputs(fam, closed),
                      {"dimension": fam.solution.dim, "points": len(pts), "closed": len(closed),
                       "group": [s.name for s in group]})
        if not closed:
            return report.fail({"kind": "empty-family", "config": cfg.label,
                                "points_before_closure": len(pts)})
    report.gaps.append({"step": "lattice-gate", "reason": "no structural rules apply; generic checks only"})
    return report


def _lattice_chain(report: ProofReport, pt: ParameterTable, rules, kw) -> ProofReport:
    gate = report.output_digest("lattice-gate")
    rule_ids = sorted(r.id for r in rules)

    # (2,1,1): counting equations alone
    f211 = apply_rules(family_for(pt, CFG_211, **kw), rules)
    p211 = enumerate_points(f211)
    report.record("triples-2,1,1", "config-211", {"gate": gate, "config": "2,1,1"},
                  _family_outputs(f211, p211), family_summary(f211, p211, [(2, 2, 2)]))

    # (2,2,3): rules, then the v<->w swap
    f223 = apply_rules(family_for(pt, CFG_223, **kw), rules)
    sym223 = symmetrize_families(f223)
    s223 = sym223.family
    p223 = enumerate_points(s223)
    if not p223:
        raise Infeasible("(2,2,3) has no tables closed under relabelling",
                         {"kind": "empty-family", "config": CFG_223.label})
    branches = {val: len(enumerate_points(b)) for val, b in sym223.branches((2, 2, 2))}
    report.record("triples-2,2,3", "config-223", {"gate": gate, "config": "2,2,3", "rules": rule_ids},
                  _family_outputs(s223, p223),
                  {**family_summary(s223, p223, [(2, 2, 2), (2, 1, 3)]),
                   "relations": len(sym223.relations), "branches_222": branches})

    # (2,2,1): rules, then the pair count against (2,2,3)
    f221 = apply_rules(family_for(pt, CFG_221, **kw), rules)
    f221 = f221.restricted(enumerate_points(f221))
    link, r221, _ = _link(pt, f221, s223, LINK_221_223)
    p221 = enumerate_points(r221)
    report.record("triples-2,2,1", "config-221",
                  {"gate": gate, "config": "2,2,1", "rules": rule_ids,
                   "linked": report.output_digest("triples-2,2,3")},
                  _family_outputs(r221, p221),
                  {**family_summary(r221, p221, [(1, 3, 3), (2, 3, 3), (2, 2, 2)]),
                   "pair_count": link.to_json(), "tightened": not link.tautology})

    # (2,2,2): rules, then the full symmetric group
    f222 = apply_rules(family_for(pt, CFG_222, **kw), rules)
    sym222 = symmetrize_families(f222)
    s222 = sym222.family
    p222 = enumerate_points(s222)
    checks = {label: sym222.coupled.implies(rel) for label, rel in CROSS_CHECKS_222}
    pos213, pos112 = s222.position((2, 1, 3)), s222.position((1, 1, 2))
    top = max(p[pos213] for p in p222) if p222 else None
    case = {}
    if top is not None:
        for p in p222:
            if p[pos213] == top:
                case[p[pos112]] = case.get(p[pos112], 0) + 1
    report.record("triples-2,2,2", "config-222", {"gate": gate, "config": "2,2,2", "rules": rule_ids},
                  _family_outputs(s222, p222),
                  {**family_summary(s222, p222, [(2, 2, 2), (2, 1, 3)]),
                   "relations": len(sym222.relations), "identities": checks,
                   "case_213_max": {"[213]": top, "points_by_112": dict(sorted(case.items()))}})

    lam = lambda_average_bounds(pt, r221, s223)
    report.record("edge-average", "edge-average",
                  {"221": report.output_digest("triples-2,2,1"), "223": report.output_digest("triples-2,2,3")},
                  lam.to_json(), lam.to_json())

    final_in = {"221": report.output_digest("triples-2,2,1"), "gate": gate}
    try:
        cert = final_contradiction_check(pt, r221)
    except NoContradiction as exc:
        report.record("final-count", "final-count", final_in, {"contradiction": False, "reason": str(exc)},
                      {"contradiction": False, "reason": str(exc)})
        report.gaps.append({"step": "final-count", "reason": str(exc)})
        _explain_223_gap(report, s223, p223)
        report.conditional = _conditional_run(pt, s223, p223, f221, rules)
        return report
    report.record("final-count", "final-count", final_in, cert, {"contradiction": True})
    return report.fail(cert)


def _explain_223_gap(report: ProofReport, s223: TripleFamily, p223) -> None:
    pos = s223.position((2, 1, 3))
    bad = [p for p in p223 if p[pos] != 0]
    if not bad:
        return
    swap = TriplePermutation.from_name("uwv")
    witness = bad[0]
    report.gaps.append({
        "step": "triples-2,2,3",
        "reason": (f"[213] is not forced to 0: {len(bad)} of {len(p223)} tables closed under the v<->w swap "
                   f"have [213] > 0, so the pair count leaves [233] of (2,2,1) free"),
        "witness": {index_name(k): v for k, v in s223.as_dict(witness).items()},
        "witness_image": {index_name(k): v for k, v in s223.as_dict(swap.permute_point(witness, s223.d)).items()},
    })


def _conditional_run(pt, s223, p223, f221, rules) -> dict:
    """Replay the tail of the chain under two hypotheses on (2,2,3) tables:
    [213] = 0, and each table equals its own image under the v<->w swap."""
    steps = []
    h223 = s223.constrained([HYPOTHESIS_213], note=HYPOTHESIS_213.origin)
    h223 = h223.restricted(enumerate_points(h223))
    steps.append({"name": "hypothesis-213", "anchor": "hypothesis-213",
                  "summary": to_jsonable(family_summary(h223, None, [(2, 2, 2)]))})
    swap = TriplePermutation.from_name("uwv")
    h223 = h223.restricted([p for p in enumerate_points(h223) if swap.permute_point(p, h223.d) == tuple(p)],
                           note="tables fixed by the v<->w swap")
    hp = enumerate_points(h223)
    steps.append({"name": "hypothesis-self-symmetric", "anchor": "hypothesis-213",
                  "summary": to_jsonable(family_summary(h223, hp, [(2, 2, 2)]))})
    out = {"hypothesis": "[213]=0 on every (2,2,3) table, and each (2,2,3) table is fixed by the v<->w swap",
           "steps": steps, "verdict": FEASIBLE_UNRESOLVED, "certificate": None}
    if not hp:
        out["verdict"] = INFEASIBLE
        out["certificate"] = {"kind": "empty-family", "config": CFG_223.label}
        return out
    link, h221, _ = _link(pt, f221, h223, LINK_221_223)
    hp221 = enumerate_points(h221)
    steps.append({"name": "triples-2,2,1", "anchor": "config-221",
                  "summary": to_jsonable({**family_summary(h221, hp221, [(1, 3, 3), (2, 2, 2)]),
                                          "pair_count": link.to_json()})})
    lam = lambda_average_bounds(pt, h221, h223)
    steps.append({"name": "edge-average", "anchor": "edge-average", "summary": to_jsonable(lam.to_json())})
    out["lambda_bounds"] = to_jsonable(lam.to_json())
    f213 = apply_rules(family_for(pt, CFG_213), rules)
    try:
        link_pair_count(pt, h221, f213, LINK_221_213)
        steps.append({"name": "pair-count-2,1,3", "anchor": "pair-count-221-213",
                      "summary": {"contradiction": False}})
    except Infeasible as exc:
        steps.append({"name": "pair-count-2,1,3", "anchor": "pair-count-221-213",
                      "summary": {"contradiction": True, "certificate": to_jsonable(exc.certificate)}})
    try:
        cert = final_contradiction_check(pt, h221)
    except NoContradiction as exc:
        steps.append({"name": "final-count", "anchor": "final-count",
                      "summary": {"contradiction": False, "reason": str(exc)}})
        return out
    steps.append({"name": "final-count", "anchor": "final-count", "summary": {"contradiction": True}})
    out["verdict"] = INFEASIBLE
    out["certificate"] = cert
    return out

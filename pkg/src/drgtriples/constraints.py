"""Structural constraints beyond the counting equations.

Rules live in a JSON rule file so that each one is auditable on its own:
a linear relation on triple entries for one configuration, a category, and
a justification. The bundled file is gated on the distance-3 graph being
the 56x56 lattice; double counts across two configurations are handled by
:func:`link_pair_count`.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Sequence

from .drgcore import ParameterTable, distance_graph_srg_params
from .errors import Infeasible, LatticeCheckFailed, NotSRGLike
from .triples import (
    Index,
    LinearEquation,
    LinearInequality,
    TripleConfig,
    TripleFamily,
    enumerate_points,
    index_name,
    parse_index,
)

CATEGORIES = ("lattice-geometry", "linking", "inequality")
OPS = ("==", "<=", ">=")


@dataclass(frozen=True)
class ConstraintRule:
    id: str
    config: TripleConfig
    coefficients: tuple[tuple[Index, int], ...]
    op: str
    rhs: int
    category: str
    provenance: str
    assumption: bool = False

    def __post_init__(self):
        if self.op not in OPS:
            raise ValueError(f"rule {self.id}: unknown op {self.op!r}")
        if self.category not in CATEGORIES:
            raise ValueError(f"rule {self.id}: unknown category {self.category!r}")
        if not self.provenance.strip():
            raise ValueError(f"rule {self.id}: provenance must be non-empty")
        if not self.coefficients:
            raise ValueError(f"rule {self.id}: empty relation")

    def validate_for(self, d: int) -> None:
        for idx, _ in self.coefficients:
            if not all(1 <= x <= d for x in idx):
                raise ValueError(f"rule {self.id}: entry {index_name(idx)} outside 1..{d}")

    def relation(self) -> LinearEquation | LinearInequality:
        coeffs = dict(self.coefficients)
        origin = f"rule {self.id}"
        if self.op == "==":
            return LinearEquation.build(coeffs, self.rhs, origin)
        if self.op == "<=":
            return LinearInequality.build(coeffs, None, self.rhs, origin)
        return LinearInequality.build(coeffs, self.rhs, None, origin)

    def __str__(self) -> str:
        lhs = " + ".join(
            (index_name(i) if c == 1 else f"{c}*{index_name(i)}") for i, c in self.coefficients
        )
        return f"{self.id}: {lhs} {self.op} {self.rhs} on config {self.config}"

    def to_json(self) -> dict:
        return {
            "id": self.id,
            "config": self.config.label,
            "coefficients": {index_name(i).strip("[]"): c for i, c in self.coefficients},
            "op": self.op,
            "rhs": self.rhs,
            "category": self.category,
            "provenance": self.provenance,
            "assumption": self.assumption,
        }

    @classmethod
    def from_json(cls, rec: dict) -> "ConstraintRule":
        coeffs = tuple(sorted((parse_index(k), int(v)) for k, v in rec["coefficients"].items()))
        return cls(
            id=rec["id"],
            config=TripleConfig.parse(rec["config"]),
            coefficients=coeffs,
            op=rec["op"],
            rhs=int(rec["rhs"]),
            category=rec["category"],
            provenance=rec["provenance"],
            assumption=bool(rec.get("assumption", False)),
        )


@dataclass(frozen=True)
class RuleSet:
    """Rules plus the gate they depend on: the distance-``gate_distance``
    graph must be strongly regular with parameters ``gate_srg``."""

    version: int
    gate_distance: int
    gate_srg: tuple[int, int, int, int]
    gate_note: str
    rules: tuple[ConstraintRule, ...]

    def for_config(self, cfg: TripleConfig) -> list[ConstraintRule]:
        return [r for r in self.rules if r.config == cfg]

    def to_json(self) -> dict:
        return {
            "format": "drgtriples-rules",
            "version": self.version,
            "gate": {"distance": self.gate_distance, "srg": list(self.gate_srg), "note": self.gate_note},
            "rules": [r.to_json() for r in self.rules],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    @classmethod
    def loads(cls, text: str) -> "RuleSet":
        doc = json.loads(text)
        if doc.get("format") != "drgtriples-rules":
            raise ValueError("not a drgtriples rule file")
        gate = doc["gate"]
        rules = tuple(ConstraintRule.from_json(r) for r in doc["rules"])
        ids = [r.id for r in rules]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate rule ids")
        return cls(int(doc["version"]), int(gate["distance"]), tuple(gate["srg"]),
                   gate.get("note", ""), rules)

    @classmethod
    def load(cls, path: str | Path) -> "RuleSet":
        return cls.loads(Path(path).read_text(encoding="utf-8"))


def bundled_rules_text() -> str:
    return resources.files("drgtriples.data").joinpath("rules.json").read_text(encoding="utf-8")


def load_ruleset(path: str | Path | None = None) -> RuleSet:
    return RuleSet.loads(bundled_rules_text()) if path is None else RuleSet.load(path)


def check_gate(pt: ParameterTable, ruleset: RuleSet) -> tuple[int, int, int, int]:
    if ruleset.gate_distance > pt.d:
        raise LatticeCheckFailed(f"diameter {pt.d} has no distance-{ruleset.gate_distance} graph")
    try:
        params = distance_graph_srg_params(pt, ruleset.gate_distance)
    except NotSRGLike as exc:
        raise LatticeCheckFailed(str(exc)) from exc
    if params != ruleset.gate_srg:
        raise LatticeCheckFailed(
            f"distance-{ruleset.gate_distance} graph has parameters {params}, rules need {ruleset.gate_srg}"
        )
    return params


def builtin_rules(pt: ParameterTable, ruleset: RuleSet | None = None) -> list[ConstraintRule]:
    """Rules applicable to ``pt``; raises LatticeCheckFailed if the gate fails."""
    ruleset = ruleset or load_ruleset()
    check_gate(pt, ruleset)
    for r in ruleset.rules:
        r.validate_for(pt.d)
    return list(ruleset.rules)


def apply_rules(fam: TripleFamily, rules: Sequence[ConstraintRule]) -> TripleFamily:
    """Join the rules for ``fam.config`` to the family and re-solve.

    Rules for other configurations are ignored. Equalities enter the linear
    system; inequalities tighten the integer box.
    """
    mine = [r for r in rules if r.config == fam.config]
    if not mine:
        return fam
    eqs, ineqs = [], []
    for r in mine:
        r.validate_for(fam.d)
        rel = r.relation()
        (eqs if isinstance(rel, LinearEquation) else ineqs).append(rel)
    return fam.constrained(eqs, ineqs, note="rules " + ", ".join(r.id for r in mine))


@dataclass(frozen=True)
class PairLink:
    """Double count of pairs (y, z) with d(y, z) = ``t``.

    The base pair (u, v) is at distance ``base``; y ranges over the cell
    (d(u,y), d(v,y)) = ``cell_a`` and z over ``cell_b``. Seen from y the count
    is entry (cell_b, t) of the family for config (base, *cell_a); seen from
    z it is entry (cell_a, t) of config (base, *cell_b).
    """

    base: int
    cell_a: tuple[int, int]
    cell_b: tuple[int, int]
    t: int

    @property
    def config_a(self) -> TripleConfig:
        return TripleConfig(self.base, *self.cell_a)

    @property
    def config_b(self) -> TripleConfig:
        return TripleConfig(self.base, *self.cell_b)

    @property
    def entry_a(self) -> Index:
        return (*self.cell_b, self.t)

    @property
    def entry_b(self) -> Index:
        return (*self.cell_a, self.t)


@dataclass(frozen=True)
class LinkResult:
    link: PairLink
    size_a: int
    size_b: int
    range_a: tuple[int, int]
    range_b: tuple[int, int]
    total: tuple[int, int]
    bounds_a: tuple[int, int]
    bounds_b: tuple[int, int]

    @property
    def tautology(self) -> bool:
        return self.bounds_a == self.range_a and self.bounds_b == self.range_b

    def relations(self, side: str) -> list[LinearEquation | LinearInequality]:
        idx = self.link.entry_a if side == "a" else self.link.entry_b
        new, old = (self.bounds_a, self.range_a) if side == "a" else (self.bounds_b, self.range_b)
        if new == old:
            return []
        origin = f"pair count {self.link.cell_a}x{self.link.cell_b} at distance {self.link.t}"
        if new[0] == new[1]:
            return [LinearEquation.build({idx: 1}, new[0], origin)]
        return [LinearInequality.build({idx: 1}, new[0], new[1], origin)]

    def to_json(self) -> dict:
        return {
            "base": self.link.base,
            "cell_a": list(self.link.cell_a),
            "cell_b": list(self.link.cell_b),
            "t": self.link.t,
            "entry_a": index_name(self.link.entry_a),
            "entry_b": index_name(self.link.entry_b),
            "size_a": self.size_a,
            "size_b": self.size_b,
            "range_a": list(self.range_a),
            "range_b": list(self.range_b),
            "total": list(self.total),
            "bounds_a": list(self.bounds_a),
            "bounds_b": list(self.bounds_b),
        }


def link_pair_count(pt: ParameterTable, fam_a: TripleFamily, fam_b: TripleFamily,
                    link: PairLink) -> LinkResult:
    """Equate the two ways of counting linked pairs and tighten both entries.

    With n_a vertices y each contributing a value in [lo_a, hi_a] (and
    likewise for z), the common total N lies in the intersection of the two
    sum intervals, and each single contribution is at least
    N_lo - (n_a - 1) * hi_a and at most N_hi - (n_a - 1) * lo_a.
    """
    if fam_a.config != link.config_a or fam_b.config != link.config_b:
        raise ValueError("families do not match the link configurations")
    n_a = pt(link.base, *link.cell_a)
    n_b = pt(link.base, *link.cell_b)
    vals_a = [p[fam_a.position(link.entry_a)] for p in enumerate_points(fam_a)]
    vals_b = [p[fam_b.position(link.entry_b)] for p in enumerate_points(fam_b)]
    if not vals_a or not vals_b:
        raise Infeasible("a linked family has no integer points",
                         {"kind": "empty-family", "config": (fam_a if not vals_a else fam_b).config.label})
    ra = (min(vals_a), max(vals_a))
    rb = (min(vals_b), max(vals_b))
    lo = max(n_a * ra[0], n_b * rb[0])
    hi = min(n_a * ra[1], n_b * rb[1])
    if lo > hi:
        raise Infeasible(
            "the two pair counts cannot agree",
            {"kind": "pair-count", "cell_a": list(link.cell_a), "cell_b": list(link.cell_b),
             "t": link.t, "count_a": [n_a * ra[0], n_a * ra[1]],
             "count_b": [n_b * rb[0], n_b * rb[1]]},
        )

    def tighten(n: int, r: tuple[int, int]) -> tuple[int, int]:
        return max(r[0], lo - (n - 1) * r[1]), min(r[1], hi - (n - 1) * r[0])

    return LinkResult(link, n_a, n_b, ra, rb, (lo, hi), tighten(n_a, ra), tighten(n_b, rb))

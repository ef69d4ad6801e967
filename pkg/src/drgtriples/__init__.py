"""Exact distance-regular graph parameters and triple intersection numbers."""

from __future__ import annotations

from .constraints import ConstraintRule, PairLink, RuleSet, apply_rules, builtin_rules, link_pair_count, load_ruleset
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
from .errors import DRGError, Infeasible, NoContradiction
from .pipeline import (
    FEASIBLE_UNRESOLVED,
    INFEASIBLE,
    ProofReport,
    final_contradiction_check,
    lambda_average_bounds,
    run_moore_proof,
)
from .symmetry import TriplePermutation, symmetrize_families
from .triples import TripleConfig, TripleFamily, enumerate_points, family_for

__all__ = [
    "ConstraintRule", "PairLink", "RuleSet", "apply_rules", "builtin_rules", "link_pair_count",
    "load_ruleset", "MOORE_57", "IntersectionArray", "ParameterTable", "distance_graph_srg_params",
    "eigenmatrices", "intersection_numbers", "krein_table", "spectrum", "DRGError", "Infeasible",
    "NoContradiction", "FEASIBLE_UNRESOLVED", "INFEASIBLE", "ProofReport", "final_contradiction_check",
    "lambda_average_bounds", "run_moore_proof", "TriplePermutation", "symmetrize_families",
    "TripleConfig", "TripleFamily", "enumerate_points", "family_for",
]

__version__ = "0.1.0"

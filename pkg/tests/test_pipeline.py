from __future__ import annotations

import json
from fractions import Fraction

import pytest

from drgtriples.drgcore import MOORE_57, IntersectionArray, intersection_numbers
from drgtriples.errors import NoContradiction
from drgtriples.pipeline import (
    CFG_221,
    FEASIBLE_UNRESOLVED,
    INFEASIBLE,
    ProofReport,
    anchor_table,
    final_contradiction_check,
    lambda_average_bounds,
    run_moore_proof,
)
from drgtriples.triples import LinearEquation, family_for
from reference_tables import RESOLVED_221, as_vector


@pytest.fixture(scope="module")
def pt():
    return intersection_numbers(MOORE_57)


@pytest.fixture(scope="module")
def report():
    return run_moore_proof()


def test_report_steps(report):
    names = [s.name for s in report.steps]
    assert names == ["intersection-numbers", "spectrum", "eigenmatrices", "krein", "lattice-gate",
                     "triples-2,1,1", "triples-2,2,3", "triples-2,2,1", "triples-2,2,2",
                     "edge-average", "final-count"]
    assert report.missing_anchors() == []
    assert report.step("triples-2,1,1").summary["[222]"] == [2650, 2651, 2652]
    assert report.step("triples-2,2,1").summary["[133]"] == [0, 1, 2]


def test_report_verdict_and_gaps(report):
    assert report.verdict == FEASIBLE_UNRESOLVED
    assert report.certificate is None
    steps = {g["step"] for g in report.gaps}
    assert steps == {"final-count", "triples-2,2,3"}
    gap = next(g for g in report.gaps if g["step"] == "triples-2,2,3")
    assert gap["witness"]["[213]"] == 1
    assert report.assumptions == ["line-meets-neighbourhood: [133] <= 1 on config (2,2,3)"]


def test_conditional_run(report):
    c = report.conditional
    assert c["verdict"] == INFEASIBLE
    assert c["certificate"]["demand"] == 52
    assert c["certificate"]["capacity"] == 1
    steps = {s["name"]: s["summary"] for s in c["steps"]}
    assert steps["triples-2,2,1"]["points"] == 1
    assert steps["triples-2,2,1"]["[133]"] == [2]
    assert steps["triples-2,2,1"]["[222]"] == [2654]
    assert steps["edge-average"]["e"] == [424844, 424950]
    assert steps["edge-average"]["lambda_3dp"] == ["2658.826", "2658.864"]
    assert steps["pair-count-2,1,3"]["contradiction"] is True


def test_report_json_is_canonical(report):
    text = report.dumps()
    doc = json.loads(text)
    assert doc["format"] == "drgtriples-report"
    assert json.dumps(doc, indent=2, sort_keys=True, ensure_ascii=False) + "\n" == text
    assert "verdict: FEASIBLE_UNRESOLVED" in report.to_text()


def test_infeasible_needs_certificate():
    r = ProofReport("{3,2;1,1}", {})
    r.verdict = INFEASIBLE
    with pytest.raises(ValueError):
        r.to_json()


def test_anchors_are_described():
    table = anchor_table()
    assert all(isinstance(v, str) and v.strip() for v in table.values())


@pytest.mark.parametrize("text", ["{3,2;1,1}", "{4,3,3;1,1,2}", "{2,1;1,1}", "{7,6;1,1}"])
def test_known_graphs_are_not_refuted(text):
    rep = run_moore_proof(IntersectionArray.parse(text))
    assert rep.verdict == FEASIBLE_UNRESOLVED
    assert rep.step("lattice-gate").summary["passed"] is False
    assert rep.missing_anchors() == []


def test_non_integral_array_is_infeasible():
    rep = run_moore_proof(IntersectionArray.parse("{55,54,2;1,1,53}"))
    assert rep.verdict == INFEASIBLE
    assert rep.certificate["kind"] == "intersection-number"


def test_negative_krein_is_infeasible():
    rep = run_moore_proof(IntersectionArray.parse("{9,8;1,4}"))
    assert rep.verdict == INFEASIBLE
    assert rep.certificate["kind"] == "krein"


def _resolved_221(pt):
    fam = family_for(pt, CFG_221)
    point = as_vector(RESOLVED_221)
    return fam.restricted([point])


def test_final_check_on_resolved_table(pt):
    fam = _resolved_221(pt)
    assert fam.contains(as_vector(RESOLVED_221))
    cert = final_contradiction_check(pt, fam)
    assert (cert["demand"], cert["capacity"]) == (52, 1)
    assert cert["inputs"]["[133]"] == 2


@pytest.mark.parametrize("value", [0, 1])
def test_final_check_needs_full_133(pt, value):
    fam = family_for(pt, CFG_221).constrained([LinearEquation.build({(1, 3, 3): 1}, value, "test")])
    with pytest.raises(NoContradiction):
        final_contradiction_check(pt, fam)


def test_final_check_without_constraints(pt):
    with pytest.raises(NoContradiction):
        final_contradiction_check(pt, family_for(pt, CFG_221))


def test_lambda_bounds_on_stated_inputs(pt):
    lam = lambda_average_bounds(pt, [2654], [2706, 2707])
    assert lam.e == (424844, 424950)
    assert lam.lam_3dp == ("2658.826", "2658.864")
    assert lam.lam[0] == Fraction(2810) - Fraction(424950, 2811)


def test_lambda_bounds_single_branch(pt):
    lam = lambda_average_bounds(pt, [2654], [2706])
    assert lam.e[0] == lam.e[1] == 52 * 2654 + 106 * 2706
    assert lam.lam[0] == lam.lam[1]


def test_lambda_bounds_reject_empty(pt):
    with pytest.raises(ValueError):
        lambda_average_bounds(pt, [], [2706])

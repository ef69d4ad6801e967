from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from drgtriples.drgcore import (
    MOORE_57,
    IntersectionArray,
    distance_graph_srg_params,
    eigenmatrices,
    intersection_numbers,
    krein_table,
    spectrum,
)
from drgtriples.errors import (
    Infeasible,
    InvalidArray,
    NegativeKrein,
    NonIntegralMultiplicity,
    NonIntegralParameters,
    NotSRGLike,
)
from drgtriples.exactmath import IrrationalSpectrum, RatMatrix
from reference_tables import REFERENCE_P, Q_MATRIX

FEASIBLE = ["{3,2;1,1}", "{3,2,1;1,2,3}", "{4,3,3;1,1,2}", "{7,6;1,1}", "{55,54,2;1,1,54}",
            "{14,7;1,2}", "{6,5,4;1,2,6}", "{10,6;1,4}"]


@pytest.fixture(scope="module")
def target():
    pt = intersection_numbers(MOORE_57)
    spec = spectrum(MOORE_57, pt)
    em = eigenmatrices(MOORE_57, pt, spec)
    return pt, spec, em


def test_parse_and_str():
    arr = IntersectionArray.parse(" { 55, 54,2 ; 1,1, 54 } ")
    assert arr == MOORE_57
    assert str(arr) == "{55,54,2;1,1,54}"
    assert IntersectionArray.parse("3,2;1,1") == IntersectionArray((3, 2), (1, 1))


@pytest.mark.parametrize("text", ["{3,2;1}", "{3;1}", "{3,2;2,1}", "{3,4;1,1}", "{3,2;1,4}",
                                  "{3,0;1,1}", "nonsense", "{3,3;1,1}"])
def test_invalid_arrays(text):
    with pytest.raises(InvalidArray):
        IntersectionArray.parse(text)


def test_reference_intersection_numbers(target):
    pt, _, _ = target
    assert pt.k == (1, 55, 2970, 110)
    assert pt.v == 3136
    for (h, i, j), val in REFERENCE_P.items():
        assert pt(h, i, j) == val, (h, i, j)
        assert pt(h, j, i) == val


@pytest.mark.parametrize("text", FEASIBLE)
def test_intersection_number_identities(text):
    arr = IntersectionArray.parse(text)
    pt = intersection_numbers(arr)
    d = arr.d
    for h in range(d + 1):
        for i in range(d + 1):
            assert sum(pt(h, i, j) for j in range(d + 1)) == pt.k[i]
            for j in range(d + 1):
                assert pt.k[h] * pt(h, i, j) == pt.k[i] * pt(i, h, j)
    for i in range(d):
        assert pt(i, 1, i + 1) == arr.b[i]
    for i in range(1, d + 1):
        assert pt(i, 1, i - 1) == arr.c_(i)


@settings(max_examples=200, deadline=None)
@given(st.lists(st.integers(1, 12), min_size=2, max_size=4), st.data())
def test_random_arrays_parameters_consistent(bs, data):
    d = len(bs)
    k = bs[0]
    cs = [1] + [data.draw(st.integers(1, k)) for _ in range(d - 1)]
    try:
        arr = IntersectionArray(tuple(bs), tuple(cs))
    except InvalidArray:
        assume(False)
    try:
        pt = intersection_numbers(arr)
    except NonIntegralParameters as exc:
        assert exc.certificate["kind"] == "intersection-number"
        return
    for h in range(d + 1):
        for i in range(d + 1):
            for j in range(d + 1):
                assert pt(h, i, j) >= 0
                assert pt(h, i, j) == pt(h, j, i)
                assert pt.k[h] * pt(h, i, j) == pt.k[i] * pt(i, h, j)


def test_non_integral_parameters_certificate():
    with pytest.raises(NonIntegralParameters) as err:
        intersection_numbers(IntersectionArray.parse("{55,54,2;1,1,53}"))
    cert = err.value.certificate
    assert cert["kind"] == "intersection-number"
    assert "/" in cert["value"]


def test_target_spectrum(target):
    _, spec, _ = target
    assert spec.pairs() == [(55, 1), (7, 1617), (-1, 110), (-8, 1408)]


def test_target_q_matrix(target):
    _, _, em = target
    expect = RatMatrix([[Fraction(x) for x in row] for row in Q_MATRIX])
    assert em.Q == expect
    assert em.P @ em.Q == RatMatrix.identity(4).scale(3136)


@pytest.mark.parametrize("text", FEASIBLE)
def test_eigenmatrix_inverse_pair(text):
    arr = IntersectionArray.parse(text)
    pt = intersection_numbers(arr)
    spec = spectrum(arr, pt)
    em = eigenmatrices(arr, pt, spec)
    n = arr.d + 1
    assert em.P @ em.Q == RatMatrix.identity(n).scale(pt.v)
    assert sum(spec.multiplicities) == pt.v
    assert [em.Q[0, r] for r in range(n)] == list(spec.multiplicities)
    assert spec.eigenvalues[0] == arr.k


def test_irrational_spectrum_pentagon():
    with pytest.raises(IrrationalSpectrum):
        spectrum(IntersectionArray.parse("{2,1;1,1}"))


def test_non_integral_multiplicity():
    # a 3-regular graph on 5 vertices
    with pytest.raises(NonIntegralMultiplicity) as err:
        spectrum(IntersectionArray.parse("{3,1;1,3}"))
    assert err.value.certificate["kind"] == "multiplicity"


def test_krein_target_has_no_nontrivial_zero(target):
    pt, _, em = target
    kt = krein_table(MOORE_57, pt, em)
    assert all(q >= 0 for qh in kt.q for row in qh for q in row)
    assert [t for t in kt.vanishing if 0 not in t] == []
    # q^0_ii = m_i
    assert [kt(0, i, i) for i in range(4)] == [1, 1617, 110, 1408]


@pytest.mark.parametrize("text", FEASIBLE)
def test_krein_nonnegative_on_feasible(text):
    arr = IntersectionArray.parse(text)
    kt = krein_table(arr)
    assert min(q for qh in kt.q for row in qh for q in row) >= 0


def test_negative_krein_raises():
    # SRG(28,9,0,4): integral parameters and spectrum, negative Krein parameter
    arr = IntersectionArray.parse("{9,8;1,4}")
    spectrum(arr)
    with pytest.raises(NegativeKrein) as err:
        krein_table(arr)
    assert err.value.certificate["kind"] == "krein"


def test_cube_has_vanishing_krein():
    kt = krein_table(IntersectionArray.parse("{3,2,1;1,2,3}"))
    assert (1, 1, 1) in kt.vanishing


def test_distance_graph_srg(target):
    pt, _, _ = target
    assert distance_graph_srg_params(pt, 3) == (3136, 110, 54, 2)
    with pytest.raises(NotSRGLike):
        distance_graph_srg_params(pt, 1)
    petersen = intersection_numbers(IntersectionArray.parse("{3,2;1,1}"))
    assert distance_graph_srg_params(petersen, 1) == (10, 3, 0, 1)


def test_negative_krein_is_infeasible_subclass():
    assert issubclass(NegativeKrein, Infeasible)

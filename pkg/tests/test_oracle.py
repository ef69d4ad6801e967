from __future__ import annotations

import itertools

import numpy as np
import pytest

from drgtriples.drgcore import MOORE_57, distance_graph_srg_params, intersection_numbers
from drgtriples.errors import NotDRG, UnknownGraph
from drgtriples.oracle import (
    GRAPH_ARRAYS,
    ExplicitGraph,
    brute_force_p_table,
    brute_force_triples,
    build_graph,
    check_against_family,
    cycle,
    path,
    realized_tables,
    rook,
)
from drgtriples.triples import TripleConfig, boundary_value, family_for, realizable_configs

SIZES = {"pentagon": (5, 2), "petersen": (10, 3), "cube3": (8, 3), "odd4": (35, 4), "hoffman_singleton": (50, 7)}


@pytest.mark.parametrize("name", sorted(SIZES))
def test_graph_sizes(name):
    g = build_graph(name)
    n, k = SIZES[name]
    assert g.n == n
    assert set(g.degrees().tolist()) == {k}
    assert g.name == name


def test_petersen_and_hs_have_no_short_cycles():
    for name in ("petersen", "hoffman_singleton"):
        g = build_graph(name)
        A = g.adjacency.astype(int)
        assert not np.trace(A @ A @ A)  # no triangles
        sq = A @ A
        np.fill_diagonal(sq, 0)
        assert sq.max() <= 1  # no 4-cycles
        assert np.trace(np.linalg.matrix_power(A, 5)) > 0


def test_graph_validation():
    with pytest.raises(ValueError):
        ExplicitGraph(np.array([[0, 1], [0, 0]]))
    with pytest.raises(ValueError):
        ExplicitGraph(np.eye(2))
    with pytest.raises(NotDRG):
        ExplicitGraph(np.zeros((3, 3))).distances()


@pytest.mark.parametrize("name", sorted(GRAPH_ARRAYS))
def test_brute_force_p_table_matches_solver(name):
    g = build_graph(name)
    got = brute_force_p_table(g)
    want = intersection_numbers(GRAPH_ARRAYS[name])
    assert got.array == GRAPH_ARRAYS[name]
    d = want.d
    for h, i, j in itertools.product(range(d + 1), repeat=3):
        assert got(h, i, j) == want(h, i, j), (h, i, j)


def test_non_drg_rejected():
    with pytest.raises(NotDRG):
        brute_force_p_table(path(4))
    assert brute_force_p_table(cycle(6)).array.b == (2, 1, 1)


def test_unknown_graph():
    with pytest.raises(UnknownGraph):
        build_graph("clebsch")


def test_boundary_entries_match_brute_force():
    g = build_graph("odd4")
    D = g.distances()
    for u, v, w in [(0, 1, 2), (0, 5, 9), (3, 17, 30)]:
        cfg = TripleConfig(int(D[u, v]), int(D[u, w]), int(D[v, w]))
        T = brute_force_triples(g, u, v, w, D)
        for idx in itertools.product(range(4), repeat=3):
            if 0 in idx:
                assert T[idx] == boundary_value(cfg, idx), idx


@pytest.mark.parametrize("name", ["petersen", "cube3", "odd4"])
def test_exhaustive_triples_in_families(name):
    g = build_graph(name)
    p = intersection_numbers(GRAPH_ARRAYS[name])
    D = g.distances()
    total = 0
    for cfg in realizable_configs(p):
        rep = check_against_family(g, family_for(p, cfg), D)
        assert rep.ok, rep.to_json()
        assert not rep.sampled
        total += rep.triples_checked
    assert total == g.n * (g.n - 1) * (g.n - 2)


def test_hoffman_singleton_sampled_is_seeded():
    g = build_graph("hoffman_singleton")
    D = g.distances()
    cfg = TripleConfig(2, 2, 2)
    a = [t for t, _ in realized_tables(g, cfg, D, seed=7, samples=200, exhaustive=False)]
    b = [t for t, _ in realized_tables(g, cfg, D, seed=7, samples=200, exhaustive=False)]
    assert a == b and len(a) == 200
    for u, v, w in a:
        assert (D[u, v], D[u, w], D[v, w]) == (2, 2, 2)


def test_hoffman_singleton_families():
    g = build_graph("hoffman_singleton")
    p = intersection_numbers(GRAPH_ARRAYS["hoffman_singleton"])
    D = g.distances()
    for cfg in realizable_configs(p):
        rep = check_against_family(g, family_for(p, cfg), D)
        assert rep.ok, rep.to_json()


def test_rook_8_is_srg():
    g = rook(8)
    assert brute_force_p_table(g).array.b == (14, 7)
    p = brute_force_p_table(g)
    assert distance_graph_srg_params(p, 1) == (64, 14, 6, 2)


def test_rook_8_common_neighbours():
    g = rook(8)
    A = g.adjacency.astype(int)
    common = A @ A
    n = 8
    for x, y in itertools.combinations(range(n * n), 2):
        if x // n != y // n and x % n != y % n:
            assert common[x, y] == 2
            # the two are the cells sharing a row with one and a column with the other
            both = set(np.flatnonzero(A[x] & A[y]).tolist())
            assert both == {(x // n) * n + y % n, (y // n) * n + x % n}


def test_target_distance_three_graph_matches_rook_56():
    assert distance_graph_srg_params(intersection_numbers(MOORE_57), 3) == (3136, 110, 54, 2)
    g = rook(56)
    assert g.n == 3136
    assert set(g.degrees().tolist()) == {110}

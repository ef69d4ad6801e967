"""Explicit graphs and brute-force ground truth.

Everything here counts directly on a distance matrix and shares no code
with the parametric solvers it is used to check.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field

import numpy as np

from .drgcore import IntersectionArray, ParameterTable
from .errors import NotDRG, UnknownGraph
from .triples import TripleFamily, enumerate_points

EXHAUSTIVE_LIMIT = 70
DEFAULT_SAMPLES = 10**4


@dataclass(frozen=True, eq=False)
class ExplicitGraph:
    adjacency: np.ndarray
    name: str = ""

    def __post_init__(self):
        A = np.asarray(self.adjacency, dtype=bool)
        if A.ndim != 2 or A.shape[0] != A.shape[1]:
            raise ValueError("adjacency must be square")
        if A.diagonal().any():
            raise ValueError("loops are not allowed")
        if not (A == A.T).all():
            raise ValueError("adjacency must be symmetric")
        object.__setattr__(self, "adjacency", A)

    @property
    def n(self) -> int:
        return self.adjacency.shape[0]

    def degrees(self) -> np.ndarray:
        return self.adjacency.sum(axis=1)

    def distances(self) -> np.ndarray:
        """All-pairs distances by frontier expansion with dense products.

        One BLAS product per distance layer, which beats per-source BFS on
        the dense small-diameter graphs used here.
        """
        n = self.n
        A = self.adjacency.astype(np.float32)
        D = np.full((n, n), -1, dtype=np.int64)
        np.fill_diagonal(D, 0)
        reached = np.eye(n, dtype=bool)
        frontier = np.eye(n, dtype=np.float32)
        k = 0
        while True:
            k += 1
            nxt = (frontier @ A > 0) & ~reached
            if not nxt.any():
                break
            D[nxt] = k
            reached |= nxt
            frontier = nxt.astype(np.float32)
        if not reached.all():
            raise NotDRG(f"graph {self.name!r} is disconnected")
        return D

    @classmethod
    def from_edges(cls, n: int, edges, name: str = "") -> "ExplicitGraph":
        A = np.zeros((n, n), dtype=bool)
        for a, b in edges:
            A[a, b] = A[b, a] = True
        return cls(A, name)


def _kneser(n: int, k: int, name: str) -> ExplicitGraph:
    sets = [frozenset(c) for c in itertools.combinations(range(n), k)]
    edges = [(i, j) for i, j in itertools.combinations(range(len(sets)), 2) if not sets[i] & sets[j]]
    return ExplicitGraph.from_edges(len(sets), edges, name)


def cycle(n: int) -> ExplicitGraph:
    return ExplicitGraph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], f"cycle({n})")


def path(n: int) -> ExplicitGraph:
    return ExplicitGraph.from_edges(n, [(i, i + 1) for i in range(n - 1)], f"path({n})")


def hypercube(dim: int) -> ExplicitGraph:
    n = 1 << dim
    edges = [(x, x ^ (1 << b)) for x in range(n) for b in range(dim) if x < x ^ (1 << b)]
    return ExplicitGraph.from_edges(n, edges, f"cube{dim}")


def rook(n: int) -> ExplicitGraph:
    """n x n lattice: cells adjacent when they share a row or a column."""
    r = np.arange(n * n) // n
    c = np.arange(n * n) % n
    A = (r[:, None] == r[None, :]) ^ (c[:, None] == c[None, :])
    return ExplicitGraph(A, f"rook({n})")


def hoffman_singleton() -> ExplicitGraph:
    """Five pentagons P_h and five pentagrams Q_i; vertex j of P_h is joined
    to vertex h*i + j (mod 5) of Q_i."""
    def P(h, j):
        return 5 * h + j

    def Q(i, j):
        return 25 + 5 * i + j

    edges = []
    for h in range(5):
        for j in range(5):
            edges.append((P(h, j), P(h, (j + 1) % 5)))
            edges.append((Q(h, j), Q(h, (j + 2) % 5)))
    for h in range(5):
        for i in range(5):
            for j in range(5):
                edges.append((P(h, j), Q(i, (h * i + j) % 5)))
    return ExplicitGraph.from_edges(50, edges, "hoffman_singleton")


GRAPH_ARRAYS = {
    "pentagon": IntersectionArray((2, 1), (1, 1)),
    "petersen": IntersectionArray((3, 2), (1, 1)),
    "cube3": IntersectionArray((3, 2, 1), (1, 2, 3)),
    "odd4": IntersectionArray((4, 3, 3), (1, 1, 2)),
    "hoffman_singleton": IntersectionArray((7, 6), (1, 1)),
}


def build_graph(name: str) -> ExplicitGraph:
    key = name.strip().lower()
    m = re.fullmatch(r"rook\((\d+)\)", key)
    if m:
        return rook(int(m.group(1)))
    builders = {
        "pentagon": lambda: cycle(5),
        "petersen": lambda: _kneser(5, 2, "petersen"),
        "cube3": lambda: hypercube(3),
        "odd4": lambda: _kneser(7, 3, "odd4"),
        "hoffman_singleton": hoffman_singleton,
    }
    if key not in builders:
        raise UnknownGraph(f"unknown graph {name!r}; choose from {sorted(builders)} or rook(n)")
    g = builders[key]()
    return ExplicitGraph(g.adjacency, key)


def brute_force_p_table(g: ExplicitGraph, D: np.ndarray | None = None) -> ParameterTable:
    """Count p^h_ij directly; NotDRG if a count depends on the chosen pair."""
    D = g.distances() if D is None else D
    d = int(D.max())
    if g.n >= 1 << 24:
        raise ValueError("graph too large for exact float32 counting")
    # float32 BLAS is exact here: every count is an integer below 2^24
    mats = [(D == i).astype(np.float32) for i in range(d + 1)]
    masks = [D == h for h in range(d + 1)]
    p = [[[0] * (d + 1) for _ in range(d + 1)] for _ in range(d + 1)]
    for i in range(d + 1):
        for j in range(i, d + 1):
            prod = mats[i] @ mats[j]
            for h in range(d + 1):
                vals = prod[masks[h]]
                lo, hi = vals.min(), vals.max()
                if lo != hi:
                    raise NotDRG(f"p^{h}_{i}{j} is not constant on {g.name!r}: ranges over [{lo:g}, {hi:g}]")
                p[h][i][j] = p[h][j][i] = int(round(float(lo)))
    b = [p[i][1][i + 1] for i in range(d)]
    c = [p[i][1][i - 1] for i in range(1, d + 1)]
    k = tuple(p[0][i][i] for i in range(d + 1))
    arr = IntersectionArray(tuple(b), tuple(c))
    return ParameterTable(arr, k, tuple(tuple(tuple(r) for r in ph) for ph in p))


def brute_force_triples(g: ExplicitGraph, u: int, v: int, w: int,
                        D: np.ndarray | None = None) -> np.ndarray:
    """Full (d+1)^3 table: entry [i, j, h] counts x with distances (i, j, h) to (u, v, w)."""
    if len({u, v, w}) != 3:
        raise ValueError("base vertices must be distinct")
    D = g.distances() if D is None else D
    d = int(D.max())
    T = np.zeros((d + 1,) * 3, dtype=np.int64)
    np.add.at(T, (D[u], D[v], D[w]), 1)
    return T


def interior(T: np.ndarray) -> tuple[int, ...]:
    """Entries with all indices >= 1, in lexicographic (i, j, h) order."""
    return tuple(int(x) for x in T[1:, 1:, 1:].ravel())


@dataclass
class OracleReport:
    graph: str
    config: str
    triples_checked: int
    sampled: bool
    seed: int | None
    violations: list[tuple[int, int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "graph": self.graph,
            "config": self.config,
            "triples_checked": self.triples_checked,
            "sampled": self.sampled,
            "seed": self.seed,
            "violations": [list(t) for t in self.violations],
        }


def realized_tables(g: ExplicitGraph, cfg, D: np.ndarray | None = None, seed: int = 0,
                    samples: int = DEFAULT_SAMPLES, exhaustive: bool | None = None):
    """Yield ((u, v, w), interior table) for triples realizing ``cfg``.

    Exhaustive up to EXHAUSTIVE_LIMIT vertices, otherwise ``samples`` uniform
    draws from a generator seeded with ``seed``.
    """
    D = g.distances() if D is None else D
    d = int(D.max())
    base = d + 1
    if exhaustive is None:
        exhaustive = g.n <= EXHAUSTIVE_LIMIT
    if exhaustive:
        for u in range(g.n):
            for v in np.flatnonzero(D[u] == cfg.uv):
                ws = np.flatnonzero((D[u] == cfg.uw) & (D[v] == cfg.vw))
                if not len(ws):
                    continue
                code = (D[u] * base + D[v]) * base
                codes = code[None, :] + D[ws] + (np.arange(len(ws)) * base**3)[:, None]
                tables = np.bincount(codes.ravel(), minlength=len(ws) * base**3).reshape(len(ws), base, base, base)
                for w, T in zip(ws, tables):
                    yield (int(u), int(v), int(w)), interior(T)
        return
    rng = np.random.default_rng(seed)
    drawn = 0
    while drawn < samples:
        u = int(rng.integers(g.n))
        vs = np.flatnonzero(D[u] == cfg.uv)
        if not len(vs):
            continue
        v = int(rng.choice(vs))
        ws = np.flatnonzero((D[u] == cfg.uw) & (D[v] == cfg.vw))
        if not len(ws):
            continue
        w = int(rng.choice(ws))
        drawn += 1
        yield (u, v, w), interior(brute_force_triples(g, u, v, w, D))


def check_against_family(g: ExplicitGraph, fam: TripleFamily, D: np.ndarray | None = None,
                         seed: int = 0, samples: int = DEFAULT_SAMPLES) -> OracleReport:
    """Every realized triple table must be one of the family's integer points."""
    D = g.distances() if D is None else D
    allowed = set(enumerate_points(fam))
    exhaustive = g.n <= EXHAUSTIVE_LIMIT
    report = OracleReport(g.name, fam.config.label, 0, not exhaustive, None if exhaustive else seed)
    for triple, table in realized_tables(g, fam.config, D, seed, samples, exhaustive):
        report.triples_checked += 1
        if table not in allowed:
            report.violations.append(triple)
    return report

"""Classical parameters of a distance-regular graph from its intersection array."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import (
    InvalidArray,
    NegativeKrein,
    NonIntegralMultiplicity,
    NonIntegralParameters,
    NotSRGLike,
)
from .exactmath import RatMatrix, char_poly_roots


@dataclass(frozen=True)
class IntersectionArray:
    b: tuple[int, ...]
    c: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(int(x) for x in self.b))
        object.__setattr__(self, "c", tuple(int(x) for x in self.c))
        if len(self.b) != len(self.c):
            raise InvalidArray("b and c must both have d entries")
        if self.d < 2:
            raise InvalidArray("diameter must be at least 2")
        if any(x <= 0 for x in self.b + self.c):
            raise InvalidArray("all entries must be positive")
        if self.c[0] != 1:
            raise InvalidArray("c1 must equal 1")
        if any(ci > self.k for ci in self.c) or any(bi > self.k for bi in self.b):
            raise InvalidArray("entries cannot exceed the valency b0")
        if any(self.b_(i) + self.c_(i) > self.k for i in range(1, self.d + 1)):
            raise InvalidArray("b_i + c_i exceeds the valency")

    @property
    def d(self) -> int:
        return len(self.b)

    @property
    def k(self) -> int:
        return self.b[0]

    def b_(self, i: int) -> int:
        """b_i with the convention b_d = 0."""
        return self.b[i] if i < self.d else 0

    def c_(self, i: int) -> int:
        """c_i with the convention c_0 = 0."""
        return self.c[i - 1] if i > 0 else 0

    def a_(self, i: int) -> int:
        return self.k - self.b_(i) - self.c_(i)

    def tridiagonal(self) -> RatMatrix:
        """The (d+1)x(d+1) matrix whose entry (h, j) is p^h_{1j}."""
        d = self.d
        rows = []
        for h in range(d + 1):
            row = [0] * (d + 1)
            if h > 0:
                row[h - 1] = self.c_(h)
            row[h] = self.a_(h)
            if h < d:
                row[h + 1] = self.b_(h)
            rows.append(row)
        return RatMatrix(rows)

    @classmethod
    def parse(cls, text: str) -> "IntersectionArray":
        """Parse ``{b0,...,b_{d-1};c1,...,cd}`` (whitespace and braces optional)."""
        m = re.fullmatch(r"\s*\{?\s*([\d\s,]+);([\d\s,]+)\}?\s*", text)
        if not m:
            raise InvalidArray(f"cannot parse intersection array {text!r}")
        try:
            b = [int(x) for x in m.group(1).split(",")]
            c = [int(x) for x in m.group(2).split(",")]
        except ValueError:
            raise InvalidArray(f"cannot parse intersection array {text!r}") from None
        return cls(tuple(b), tuple(c))

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.b)) + ";" + ",".join(map(str, self.c)) + "}"


MOORE_57 = IntersectionArray((55, 54, 2), (1, 1, 54))


@dataclass(frozen=True)
class ParameterTable:
    """Intersection numbers ``p[h][i][j]`` together with valencies and order."""

    array: IntersectionArray
    k: tuple[int, ...]
    p: tuple[tuple[tuple[int, ...], ...], ...]

    @property
    def d(self) -> int:
        return self.array.d

    @property
    def v(self) -> int:
        return sum(self.k)

    def __call__(self, h: int, i: int, j: int) -> int:
        """p^h_{ij}."""
        return self.p[h][i][j]


def intersection_numbers(arr: IntersectionArray) -> ParameterTable:
    """All p^h_ij via the three-term recurrence on intersection matrices.

    L_i has entry (h, j) equal to p^h_{ij}; L_1 is the tridiagonal matrix and
    c_{i+1} L_{i+1} = L_1 L_i - a_i L_i - b_{i-1} L_{i-1}.
    """
    d = arr.d
    L = [RatMatrix.identity(d + 1), arr.tridiagonal()]
    for i in range(1, d):
        nxt = L[1] @ L[i] + L[i].scale(-arr.a_(i)) + L[i - 1].scale(-arr.b_(i - 1))
        L.append(nxt.scale(Fraction(1, arr.c_(i + 1))))
    p = [[[L[i][h, j] for j in range(d + 1)] for i in range(d + 1)] for h in range(d + 1)]
    bad = [
        (h, i, j, str(x))
        for h in range(d + 1)
        for i in range(d + 1)
        for j in range(d + 1)
        if (x := p[h][i][j]) < 0 or x.denominator != 1
    ]
    if bad:
        h, i, j, x = bad[0]
        raise NonIntegralParameters(
            f"p^{h}_{i}{j} = {x} is not a non-negative integer",
            {"kind": "intersection-number", "h": h, "i": i, "j": j, "value": x},
        )
    k = tuple(int(p[0][i][i]) for i in range(d + 1))
    table = tuple(tuple(tuple(int(x) for x in row) for row in ph) for ph in p)
    return ParameterTable(arr, k, table)


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: tuple[Fraction, ...]
    multiplicities: tuple[int, ...]

    def pairs(self) -> list[tuple[Fraction, int]]:
        return list(zip(self.eigenvalues, self.multiplicities))


def standard_sequence(arr: IntersectionArray, theta) -> list[Fraction]:
    """u_0..u_d with u_0 = 1, u_1 = theta/k and
    c_i u_{i-1} + a_i u_i + b_i u_{i+1} = theta u_i."""
    theta = Fraction(theta)
    u = [Fraction(1), theta / arr.k]
    for i in range(1, arr.d):
        u.append(((theta - arr.a_(i)) * u[i] - arr.c_(i) * u[i - 1]) / arr.b_(i))
    return u


def spectrum(arr: IntersectionArray, pt: ParameterTable | None = None) -> Spectrum:
    pt = pt or intersection_numbers(arr)
    roots = char_poly_roots(arr.tridiagonal())
    thetas = tuple(r for r, _ in roots)
    mults = []
    for theta in thetas:
        u = standard_sequence(arr, theta)
        m = Fraction(pt.v) / sum(ki * ui * ui for ki, ui in zip(pt.k, u))
        if m.denominator != 1 or m <= 0:
            raise NonIntegralMultiplicity(
                f"eigenvalue {theta} has multiplicity {m}",
                {"kind": "multiplicity", "eigenvalue": str(theta), "value": str(m)},
            )
        mults.append(int(m))
    return Spectrum(thetas, tuple(mults))


@dataclass(frozen=True)
class EigenmatrixPair:
    """P[r][i] is the eigenvalue of A_i on the r-th eigenspace; P Q = v I."""

    P: RatMatrix
    Q: RatMatrix


def eigenmatrices(arr: IntersectionArray, pt: ParameterTable | None = None,
                  spec: Spectrum | None = None) -> EigenmatrixPair:
    pt = pt or intersection_numbers(arr)
    spec = spec or spectrum(arr, pt)
    P = RatMatrix(
        [ki * ui for ki, ui in zip(pt.k, standard_sequence(arr, theta))]
        for theta in spec.eigenvalues
    )
    Q = P.inverse().scale(pt.v)
    return EigenmatrixPair(P, Q)


@dataclass(frozen=True)
class KreinTable:
    """q[h][i][j] = q^h_{ij}."""

    q: tuple[tuple[tuple[Fraction, ...], ...], ...]

    def __call__(self, h: int, i: int, j: int) -> Fraction:
        return self.q[h][i][j]

    @cached_property
    def vanishing(self) -> tuple[tuple[int, int, int], ...]:
        """All (i, j, h) with q^h_ij = 0."""
        n = len(self.q)
        return tuple(
            (i, j, h)
            for i in range(n)
            for j in range(n)
            for h in range(n)
            if self.q[h][i][j] == 0
        )


def krein_table(arr: IntersectionArray, pt: ParameterTable | None = None,
                em: EigenmatrixPair | None = None, check: bool = True) -> KreinTable:
    pt = pt or intersection_numbers(arr)
    em = em or eigenmatrices(arr, pt)
    P, n, v = em.P, arr.d + 1, pt.v
    m = [em.Q[0, r] for r in range(n)]
    inv_k2 = [Fraction(1, kl * kl) for kl in pt.k]
    q = [
        [
            [
                m[i] * m[j] / v * sum(P[i, l] * P[j, l] * P[h, l] * inv_k2[l] for l in range(n))
                for j in range(n)
            ]
            for i in range(n)
        ]
        for h in range(n)
    ]
    table = KreinTable(tuple(tuple(tuple(r) for r in qh) for qh in q))
    if check:
        neg = [(i, j, h) for h in range(n) for i in range(n) for j in range(n) if q[h][i][j] < 0]
        if neg:
            i, j, h = neg[0]
            raise NegativeKrein(
                f"Krein parameter q^{h}_{i}{j} = {q[h][i][j]} is negative",
                {"kind": "krein", "i": i, "j": j, "h": h, "value": str(q[h][i][j])},
            )
    return table


def distance_graph_srg_params(pt: ParameterTable, i: int) -> tuple[int, int, int, int]:
    """(v, k, lambda, mu) of the distance-i graph, if it is strongly regular.

    mu is the common value of p^j_ii over the distances j not in {0, i};
    disagreement raises NotSRGLike.
    """
    if not 1 <= i <= pt.d:
        raise ValueError(f"distance {i} outside 1..{pt.d}")
    others = {pt(j, i, i) for j in range(1, pt.d + 1) if j != i}
    if len(others) != 1:
        raise NotSRGLike(
            f"distance-{i} graph is not strongly regular: p^j_{i}{i} takes values {sorted(others)}"
        )
    return pt.v, pt.k[i], pt(i, i, i), others.pop()

"""Symmetrization: relabel the base triple and demand consistency.

If a permutation of (u, v, w) preserves the configuration, the relabelled
triple is another base triple of the same kind, so its table must also be a
member of the family. Linearly this intersects the family with its image;
on integer points it keeps exactly the tables whose relabelled copies
survive too.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import Infeasible
from .exactmath import AffineSolution, Inconsistent, rref_parametric
from .triples import (
    Index,
    LinearEquation,
    LinearInequality,
    TripleConfig,
    TripleFamily,
    _solve,
    enumerate_points,
    index_name,
    variables,
)

ROLES = "uvw"


@dataclass(frozen=True)
class TriplePermutation:
    """``perm[k]`` is the old position of the vertex that lands in slot k.

    The relabelled triple is ``(T[perm[0]], T[perm[1]], T[perm[2]])``; e.g.
    ``(0, 2, 1)`` turns (u, v, w) into (u, w, v).
    """

    perm: tuple[int, int, int]

    def __post_init__(self):
        if sorted(self.perm) != [0, 1, 2]:
            raise ValueError(f"not a permutation of 0..2: {self.perm}")

    @classmethod
    def from_name(cls, name: str) -> "TriplePermutation":
        return cls(tuple(ROLES.index(ch) for ch in name))  # type: ignore[arg-type]

    @property
    def name(self) -> str:
        return "".join(ROLES[p] for p in self.perm)

    @property
    def is_identity(self) -> bool:
        return self.perm == (0, 1, 2)

    def source_index(self, idx: Index) -> Index:
        """Entry of the original table equal to entry ``idx`` of the relabelled one."""
        out = [0, 0, 0]
        for k in range(3):
            out[self.perm[k]] = idx[k]
        return tuple(out)  # type: ignore[return-value]

    def map_config(self, cfg: TripleConfig) -> TripleConfig:
        dist = {(0, 1): cfg.uv, (0, 2): cfg.uw, (1, 2): cfg.vw}

        def dd(a: int, b: int) -> int:
            return dist[(min(a, b), max(a, b))]

        p = self.perm
        return TripleConfig(dd(p[0], p[1]), dd(p[0], p[2]), dd(p[1], p[2]))

    def compose(self, other: "TriplePermutation") -> "TriplePermutation":
        """Relabel by ``other`` first, then by ``self``."""
        return TriplePermutation(tuple(other.perm[self.perm[k]] for k in range(3)))  # type: ignore[arg-type]

    def inverse(self) -> "TriplePermutation":
        inv = [0, 0, 0]
        for k, p in enumerate(self.perm):
            inv[p] = k
        return TriplePermutation(tuple(inv))  # type: ignore[arg-type]

    def permute_point(self, point: Sequence[int], d: int) -> tuple[int, ...]:
        vs = variables(d)
        pos = {v: n for n, v in enumerate(vs)}
        return tuple(point[pos[self.source_index(a)]] for a in vs)


ALL_PERMUTATIONS = tuple(TriplePermutation(p) for p in itertools.permutations(range(3)))


def stabilizer(cfg: TripleConfig) -> tuple[TriplePermutation, ...]:
    return tuple(s for s in ALL_PERMUTATIONS if s.map_config(cfg) == cfg)


def _permute_equation(eq: LinearEquation, sigma: TriplePermutation) -> LinearEquation:
    inv = sigma.inverse()
    # old entry b sits at new position a with sigma.source_index(a) == b
    return LinearEquation.build(
        {inv.source_index(b): c for b, c in eq.coeffs}, eq.rhs, f"{eq.origin} [relabel {sigma.name}]"
    )


def permute_family(fam: TripleFamily, sigma: TriplePermutation) -> TripleFamily:
    """The family of the relabelled triple."""
    cfg = sigma.map_config(fam.config)
    inv = sigma.inverse()
    eqs = tuple(_permute_equation(e, sigma) for e in fam.equations)
    ineqs = tuple(
        LinearInequality.build({inv.source_index(b): c for b, c in q.coeffs}, q.lo, q.hi, q.origin)
        for q in fam.inequalities
    )
    upper = {a: fam.upper[sigma.source_index(a)] for a in fam.variables}
    sol = _solve(cfg, fam.d, eqs)
    pts = None
    if fam.points is not None:
        pts = tuple(sorted(sigma.permute_point(p, fam.d) for p in fam.points))
    return TripleFamily(cfg, fam.d, upper, eqs, ineqs, sol, pts, fam.notes)


@dataclass(frozen=True)
class Relation:
    """Linear relation over copy-qualified entries: sum(coef * X^copy[idx]) == rhs.

    The base copy is named "uvw"; other copies by the relabelled triple.
    """

    coeffs: tuple[tuple[str, Index, Fraction], ...]
    rhs: Fraction

    @classmethod
    def build(cls, terms: dict[tuple[str, Index], object], rhs=0) -> "Relation":
        items = tuple(sorted((c, i, Fraction(v)) for (c, i), v in terms.items() if v))
        return cls(items, Fraction(rhs))

    def normalized(self) -> "Relation":
        """Scale so the leading coefficient is 1."""
        if not self.coeffs or self.coeffs[0][2] == 1:
            return self
        lead = self.coeffs[0][2]
        return Relation(tuple((c, i, v / lead) for c, i, v in self.coeffs), self.rhs / lead)

    def __str__(self) -> str:
        parts = []
        for copy, idx, c in self.coeffs:
            name = index_name(idx) + ("" if copy == "uvw" else f"^{copy}")
            parts.append(name if c == 1 else ("-" + name if c == -1 else f"{c}*{name}"))
        return (" + ".join(parts).replace("+ -", "- ") or "0") + f" = {self.rhs}"


def _affine_relation(fam: TripleFamily, lhs: tuple[str, Index], rhs: tuple[str, Index]) -> Relation | None:
    """lhs entry == rhs entry, rewritten over the free parameters of each copy.

    None when both sides are the same expression.
    """
    terms: dict[tuple[str, Index], Fraction] = {}
    c1, f1 = fam.expression(lhs[1])
    c2, f2 = fam.expression(rhs[1])
    for f, c in f1.items():
        terms[(lhs[0], f)] = terms.get((lhs[0], f), 0) + c
    for f, c in f2.items():
        terms[(rhs[0], f)] = terms.get((rhs[0], f), 0) - c
    terms = {k: v for k, v in terms.items() if v}
    const = c2 - c1
    if not terms:
        if const:
            raise Infeasible(
                f"relabelling forces {index_name(lhs[1])}={c1} to equal {c2}",
                {"kind": "symmetry-constant-clash", "config": fam.config.label,
                 "lhs": index_name(lhs[1]), "rhs": index_name(rhs[1]), "values": [str(c1), str(c2)]},
            )
        return None
    return Relation.build(terms, const).normalized()


@dataclass(frozen=True)
class CoupledSystem:
    """All relabelled copies of one family solved together.

    Variables are (copy, entry) pairs; every copy satisfies the family
    equations and copy sigma equals the base table relabelled by sigma.
    """

    copies: tuple[str, ...]
    names: tuple[tuple[str, Index], ...]
    solution: AffineSolution

    def implies(self, rel: Relation) -> bool:
        """True if ``rel`` holds on the whole coupled solution set."""
        pos = {n: k for k, n in enumerate(self.names)}
        val = Fraction(0)
        coefs = [Fraction(0)] * self.solution.dim
        for copy, idx, c in rel.coeffs:
            k0, cf = self.solution.expression(pos[(copy, idx)])
            val += c * k0
            for f in range(len(coefs)):
                coefs[f] += c * cf[f]
        return val == rel.rhs and not any(coefs)


def coupled_system(fam: TripleFamily, group: Sequence[TriplePermutation]) -> CoupledSystem:
    vs = fam.variables
    copies = tuple(s.name for s in group)
    if "uvw" not in copies:
        copies = ("uvw",) + copies
    names = tuple((c, v) for c in copies for v in vs)
    pos = {n: k for k, n in enumerate(names)}
    rows: list[list[Fraction]] = []
    rhs: list[Fraction] = []
    for c in copies:
        for e in fam.equations:
            row = [Fraction(0)] * len(names)
            for idx, coef in e.coeffs:
                row[pos[(c, idx)]] += coef
            rows.append(row)
            rhs.append(e.rhs)
    for s in group:
        if s.is_identity:
            continue
        for a in vs:
            row = [Fraction(0)] * len(names)
            row[pos[(s.name, a)]] += 1
            row[pos[("uvw", s.source_index(a))]] -= 1
            rows.append(row)
            rhs.append(Fraction(0))
    sol = rref_parametric(rows, rhs, [f"{index_name(i)}^{c}" for c, i in names])
    if isinstance(sol, Inconsistent):
        raise Infeasible("coupled relabelled system is inconsistent",
                         {"kind": "inconsistent-coupled-system", "config": fam.config.label})
    return CoupledSystem(copies, names, sol)


@dataclass(frozen=True)
class SymmetrizationResult:
    family: TripleFamily
    relations: tuple[Relation, ...]
    coupled: CoupledSystem
    group: tuple[TriplePermutation, ...]

    def branches(self, idx: Index) -> list[tuple[int, TripleFamily]]:
        return split_branches(self.family, idx)


def integer_closure(points: Sequence[Sequence[int]], group: Sequence[TriplePermutation],
                    d: int) -> list[tuple[int, ...]]:
    """Largest subset closed under relabelling by every group element."""
    current = {tuple(p) for p in points}
    while True:
        kept = {p for p in current if all(s.permute_point(p, d) in current for s in group)}
        if kept == current:
            return sorted(kept)
        current = kept


def symmetrize_families(
    fam: TripleFamily,
    group: Sequence[TriplePermutation] | None = None,
    enumerate: bool = True,
) -> SymmetrizationResult:
    """Relate the family to its relabelled copies and shrink it accordingly.

    Returns the emitted copy-coupling relations (over free parameters of each
    copy), the coupled linear system, and the narrowed family: linearly it is
    the intersection with every relabelled image, and when ``enumerate`` is
    set its integer points are closed under the group.
    """
    group = tuple(group) if group is not None else stabilizer(fam.config)
    for s in group:
        if s.map_config(fam.config) != fam.config:
            raise ValueError(f"{s.name} does not fix config {fam.config}")
    relations: list[Relation] = []
    seen = set()
    for s in group:
        if s.is_identity:
            continue
        for a in fam.variables:
            rel = _affine_relation(fam, (s.name, a), ("uvw", s.source_index(a)))
            if rel is not None and rel not in seen:
                seen.add(rel)
                relations.append(rel)
    coupled = coupled_system(fam, group)
    extra = [_permute_equation(e, s) for s in group if not s.is_identity for e in fam.equations]
    narrowed = fam.constrained(extra, note="symmetrized under " + ",".join(s.name for s in group))
    if enumerate:
        pts = enumerate_points(narrowed)
        closed = integer_closure(pts, group, fam.d)
        narrowed = narrowed.restricted(closed, note="integer points closed under relabelling")
    return SymmetrizationResult(narrowed, tuple(relations), coupled, group)


def split_branches(fam: TripleFamily, idx: Index) -> list[tuple[int, TripleFamily]]:
    """Case split on the value of one entry; one family per occurring value."""
    pos = fam.position(idx)
    pts = enumerate_points(fam)
    out = []
    for val in sorted({p[pos] for p in pts}):
        eq = LinearEquation.build({idx: 1}, val, f"case {index_name(idx)} = {val}")
        branch = fam.constrained([eq], note=f"case {index_name(idx)} = {val}")
        branch = branch.restricted([p for p in pts if p[pos] == val])
        out.append((val, branch))
    return out

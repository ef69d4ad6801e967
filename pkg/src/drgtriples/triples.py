"""Triple intersection numbers of a distance-regular graph.

For a base triple (u, v, w) the unknowns are ``[ijh]``, the number of
vertices at distances i, j, h from u, v, w respectively, for 1 <= i, j, h <= d.
Entries with a zero index are fixed by the base triple itself and are folded
into right-hand sides.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .drgcore import KreinTable, ParameterTable, EigenmatrixPair
from .errors import EnumerationTooLarge, Infeasible, UnrealizableConfig
from .exactmath import AffineSolution, Inconsistent, rref_parametric

Index = tuple[int, int, int]

ENUMERATION_CAP = 10**7


@dataclass(frozen=True, order=True)
class TripleConfig:
    """Distances inside the base triple: d(u,v), d(u,w), d(v,w)."""

    uv: int
    uw: int
    vw: int

    @property
    def W(self) -> int:
        return self.uv

    @property
    def U(self) -> int:
        return self.vw

    @property
    def V(self) -> int:
        return self.uw

    @classmethod
    def parse(cls, text: str) -> "TripleConfig":
        parts = [int(x) for x in text.replace(" ", "").split(",")]
        if len(parts) != 3:
            raise ValueError(f"config needs three distances, got {text!r}")
        return cls(*parts)

    @property
    def label(self) -> str:
        return f"{self.uv},{self.uw},{self.vw}"

    def __str__(self) -> str:
        return f"({self.label})"

    def check(self, pt: ParameterTable) -> None:
        d = pt.d
        if not all(1 <= x <= d for x in (self.uv, self.uw, self.vw)):
            raise UnrealizableConfig(f"config {self} has a distance outside 1..{d}")
        if pt(self.uv, self.uw, self.vw) == 0:
            raise UnrealizableConfig(
                f"no triple realizes {self}: p^{self.uv}_{self.uw}{self.vw} = 0"
            )


def realizable_configs(pt: ParameterTable) -> list[TripleConfig]:
    r = range(1, pt.d + 1)
    return [TripleConfig(a, b, c) for a in r for b in r for c in r if pt(a, b, c) > 0]


def variables(d: int) -> tuple[Index, ...]:
    return tuple(itertools.product(range(1, d + 1), repeat=3))


def index_name(idx: Index) -> str:
    if max(idx) < 10:
        return "[" + "".join(map(str, idx)) + "]"
    return "[" + ",".join(map(str, idx)) + "]"


def parse_index(text: str) -> Index:
    s = text.strip().strip("[]")
    parts = s.split(",") if "," in s else list(s)
    if len(parts) != 3:
        raise ValueError(f"bad index {text!r}")
    return tuple(int(x) for x in parts)  # type: ignore[return-value]


def boundary_value(cfg: TripleConfig, idx: Index) -> int:
    """[ijh] when some index is 0: the only candidates are u, v, w themselves."""
    i, j, h = idx
    if i == 0 and (j, h) == (cfg.uv, cfg.uw):
        return 1
    if j == 0 and (i, h) == (cfg.uv, cfg.vw):
        return 1
    if h == 0 and (i, j) == (cfg.uw, cfg.vw):
        return 1
    return 0


@dataclass(frozen=True)
class LinearEquation:
    """sum(coef * [idx]) == rhs, with a short tag saying where it came from."""

    coeffs: tuple[tuple[Index, Fraction], ...]
    rhs: Fraction
    origin: str

    @classmethod
    def build(cls, coeffs: Mapping[Index, object], rhs, origin: str) -> "LinearEquation":
        items = tuple(sorted((k, Fraction(v)) for k, v in coeffs.items() if v))
        return cls(items, Fraction(rhs), origin)

    def evaluate(self, values: Mapping[Index, object]) -> Fraction:
        return sum((c * values[k] for k, c in self.coeffs), Fraction(0))

    def __str__(self) -> str:
        return f"{_fmt_linear(self.coeffs)} = {self.rhs}"


@dataclass(frozen=True)
class LinearInequality:
    """lo <= sum(coef * [idx]) <= hi; either bound may be None."""

    coeffs: tuple[tuple[Index, Fraction], ...]
    lo: Fraction | None
    hi: Fraction | None
    origin: str

    @classmethod
    def build(cls, coeffs: Mapping[Index, object], lo=None, hi=None, origin: str = "") -> "LinearInequality":
        items = tuple(sorted((k, Fraction(v)) for k, v in coeffs.items() if v))
        return cls(
            items,
            None if lo is None else Fraction(lo),
            None if hi is None else Fraction(hi),
            origin,
        )

    def holds(self, values: Mapping[Index, object]) -> bool:
        s = sum((c * values[k] for k, c in self.coeffs), Fraction(0))
        return (self.lo is None or s >= self.lo) and (self.hi is None or s <= self.hi)

    def __str__(self) -> str:
        body = _fmt_linear(self.coeffs)
        if self.lo is not None and self.hi is not None:
            return f"{self.lo} <= {body} <= {self.hi}"
        if self.lo is not None:
            return f"{body} >= {self.lo}"
        return f"{body} <= {self.hi}"


def _fmt_linear(coeffs: Iterable[tuple[Index, Fraction]]) -> str:
    out = []
    for k, c in coeffs:
        name = index_name(k)
        if c == 1:
            term = name
        elif c == -1:
            term = "-" + name
        else:
            term = f"{c}*{name}"
        out.append(term)
    return " + ".join(out).replace("+ -", "- ") or "0"


@dataclass(frozen=True)
class TripleSystem:
    config: TripleConfig
    d: int
    equations: tuple[LinearEquation, ...]
    upper: Mapping[Index, int]


def _upper_bounds(pt: ParameterTable, cfg: TripleConfig) -> dict[Index, int]:
    return {
        (i, j, h): min(pt(cfg.uv, i, j), pt(cfg.uw, i, h), pt(cfg.vw, j, h))
        for (i, j, h) in variables(pt.d)
    }


def assemble_system(
    pt: ParameterTable,
    cfg: TripleConfig,
    kt: KreinTable | None = None,
    em: EigenmatrixPair | None = None,
    use_krein: bool = False,
) -> TripleSystem:
    """Counting equations for one base-triple configuration.

    Summing [ijh] over one coordinate counts vertices at two prescribed
    distances from the other two base vertices, i.e. an ordinary intersection
    number. With ``use_krein`` every vanishing Krein parameter q^h_ij adds
    sum Q_ri Q_sj Q_th [rst] = 0 (needs ``kt`` and ``em``).
    """
    cfg.check(pt)
    d = pt.d
    rng = range(1, d + 1)
    eqs: list[LinearEquation] = []
    for a in rng:
        for b in rng:
            eqs.append(LinearEquation.build(
                {(l, a, b): 1 for l in rng},
                pt(cfg.vw, a, b) - boundary_value(cfg, (0, a, b)),
                f"sum over distance from u, ({a},{b}) from (v,w)",
            ))
            eqs.append(LinearEquation.build(
                {(a, l, b): 1 for l in rng},
                pt(cfg.uw, a, b) - boundary_value(cfg, (a, 0, b)),
                f"sum over distance from v, ({a},{b}) from (u,w)",
            ))
            eqs.append(LinearEquation.build(
                {(a, b, l): 1 for l in rng},
                pt(cfg.uv, a, b) - boundary_value(cfg, (a, b, 0)),
                f"sum over distance from w, ({a},{b}) from (u,v)",
            ))
    upper = _upper_bounds(pt, cfg)
    for idx in variables(d):
        if upper[idx] == 0:
            eqs.append(LinearEquation.build({idx: 1}, 0, f"vanishing intersection number forces {index_name(idx)}"))
    if use_krein:
        if kt is None or em is None:
            raise ValueError("Krein equations need the Krein table and eigenmatrices")
        eqs.extend(krein_equations(cfg, kt, em, d))
    return TripleSystem(cfg, d, tuple(eqs), upper)


def krein_equations(cfg: TripleConfig, kt: KreinTable, em: EigenmatrixPair, d: int) -> list[LinearEquation]:
    Q = em.Q
    out = []
    full = list(itertools.product(range(d + 1), repeat=3))
    for (i, j, h) in kt.vanishing:
        coeffs: dict[Index, Fraction] = {}
        const = Fraction(0)
        for (r, s, t) in full:
            c = Q[r, i] * Q[s, j] * Q[t, h]
            if not c:
                continue
            if 0 in (r, s, t):
                const += c * boundary_value(cfg, (r, s, t))
            else:
                coeffs[(r, s, t)] = c
        out.append(LinearEquation.build(coeffs, -const, f"vanishing Krein parameter q^{h}_{i}{j}"))
    return out


@dataclass(frozen=True)
class TripleFamily:
    """Parametric solution of a triple-intersection system.

    Free parameters are entries themselves (the non-pivot columns of the
    canonical reduced row echelon form). ``points``, when set, restricts the
    family to an explicit integer solution set; this is how symmetrization
    and case analysis narrow a family beyond what linear algebra sees.
    """

    config: TripleConfig
    d: int
    upper: Mapping[Index, int]
    equations: tuple[LinearEquation, ...]
    inequalities: tuple[LinearInequality, ...]
    solution: AffineSolution
    points: tuple[tuple[int, ...], ...] | None = None
    notes: tuple[str, ...] = field(default=())

    @property
    def variables(self) -> tuple[Index, ...]:
        return variables(self.d)

    @property
    def free(self) -> tuple[Index, ...]:
        vs = self.variables
        return tuple(vs[k] for k in self.solution.free)

    @property
    def boundary(self) -> dict[Index, int]:
        r = range(self.d + 1)
        return {
            idx: boundary_value(self.config, idx)
            for idx in itertools.product(r, repeat=3)
            if 0 in idx
        }

    def position(self, idx: Index) -> int:
        i, j, h = idx
        d = self.d
        return ((i - 1) * d + (j - 1)) * d + (h - 1)

    def expression(self, idx: Index) -> tuple[Fraction, dict[Index, Fraction]]:
        const, coefs = self.solution.expression(self.position(idx))
        return const, {f: c for f, c in zip(self.free, coefs) if c}

    def entry_str(self, idx: Index) -> str:
        const, coefs = self.expression(idx)
        terms = [(f, c) for f, c in coefs.items()]
        lin = _fmt_linear(terms) if terms else ""
        if lin and const:
            return f"{lin} + {const}".replace("+ -", "- ")
        return lin or str(const)

    def entries(self) -> dict[Index, str]:
        return {idx: self.entry_str(idx) for idx in self.variables}

    @property
    def ranges(self) -> dict[Index, tuple[int, int]]:
        """Propagated integer box for the free parameters (empty dict if infeasible)."""
        box = _Enumerator(self).root_box()
        if box is None:
            return {}
        return dict(zip(self.free, box))

    def as_dict(self, point: Sequence[int]) -> dict[Index, int]:
        return dict(zip(self.variables, point))

    def contains(self, point: Sequence[int]) -> bool:
        """Integer point membership (affine, bounds, inequalities, restriction)."""
        if self.points is not None:
            return tuple(point) in set(self.points)
        if not self.solution.contains(point):
            return False
        vals = self.as_dict(point)
        if any(not 0 <= vals[k] <= self.upper[k] for k in self.variables):
            return False
        return all(q.holds(vals) for q in self.inequalities)

    def value_set(self, idx: Index) -> list[int]:
        pos = self.position(idx)
        return sorted({p[pos] for p in enumerate_points(self)})

    def constrained(
        self,
        equations: Sequence[LinearEquation] = (),
        inequalities: Sequence[LinearInequality] = (),
        note: str | None = None,
    ) -> "TripleFamily":
        """Add relations and re-solve. Never enlarges the solution set."""
        eqs = self.equations + tuple(equations)
        ineqs = self.inequalities + tuple(inequalities)
        sol = _solve(self.config, self.d, eqs)
        pts = self.points
        if pts is not None:
            pts = tuple(
                p for p in pts
                if sol.contains(p) and all(q.holds(self.as_dict(p)) for q in ineqs)
            )
        notes = self.notes + ((note,) if note else ())
        return replace(self, equations=eqs, inequalities=ineqs, solution=sol, points=pts, notes=notes)

    def restricted(self, points: Iterable[Sequence[int]], note: str | None = None) -> "TripleFamily":
        pts = tuple(sorted({tuple(int(x) for x in p) for p in points}))
        notes = self.notes + ((note,) if note else ())
        return replace(self, points=pts, notes=notes)


def _system_matrix(d: int, eqs: Sequence[LinearEquation]) -> tuple[list[list[Fraction]], list[Fraction]]:
    vs = variables(d)
    pos = {v: n for n, v in enumerate(vs)}
    A = []
    b = []
    for e in eqs:
        row = [Fraction(0)] * len(vs)
        for k, c in e.coeffs:
            row[pos[k]] += c
        A.append(row)
        b.append(e.rhs)
    return A, b


def _solve(cfg: TripleConfig, d: int, eqs: Sequence[LinearEquation]) -> AffineSolution:
    A, b = _system_matrix(d, eqs)
    sol = rref_parametric(A, b, [index_name(v) for v in variables(d)])
    if isinstance(sol, Inconsistent):
        used = [
            {"equation": str(eqs[r]), "origin": eqs[r].origin, "multiplier": str(sol.multipliers[r])}
            for r in sol.rows
        ]
        raise Infeasible(
            f"triple system for config {cfg} is inconsistent",
            {"kind": "inconsistent-system", "config": cfg.label, "residual": str(sol.residual),
             "combination": used},
        )
    return sol


def solve_family(system: TripleSystem) -> TripleFamily:
    sol = _solve(system.config, system.d, system.equations)
    return TripleFamily(system.config, system.d, dict(system.upper), system.equations, (), sol)


def family_for(pt: ParameterTable, cfg: TripleConfig, **kw) -> TripleFamily:
    return solve_family(assemble_system(pt, cfg, **kw))


class _Enumerator:
    """Bound propagation plus depth-first search over the free parameters.

    Each entry and each extra inequality becomes an integer row
    ``lo <= const + sum(coef * t) <= hi``; entries additionally carry a
    divisor that the row value must be a multiple of.
    """

    def __init__(self, fam: TripleFamily):
        self.fam = fam
        sol = fam.solution
        self.nfree = sol.dim
        rows = []
        for k, idx in enumerate(fam.variables):
            const, coefs = sol.expression(k)
            den = math.lcm(const.denominator, *(c.denominator for c in coefs))
            rows.append((
                [int(c * den) for c in coefs],
                int(const * den),
                0,
                fam.upper[idx] * den,
                den,
            ))
        for q in fam.inequalities:
            const = Fraction(0)
            coefs = [Fraction(0)] * self.nfree
            for idx, c in q.coeffs:
                k0, cf = sol.expression(fam.position(idx))
                const += c * k0
                for f in range(self.nfree):
                    coefs[f] += c * cf[f]
            den = math.lcm(const.denominator, *(c.denominator for c in coefs))
            rows.append((
                [int(c * den) for c in coefs],
                int(const * den),
                None if q.lo is None else q.lo * den,
                None if q.hi is None else q.hi * den,
                1,
            ))
        # lo/hi may be Fractions for inequalities with fractional bounds
        self.rows = [
            (
                coef,
                const,
                None if lo is None else math.ceil(lo),
                None if hi is None else math.floor(hi),
                den,
                [f for f, c in enumerate(coef) if c],
            )
            for coef, const, lo, hi, den in rows
        ]

    def root_box(self) -> list[tuple[int, int]] | None:
        box = []
        for f in self.fam.solution.free:
            box.append((0, self.fam.upper[self.fam.variables[f]]))
        return self.propagate(box)

    def propagate(self, box: list[tuple[int, int]]) -> list[tuple[int, int]] | None:
        box = list(box)
        changed = True
        while changed:
            changed = False
            for coef, const, lo, hi, _den, support in self.rows:
                mins = {}
                maxs = {}
                tmin = tmax = const
                for f in support:
                    c = coef[f]
                    a, b = box[f]
                    if c > 0:
                        mins[f], maxs[f] = c * a, c * b
                    else:
                        mins[f], maxs[f] = c * b, c * a
                    tmin += mins[f]
                    tmax += maxs[f]
                if (hi is not None and tmin > hi) or (lo is not None and tmax < lo):
                    return None
                for f in support:
                    c = coef[f]
                    a, b = box[f]
                    na, nb = a, b
                    if lo is not None:
                        need = lo - (tmax - maxs[f])  # c * t >= need
                        if c > 0:
                            na = max(na, -((-need) // c))
                        else:
                            nb = min(nb, need // c)
                    if hi is not None:
                        room = hi - (tmin - mins[f])  # c * t <= room
                        if c > 0:
                            nb = min(nb, room // c)
                        else:
                            na = max(na, -((-room) // c))
                    if na > nb:
                        return None
                    if (na, nb) != (a, b):
                        box[f] = (na, nb)
                        changed = True
                        if c > 0:
                            mins[f], maxs[f] = c * na, c * nb
                        else:
                            mins[f], maxs[f] = c * nb, c * na
                        tmin = const + sum(mins.values())
                        tmax = const + sum(maxs.values())
        return box

    def leaf_ok(self, ts: Sequence[int]) -> bool:
        for coef, const, _lo, _hi, den, support in self.rows:
            if den != 1:
                val = const + sum(coef[f] * ts[f] for f in support)
                if val % den:
                    return False
        return True

    def run(self, cap: int = ENUMERATION_CAP) -> list[tuple[int, ...]]:
        box = self.root_box()
        if box is None:
            return []
        sol = self.fam.solution
        found: list[tuple[int, ...]] = []

        def dfs(depth: int, box: list[tuple[int, int]]) -> None:
            if depth == self.nfree:
                ts = [a for a, _ in box]
                if self.leaf_ok(ts):
                    found.append(tuple(int(x) for x in sol.point(ts)))
                    if len(found) > cap:
                        raise EnumerationTooLarge(
                            f"more than {cap} integer points in config {self.fam.config}"
                        )
                return
            a, b = box[depth]
            for t in range(a, b + 1):
                trial = list(box)
                trial[depth] = (t, t)
                nxt = self.propagate(trial)
                if nxt is not None:
                    dfs(depth + 1, nxt)

        dfs(0, box)
        found.sort()
        return found


def enumerate_points(fam: TripleFamily, cap: int = ENUMERATION_CAP) -> list[tuple[int, ...]]:
    """All integer assignments in the family, sorted lexicographically.

    Each point lists the entries in variable order (i, j, h lexicographic).
    """
    if fam.points is not None:
        return list(fam.points)
    return _Enumerator(fam).run(cap)


def check_point(pt: ParameterTable, cfg: TripleConfig, point: Sequence[int]) -> list[str]:
    """Independent check of the counting equations on a concrete table.

    Returns the list of violated equations (empty when the point is valid).
    """
    d = pt.d
    vals = dict(zip(variables(d), point))
    bad = []
    rng = range(1, d + 1)
    for a in rng:
        for b in rng:
            if sum(vals[(l, a, b)] for l in rng) != pt(cfg.vw, a, b) - boundary_value(cfg, (0, a, b)):
                bad.append(f"u-sum ({a},{b})")
            if sum(vals[(a, l, b)] for l in rng) != pt(cfg.uw, a, b) - boundary_value(cfg, (a, 0, b)):
                bad.append(f"v-sum ({a},{b})")
            if sum(vals[(a, b, l)] for l in rng) != pt(cfg.uv, a, b) - boundary_value(cfg, (a, b, 0)):
                bad.append(f"w-sum ({a},{b})")
    return bad

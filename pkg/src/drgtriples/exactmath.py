"""Exact rational linear algebra.

Scalars are :class:`fractions.Fraction`; matrices are small immutable row grids.
Everything here is pure and deterministic so that downstream parametrizations
are reproducible bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Rational = Fraction


class IrrationalSpectrum(ValueError):
    """The characteristic polynomial does not split over the rationals."""


def as_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        raise TypeError("floats are not accepted in exact arithmetic")
    return Fraction(x)


class RatMatrix:
    """Immutable rectangular matrix of rationals."""

    __slots__ = ("_rows", "rows", "cols")

    def __init__(self, rows: Iterable[Iterable]):
        grid = tuple(tuple(as_rational(x) for x in row) for row in rows)
        if not grid:
            raise ValueError("matrix needs at least one row")
        width = len(grid[0])
        if any(len(r) != width for r in grid):
            raise ValueError("ragged matrix")
        self._rows = grid
        self.rows = len(grid)
        self.cols = width

    @classmethod
    def identity(cls, n: int) -> "RatMatrix":
        return cls([[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "RatMatrix":
        return cls([[0] * cols for _ in range(rows)])

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    def __getitem__(self, idx):
        if isinstance(idx, tuple):
            i, j = idx
            return self._rows[i][j]
        return self._rows[idx]

    def __iter__(self):
        return iter(self._rows)

    def __eq__(self, other) -> bool:
        if isinstance(other, RatMatrix):
            return self._rows == other._rows
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self._rows)

    def __repr__(self) -> str:
        body = "; ".join(" ".join(str(x) for x in row) for row in self._rows)
        return f"RatMatrix([{body}])"

    def tolist(self) -> list[list[Fraction]]:
        return [list(r) for r in self._rows]

    def transpose(self) -> "RatMatrix":
        return RatMatrix(zip(*self._rows))

    def __add__(self, other: "RatMatrix") -> "RatMatrix":
        if self.shape != other.shape:
            raise ValueError("shape mismatch")
        return RatMatrix(
            [a + b for a, b in zip(r, s)] for r, s in zip(self._rows, other._rows)
        )

    def scale(self, c) -> "RatMatrix":
        c = as_rational(c)
        return RatMatrix([c * x for x in r] for r in self._rows)

    def __matmul__(self, other: "RatMatrix") -> "RatMatrix":
        if self.cols != other.rows:
            raise ValueError(f"cannot multiply {self.shape} by {other.shape}")
        cols = list(zip(*other._rows))
        return RatMatrix(
            [sum((a * b for a, b in zip(r, c)), Fraction(0)) for c in cols]
            for r in self._rows
        )

    def apply(self, vec: Sequence) -> tuple[Fraction, ...]:
        if len(vec) != self.cols:
            raise ValueError("vector length mismatch")
        v = [as_rational(x) for x in vec]
        return tuple(sum((a * b for a, b in zip(r, v)), Fraction(0)) for r in self._rows)

    def trace(self) -> Fraction:
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        return sum((self._rows[i][i] for i in range(self.rows)), Fraction(0))

    def inverse(self) -> "RatMatrix":
        n = self.rows
        if n != self.cols:
            raise ValueError("inverse of a non-square matrix")
        aug = [list(r) + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(self._rows)]
        _reduce(aug, n)
        for i in range(n):
            if aug[i][i] != 1:
                raise ZeroDivisionError("singular matrix")
        return RatMatrix(row[n:] for row in aug)


def _reduce(m: list[list[Fraction]], ncols: int) -> list[int]:
    """In-place reduced row echelon form on the first `ncols` columns.

    Pivots are chosen left to right, first nonzero row below the current
    pivot row. Returns the pivot column list.
    """
    pivots: list[int] = []
    r = 0
    nrows = len(m)
    for c in range(ncols):
        if r == nrows:
            break
        p = next((i for i in range(r, nrows) if m[i][c] != 0), None)
        if p is None:
            continue
        if p != r:
            m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        if inv != 1:
            m[r] = [x * inv for x in m[r]]
        piv = m[r]
        for i in range(nrows):
            if i != r:
                f = m[i][c]
                if f:
                    m[i] = [x - f * y for x, y in zip(m[i], piv)]
        pivots.append(c)
        r += 1
    return pivots


@dataclass(frozen=True)
class AffineSolution:
    """Solution set ``particular + span(basis)`` of a linear system.

    ``basis[k]`` belongs to the free variable ``free[k]``: it has a 1 in that
    coordinate and 0 in every other free coordinate, so the free variables
    are literally coordinates of the solution.
    """

    names: tuple[str, ...]
    particular: tuple[Fraction, ...]
    basis: tuple[tuple[Fraction, ...], ...]
    free: tuple[int, ...]

    @property
    def dim(self) -> int:
        return len(self.free)

    @property
    def free_names(self) -> tuple[str, ...]:
        return tuple(self.names[i] for i in self.free)

    def point(self, values: Sequence) -> tuple[Fraction, ...]:
        """Evaluate at the given free-variable values."""
        if len(values) != len(self.free):
            raise ValueError("wrong number of free values")
        out = list(self.particular)
        for t, vec in zip(values, self.basis):
            t = as_rational(t)
            if t:
                for k, x in enumerate(vec):
                    if x:
                        out[k] += t * x
        return tuple(out)

    def expression(self, k: int) -> tuple[Fraction, tuple[Fraction, ...]]:
        """Coordinate k as ``(constant, coefficients over free variables)``."""
        return self.particular[k], tuple(vec[k] for vec in self.basis)

    def contains(self, vec: Sequence) -> bool:
        vec = [as_rational(x) for x in vec]
        free_vals = [vec[i] for i in self.free]
        return list(self.point(free_vals)) == vec


@dataclass(frozen=True)
class Inconsistent:
    """No solution: ``multipliers @ A == 0`` while ``multipliers @ b != 0``."""

    multipliers: tuple[Fraction, ...]
    residual: Fraction

    @property
    def rows(self) -> tuple[int, ...]:
        return tuple(i for i, y in enumerate(self.multipliers) if y)


def rref_parametric(
    A: RatMatrix | Sequence[Sequence],
    b: Sequence,
    names: Sequence[str] | None = None,
) -> AffineSolution | Inconsistent:
    """Solve ``A x = b`` exactly, returning the full affine solution set.

    An inconsistent system is a legal outcome and comes back as
    :class:`Inconsistent` with a row combination certifying it.
    """
    A = A if isinstance(A, RatMatrix) else RatMatrix(A)
    if A.rows != len(b):
        raise ValueError("A rows must equal length of b")
    n, m = A.cols, A.rows
    if names is None:
        names = tuple(f"x{i}" for i in range(n))
    names = tuple(names)
    if len(names) != n:
        raise ValueError("one name per column required")
    # columns: [A | b | I] so that the tail records row multipliers
    aug = [
        list(A[i]) + [as_rational(b[i])] + [Fraction(int(i == j)) for j in range(m)]
        for i in range(m)
    ]
    pivots = _reduce(aug, n)
    for row in aug[len(pivots):]:
        if row[n] != 0:
            return Inconsistent(tuple(row[n + 1:]), row[n])
    particular = [Fraction(0)] * n
    for r, c in enumerate(pivots):
        particular[c] = aug[r][n]
    pivset = set(pivots)
    free = tuple(c for c in range(n) if c not in pivset)
    basis = []
    for f in free:
        vec = [Fraction(0)] * n
        vec[f] = Fraction(1)
        for r, c in enumerate(pivots):
            vec[c] = -aug[r][f]
        basis.append(tuple(vec))
    return AffineSolution(names, tuple(particular), tuple(basis), free)


def char_poly(M: RatMatrix) -> tuple[Fraction, ...]:
    """Coefficients of det(xI - M), constant term first, monic.

    Faddeev-LeVerrier recurrence; exact over the rationals.
    """
    n = M.rows
    if n != M.cols:
        raise ValueError("characteristic polynomial of a non-square matrix")
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = RatMatrix.zeros(n, n)
    ident = RatMatrix.identity(n)
    for k in range(1, n + 1):
        Mk = M @ Mk + ident.scale(coeffs[n - k + 1])
        coeffs[n - k] = -(M @ Mk).trace() / k
    return tuple(coeffs)


def poly_eval(coeffs: Sequence[Fraction], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _deflate(coeffs: list[Fraction], root: Fraction) -> list[Fraction]:
    # synthetic division by (x - root); caller guarantees exactness
    n = len(coeffs) - 1
    out = [Fraction(0)] * n
    carry = coeffs[n]
    for k in range(n - 1, -1, -1):
        out[k] = carry
        carry = coeffs[k] + carry * root
    assert carry == 0
    return out


MAX_CHARPOLY_DIM = 32


def char_poly_roots(M: RatMatrix) -> list[tuple[Fraction, int]]:
    """Rational eigenvalues of M with multiplicities, largest first.

    Raises IrrationalSpectrum unless the characteristic polynomial splits
    into rational linear factors.
    """
    if M.rows != M.cols:
        raise ValueError("square matrix required")
    if M.rows > MAX_CHARPOLY_DIM:
        raise ValueError(f"dimension capped at {MAX_CHARPOLY_DIM}")
    n = M.rows
    # integer matrix D*M has integer eigenvalues D*theta (monic integer char poly)
    den = math.lcm(*(x.denominator for row in M for x in row))
    Mi = M.scale(den)
    poly = list(char_poly(Mi))
    found: list[tuple[Fraction, int]] = []

    def take(root: Fraction) -> None:
        nonlocal poly
        mult = 0
        while len(poly) > 1 and poly_eval(poly, root) == 0:
            poly = _deflate(poly, root)
            mult += 1
        if mult:
            found.append((root / den, mult))

    take(Fraction(0))
    if len(poly) > 1:
        # Gershgorin bound on |eigenvalue|, intersected with divisors of the constant term
        bound = max(sum(abs(x) for x in row) for row in Mi)
        const = abs(int(poly[0]))
        for t in range(1, int(bound) + 1):
            if len(poly) == 1:
                break
            if const % t:
                continue
            take(Fraction(t))
            take(Fraction(-t))
            const = abs(int(poly[0]))
    if sum(m for _, m in found) != n:
        raise IrrationalSpectrum(
            f"characteristic polynomial has an irreducible factor of degree {len(poly) - 1}"
        )
    found.sort(key=lambda rm: rm[0], reverse=True)
    return found


def dot(u: Sequence, v: Sequence) -> Fraction:
    return sum((as_rational(a) * as_rational(b) for a, b in zip(u, v)), Fraction(0))

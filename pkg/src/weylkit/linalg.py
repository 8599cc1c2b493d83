"""Exact rational linear algebra: RREF, rank, nullspace, subspaces.

Everything is :class:`fractions.Fraction`; there is no floating point in
this module.  Elimination runs on integer rows (each row scaled by the lcm
of its denominators and kept primitive), and only the final normalisation
to reduced row echelon form divides.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

__all__ = [
    "RationalMatrix",
    "Subspace",
    "DimensionMismatch",
    "rref",
    "rank",
    "nullspace",
]


class DimensionMismatch(ValueError):
    pass


def _fr_tuple(row: Iterable) -> tuple[Fraction, ...]:
    return tuple(x if isinstance(x, Fraction) else Fraction(x) for x in row)


@dataclass(frozen=True)
class RationalMatrix:
    rows: tuple[tuple[Fraction, ...], ...]
    ncols: int

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable], ncols: int | None = None):
        rows = tuple(_fr_tuple(r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("ncols is required for an empty matrix")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise DimensionMismatch(f"row of length {len(r)}, expected {ncols}")
        return cls(rows, ncols)

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence], nrows: int):
        for c in cols:
            if len(c) != nrows:
                raise DimensionMismatch(f"column of length {len(c)}, expected {nrows}")
        return cls.from_rows(
            (tuple(c[i] for c in cols) for i in range(nrows)), ncols=len(cols)
        )

    @classmethod
    def identity(cls, n: int):
        return cls.from_rows(
            ((1 if i == j else 0 for j in range(n)) for i in range(n)), ncols=n
        )

    @classmethod
    def zeros(cls, nrows: int, ncols: int):
        return cls.from_rows(((0,) * ncols for _ in range(nrows)), ncols=ncols)

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(
            tuple(tuple(r[j] for r in self.rows) for j in range(self.ncols)),
            self.nrows,
        )

    T = property(transpose)

    def columns(self) -> list[tuple[Fraction, ...]]:
        return list(self.transpose().rows)

    def matvec(self, v: Sequence) -> tuple[Fraction, ...]:
        if len(v) != self.ncols:
            raise DimensionMismatch("vector length does not match column count")
        return tuple(sum((a * b for a, b in zip(r, v)), Fraction(0)) for r in self.rows)

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"RationalMatrix({self.nrows}x{self.ncols}: [{body}])"


# ---------------------------------------------------------------------------
# elimination
# ---------------------------------------------------------------------------

def _integer_row(row: Sequence[Fraction]) -> list[int]:
    den = 1
    for x in row:
        if x.denominator != 1:
            den = den * x.denominator // math.gcd(den, x.denominator)
    ints = [int(x * den) for x in row]
    g = math.gcd(*ints) if ints else 0
    if g > 1:
        ints = [x // g for x in ints]
    return ints


def _primitive(row: list[int]) -> list[int]:
    g = math.gcd(*row)
    if g > 1:
        return [x // g for x in row]
    return row


def _echelon(rows: list[list[int]], ncols: int):
    """Fraction-free forward elimination in place.  Returns pivot columns."""
    pivots = []
    r = 0
    for c in range(ncols):
        if r == len(rows):
            break
        for i in range(r, len(rows)):
            if rows[i][c]:
                break
        else:
            continue
        rows[r], rows[i] = rows[i], rows[r]
        prow = rows[r]
        p = prow[c]
        for i in range(r + 1, len(rows)):
            e = rows[i][c]
            if e:
                g = math.gcd(p, e)
                a, b = p // g, e // g
                rows[i] = _primitive([a * x - b * y for x, y in zip(rows[i], prow)])
        pivots.append(c)
        r += 1
    return pivots


def _rref_int(rows: list[list[int]], ncols: int):
    pivots = _echelon(rows, ncols)
    rank_ = len(pivots)
    del rows[rank_:]
    # back substitution, still over the integers
    for k in range(rank_ - 1, -1, -1):
        c = pivots[k]
        prow = rows[k]
        p = prow[c]
        for i in range(k):
            e = rows[i][c]
            if e:
                g = math.gcd(p, e)
                a, b = p // g, e // g
                rows[i] = _primitive([a * x - b * y for x, y in zip(rows[i], prow)])
    out = []
    for k, c in enumerate(pivots):
        p = rows[k][c]
        out.append(tuple(Fraction(x, p) for x in rows[k]))
    return out, pivots


def rref(M: RationalMatrix) -> tuple[RationalMatrix, int, list[int]]:
    """Reduced row echelon form, rank and pivot columns.

    The returned matrix keeps only the nonzero rows.
    """
    rows = [_integer_row(r) for r in M.rows]
    rows = [r for r in rows if any(r)]
    red, pivots = _rref_int(rows, M.ncols)
    return RationalMatrix(tuple(red), M.ncols), len(pivots), pivots


def rank(M: RationalMatrix) -> int:
    rows = [_integer_row(r) for r in M.rows]
    rows = [r for r in rows if any(r)]
    return len(_echelon(rows, M.ncols))


def nullspace(M: RationalMatrix) -> "Subspace":
    """``{x : M x = 0}`` as a canonical :class:`Subspace`."""
    R, _, pivots = rref(M)
    free = [c for c in range(M.ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * M.ncols
        v[f] = Fraction(1)
        for k, c in enumerate(pivots):
            v[c] = -R.rows[k][f]
        basis.append(v)
    return Subspace.from_generators(basis, M.ncols)


# ---------------------------------------------------------------------------
# subspaces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Subspace:
    """A subspace of ``Q^ambient_dim`` stored as the RREF of a basis.

    Two equal subspaces have identical ``basis``, so ``==`` is subspace
    equality.
    """

    ambient_dim: int
    basis: RationalMatrix

    @classmethod
    def from_generators(cls, vectors: Iterable[Sequence], ambient_dim: int) -> "Subspace":
        M = RationalMatrix.from_rows(vectors, ncols=ambient_dim)
        R, _, _ = rref(M)
        return cls(ambient_dim, R)

    @classmethod
    def zero(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, RationalMatrix((), ambient_dim))

    @classmethod
    def full(cls, ambient_dim: int) -> "Subspace":
        return cls(ambient_dim, RationalMatrix.identity(ambient_dim))

    @property
    def dim(self) -> int:
        return self.basis.nrows

    @property
    def vectors(self) -> tuple[tuple[Fraction, ...], ...]:
        return self.basis.rows

    def pivots(self) -> list[int]:
        return [next(j for j, x in enumerate(r) if x) for r in self.basis.rows]

    def _check(self, other: "Subspace"):
        if self.ambient_dim != other.ambient_dim:
            raise DimensionMismatch(
                f"ambient dimensions differ: {self.ambient_dim} vs {other.ambient_dim}"
            )

    def reduce(self, v: Sequence) -> tuple[Fraction, ...]:
        """Remainder of ``v`` after eliminating the pivot coordinates."""
        if len(v) != self.ambient_dim:
            raise DimensionMismatch(f"vector of length {len(v)} in ambient {self.ambient_dim}")
        w = list(_fr_tuple(v))
        for row, c in zip(self.basis.rows, self.pivots()):
            e = w[c]
            if e:
                w = [x - e * y for x, y in zip(w, row)]
        return tuple(w)

    def contains(self, v: Sequence) -> bool:
        return not any(self.reduce(v))

    def coordinates(self, v: Sequence) -> tuple[Fraction, ...]:
        """Coefficients of ``v`` in the canonical basis.  ``v`` must lie in the space."""
        if not self.contains(v):
            raise ValueError("vector is not in the subspace")
        return tuple(_fr_tuple(v)[c] for c in self.pivots())

    def includes(self, other: "Subspace") -> bool:
        """``other`` is a subspace of ``self``."""
        self._check(other)
        return all(self.contains(v) for v in other.vectors)

    def orthocomplement(self) -> "Subspace":
        if self.dim == 0:
            return Subspace.full(self.ambient_dim)
        return nullspace(self.basis)

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace.from_generators(self.vectors + other.vectors, self.ambient_dim)

    sum = __add__

    def intersection(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return (self.orthocomplement() + other.orthocomplement()).orthocomplement()

    def embed(self, ambient_dim: int) -> "Subspace":
        """Same vectors with zero coordinates appended.  RREF is preserved."""
        if ambient_dim < self.ambient_dim:
            raise DimensionMismatch("cannot embed into a smaller space")
        pad = (Fraction(0),) * (ambient_dim - self.ambient_dim)
        return Subspace(
            ambient_dim,
            RationalMatrix(tuple(r + pad for r in self.basis.rows), ambient_dim),
        )

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient_dim}, basis={[list(map(str, r)) for r in self.vectors]})"

"""Weyl complexity and Weyl polynomials of a family of integral polynomials.

For ``P = (p_1, ..., p_r)`` the matrix ``Lambda_k(P)`` has ``r*k`` rows in
``k`` blocks; block ``b`` (1-based), column ``c`` holds ``p_i^[b-c+1]``
when ``c <= b`` and 0 otherwise, where ``p^[j](n) = C(p(n), j)``.  Its
real span is the span of the values of its columns, which is the span of
the monomial-coefficient vectors of each column.

``W(P)`` is the least ``k`` with ``dim span Lambda_k = dim span
Lambda_{k-1} + r``, and ``WP_k(P)`` is the image of ``R^r x (span
Lambda_{k-1})^perp`` under ``v -> v^T Lambda_k e_1``.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .linalg import RationalMatrix, Subspace, rank
from .polynomial import (
    IntegralPolynomial,
    RationalPolynomial,
    binomial_coordinates,
    binomial_transform,
    from_monomial,
    is_essentially_distinct,
    parse_family,
)

__all__ = [
    "NotStabilized",
    "NotEssentiallyDistinct",
    "PolyFamily",
    "LambdaMatrix",
    "WeylSpace",
    "Relation",
    "SchemeComparison",
    "lambda_matrix",
    "span_dim",
    "rspan",
    "xi",
    "default_k_max",
    "dimension_trace",
    "complexity_with_trace",
    "weyl_complexity",
    "weyl_space",
    "weyl_polynomials",
    "contains_poly",
    "integral_basis",
    "scheme_compare",
]


class NotEssentiallyDistinct(ValueError):
    pass


class NotStabilized(RuntimeError):
    """No ``k <= k_max`` satisfies the rank-increment condition."""

    def __init__(self, k_max: int, trace: list[int], r: int):
        self.k_max = k_max
        self.trace = trace
        super().__init__(
            f"Weyl complexity not reached for k <= {k_max} (r = {r}); "
            f"dim span(Lambda_k), k=1..{k_max}: {trace}"
        )


@dataclass(frozen=True)
class PolyFamily:
    polys: tuple[IntegralPolynomial, ...]
    essentially_distinct: bool = field(init=False, compare=False)
    zero_constant_term: bool = field(init=False, compare=False)

    def __post_init__(self):
        polys = tuple(self.polys)
        if not polys:
            raise ValueError("a family needs at least one polynomial")
        object.__setattr__(self, "polys", polys)
        object.__setattr__(self, "essentially_distinct", is_essentially_distinct(polys))
        object.__setattr__(
            self, "zero_constant_term", all(p(0) == 0 for p in polys)
        )

    @classmethod
    def parse(cls, text: str) -> "PolyFamily":
        return cls(tuple(parse_family(text)))

    @classmethod
    def of(cls, *items) -> "PolyFamily":
        """Build from polynomials or expression strings."""
        polys = []
        for it in items:
            if isinstance(it, str):
                polys.extend(parse_family(it))
            elif isinstance(it, RationalPolynomial):
                polys.append(from_monomial(it))
            else:
                polys.append(it)
        return cls(tuple(polys))

    @property
    def r(self) -> int:
        return len(self.polys)

    @property
    def max_degree(self) -> int:
        return max(p.degree for p in self.polys)

    def __len__(self):
        return len(self.polys)

    def __iter__(self):
        return iter(self.polys)

    def __str__(self):
        return "{" + ", ".join(str(p) for p in self.polys) + "}"


def _family(P) -> PolyFamily:
    if isinstance(P, PolyFamily):
        return P
    if isinstance(P, str):
        return PolyFamily.parse(P)
    return PolyFamily.of(*P)


def _require_distinct(P: PolyFamily):
    if not P.essentially_distinct:
        raise NotEssentiallyDistinct(f"family {P} is not essentially distinct")


# ---------------------------------------------------------------------------
# Lambda matrices
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LambdaMatrix:
    k: int
    r: int
    entries: tuple[tuple[IntegralPolynomial, ...], ...]
    coeff_matrix: RationalMatrix

    @property
    def nrows(self) -> int:
        return self.r * self.k

    def column(self, c: int) -> tuple[IntegralPolynomial, ...]:
        return tuple(row[c] for row in self.entries)

    def evaluate(self, n: int) -> list[list[int]]:
        return [[e(n) for e in row] for row in self.entries]


@lru_cache(maxsize=512)
def _lambda(P: PolyFamily, k: int) -> LambdaMatrix:
    r = P.r
    zero = IntegralPolynomial()
    entries = []
    for b in range(1, k + 1):
        for p in P.polys:
            entries.append(
                tuple(
                    binomial_transform(p, b - c + 1) if c <= b else zero
                    for c in range(1, k + 1)
                )
            )
    gen_cols = []
    for c in range(k):
        col = [row[c].to_monomial() for row in entries]
        top = max(int(q.degree) for q in col if not q.is_zero())
        for j in range(top + 1):
            gen_cols.append([q.coeff(j) for q in col])
    coeff = RationalMatrix.from_columns(gen_cols, r * k) if k else RationalMatrix((), 0)
    return LambdaMatrix(k, r, tuple(entries), coeff)


def lambda_matrix(P, k: int) -> LambdaMatrix:
    """``Lambda_k(P)`` with its coefficient matrix.  ``k = 0`` is empty."""
    P = _family(P)
    _require_distinct(P)
    if k < 0:
        raise ValueError("k must be nonnegative")
    return _lambda(P, k)


def span_dim(L: LambdaMatrix) -> int:
    if L.k == 0:
        return 0
    return rank(L.coeff_matrix)


@lru_cache(maxsize=512)
def _rspan(P: PolyFamily, k: int) -> Subspace:
    L = _lambda(P, k)
    return Subspace.from_generators(L.coeff_matrix.columns(), P.r * k)


def rspan(P, k: int) -> Subspace:
    """``R-span(Lambda_k(P))`` as a subspace of ``Q^(r k)``."""
    P = _family(P)
    _require_distinct(P)
    if k == 0:
        return Subspace.zero(0)
    return _rspan(P, k)


def xi(P, k: int, v: Sequence) -> RationalPolynomial:
    """``v^T Lambda_k e_1 = sum_{b,i} v[(b-1) r + i] p_i^[b]``."""
    P = _family(P)
    if len(v) != P.r * k:
        raise ValueError(f"expected a vector of length {P.r * k}")
    out = RationalPolynomial()
    for b in range(1, k + 1):
        for i, p in enumerate(P.polys):
            a = Fraction(v[(b - 1) * P.r + i])
            if a:
                out = out + binomial_transform(p, b).to_monomial() * a
    return out


# ---------------------------------------------------------------------------
# complexity
# ---------------------------------------------------------------------------

def default_k_max(P) -> int:
    P = _family(P)
    return 2 * (P.r * P.max_degree + 1)


def dimension_trace(P, k: int) -> list[int]:
    """``[dim span Lambda_1, ..., dim span Lambda_k]``."""
    P = _family(P)
    _require_distinct(P)
    return [_rspan(P, j).dim for j in range(1, k + 1)]


def _complexity(P: PolyFamily, k_max: int) -> tuple[int, list[int]]:
    trace = []
    prev = 0
    for k in range(1, k_max + 1):
        d = _rspan(P, k).dim
        trace.append(d)
        if d == prev + P.r:
            return k, trace
        prev = d
    raise NotStabilized(k_max, trace, P.r)


def weyl_complexity(P, k_max: int | None = None) -> int:
    P = _family(P)
    _require_distinct(P)
    if k_max is None:
        k_max = default_k_max(P)
    return _complexity(P, k_max)[0]


def complexity_with_trace(P, k_max: int | None = None) -> tuple[int, list[int]]:
    P = _family(P)
    _require_distinct(P)
    if k_max is None:
        k_max = default_k_max(P)
    return _complexity(P, k_max)


# ---------------------------------------------------------------------------
# Weyl spaces
# ---------------------------------------------------------------------------

def _poly_span(polys: Iterable[RationalPolynomial]) -> Subspace:
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return Subspace.zero(1)
    length = max(len(p.mono_coeffs) for p in polys)
    S = Subspace.from_generators([p.padded(length) for p in polys], length)
    # trim to the highest degree actually present
    top = max((max(j for j, x in enumerate(r) if x) for r in S.vectors), default=0)
    if top + 1 < length:
        S = Subspace(top + 1, RationalMatrix(tuple(r[: top + 1] for r in S.vectors), top + 1))
    return S


def _primitive_multiple(q: RationalPolynomial) -> IntegralPolynomial:
    """Least positive integer multiple of ``q`` that is integer valued."""
    den = 1
    for c in binomial_coordinates(q):
        den = den * c.denominator // math.gcd(den, c.denominator)
    return from_monomial(q * den)


@dataclass(frozen=True)
class WeylSpace:
    """A finite-dimensional space of polynomials in monomial coordinates.

    ``rational_basis`` lives in ``Q^(ambient_degree + 1)`` (coefficients of
    ``1, n, ..., n^D``) and is in RREF.  ``integral_basis`` has one
    integer-valued polynomial per RREF row.
    """

    ambient_degree: int
    rational_basis: Subspace
    integral_basis: tuple[IntegralPolynomial, ...]
    provenance: tuple[PolyFamily, int] | None = field(default=None, compare=False)

    @classmethod
    def span(cls, polys: Iterable, provenance=None) -> "WeylSpace":
        rp = []
        for p in polys:
            if isinstance(p, IntegralPolynomial):
                p = p.to_monomial()
            rp.append(p)
        S = _poly_span(rp)
        ints = tuple(_primitive_multiple(RationalPolynomial(r)) for r in S.vectors)
        return cls(S.ambient_dim - 1, S, ints, provenance)

    @property
    def dim(self) -> int:
        return self.rational_basis.dim

    @property
    def basis_polynomials(self) -> tuple[RationalPolynomial, ...]:
        """The RREF rows as monic-pivot rational polynomials."""
        return tuple(RationalPolynomial(r) for r in self.rational_basis.vectors)

    def _subspace(self, length: int) -> Subspace:
        return self.rational_basis.embed(length)

    def contains(self, h) -> bool:
        return contains_poly(self, h)

    def __contains__(self, h) -> bool:
        return contains_poly(self, h)

    def issubset(self, other: "WeylSpace") -> bool:
        length = max(self.ambient_degree, other.ambient_degree) + 1
        return other._subspace(length).includes(self._subspace(length))

    def same_span(self, other: "WeylSpace") -> bool:
        return self.issubset(other) and other.issubset(self)

    def __le__(self, other):
        return self.issubset(other)

    def __lt__(self, other):
        return self.issubset(other) and not other.issubset(self)

    def compose(self, q: IntegralPolynomial) -> "WeylSpace":
        """``{h o q : h in self}``."""
        qm = q.to_monomial()
        return WeylSpace.span(h.compose(qm) for h in self.basis_polynomials)

    def to_text(self) -> str:
        """Canonical form: sorted integral basis, one polynomial per entry."""
        polys = sorted(
            self.integral_basis,
            key=lambda p: (p.degree, p.to_monomial().mono_coeffs[::-1]),
        )
        return "{" + ", ".join(str(p) for p in polys) + "}"

    def __str__(self):
        return self.to_text()


def weyl_space(P, k: int) -> WeylSpace:
    """``WP_k(P)``.  ``WP_0`` is the zero space and ``WP_1`` is ``span(P)``."""
    P = _family(P)
    _require_distinct(P)
    return _weyl_space(P, k)


@lru_cache(maxsize=512)
def _weyl_space(P: PolyFamily, k: int) -> WeylSpace:
    if k < 0:
        raise ValueError("k must be nonnegative")
    if k == 0:
        return WeylSpace.span([], provenance=(P, 0))
    gens = [p.to_monomial() for p in P.polys]
    if k >= 2:
        orth = _rspan(P, k - 1).orthocomplement()
        zeros = (0,) * P.r
        for w in orth.vectors:
            gens.append(xi(P, k, zeros + tuple(w)))
    return WeylSpace.span(gens, provenance=(P, k))


def weyl_polynomials(P, k_max: int | None = None) -> WeylSpace:
    """``WP(P) = WP_{W(P)}(P)``; its dimension is ``r``."""
    P = _family(P)
    W = weyl_complexity(P, k_max)
    space = _weyl_space(P, W)
    if space.dim != P.r:
        raise AssertionError(f"dim WP(P) = {space.dim}, expected {P.r}")
    return space


def contains_poly(W: WeylSpace, h) -> bool:
    if isinstance(h, str):
        from .polynomial import parse_rational_poly

        h = parse_rational_poly(h)
    if isinstance(h, IntegralPolynomial):
        h = h.to_monomial()
    if h.is_zero():
        return True
    length = max(W.ambient_degree + 1, len(h.mono_coeffs))
    return W._subspace(length).contains(h.padded(length))


def integral_basis(W: WeylSpace) -> list[IntegralPolynomial]:
    return list(W.integral_basis)


# ---------------------------------------------------------------------------
# comparing recurrence schemes
# ---------------------------------------------------------------------------

class Relation(enum.Enum):
    #: WP(P) = WP(Q)
    EQUIVALENT = "Equivalent"
    #: WP(P) strictly inside WP(Q): Q-recurrence implies P-recurrence
    Q_REC_IMPLIES_P_REC = "QrecImpliesPrec"
    #: WP(Q) strictly inside WP(P): P-recurrence implies Q-recurrence
    P_REC_IMPLIES_Q_REC = "PrecImpliesQrec"
    GENERAL_POSITION = "GeneralPosition"


@dataclass(frozen=True)
class SchemeComparison:
    relation: Relation
    wp_p: WeylSpace
    wp_q: WeylSpace
    #: an element of WP(P) \ WP(Q), if any
    p_not_in_q: RationalPolynomial | None
    #: an element of WP(Q) \ WP(P), if any
    q_not_in_p: RationalPolynomial | None

    def certificates(self) -> list[RationalPolynomial]:
        return [c for c in (self.p_not_in_q, self.q_not_in_p) if c is not None]


def _first_outside(A: WeylSpace, B: WeylSpace) -> RationalPolynomial | None:
    for h in A.basis_polynomials:
        if not contains_poly(B, h):
            return h
    return None


def scheme_compare(P, Q, k_max: int | None = None) -> SchemeComparison:
    """Classify P- and Q-recurrence in Weyl systems via ``WP(P)`` vs ``WP(Q)``.

    Certificates are the first canonical (RREF) basis polynomial of one
    space that is missing from the other.
    """
    P, Q = _family(P), _family(Q)
    wp, wq = weyl_polynomials(P, k_max), weyl_polynomials(Q, k_max)
    a = _first_outside(wp, wq)
    b = _first_outside(wq, wp)
    if a is None and b is None:
        rel = Relation.EQUIVALENT
    elif a is None:
        rel = Relation.Q_REC_IMPLIES_P_REC
    elif b is None:
        rel = Relation.P_REC_IMPLIES_Q_REC
    else:
        rel = Relation.GENERAL_POSITION
    return SchemeComparison(rel, wp, wq, a, b)

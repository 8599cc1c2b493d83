import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from weylkit.linalg import DimensionMismatch, RationalMatrix, Subspace, nullspace, rank, rref

F = Fraction


def M(rows):
    return RationalMatrix.from_rows(rows)


def test_rref_rank_one():
    R, r, piv = rref(M([[1, 2], [2, 4]]))
    assert r == 1 and piv == [0]
    assert R.rows == ((1, 2),)


def test_rref_identity():
    I = RationalMatrix.identity(3)
    R, r, piv = rref(I)
    assert R == I and r == 3 and piv == [0, 1, 2]


def test_rref_zero():
    assert rref(M([[0, 0], [0, 0]]))[1] == 0


def test_nullspace_examples():
    assert nullspace(M([[1, 2]])) == Subspace.from_generators([[-2, 1]], 2)
    assert nullspace(RationalMatrix.identity(3)).dim == 0
    assert nullspace(M([[1, 2], [2, 4]])).dim == 1


def test_subspace_examples():
    S = Subspace.from_generators([[1, 2]], 2)
    assert S.contains([2, 4]) and not S.contains([1, 0])
    assert S.orthocomplement() == Subspace.from_generators([[-2, 1]], 2)
    assert S.orthocomplement().orthocomplement() == S
    assert Subspace.full(2).includes(S)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        Subspace.full(2).includes(Subspace.full(3))
    with pytest.raises(DimensionMismatch):
        Subspace.full(2).contains([1, 2, 3])


def test_intersection_and_embed():
    A = Subspace.from_generators([[1, 0, 0], [0, 1, 0]], 3)
    B = Subspace.from_generators([[0, 1, 0], [0, 0, 1]], 3)
    assert A.intersection(B) == Subspace.from_generators([[0, 1, 0]], 3)
    assert A.embed(4).ambient_dim == 4 and A.embed(4).contains([1, 1, 0, 0])


def test_coordinates():
    S = Subspace.from_generators([[1, 1, 0], [0, 1, 1]], 3)
    v = [2, 5, 3]
    c = S.coordinates(v)
    assert [sum(ci * row[j] for ci, row in zip(c, S.vectors)) for j in range(3)] == v


matrices = st.integers(1, 5).flatmap(
    lambda c: st.lists(
        st.lists(st.fractions(min_value=-4, max_value=4, max_denominator=3), min_size=c, max_size=c),
        min_size=1,
        max_size=5,
    )
)


@given(matrices)
def test_rank_transpose(rows):
    A = M(rows)
    assert rank(A) == rank(A.T)


@given(matrices)
def test_rank_nullity(rows):
    A = M(rows)
    assert nullspace(A).dim + rank(A) == A.ncols


@given(matrices)
def test_orthocomplement_involution_and_sum(rows):
    A = M(rows)
    S = Subspace.from_generators(A.rows, A.ncols)
    assert S.orthocomplement().orthocomplement() == S
    assert S + S.orthocomplement() == Subspace.full(A.ncols)


@given(matrices, st.randoms(use_true_random=False))
def test_canonical_under_shuffle(rows, rnd):
    A = M(rows)
    S1 = Subspace.from_generators(A.rows, A.ncols)
    shuffled = list(A.rows)
    rnd.shuffle(shuffled)
    scaled = [[x * (i + 2) for x in r] for i, r in enumerate(shuffled)]
    assert Subspace.from_generators(scaled, A.ncols).basis == S1.basis


@settings(max_examples=100)
@given(matrices)
def test_rref_matches_sympy(rows):
    A = M(rows)
    R, r, piv = rref(A)
    sym, spiv = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in row] for row in rows]).rref()
    assert list(spiv) == piv and r == len(spiv)
    for i in range(r):
        assert [F(int(sympy.fraction(v)[0]), int(sympy.fraction(v)[1])) for v in sym.row(i)] == list(R.rows[i])


def test_nullspace_matches_sympy_on_large_entries():
    rng = random.Random(7)
    for _ in range(20):
        rows = [[F(rng.randint(-10**12, 10**12), rng.randint(1, 10**6)) for _ in range(6)] for _ in range(4)]
        ns = nullspace(M(rows))
        sym = sympy.Matrix([[sympy.Rational(x.numerator, x.denominator) for x in r] for r in rows]).nullspace()
        assert ns.dim == len(sym)
        for v in sym:
            assert ns.contains([F(int(sympy.fraction(x)[0]), int(sympy.fraction(x)[1])) for x in v])

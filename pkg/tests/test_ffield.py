import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from funcomp.ffield import (
    DimensionMismatch,
    FieldError,
    Matrix,
    gf,
    invertible,
    multiply,
    rank,
    row_reduce,
    row_space_contains,
    solve,
)

from _oracles import brute_rank, span_size

SMALL_Q = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16]


@pytest.mark.property
@pytest.mark.parametrize("q", SMALL_Q)
def test_field_axioms_exhaustive(q):
    F = gf(q)
    els = range(q)
    for a in els:
        assert F.add(a, 0) == a and F.mul(a, 1) == a and F.mul(a, 0) == 0
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
        for b in els:
            assert F.add(a, b) == F.add(b, a)
            assert F.mul(a, b) == F.mul(b, a)
            for c in els:
                assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
                assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
                assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


@pytest.mark.parametrize("q", [1, 6, 10, 12, 257])
def test_rejects_non_prime_powers_and_large_q(q):
    with pytest.raises(FieldError):
        gf(q)


def test_gf4_and_gf256_structure():
    F4 = gf(4)
    # x^2 + x + 1: x * x = x + 1, encoded 2 * 2 = 3
    assert F4.mul(2, 2) == 3
    assert F4.add(2, 3) == 1
    F = gf(256)
    for a in range(1, 256):
        assert F.mul(a, F.inv(a)) == 1


def test_characteristic():
    for q, p in [(4, 2), (8, 2), (9, 3), (16, 2)]:
        F = gf(q)
        for a in range(q):
            acc = 0
            for _ in range(p):
                acc = F.add(acc, a)
            assert acc == 0


def test_field_elements():
    F = gf(5)
    a, b = F.element(3), F.element(4)
    assert (a + b).value == 2
    assert (a * b).value == 2
    assert (a / b * b) == a
    assert (-a).value == 2
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


def test_rank_examples():
    F2, F3 = gf(2), gf(3)
    assert rank(Matrix([[1, 0], [0, 1], [1, 1]], F2)) == 2
    assert rank(Matrix.zeros(3, 2, F2)) == 0
    assert rank(Matrix([[1, 0], [2, 0], [0, 1]], F3)) == 2


def test_row_space_examples():
    F2 = gf(2)
    assert row_space_contains(Matrix([[1, 0], [0, 1]], F2), [1, 1])
    assert not row_space_contains(Matrix([[1, 1]], F2), [1, 0])
    assert row_space_contains(Matrix([[1, 0], [1, 0]], F2), [0, 0])
    with pytest.raises(DimensionMismatch):
        row_space_contains(Matrix([[1, 1]], F2), [1, 0, 0])


def test_invertible_and_multiply():
    F2 = gf(2)
    assert invertible(Matrix.identity(2, F2))
    assert not invertible(Matrix([[1, 1], [1, 1]], F2))
    T1 = Matrix([[1, 0], [0, 1], [1, 1]], F2)
    assert multiply(T1, Matrix([[1, 0], [1, 1]], F2)).tolist() == [[1, 0], [1, 1], [0, 1]]
    with pytest.raises(DimensionMismatch):
        multiply(T1, T1)


def test_rref_shape():
    F3 = gf(3)
    M = Matrix([[0, 2, 1], [1, 1, 1], [1, 0, 0]], F3)
    R = row_reduce(M)
    assert R.shape == M.shape
    assert rank(R) == rank(M) == 3
    assert R.tolist() == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_solve():
    F3 = gf(3)
    A = Matrix([[1, 2], [0, 1]], F3)
    x = solve(A, [2, 1])
    assert multiply(A, Matrix([[v] for v in x], F3)).column(0) == (2, 1)
    assert solve(Matrix([[1, 1], [1, 1]], F3), [1, 2]) is None


@pytest.mark.property
@pytest.mark.parametrize("q", [2, 3])
def test_row_space_contains_matches_span_enumeration(q):
    F = gf(q)
    for nrows in (1, 2, 3):
        for rows in itertools.product(itertools.product(range(q), repeat=3), repeat=nrows):
            M = Matrix(rows, F)
            span = set()
            for coeffs in itertools.product(range(q), repeat=nrows):
                v = [0, 0, 0]
                for c, r in zip(coeffs, rows):
                    v = [F.add(x, F.mul(c, y)) for x, y in zip(v, r)]
                span.add(tuple(v))
            for v in itertools.product(range(q), repeat=3):
                assert row_space_contains(M, v) == (v in span)
            assert q ** rank(M) == len(span)


matrices = st.builds(
    lambda q, r, c, data: (q, [[data.draw(st.integers(0, q - 1)) for _ in range(c)] for _ in range(r)]),
    st.sampled_from([2, 3, 4, 5]),
    st.integers(1, 4),
    st.integers(1, 4),
    st.data(),
)


@pytest.mark.property
@settings(max_examples=150, deadline=None)
@given(matrices)
def test_rank_matches_brute_force(qm):
    q, rows = qm
    F = gf(q)
    M = Matrix(rows, F)
    assert rank(M) == brute_rank(rows, F)
    assert rank(row_reduce(M)) == rank(M)


@pytest.mark.property
def test_rank_invariant_under_invertible_columns():
    rng = random.Random(7)
    for q in (2, 3):
        F = gf(q)
        done = 0
        while done < 40:
            Q = Matrix([[rng.randrange(q) for _ in range(3)] for _ in range(3)], F)
            if not invertible(Q):
                continue
            A = Matrix([[rng.randrange(q) for _ in range(3)] for _ in range(rng.randint(1, 4))], F)
            assert rank(multiply(A, Q)) == rank(A)
            done += 1


def test_span_size_oracle_sanity():
    assert span_size([(1, 1)], gf(2)) == 2
    assert span_size([(1, 0), (0, 1)], gf(3)) == 9

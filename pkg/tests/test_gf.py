import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from cartbatch.errors import FieldError
from cartbatch.gf import GF, Matrix, field_new, field_of_order, primitive_polynomial, rank_and_solve

from oracles import NaiveField, rank_by_minors

PRIME_POWERS_TO_64 = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29, 31, 32, 37, 41, 43, 47, 49,
                      53, 59, 61, 64]


def test_identity_laws_f3():
    F = field_new(3, 1)
    for x in F.elements:
        assert F.add(0, x) == x
        assert F.mul(1, x) == x


def test_characteristic_two_f4():
    F = field_new(2, 2)
    assert F.q == 4
    assert all(F.add(x, x) == 0 for x in F.elements)


def test_inverse_of_two_in_f5():
    F = field_new(5, 1)
    # exhaustive multiplication table: the unique y with 2*y == 1
    table = {(a, b): (a * b) % 5 for a in range(5) for b in range(5)}
    expected = next(b for b in range(5) if table[(2, b)] == 1)
    assert expected == 3
    assert F.mul(2, 3) == 1
    assert F.inv(2) == expected


@pytest.mark.parametrize("p,k", [(4, 1), (1, 1), (6, 2), (2, 0)])
def test_rejects_bad_parameters(p, k):
    with pytest.raises(FieldError):
        field_new(p, k)


def test_ceiling():
    with pytest.raises(FieldError):
        field_new(2, 17)
    with pytest.raises(FieldError):
        field_new(3, 3, ceiling=26)
    assert field_new(2, 16).q == 65536


@pytest.mark.parametrize("q", PRIME_POWERS_TO_64)
def test_field_axioms_exhaustive(q):
    F = field_of_order(q)
    E = range(q)
    add, mul = F._add_table, F._mul_table
    for a in E:
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
        for b in E:
            assert add[a][b] == add[b][a]
            assert mul[a][b] == mul[b][a]
            ab, mab = add[a][b], mul[a][b]
            for c in E:
                assert add[ab][c] == add[a][add[b][c]]
                assert mul[mab][c] == mul[a][mul[b][c]]
                assert mul[a][add[b][c]] == add[mab][mul[a][c]]


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3), (2, 6), (7, 2)])
def test_extension_arithmetic_matches_schoolbook(p, k):
    F = GF(p, k)
    ref = NaiveField(p, k, F.modulus)
    for a in range(F.q):
        for b in range(F.q):
            assert F.add(a, b) == ref.add(a, b)
            assert F.mul(a, b) == ref.mul(a, b)


@pytest.mark.parametrize("p,k", [(2, 2), (3, 2), (2, 5), (5, 3)])
def test_residue_of_x_is_primitive(p, k):
    F = GF(p, k)
    seen, v = set(), 1
    for _ in range(F.q - 1):
        seen.add(v)
        v = F.mul(v, p)  # p encodes the polynomial x
    assert v == 1 and len(seen) == F.q - 1


def test_defining_polynomials_are_fixed():
    assert primitive_polynomial(2, 2) == (1, 1, 1)
    assert primitive_polynomial(2, 3) == (1, 1, 0, 1)
    assert GF(3, 2).modulus == GF(3, 2).modulus
    assert GF(3, 2) == GF(3, 2) and hash(GF(3, 2)) == hash(GF(3, 2))


def test_large_field_spot_check():
    F = GF(2, 16)
    rng = random.Random(7)
    ref = NaiveField(2, 16, F.modulus)
    for _ in range(200):
        a, b, c = (rng.randrange(F.q) for _ in range(3))
        assert F.mul(a, b) == ref.mul(a, b)
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        if a:
            assert F.mul(a, F.inv(a)) == 1


def test_pow():
    F = GF(7)
    for a in range(1, 7):
        assert F.pow(a, 6) == 1
        assert F.pow(a, -1) == F.inv(a)
    assert F.pow(0, 0) == 1 and F.pow(0, 3) == 0


# linear algebra


def test_rank_examples():
    F = GF(3)
    assert Matrix.identity(F, 3).rank() == 3
    assert Matrix.zeros(F, 2, 2).rank() == 0
    assert Matrix(F, [(1, 1, 1), (2, 2, 2)]).rank() == 1


def test_rref_shape():
    F = GF(5)
    m = Matrix(F, [(0, 2, 4, 1), (1, 1, 0, 3), (1, 3, 4, 4)])
    red = rank_and_solve(m)
    assert red.rank == len(red.pivots) == 2
    for r, c in zip(red.rref.entries, red.pivots):
        assert r[c] == 1
        assert all(r[j] == 0 for j in range(c))
        assert all(other[c] == 0 for other in red.rref.entries if other is not r)
    assert list(red.pivots) == sorted(red.pivots)


def test_solve_consistent_and_inconsistent():
    F = GF(5)
    m = Matrix(F, [(1, 2), (3, 4)])
    red = rank_and_solve(m, [1, 2])
    x = red.solution
    assert red.consistent
    assert [F.dot(row, x) for row in m.entries] == [1, 2]
    sing = Matrix(F, [(1, 2), (2, 4)])
    bad = rank_and_solve(sing, [1, 0])
    assert not bad.consistent and bad.solution is None and bad.rank == 1


small_fields = st.sampled_from([(3, 1), (2, 2), (5, 1)])


@st.composite
def matrices(draw):
    p, k = draw(small_fields)
    F = GF(p, k)
    r = draw(st.integers(1, 4))
    c = draw(st.integers(1, 4))
    rows = draw(st.lists(st.lists(st.integers(0, F.q - 1), min_size=c, max_size=c), min_size=r, max_size=r))
    # bias toward rank deficiency by repeating scaled rows
    if draw(st.booleans()) and r > 1:
        s = draw(st.integers(1, F.q - 1))
        rows[-1] = [F.mul(s, x) for x in rows[0]]
    return Matrix(F, rows)


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rank_matches_minor_oracle_and_transpose(m):
    F = m.field
    ref = NaiveField(F.p, F.k, F.modulus)
    expected = rank_by_minors(ref, [list(r) for r in m.entries])
    assert m.rank() == expected
    assert m.transpose().rank() == expected


@settings(max_examples=100, deadline=None)
@given(matrices(), st.data())
def test_solution_satisfies_system(m, data):
    F = m.field
    x = data.draw(st.lists(st.integers(0, F.q - 1), min_size=m.ncols, max_size=m.ncols))
    rhs = [F.dot(row, x) for row in m.entries]
    red = rank_and_solve(m, rhs)
    assert red.consistent
    assert [F.dot(row, red.solution) for row in m.entries] == rhs


def test_matrix_rejects_ragged():
    with pytest.raises(ValueError):
        Matrix(GF(3), [(1, 2), (1,)])
    with pytest.raises(ValueError):
        Matrix(GF(3), [(1, 5)])


def test_field_pickles():
    import pickle

    F = GF(3, 2)
    G = pickle.loads(pickle.dumps(F))
    assert G == F and all(G.mul(a, b) == F.mul(a, b) for a, b in itertools.product(range(9), repeat=2))

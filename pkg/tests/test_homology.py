"""Exact linear algebra and cohomology tests.

The rank oracle here is a plain Gaussian elimination over Fraction written
independently of the package's Bareiss routine, so the two can disagree only
if one of them is wrong.
"""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from linfty.graded import InputError, MathCheckError
from linfty.homology import (
    ChainComplex,
    Matrix,
    check_chain_map,
    induced_map,
    is_isomorphism,
    nullspace,
    rank,
    rref,
    solve,
    solve_matrix,
)


def rank_oracle(rows, ncols):
    """Independent rank: naive Gaussian elimination over Fraction."""
    rows = [[Fraction(x) for x in r] for r in rows]
    rk = 0
    for col in range(ncols):
        piv = next((i for i in range(rk, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[rk], rows[piv] = rows[piv], rows[rk]
        inv = Fraction(1) / rows[rk][col]
        rows[rk] = [x * inv for x in rows[rk]]
        for i in range(len(rows)):
            if i != rk and rows[i][col] != 0:
                c = rows[i][col]
                rows[i] = [a - c * b for a, b in zip(rows[i], rows[rk])]
        rk += 1
    return rk


small_fraction = st.fractions(min_value=-4, max_value=4, max_denominator=4)


def matrices(max_dim=4):
    return st.integers(0, max_dim).flatmap(
        lambda n: st.integers(0, max_dim).flatmap(
            lambda m: st.lists(
                st.lists(small_fraction, min_size=m, max_size=m),
                min_size=n, max_size=n,
            ).map(lambda rows: Matrix(n, m, rows))))


# -- matrix basics -------------------------------------------------------------

def test_matrix_shape_checks():
    with pytest.raises(InputError):
        Matrix(2, 2, [[1, 2]])
    with pytest.raises(InputError):
        Matrix.from_rows([], )
    assert Matrix.from_rows([], ncols=3).ncols == 3
    a = Matrix(0, 2)
    b = Matrix(2, 3)
    assert (a * b).ncols == 3 and (a * b).nrows == 0


def test_matrix_identity_and_apply():
    i3 = Matrix.identity(3)
    assert i3.apply((Fraction(1), Fraction(2), Fraction(3))) == \
        (Fraction(1), Fraction(2), Fraction(3))
    m = Matrix(2, 2, [[0, 1], [1, 0]])
    assert m * m == Matrix.identity(2)


@settings(max_examples=50, deadline=None)
@given(matrices())
def test_rank_matches_gaussian_oracle(m):
    assert rank(m) == rank_oracle([list(r) for r in m.rows], m.ncols)


@settings(max_examples=50, deadline=None)
@given(matrices())
def test_rank_transpose_invariant(m):
    assert rank(m) == rank(m.transpose())


@settings(max_examples=50, deadline=None)
@given(matrices())
def test_rank_nullity(m):
    assert rank(m) + len(nullspace(m)) == m.ncols


@settings(max_examples=50, deadline=None)
@given(matrices())
def test_nullspace_vectors_are_killed(m):
    for v in nullspace(m):
        assert all(x == 0 for x in m.apply(v))


@settings(max_examples=50, deadline=None)
@given(matrices(), st.data())
def test_solve_recovers_consistent_systems(m, data):
    x = tuple(data.draw(small_fraction) for _ in range(m.ncols))
    b = m.apply(x)
    s = solve(m, b)
    assert s is not None
    assert m.apply(s) == b


def test_solve_detects_inconsistency():
    m = Matrix(2, 1, [[1], [1]])
    assert solve(m, (Fraction(1), Fraction(2))) is None


def test_solve_matrix_round_trip():
    a = Matrix(2, 2, [[1, 1], [0, 1]])
    b = Matrix(2, 2, [[3, 0], [1, 1]])
    x = solve_matrix(a, b)
    assert a * x == b


def test_rref_is_idempotent_and_pivots_sorted():
    m = Matrix(3, 3, [[2, 4, 0], [1, 2, 1], [0, 0, 3]])
    red, pivots = rref(m)
    red2, pivots2 = rref(red)
    assert red == red2 and pivots == pivots2
    assert list(pivots) == sorted(pivots)


# -- complexes -----------------------------------------------------------------

def test_zero_differential_betti_equals_dims():
    c = ChainComplex({0: 2, 1: 3}, {})
    assert c.betti() == {0: 2, 1: 3}


def test_two_term_acyclic_complex():
    # one generator in each of two adjacent degrees, d an isomorphism
    c = ChainComplex({0: 1, 1: 1}, {0: [[1]]})
    assert c.betti() == {0: 0, 1: 0}
    assert c.is_exact()


def test_two_chart_difference_complex():
    # constants on a two-chart cover: 0 -> k^2 -> k -> 0, d = difference
    c = ChainComplex({0: 2, 1: 1}, {0: [[1, -1]]})
    assert c.betti() == {0: 1, 1: 0}
    betti0, reps = c.cohomology(0)
    assert betti0 == 1
    assert reps == [(Fraction(1), Fraction(1))]


def test_complex_rejects_nonsquare_zero():
    with pytest.raises(MathCheckError):
        ChainComplex({0: 1, 1: 1, 2: 1}, {0: [[1]], 1: [[1]]})


def test_complex_shape_validation():
    with pytest.raises(InputError):
        ChainComplex({0: 2, 1: 1}, {0: [[1]]})


def test_zero_dimensional_degrees_are_fine():
    c = ChainComplex({0: 0, 1: 2}, {})
    assert c.betti() == {0: 0, 1: 2}
    assert c.dim(5) == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3), st.data())
def test_three_term_complex_betti(n0, n1, n2, data):
    """Build d1 from the left kernel of d0 so d1 d0 = 0 by construction."""
    d0 = Matrix(n1, n0, [[data.draw(small_fraction) for _ in range(n0)]
                         for _ in range(n1)])
    left_kernel = nullspace(d0.transpose())
    d1_rows = []
    for _ in range(n2):
        coeffs = [data.draw(small_fraction) for _ in left_kernel]
        row = [Fraction(0)] * n1
        for c, v in zip(coeffs, left_kernel):
            row = [a + c * b for a, b in zip(row, v)]
        d1_rows.append(row)
    d1 = Matrix(n2, n1, d1_rows)
    c = ChainComplex({0: n0, 1: n1, 2: n2}, {0: d0, 1: d1})
    assert c.cohomology(0)[0] == len(nullspace(d0))
    assert c.cohomology(1)[0] == len(nullspace(d1)) - rank(d0)
    assert c.cohomology(2)[0] == n2 - rank(d1)


def test_representatives_are_cycles_off_boundaries():
    # d0 has image spanned by (1,1,0); cycles of d1 are everything
    c = ChainComplex({0: 1, 1: 3}, {0: [[1], [1], [0]]})
    betti, reps = c.cohomology(1)
    assert betti == 2
    red, pivots = rref(Matrix.from_rows([(1, 1, 0)], ncols=3))
    for rep in reps:
        # reduced against the boundary span: pivot coordinate vanishes
        assert rep[pivots[0]] == 0


# -- chain maps ----------------------------------------------------------------

def test_check_chain_map_accepts_identity_rejects_noncommuting():
    c = ChainComplex({0: 1, 1: 1}, {0: [[1]]})
    check_chain_map(c, c, {0: Matrix.identity(1), 1: Matrix.identity(1)})
    d = ChainComplex({0: 1, 1: 1}, {})
    with pytest.raises(MathCheckError):
        check_chain_map(c, d, {0: Matrix.identity(1), 1: Matrix.identity(1)})


def test_induced_identity_is_identity():
    c = ChainComplex({0: 2, 1: 1}, {0: [[1, -1]]})
    maps = {0: Matrix.identity(2), 1: Matrix.identity(1)}
    check_chain_map(c, c, maps)
    m0 = induced_map(c, c, maps, 0)
    assert m0 == Matrix.identity(1)
    assert is_isomorphism(m0)
    m1 = induced_map(c, c, maps, 1)
    assert m1 == Matrix(0, 0)
    assert is_isomorphism(m1)


def test_induced_map_from_acyclic_source_is_empty():
    # the acyclic two-term complex has no degree-1 classes to map
    src = ChainComplex({0: 1, 1: 1}, {0: [[1]]})
    dst = ChainComplex({0: 1, 1: 1}, {})
    maps = {0: Matrix.identity(1), 1: Matrix(1, 1, [[0]])}
    check_chain_map(src, dst, maps)
    m1 = induced_map(src, dst, maps, 1)
    assert m1 == Matrix(1, 0)


def test_induced_map_scaling():
    c = ChainComplex({0: 2, 1: 1}, {0: [[1, -1]]})
    maps = {0: Matrix.identity(2).scale(3), 1: Matrix.identity(1).scale(3)}
    check_chain_map(c, c, maps)
    assert induced_map(c, c, maps, 0) == Matrix(1, 1, [[3]])


def test_induced_map_composes():
    c = ChainComplex({0: 2, 1: 1}, {0: [[1, -1]]})
    # d f0 = [3-1, -1-1] = [2, -2] = f1 d, so this commutes
    f = {0: Matrix(2, 2, [[3, -1], [1, 1]]), 1: Matrix(1, 1, [[2]])}
    check_chain_map(c, c, f)
    ff = {k: f[k] * f[k] for k in f}
    check_chain_map(c, c, ff)
    assert induced_map(c, c, ff, 0) == \
        induced_map(c, c, f, 0) * induced_map(c, c, f, 0)


def test_is_isomorphism_rejects_nonsquare_and_singular():
    assert not is_isomorphism(Matrix(1, 2, [[1, 0]]))
    assert not is_isomorphism(Matrix(2, 2, [[1, 1], [1, 1]]))
    assert is_isomorphism(Matrix(2, 2, [[1, 1], [0, 1]]))
    assert is_isomorphism(Matrix(0, 0))

import pytest
import sympy
from hypothesis import given, settings, strategies as st
from sympy.matrices.normalforms import invariant_factors

from iwagraph.exact.cyclotomic import CyclotomicElem
from iwagraph.exact.det import det_bareiss_int, det_cofactor, det_fraction_free, det_minor_expansion
from iwagraph.exact.laurent import LaurentPoly
from iwagraph.exact.snf import (
    SparseIntMatrix,
    det_sparse,
    snf_divisors,
    snf_divisors_mod_pk,
    snf_p_valuations,
)


def int_matrices(min_n=1, max_n=6, square=True, values=(-4, 4)):
    @st.composite
    def strat(draw):
        m = draw(st.integers(min_n, max_n))
        n = m if square else draw(st.integers(min_n, max_n))
        return [[draw(st.integers(*values)) for _ in range(n)] for _ in range(m)]

    return strat()


def sympy_factors(M):
    m, n = len(M), len(M[0])
    ref = [abs(int(x)) for x in invariant_factors(sympy.Matrix(M), domain=sympy.ZZ)]
    return ref + [0] * (min(m, n) - len(ref))


def vp(x, p):
    v = 0
    while x % p == 0:
        x //= p
        v += 1
    return v


def test_small_examples():
    assert snf_divisors([[2, -1], [-1, 2]]).divisors == (1, 3)
    assert snf_divisors([[0, 0], [0, 0]]).divisors == (0, 0)
    assert snf_divisors([[2, 0], [0, 4]]).divisors == (2, 4)
    assert snf_divisors_mod_pk([[2, -1], [-1, 2]], 3, 5).valuations == (0, 1)
    assert snf_divisors_mod_pk([[2, -1], [-1, 2]], 2, 5).valuations == (0, 0)
    assert snf_divisors_mod_pk([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 7, 3).valuations == (0, 0, 0)
    assert det_fraction_free([[2, -1], [-1, 2]]) == 3


def test_one_by_one_laurent():
    f = LaurentPoly(1, {(-1,): 3, (2,): -1})
    assert det_fraction_free([[f]]) == f


def test_cyclotomic_matrix():
    z = CyclotomicElem.root(2, 1)
    M = [[2, -z, -1], [-(z ** -1), 2, -1], [-1, -1, 2]]
    one = CyclotomicElem.from_int(2, 1, 1)
    M = [[x * one for x in row] for row in M]
    assert det_fraction_free(M) == 4


def test_nonsquare_rejected():
    with pytest.raises(ValueError):
        det_bareiss_int([[1, 2]])


@given(int_matrices(max_n=6))
def test_bareiss_against_cofactor(M):
    assert det_bareiss_int(M) == det_cofactor(M, 0, 1)
    assert det_minor_expansion(M, 0, 1) == det_cofactor(M, 0, 1)
    assert det_sparse(M) == det_bareiss_int(M)


@given(st.integers(1, 4), st.data())
@settings(max_examples=40)
def test_laurent_det_against_sympy(n, data):
    x = sympy.symbols("x")
    M = [[LaurentPoly(1, {(data.draw(st.integers(-2, 2)),): data.draw(st.integers(-3, 3))})
          + data.draw(st.integers(-2, 2)) for _ in range(n)] for _ in range(n)]
    S = sympy.Matrix([[sum(c * x**e[0] for e, c in f.items()) for f in row] for row in M])
    got = det_fraction_free(M)
    want = sympy.expand(S.det())
    ours = sum((c * x**e[0] for e, c in got.items()), sympy.Integer(0))
    assert sympy.simplify(ours - want) == 0


@given(int_matrices(max_n=7, square=False, values=(-6, 6)))
@settings(max_examples=150)
def test_snf_against_sympy(M):
    assert list(snf_divisors(M).divisors) == sympy_factors(M)


@given(int_matrices(max_n=7, square=False, values=(-9, 9)))
def test_divisibility_chain(M):
    ds = snf_divisors(M).divisors
    for a, b in zip(ds, ds[1:]):
        if a == 0:
            assert b == 0
        else:
            assert b % a == 0


@given(int_matrices(min_n=2, max_n=7, square=True, values=(-9, 9)), st.sampled_from([2, 3, 5]))
def test_local_matches_exact(M, p):
    ed = snf_divisors(M)
    if 0 in ed.divisors:
        return
    want = sorted(vp(d, p) for d in ed.divisors)
    got = snf_p_valuations(M, p)
    assert not got.any_saturated
    assert sorted(got.valuations) == want


@given(int_matrices(min_n=2, max_n=6, values=(-3, 3)), st.sampled_from([2, 3]))
def test_sparse_input_same_answer(M, p):
    S = SparseIntMatrix.from_dense(M)
    assert S.to_dense() == M
    assert snf_divisors(S) == snf_divisors(M)


@given(int_matrices(min_n=2, max_n=6, values=(-5, 5)), st.sampled_from([2, 3]))
def test_det_product_of_divisors(M, p):
    ed = snf_divisors(M)
    prod = 1
    for d in ed.divisors:
        prod *= d
    assert prod == abs(det_bareiss_int(M))

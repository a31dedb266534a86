import pytest
from hypothesis import given, strategies as st

from iwagraph.exact.laurent import LaurentPoly
from iwagraph.exact.localprime import (
    prime_multiplicity_mod_p,
    primitive_directions,
    unimodular_completion,
)

S = LaurentPoly.T(0, 2)
T = LaurentPoly.T(1, 2)


def test_visible_factors():
    g = S * T * (2 + S + T)
    assert prime_multiplicity_mod_p(g, (1, 0), 5) == 1
    assert prime_multiplicity_mod_p(g, (0, 1), 5) == 1
    assert prime_multiplicity_mod_p(g, (1, 1), 5) == 0


def test_single_variable():
    assert prime_multiplicity_mod_p(T, (0, 1), 3) == 1
    assert prime_multiplicity_mod_p(T, (1, 0), 3) == 0


def test_diagonal_prime():
    g = S + T + S * T
    assert prime_multiplicity_mod_p(g, (1, 1), 5) == 1
    assert prime_multiplicity_mod_p(g**3, (1, 1), 5) == 3
    assert prime_multiplicity_mod_p(g, (1, 0), 5) == 0


def test_invalid_directions():
    with pytest.raises(ValueError):
        prime_multiplicity_mod_p(S, (2, 4), 3)
    with pytest.raises(ValueError):
        prime_multiplicity_mod_p(S, (5, 0), 5)
    with pytest.raises(ValueError):
        prime_multiplicity_mod_p(S, (0, -1), 5)


@given(st.integers(-30, 30), st.integers(-30, 30))
def test_completion_is_unimodular(a, b):
    from math import gcd

    if gcd(a, b) != 1:
        return
    (x, y), (z, w) = unimodular_completion(a, b)
    assert (x, y) == (a, b)
    assert x * w - y * z == 1


@given(st.integers(1, 6), st.sampled_from([2, 3, 5]))
def test_directions_are_canonical_and_distinct(bound, p):
    ds = primitive_directions(bound, p)
    assert len(set(ds)) == len(ds)
    assert all(b > 0 or (a, b) == (1, 0) for a, b in ds)
    assert not any((-a, -b) in ds for a, b in ds if (a, b) != (0, 0))


@given(st.integers(-4, 4), st.integers(1, 4), st.integers(1, 3), st.sampled_from([3, 5, 7]))
def test_power_of_line_prime(a, b, k, p):
    from math import gcd

    if gcd(a, b) != 1 or (a % p == 0 and b % p == 0):
        return
    prime = LaurentPoly.monomial((a, b)) - 1
    g = (prime**k * (1 + 2 * S + T)).canonicalize()
    assert prime_multiplicity_mod_p(g, (a, b), p) == k

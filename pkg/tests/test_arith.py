import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oddperfect.arith import jacobi, legendre, legendre_two, mod_pow, reciprocity_pair
from oddperfect.errors import DomainError
from oracles import brute_legendre, naive_pow, squares_mod, trial_factor, trial_primes

ODD_PRIMES_1E4 = trial_primes(10**4)[1:]


@pytest.mark.parametrize(
    "args, expected",
    [((2, 6, 13), 12), ((10, 14, 29), 28), ((7, 0, 2), 1), ((0, 0, 5), 1), ((0, 3, 5), 0)],
)
def test_mod_pow_examples(args, expected):
    assert mod_pow(*args) == expected == naive_pow(*args)


@given(st.integers(0, 10**6), st.integers(0, 300), st.integers(2, 10**4))
def test_mod_pow_matches_repeated_multiplication(b, e, m):
    assert mod_pow(b, e, m) == naive_pow(b, e, m)


@pytest.mark.parametrize("m", [1, 0, -7])
def test_mod_pow_rejects_small_modulus(m):
    with pytest.raises(DomainError):
        mod_pow(3, 2, m)


@pytest.mark.parametrize(
    "a, p, expected",
    [(5, 29, 1), (29, 29, 0), (7, 5, -1), (2, 13, -1), (13, 29, 1), (53, 29, 1), (3, 29, -1)],
)
def test_legendre_examples(a, p, expected):
    assert legendre(a, p) == expected == brute_legendre(a, p)


def test_legendre_reduces_numerator():
    assert legendre(-1, 13) == 1
    assert legendre(-1, 7) == -1
    assert legendre(5 + 29 * 10**30, 29) == 1


@pytest.mark.parametrize("p", [1, 2, 9, 15, 0, -3])
def test_legendre_needs_odd_prime(p):
    with pytest.raises(DomainError):
        legendre(3, p)


@given(st.sampled_from(ODD_PRIMES_1E4), st.integers(-(10**12), 10**12))
def test_legendre_zero_iff_divisible_and_squares_are_residues(p, a):
    assert (legendre(a, p) == 0) == (a % p == 0)
    if a % p:
        assert legendre(a * a, p) == 1


@given(st.sampled_from(ODD_PRIMES_1E4), st.integers(0, 10**9), st.integers(0, 10**9))
def test_legendre_multiplicative(p, a, b):
    assert legendre(a * b, p) == legendre(a, p) * legendre(b, p)


@given(st.sampled_from(ODD_PRIMES_1E4[:300]), st.integers(0, 10**9))
def test_euler_criterion_consistency(p, a):
    assert legendre(a, p) % p == naive_pow(a % p, (p - 1) // 2, p)


@pytest.mark.parametrize("q, expected", [(13, -1), (17, 1), (7, 1), (3, -1), (5, -1), (41, 1)])
def test_legendre_two_examples(q, expected):
    assert legendre_two(q) == expected
    assert expected == (1 if 2 in squares_mod(q) else -1)


def test_legendre_two_matches_legendre_below_1e5():
    for q in trial_primes(10**5)[1:]:
        assert legendre_two(q) == legendre(2, q), q


def test_legendre_two_rejects_two():
    with pytest.raises(DomainError):
        legendre_two(2)


@pytest.mark.parametrize("a, n, expected", [(1, 1, 1), (1, 15, 1), (2, 15, 1), (0, 1, 1), (5, 15, 0)])
def test_jacobi_examples(a, n, expected):
    assert jacobi(a, n) == expected


def test_jacobi_two_fifteen_is_product_of_legendre():
    assert brute_legendre(2, 3) * brute_legendre(2, 5) == jacobi(2, 15) == 1


@pytest.mark.parametrize("n", [0, -3, 4, 10])
def test_jacobi_domain(n):
    with pytest.raises(DomainError):
        jacobi(1, n)


def test_jacobi_equals_legendre_for_primes_below_1000():
    for p in trial_primes(1000)[1:]:
        for a in range(p):
            assert jacobi(a, p) == legendre(a, p)


def _jacobi_from_legendre(a, n):
    v = 1
    for p, e in trial_factor(n).items():
        v *= brute_legendre(a, p) ** e
    return v


def test_jacobi_matches_legendre_product_exhaustive_small():
    for n in range(1, 600, 2):
        for a in range(n):
            assert jacobi(a, n) == _jacobi_from_legendre(a, n), (a, n)


@pytest.mark.slow
def test_jacobi_matches_legendre_product_all_odd_n_below_1e4(legendre_tables):
    # Full domain from the contract: every odd n < 10^4 and every a in [0, n).
    import numpy as np

    for n in range(1, 10**4, 2):
        expected = np.ones(n, dtype=np.int64)
        a = np.arange(n)
        for p, e in trial_factor(n).items():
            expected *= legendre_tables.tables[p][a % p].astype(np.int64) ** e
        got = [jacobi(x, n) for x in range(n)]
        assert got == expected.tolist(), n


@given(st.integers(-(10**15), 10**15), st.integers(0, 5 * 10**3).map(lambda k: 2 * k + 1))
def test_jacobi_random_against_legendre_product(a, n):
    assert jacobi(a, n) == _jacobi_from_legendre(a, n)


@pytest.mark.parametrize(
    "p1, p2, expected", [(3, 7, (1, -1)), (5, 13, (-1, -1)), (3, 11, (-1, 1))]
)
def test_reciprocity_pair_examples(p1, p2, expected):
    assert reciprocity_pair(p1, p2) == expected
    assert expected == (brute_legendre(p2, p1), brute_legendre(p1, p2))


def test_reciprocity_pair_same_prime():
    with pytest.raises(DomainError):
        reciprocity_pair(7, 7)


def test_reciprocity_law_below_2000():
    primes = trial_primes(2000)[1:]
    for i, p in enumerate(primes):
        for q in primes[i + 1 :]:
            sign = -1 if (p - 1) // 2 * ((q - 1) // 2) % 2 else 1
            assert legendre(p, q) * legendre(q, p) == sign
            a, b = reciprocity_pair(p, q)
            assert (a == -b) == (p % 4 == 3 and q % 4 == 3)


def test_symbols_on_large_moduli_agree():
    rng = random.Random(5)
    p = 2**127 - 1
    for _ in range(50):
        a = rng.randrange(p)
        assert legendre(a, p) == jacobi(a, p)

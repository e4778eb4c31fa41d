import pytest
import sympy
from hypothesis import given, strategies as st

from nilmult.arith import binomial, divisors, gen_binomial, lemma24_check, mobius, primes_up_to


@pytest.mark.parametrize("m, expected", [(1, 1), (12, 0), (6, 1), (2, -1), (30, -1), (49, 0)])
def test_mobius_examples(m, expected):
    assert mobius(m) == expected


def test_mobius_zero_rejected():
    with pytest.raises(ValueError):
        mobius(0)


def test_mobius_matches_sympy():
    for m in range(1, 3000):
        assert mobius(m) == sympy.mobius(m), m


def test_mobius_divisor_sum():
    for n in range(1, 10**4 + 1):
        assert sum(mobius(d) for d in divisors(n)) == (1 if n == 1 else 0)


@pytest.mark.parametrize("n, k, expected", [(5, 2, 10), (7, 1, 7), (4, 0, 1), (3, 5, 0)])
def test_binomial_examples(n, k, expected):
    assert binomial(n, k) == expected


def test_pascal_rule():
    for n in range(1, 65):
        for k in range(1, 65):
            assert binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k)


@given(st.integers(-30, 30), st.integers(0, 8))
def test_gen_binomial_is_falling_factorial_over_factorial(a, k):
    num = 1
    for i in range(k):
        num *= a - i
    assert gen_binomial(a, k) * sympy.factorial(k) == num
    if a >= 0:
        assert gen_binomial(a, k) == binomial(a, k)


@pytest.mark.parametrize("n, expected", [(0, []), (1, []), (2, [2]), (10, [2, 3, 5, 7])])
def test_primes_up_to(n, expected):
    assert primes_up_to(n) == expected


def test_primes_match_sympy():
    assert primes_up_to(1000) == list(sympy.primerange(2, 1001))


def test_binomial_divisibility_examples():
    assert lemma24_check(2, 5) is True
    assert binomial(5, 2) == 10
    assert lemma24_check(1, 7) is True
    assert lemma24_check(2, 4) is False


def test_binomial_divisibility_domain():
    with pytest.raises(ValueError):
        lemma24_check(5, 5)
    with pytest.raises(ValueError):
        lemma24_check(0, 5)


def test_binomial_divisibility_exhaustive_to_200():
    held = 0
    for r in range(2, 201):
        for w in range(1, r):
            if lemma24_check(w, r):
                assert binomial(r, w) % r == 0
                held += 1
    assert held > 0

import pytest
from hypothesis import given, strategies as st

from nilmult.hall import generate
from nilmult.witt import WittTable, chi, chi_iterate, chi_with_letter


def enumerated(n, d):
    if d == 0:
        return 0
    return len(generate(d, n, n))


@pytest.mark.parametrize("n, d, expected", [(1, 5, 5), (6, 2, 9), (3, 2, 2), (4, 3, 18), (4, 2, 3)])
def test_chi_examples(n, d, expected):
    assert chi(n, d) == expected
    assert enumerated(n, d) == expected


def test_chi_against_enumeration():
    for d in range(0, 4):
        for n in range(1, 9):
            assert chi(n, d) == enumerated(n, d), (n, d)
    for n in range(1, 6):
        assert chi(n, 4) == enumerated(n, 4)


def test_chi_zero_weight_rejected():
    with pytest.raises(ValueError):
        chi(0, 3)


def test_chi_edges():
    for n in range(1, 20):
        assert chi(n, 0) == 0
    for n in range(2, 20):
        assert chi(n, 1) == 0


@pytest.mark.parametrize("n, d, expected", [(1, 3, 1), (3, 2, 2), (4, 3, 15)])
def test_chi_with_letter(n, d, expected):
    assert chi_with_letter(n, d) == expected


@given(st.integers(1, 12), st.integers(1, 30))
def test_chi_with_letter_telescopes(n, d):
    assert sum(chi_with_letter(n, e) for e in range(1, d + 1)) == chi(n, d)


def test_chi_with_letter_counts_commutators_involving_last_letter():
    for d in range(1, 4):
        basis = generate(d, 1, 6)
        for n in range(1, 7):
            count = sum(1 for b in basis.of_weight(n) if d in b.letters_present)
            assert count == chi_with_letter(n, d)


@pytest.mark.parametrize("seed, classes, expected", [(5, [], 5), (5, [1], 10), (5, [1, 1], 45)])
def test_chi_iterate(seed, classes, expected):
    assert chi_iterate(seed, classes) == expected


def test_table_bounds_cache_growth():
    table = WittTable(max_weight=3, max_letters=2)
    assert table.chi(6, 2) == 9
    assert table.chi(2, 2) == 1
    assert len(table) == 1


@given(st.integers(1, 40), st.integers(0, 50))
def test_witt_sum_is_exact(n, d):
    # necklace identity: sum over divisors of n of m * chi(m, d) equals d^n
    total = sum(m * chi(m, d) for m in range(1, n + 1) if n % m == 0)
    assert total == d**n

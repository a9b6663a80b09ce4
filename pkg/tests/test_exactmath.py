from fractions import Fraction

import pytest

from codebounds.exactmath import (
    binomial,
    gaussian_binomial,
    hahn,
    krawtchouk,
    krawtchouk_character_check,
    level_kernel_table,
)


def test_binomial_values():
    assert binomial(5, 2) == 10
    assert binomial(0, 0) == 1
    assert binomial(7, 0) == 1
    assert binomial(7, 7) == 1
    assert binomial(5, 6) == 0
    assert binomial(5, -1) == 0
    assert isinstance(binomial(6, 3), Fraction)


def test_binomial_pascal():
    for n in range(1, 12):
        for k in range(n + 1):
            assert binomial(n, k) == binomial(n - 1, k - 1) + binomial(n - 1, k)


def test_gaussian_binomial_values():
    assert gaussian_binomial(4, 2, 2) == 35
    assert gaussian_binomial(3, 1, 2) == 7
    assert gaussian_binomial(3, 2, 3) == 13
    assert gaussian_binomial(2, 1, 4) == 5
    # q = 1 degenerates to the ordinary binomial
    for n in range(8):
        for k in range(n + 1):
            assert gaussian_binomial(n, k, 1) == binomial(n, k)


def test_gaussian_binomial_symmetry():
    for n in range(1, 9):
        for k in range(n + 1):
            assert gaussian_binomial(n, k, 2) == gaussian_binomial(n, n - k, 2)


def test_krawtchouk_basic():
    n = 7
    for t in range(n + 1):
        assert krawtchouk(n, 0, t) == 1
    for k in range(n + 1):
        assert krawtchouk(n, k, 0) == binomial(n, k)
    # row sums: sum_k K_k(t) = 2^n [t == 0]
    for t in range(n + 1):
        total = sum(krawtchouk(n, k, t) for k in range(n + 1))
        assert total == (2 ** n if t == 0 else 0)


def test_krawtchouk_orthogonality():
    n = 6
    for j in range(n + 1):
        for k in range(n + 1):
            s = sum(binomial(n, t) * krawtchouk(n, j, t) * krawtchouk(n, k, t)
                    for t in range(n + 1))
            assert s == (2 ** n * binomial(n, k) if j == k else 0)


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_krawtchouk_matches_characters(n):
    assert krawtchouk_character_check(n)


def test_hahn_normalization():
    # Q_0 is identically one; every Q_k is one at t = 0
    for q in (1, 2, 3):
        for t in range(3):
            assert hahn(q, 5, 2, 3, 0, t) == 1
        for k in range(3):
            assert hahn(q, 6, 3, 3, k, 0) == 1


def test_level_kernel_table_shapes():
    tab = level_kernel_table(4, 2)
    assert set(tab.keys()) == {0, 1, 2}
    for k, blocks in tab.items():
        for (p, q), by_c in blocks.items():
            assert k <= p <= 4 - k and k <= q <= 4 - k
            assert all(isinstance(v, Fraction) for v in by_c.values())

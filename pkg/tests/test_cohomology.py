from fractions import Fraction

import numpy as np
import pytest

from singergq.errors import DivisionByZero, SystemTooLarge
from singergq.singer import fiber_bound, h2_bruteforce, h2_oracle_order, h2_order_paper, schur_multiplier_order
from singergq.singer.cohomology import rank_mod_p


@pytest.mark.parametrize("p", [2, 3, 5])
def test_cyclic_case(p):
    # H^2(C_p, F_p) = F_p: the extensions C_p^2 and C_(p^2)
    assert h2_bruteforce(p, 1) == p


@pytest.mark.parametrize("p,n", [(2, 1), (3, 1), (5, 1), (2, 2), (3, 2)])
def test_bruteforce_matches_universal_coefficients(p, n):
    # dim H^2(C_p^n, F_p) = n(n+1)/2, times n coordinates of the coefficients
    assert h2_bruteforce(p, n) == h2_oracle_order(p, n) == p ** (n * n * (n + 1) // 2)


def test_closed_form_differs_from_oracle():
    assert [h2_order_paper(p, n) for p, n in [(2, 1), (2, 2), (3, 2)]] == [1, 16, 81]
    assert h2_bruteforce(2, 2) == 64


def test_schur_multiplier():
    assert schur_multiplier_order(2, 9) == 2**36
    assert schur_multiplier_order(3, 3) == 27
    assert schur_multiplier_order(5, 1) == 1


def test_fiber_bound():
    assert fiber_bound(3, 2) == Fraction(9, 10)
    with pytest.raises(DivisionByZero):
        fiber_bound(3, 1)


def test_system_guard():
    with pytest.raises(SystemTooLarge):
        h2_bruteforce(2, 5)


def test_rank_mod_p():
    M = np.array([[1, 2, 3], [2, 4, 6], [1, 0, 1]])
    assert rank_mod_p(M, 5) == 2
    assert rank_mod_p(M, 2) == 1
    assert rank_mod_p(np.eye(4, dtype=int), 3) == 4

from fractions import Fraction

import pytest

from zonocover.lp import Infeasible, Unbounded, linprog


def test_textbook_max():
    val, x = linprog([-1, -1], A_ub=[[1, 2], [3, 1]], b_ub=[4, 6])
    assert val == Fraction(-14, 5)
    assert x == (Fraction(8, 5), Fraction(6, 5))


def test_equality_constraints():
    val, x = linprog([1, 2], A_eq=[[1, 1]], b_eq=[3])
    assert val == 3 and x == (3, 0)


def test_infeasible_and_unbounded():
    with pytest.raises(Infeasible):
        linprog([1], A_eq=[[1]], b_eq=[-1])
    with pytest.raises(Unbounded):
        linprog([-1], A_ub=[[-1]], b_ub=[0])


def test_degenerate_problem_terminates():
    # a classic cycling example for Dantzig's rule; Bland's rule must finish
    c = [Fraction(-3, 4), 150, Fraction(-1, 50), 6]
    A = [[Fraction(1, 4), -60, Fraction(-1, 25), 9],
         [Fraction(1, 2), -90, Fraction(-1, 50), 3],
         [0, 0, 1, 0]]
    val, _ = linprog(c, A_ub=A, b_ub=[0, 0, 1])
    assert val == Fraction(-1, 20)

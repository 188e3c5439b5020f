from fractions import Fraction as F

import pytest

from deadline_matching.simplex import (InfeasibleLP, LPSolution, UnboundedLP,
                                       certify_min_geq, solve_min_geq)


def check(c, rows, rhs, expected_value):
    solution = solve_min_geq(c, rows, rhs)
    certify_min_geq(solution, c, rows, rhs)
    assert solution.value == expected_value
    return solution


class TestSolver:
    def test_single_constraint(self):
        # min x + y st 2x + y >= 3
        sol = check([F(1), F(1)], [[F(2), F(1)]], [F(3)], F(3, 2))
        assert sol.x == (F(3, 2), F(0))

    def test_two_constraints_fractional_vertex(self):
        # min x + y st x + 2y >= 2, 2x + y >= 2 -> x = y = 2/3
        sol = check([F(1), F(1)], [[F(1), F(2)], [F(2), F(1)]],
                    [F(2), F(2)], F(4, 3))
        assert sol.x == (F(2, 3), F(2, 3))
        assert sol.duals == (F(1, 3), F(1, 3))

    def test_redundant_constraint(self):
        sol = check([F(1)], [[F(1)], [F(1)]], [F(1), F(1, 2)], F(1))
        assert sol.x == (F(1),)

    def test_cheap_column_wins(self):
        # min x + 10y st x + y >= 5
        sol = check([F(1), F(10)], [[F(1), F(1)]], [F(5)], F(5))
        assert sol.x == (F(5), F(0))

    def test_exactness_with_awkward_fractions(self):
        c = [F(7, 3), F(11, 5)]
        rows = [[F(1, 7), F(2, 9)], [F(3, 4), F(1, 13)]]
        rhs = [F(5, 6), F(2, 3)]
        sol = solve_min_geq(c, rows, rhs)
        certify_min_geq(sol, c, rows, rhs)
        # dual witness equals primal value exactly, no floats anywhere
        assert isinstance(sol.value, F)

    def test_infeasible(self):
        # x >= 1 with coefficient 0 is impossible
        with pytest.raises(InfeasibleLP):
            solve_min_geq([F(1)], [[F(0)]], [F(1)])

    def test_negative_rhs_row(self):
        # min -x subject to -x >= -2: the flipped row must bind at x = 2
        sol = solve_min_geq([F(-1)], [[F(-1)]], [F(-2)])
        certify_min_geq(sol, [F(-1)], [[F(-1)]], [F(-2)])
        assert sol.value == F(-2)
        assert sol.x == (F(2),)

    def test_degenerate_does_not_cycle(self):
        # several constraints tight at the optimum simultaneously
        c = [F(1), F(1), F(1)]
        rows = [[F(1), F(1), F(0)], [F(0), F(1), F(1)],
                [F(1), F(0), F(1)], [F(1), F(1), F(1)]]
        rhs = [F(1), F(1), F(1), F(3, 2)]
        sol = solve_min_geq(c, rows, rhs)
        certify_min_geq(sol, c, rows, rhs)
        assert sol.value == F(3, 2)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            solve_min_geq([F(1)], [[F(1), F(2)]], [F(1)])

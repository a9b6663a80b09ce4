import math
from fractions import Fraction

import numpy as np

from codebounds.solvers import (
    SdpProblem,
    psd_check,
    solve_lp_exact,
    solve_sdp,
)


def test_lp_exact_simple():
    # max x + y: x + y <= 3, x <= 2
    sol = solve_lp_exact([1, 1], a_ub=[[1, 1], [1, 0]], b_ub=[3, 2])
    assert sol.status == "optimal"
    assert sol.value == 3
    assert sum(sol.x) == 3


def test_lp_exact_rational_optimum():
    # max x: 3x <= 1 gives exactly 1/3
    sol = solve_lp_exact([1], a_ub=[[3]], b_ub=[1])
    assert sol.value == Fraction(1, 3)
    assert isinstance(sol.value, Fraction)


def test_lp_exact_equality():
    sol = solve_lp_exact([2, 1], a_eq=[[1, 1]], b_eq=[1])
    assert sol.status == "optimal" and sol.value == 2
    assert sol.x == [Fraction(1), Fraction(0)]


def test_lp_exact_infeasible_and_unbounded():
    bad = solve_lp_exact([1], a_ub=[[1], [-1]], b_ub=[1, -2])
    assert bad.status == "infeasible"
    free = solve_lp_exact([1])
    assert free.status == "unbounded"


def test_lp_exact_duals_certify():
    sol = solve_lp_exact([1, 1], a_ub=[[2, 1], [1, 2]], b_ub=[1, 1])
    assert sol.value == Fraction(2, 3)
    # dual objective equals primal value (strong duality, exact)
    assert sum(d * b for d, b in zip(sol.dual_ub, [1, 1])) == sol.value


def test_sdp_pinned_entry():
    prob = SdpProblem()
    b = prob.add_block(1)
    prob.set_objective(b, 0, 0, 1.0)
    prob.add_constraint(2.0, [(b, 0, 0, 1.0)])
    sol = solve_sdp(prob, tol=1e-10)
    assert sol.status == "optimal"
    assert abs(sol.primal - 2.0) < 1e-8
    assert abs(sol.dual - 2.0) < 1e-8


def test_sdp_scalar_slots_act_like_lp():
    # max 2a + b: a + b = 1, a, b >= 0
    prob = SdpProblem()
    s0 = prob.add_scalars(2)
    prob.set_objective_scalar(s0, 2.0)
    prob.set_objective_scalar(s0 + 1, 1.0)
    prob.add_constraint(1.0, [("s", s0, 1.0), ("s", s0 + 1, 1.0)])
    sol = solve_sdp(prob, tol=1e-10)
    assert abs(sol.primal - 2.0) < 1e-7


def _theta_sdp(vertices, edges):
    prob = SdpProblem()
    b = prob.add_block(vertices)
    for i in range(vertices):
        for j in range(vertices):
            prob.set_objective(b, i, j, 1.0)
    prob.add_constraint(1.0, [(b, i, i, 1.0) for i in range(vertices)])
    for (u, v) in edges:
        prob.add_constraint(0.0, [(b, u, v, 1.0)])
    return prob


def test_sdp_theta_pentagon():
    edges = [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]
    sol = solve_sdp(_theta_sdp(5, edges), tol=1e-10)
    assert sol.status == "optimal"
    assert abs(sol.primal - math.sqrt(5)) < 1e-7
    assert abs(sol.dual - math.sqrt(5)) < 1e-7


def test_sdp_theta_complete_and_empty():
    comp = [(u, v) for u in range(4) for v in range(u + 1, 4)]
    sol = solve_sdp(_theta_sdp(4, comp), tol=1e-10)
    assert abs(sol.primal - 1.0) < 1e-7
    sol = solve_sdp(_theta_sdp(4, []), tol=1e-10)
    assert abs(sol.primal - 4.0) < 1e-7


def test_sdp_weak_duality_and_feasibility_stats():
    edges = [(0, 1), (1, 2), (2, 0), (2, 3)]
    sol = solve_sdp(_theta_sdp(4, edges), tol=1e-9)
    scale = 1 + abs(sol.primal) + abs(sol.dual)
    assert sol.primal <= sol.dual + 1e-6 * scale
    assert sol.rel_gap < 1e-7
    assert sol.primal_infeas < 1e-6 and sol.dual_infeas < 1e-6
    # primal block is psd and satisfies the pinned constraints
    x = sol.x_blocks[0]
    assert psd_check(x, tol=1e-7)
    assert abs(np.trace(x) - 1.0) < 1e-6


def test_psd_check():
    assert psd_check(np.eye(3))
    assert not psd_check(np.array([[1.0, 2.0], [2.0, 1.0]]))

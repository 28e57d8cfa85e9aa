import numpy as np
import pytest

from lp_sensitivity_lib.core.bqp import build, convex_exact, polynomial_case
from lp_sensitivity_lib.core.heuristics import witness_from_parameters
from lp_sensitivity_lib.core.lp import solve_perturbed
from lp_sensitivity_lib.enums import SenseEnum


def _embedded_optimum(qp, theta):
    uset = qp.uncertainty_set
    b, c = uset.perturbation(theta)
    solution = solve_perturbed(qp.lp, b, c)
    assert solution.is_optimal
    z = qp.embed(theta, np.zeros(uset.aux_count), solution.x, solution.y,
                 solution.s)
    return z, solution.objective


def test_layout(example_2_1):
    qp = build(example_2_1.lp, example_2_1.uncertainty_set,
               SenseEnum.BEST_CASE)
    # t, (b1, c1, c2), x1 x2, y, s1 s2
    assert qp.N == 9
    assert list(qp.index("theta_b")) == [1]
    assert list(qp.index("x")) == [4, 5]
    assert len(qp.complementarity_pairs) == 2
    assert len(qp.H) == 2


@pytest.mark.parametrize("sense", [SenseEnum.BEST_CASE, SenseEnum.WORST_CASE])
def test_objective_matches_lp_value(example_2_1, sense):
    """At an LP optimum both bilinear forms equal p(b, c)."""
    qp = build(example_2_1.lp, example_2_1.uncertainty_set, sense)
    z, value = _embedded_optimum(qp, [1.0, -0.5, 0.0])
    assert value == pytest.approx(1.5)
    assert qp.objective_value(z) == pytest.approx(1.5)
    assert qp.is_feasible(z)
    np.testing.assert_array_almost_equal(
        qp.E.dot(z), qp.f
    )


def test_split_inverts_embed(example_2_1):
    qp = build(example_2_1.lp, example_2_1.uncertainty_set,
               SenseEnum.WORST_CASE)
    z, _ = _embedded_optimum(qp, [0.0, 0.0, 0.0])
    parts = qp.split(z)
    assert parts["t"] == 1.0
    np.testing.assert_array_almost_equal(parts["theta_c"], [0.0, 0.0])
    assert parts["y"].shape == (1,)


def test_infeasible_point_is_rejected(example_2_1):
    qp = build(example_2_1.lp, example_2_1.uncertainty_set,
               SenseEnum.BEST_CASE)
    z, _ = _embedded_optimum(qp, [0.0, 0.0, 0.0])
    z[qp.index("theta_b")] = 5.0
    assert not qp.is_feasible(z)
    assert qp.residuals(z).worst > 1.0


def test_polynomial_case_worst_case(wendell_1):
    """Objective-only perturbations leave max (b_hat).y convex."""
    value = polynomial_case(
        wendell_1.lp, wendell_1.uncertainty_set, SenseEnum.WORST_CASE
    )
    assert value == pytest.approx(-16000.0, abs=1.0)
    assert polynomial_case(
        wendell_1.lp, wendell_1.uncertainty_set, SenseEnum.BEST_CASE
    ) is None


def test_convex_exact_returns_the_attaining_perturbation(wendell_1):
    exact = convex_exact(
        wendell_1.lp, wendell_1.uncertainty_set, SenseEnum.WORST_CASE
    )
    uset = wendell_1.uncertainty_set
    assert exact.theta.shape == (uset.k,)
    assert exact.w.shape == (uset.aux_count,)

    qp = build(wendell_1.lp, uset, SenseEnum.WORST_CASE)
    witness = witness_from_parameters(
        qp, exact.theta, exact.w, "convex_exact"
    )
    assert witness.value == pytest.approx(exact.value, rel=1e-6)
    assert qp.is_feasible(witness.z(qp))


def test_witness_outside_the_restricted_set_is_rejected(example_2_1):
    qp = build(example_2_1.lp, example_2_1.uncertainty_set,
               SenseEnum.BEST_CASE)
    assert witness_from_parameters(
        qp, np.array([5.0, 0.0, 0.0]), np.zeros(0), "convex_exact"
    ) is None


def test_polynomial_case_both_sides(smoke):
    for sense in (SenseEnum.BEST_CASE, SenseEnum.WORST_CASE):
        value = polynomial_case(smoke.lp, smoke.uncertainty_set, sense)
        assert value == pytest.approx(1.2)


def test_polynomial_case_needs_a_vanishing_side(example_2_1):
    for sense in (SenseEnum.BEST_CASE, SenseEnum.WORST_CASE):
        assert polynomial_case(
            example_2_1.lp, example_2_1.uncertainty_set, sense
        ) is None

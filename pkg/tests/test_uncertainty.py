import numpy as np
import pytest

from lp_sensitivity_lib import exceptions
from lp_sensitivity_lib.core.uncertainty import (affine_image, box,
                                                 build_restricted, homogenize,
                                                 intersect, norm_ball,
                                                 sample_extreme,
                                                 simplex_100pct,
                                                 sphere_direction)
from lp_sensitivity_lib.enums import NormEnum, PerturbationTargetEnum

RHS = PerturbationTargetEnum.RHS
OBJECTIVE = PerturbationTargetEnum.OBJECTIVE


def test_box_rows_and_ranges():
    uset = box([(-1, 2)], [(-3, 0)])
    assert (uset.k_b, uset.k_c, uset.aux_count) == (1, 1, 0)
    assert uset.is_polytopal
    np.testing.assert_array_almost_equal(
        uset.parameter_ranges, [[-1.0, 2.0], [-3.0, 0.0]]
    )
    assert uset.membership([2.0, -1.5])
    assert not uset.membership([2.5, 0.0])


def test_box_pins_degenerate_intervals():
    uset = box([(0, 0)], [(-1, 1)])
    assert uset.G_eq.shape[0] == 1
    assert uset.eq_labels == ["b[0] == 0.0"]


def test_box_rejects_empty_interval():
    with pytest.raises(exceptions.InvalidSetParameterError):
        box([(1, -1)], [])


def test_box_without_zero():
    with pytest.raises(exceptions.ZeroNotContainedError) as e:
        box([(1, 2)], [])
    assert e.value.additional_context == ["b[0] >= 1.0"]


def test_unbounded_parameter():
    with pytest.raises(exceptions.UnboundedUncertaintySetError):
        box([None], [])


def test_simplex_100pct_membership():
    uset = simplex_100pct([], [-4.0, -26.666666666666668])
    assert uset.membership([-2.0, -13.0])
    assert uset.membership([-4.0, 0.0])
    assert not uset.membership([1.0, 0.0])
    assert not uset.membership([-4.0, -10.0])


def test_l1_ball_is_lifted():
    uset = norm_ball(NormEnum.ONE, 1.0, RHS, size=2)
    assert uset.aux_count == 2
    assert uset.is_polytopal
    assert uset.membership([0.5, -0.5])
    assert not uset.membership([0.8, 0.5])
    np.testing.assert_array_almost_equal(
        uset.parameter_ranges[:2], [[-1.0, 1.0], [-1.0, 1.0]]
    )


def test_l2_ball_is_conic():
    uset = norm_ball(NormEnum.TWO, 1.0, OBJECTIVE, size=2)
    assert not uset.is_polytopal
    assert (uset.k_b, uset.k_c) == (0, 2)
    assert uset.membership([0.6, 0.8])
    assert not uset.membership([0.8, 0.8])


def test_zero_radius_pins_parameters():
    uset = norm_ball(NormEnum.TWO, 0.0, RHS, size=2)
    assert uset.G_eq.shape == (2, 2)
    assert uset.is_singleton_zero


def test_negative_radius():
    with pytest.raises(exceptions.InvalidSetParameterError):
        norm_ball(NormEnum.ONE, -1.0, RHS, size=1)


def test_intersect_shared_maps():
    first = box([(-1, 1), (-1, 1)], [])
    second = norm_ball(NormEnum.ONE, 1.0, RHS, size=2)
    both = intersect(first, second)
    assert both.k == 2
    assert both.aux_count == 2
    assert both.membership([0.5, 0.5])
    assert not both.membership([1.0, 0.5])


def test_affine_image_moves_the_map():
    ball = norm_ball(NormEnum.TWO, 1.0, RHS, size=2, validate=False)
    Q = np.array([[1.0, 0.0], [0.0, 2.0], [1.0, 1.0]])
    image = affine_image(Q, ball, RHS)
    assert image.map_b.shape == (3, 2)
    b, c = image.perturbation([0.0, 0.5])
    np.testing.assert_array_almost_equal(b, [0.0, 1.0, 0.5])
    assert c.shape == (0,)


def test_homogenized_slices():
    uset = box([(-1, 2)], [])
    cone = homogenize(uset)
    assert cone.dim == 2
    assert cone.contains(1.0, [2.0])
    assert cone.contains(3.0, [-3.0])
    assert cone.contains(0.0, [0.0])
    assert not cone.contains(1.0, [2.5])
    assert not cone.contains(-1.0, [0.0])


def test_restricted_set_clips_infeasible_perturbations(example_2_2):
    """Ū keeps only the b1 >= -2 part of the interval [-3, 1]."""
    system = build_restricted(example_2_2.uncertainty_set, example_2_2.lp)
    # theta = (b1, c1, c2)
    assert system.contains([-2.0, 0.0, 0.0])
    assert system.contains([1.0, 0.5, 0.0])
    assert not system.contains([-3.0, 0.0, 0.0])


def test_sample_extreme_returns_members(example_2_1):
    system = build_restricted(example_2_1.uncertainty_set, example_2_1.lp)
    theta, b, c = sample_extreme(system, [0, 0])
    assert system.uncertainty_set.membership(theta)
    assert abs(abs(theta[0]) - 1.0) < 1e-6
    assert abs(abs(theta[1]) - 0.5) < 1e-6
    assert b.shape == (1,) and c.shape == (2,)


def test_sample_extreme_is_seeded(example_2_1):
    system = build_restricted(example_2_1.uncertainty_set, example_2_1.lp)
    first = sample_extreme(system, [7, 3])[0]
    second = sample_extreme(system, [7, 3])[0]
    np.testing.assert_array_almost_equal(first, second)


def test_sphere_direction_is_unit():
    direction = sphere_direction(np.random.default_rng(1), 5)
    assert np.linalg.norm(direction) == pytest.approx(1.0)

import csv

import numpy as np
import pytest

from lp_sensitivity_lib import exceptions
from lp_sensitivity_lib.core.bqp import build
from lp_sensitivity_lib.core.heuristics import (BoundBundle, Witness,
                                                ablation_gap,
                                                alternating_improve,
                                                enumerate_vertices, gaps,
                                                oracle_vertices,
                                                sample_bounds,
                                                write_trial_log)
from lp_sensitivity_lib.core.lp import solve_perturbed
from lp_sensitivity_lib.core.uncertainty import (box, norm_ball,
                                                 simplex_100pct)
from lp_sensitivity_lib.enums import NormEnum, PerturbationTargetEnum, SenseEnum


def test_bundle_best_bounds():
    bundle = BoundBundle(r_minus=-23000.0, v_minus=-24000.0, r_plus=-16000.0)
    assert bundle.best_minus == -24000.0
    assert bundle.best_plus == -16000.0
    assert BoundBundle().best_minus is None


def test_gaps_are_relative_percent():
    bundle = BoundBundle(r_minus=-24000.0, r_plus=-16000.0)
    assert gaps(bundle, -24000.0, -16000.0) == (0.0, 0.0)
    gap_minus, gap_plus = gaps(BoundBundle(r_minus=1.0, v_plus=0.5), 0.0, 1.0)
    assert gap_minus == pytest.approx(100.0)
    # |best+| below one is normalized by one
    assert gap_plus == pytest.approx(50.0)
    assert gaps(BoundBundle(), 0.0, 1.0) == (None, None)


def test_ablation_gap():
    assert ablation_gap(0.0, -16000.0) == pytest.approx(100.0)
    assert ablation_gap(453298.0, 25600.0) == pytest.approx(1670.6953125)
    assert ablation_gap(None, 1.0) is None


def test_box_vertices():
    vertices = enumerate_vertices(box([(-1, 1), (0, 2)], []))
    assert vertices.shape == (4, 2)
    assert sorted(map(tuple, np.round(vertices, 9))) == [
        (-1.0, 0.0), (-1.0, 2.0), (1.0, 0.0), (1.0, 2.0)
    ]


def test_simplex_vertices():
    vertices = enumerate_vertices(simplex_100pct([-4.0], [2.0]))
    assert vertices.shape == (3, 2)


def test_vertices_need_a_polytope():
    uset = norm_ball(NormEnum.TWO, 1.0, PerturbationTargetEnum.RHS, size=2)
    with pytest.raises(exceptions.NonPolytopalSetError):
        enumerate_vertices(uset)


def test_oracle_on_the_interval_example(example_2_1):
    assert oracle_vertices(example_2_1.lp, example_2_1.uncertainty_set) == (
        pytest.approx(0.5), pytest.approx(3.0), True
    )


def test_oracle_skips_vertices_outside_the_restricted_set(example_2_2):
    q_minus, q_plus, exact = oracle_vertices(
        example_2_2.lp, example_2_2.uncertainty_set
    )
    assert q_plus == pytest.approx(3.0)
    assert q_minus == pytest.approx(1.5)
    assert not exact


def test_sampling_attains_the_interval_extremes(example_2_1):
    run = sample_bounds(
        example_2_1.lp, example_2_1.uncertainty_set, T=100, seed=0, jobs=1
    )
    assert len(run.trials) == 100
    assert run.failures == 0
    assert run.v_minus == pytest.approx(0.5)
    assert run.v_plus == pytest.approx(3.0)
    assert set(run.witnesses) == {"v_minus", "v_plus"}
    extremes = run.running_extremes()
    assert extremes.shape == (100, 2)
    assert np.all(np.diff(extremes[:, 0]) <= 0.0)
    assert np.all(np.diff(extremes[:, 1]) >= 0.0)


def test_sampling_does_not_depend_on_workers(example_2_1):
    single = sample_bounds(
        example_2_1.lp, example_2_1.uncertainty_set, T=12, seed=5, jobs=1
    )
    threaded = sample_bounds(
        example_2_1.lp, example_2_1.uncertainty_set, T=12, seed=5, jobs=3
    )
    assert [t.value for t in single.trials] == pytest.approx(
        [t.value for t in threaded.trials]
    )


def test_trial_log(example_2_1, tmp_path):
    run = sample_bounds(
        example_2_1.lp, example_2_1.uncertainty_set, T=5, seed=1, jobs=1
    )
    path = tmp_path / "logs" / "trials.csv"
    write_trial_log(str(path), run.trials)
    with open(str(path)) as f:
        rows = list(csv.reader(f))
    assert rows[0] == ["trial", "theta_0", "theta_1", "theta_2", "p"]
    assert len(rows) == 6
    assert [row[0] for row in rows[1:]] == ["0", "1", "2", "3", "4"]


def test_alternating_improvement_is_monotone(example_2_1):
    """Starting from the nominal point, the worst case climbs to 3."""
    lp, uset = example_2_1.lp, example_2_1.uncertainty_set
    qp = build(lp, uset, SenseEnum.WORST_CASE)
    nominal = solve_perturbed(lp)
    start = Witness(
        np.zeros(uset.k), np.zeros(uset.aux_count), nominal.x, nominal.y,
        nominal.s, nominal.objective, "nominal",
    )
    improved = alternating_improve(qp, start, max_rounds=10)
    assert improved.value >= start.value - 1e-9
    assert improved.value == pytest.approx(3.0, abs=1e-6)
    assert 1 <= improved.improvement_iters <= 10
    assert qp.is_feasible(improved.z(qp))

import itertools

import numpy as np
import pytest

from lp_sensitivity_lib import exceptions
from lp_sensitivity_lib.core.analysis import build_instance, solve_relaxation
from lp_sensitivity_lib.core.bqp import build
from lp_sensitivity_lib.core.conic_backend import svec, svec_dim
from lp_sensitivity_lib.core.lp import solve_perturbed
from lp_sensitivity_lib.core.relaxation import (RelaxationOptions,
                                                build_model,
                                                build_relaxation,
                                                extract_bound)
from lp_sensitivity_lib.core.relaxation.forms import form_key
from lp_sensitivity_lib.core.relaxation.reduction import (nullspace_reduction,
                                                          svec_positions)
from lp_sensitivity_lib.core.uncertainty import sample_extreme
from lp_sensitivity_lib.enums import (ConstraintFamilyEnum, SenseEnum,
                                      SettingEnum)

BALL_DOCUMENT = {
    "name": "ball_c",
    "variables": [{"name": "x1", "lower": 0}, {"name": "x2", "lower": 0}],
    "rows": [{"name": "R1", "coefficients": {"x1": 1, "x2": 1},
              "sense": "=", "rhs": 2}],
    "objective": {"coefficients": {"x1": 1, "x2": 1}},
    "uncertainty": [
        {"type": "ball_l2", "target": "c", "objective": ["x1", "x2"],
         "radius": 0.5},
        {"type": "box", "rows": {"R1": [-1, 1]}},
    ],
}


def _rank_one_violations(qp, theta, options=None):
    uset = qp.uncertainty_set
    b, c = uset.perturbation(theta)
    solution = solve_perturbed(qp.lp, b, c)
    assert solution.is_optimal
    z = qp.embed(theta, np.zeros(uset.aux_count), solution.x, solution.y,
                 solution.s)
    model = build_model(qp, options)
    return model, model.violations(model.moment(z))


def test_family_counts_follow_options(example_2_1):
    qp = build(example_2_1.lp, example_2_1.uncertainty_set,
               SenseEnum.WORST_CASE)
    full = build_model(qp).counts()
    assert full["complementarity"] == 2
    assert full["rlt"] > 0
    assert full["moment_anchor"] == 1
    assert full["base_equality"] == full["diag_eze"]

    bare = build_model(qp, RelaxationOptions(
        use_complementarity=False, rlt=False, soc_rlt=False
    )).counts()
    assert "complementarity" not in bare
    assert "rlt" not in bare


def test_rlt_rows_are_deduplicated(example_2_1):
    qp = build(example_2_1.lp, example_2_1.uncertainty_set,
               SenseEnum.BEST_CASE)
    model = build_model(qp)
    rlt = model.rows(ConstraintFamilyEnum.RLT)
    assert len(rlt) <= rlt.generated


@pytest.mark.parametrize("sense", [SenseEnum.BEST_CASE, SenseEnum.WORST_CASE])
def test_generated_rows_hold_at_rank_one_points(example_2_1, sense):
    qp = build(example_2_1.lp, example_2_1.uncertainty_set, sense)
    for theta in ([1.0, -0.5, 0.0], [-1.0, 0.5, 0.0], [0.3, 0.1, 0.0]):
        _, violations = _rank_one_violations(qp, theta)
        for family, worst in violations.items():
            assert worst <= 1e-7, family


def test_soc_rlt_rows_hold_at_rank_one_points():
    instance = build_instance(BALL_DOCUMENT)
    qp = build(instance.lp, instance.uncertainty_set, SenseEnum.BEST_CASE)
    # theta = (b1, c1, c2)
    for theta in ([0.5, 0.3, -0.2], [-1.0, 0.0, 0.5], [1.0, -0.3, 0.4]):
        model, violations = _rank_one_violations(qp, theta)
        assert "soc_rlt" in violations
        for family, worst in violations.items():
            assert worst <= 1e-7, family
    assert len(model.rows(ConstraintFamilyEnum.SOC_RLT)) > 0


def test_relaxation_bounds_example(example_2_1):
    """q- <= 0.5 and q+ >= 3 on the interval example."""
    options = RelaxationOptions()
    lower = extract_bound(solve_relaxation(
        build(example_2_1.lp, example_2_1.uncertainty_set,
              SenseEnum.BEST_CASE), options
    ))
    upper = extract_bound(solve_relaxation(
        build(example_2_1.lp, example_2_1.uncertainty_set,
              SenseEnum.WORST_CASE), options
    ))
    assert lower <= 0.5 + 1e-6
    assert upper >= 3.0 - 1e-6
    assert lower == pytest.approx(0.5, abs=1e-3)
    assert upper == pytest.approx(3.0, abs=1e-3)


def test_relaxation_program_shape(example_2_1):
    qp = build(example_2_1.lp, example_2_1.uncertainty_set,
               SenseEnum.BEST_CASE)
    program = build_relaxation(qp)
    reduction = program.source.reduction
    assert program.block("M").size == reduction.side
    # one dimension less per independent row of E z = f
    assert reduction.side == qp.N + 1 - np.linalg.matrix_rank(qp.E.toarray())
    assert not program.is_linear
    assert program.source.qp is qp


def test_size_cap(example_2_1, environment):
    environment.settings.set(SettingEnum.RELAXATION_SIZE_CAP, 5)
    qp = build(example_2_1.lp, example_2_1.uncertainty_set,
               SenseEnum.BEST_CASE)
    with pytest.raises(exceptions.RelaxationTooLargeError):
        build_model(qp)


def _random_moment(reduction, rng):
    G = rng.standard_normal((reduction.side, reduction.side))
    M = G.dot(G.T)
    return M / M[0, 0]


def test_reduction_carries_the_base_equalities(example_2_1):
    qp = build(example_2_1.lp, example_2_1.uncertainty_set,
               SenseEnum.WORST_CASE)
    model = build_model(qp)
    reduction = model.reduction
    E = qp.E.toarray()
    rng = np.random.default_rng(7)
    for _ in range(5):
        values = reduction.lift(svec(_random_moment(reduction, rng)))
        z, Z = model.extract_z(values), model.extract_Z(values)
        np.testing.assert_allclose(E.dot(z), qp.f, atol=1e-8)
        np.testing.assert_allclose(np.diag(E.dot(Z).dot(E.T)), qp.f ** 2,
                                   atol=1e-7)
        for family in ("base_equality", "diag_eze"):
            assert model.violations(values)[family] <= 1e-7


def test_reduced_forms_match_the_lifted_matrix(example_2_1):
    qp = build(example_2_1.lp, example_2_1.uncertainty_set,
               SenseEnum.BEST_CASE)
    reduction = build_model(qp).reduction
    rng = np.random.default_rng(11)
    dim = svec_dim(qp.N + 1)
    for _ in range(5):
        indices = np.sort(rng.choice(dim, size=6, replace=False))
        form = (indices, rng.standard_normal(6))
        values = svec(_random_moment(reduction, rng))
        lifted = reduction.lift(values)
        assert reduction.form(form).dot(values) == pytest.approx(
            form[1].dot(lifted[indices])
        )


def test_svec_positions_invert_svec_index():
    side = 7
    indices = np.arange(svec_dim(side))
    rows, cols = svec_positions(indices)
    assert np.all(rows <= cols)
    np.testing.assert_array_equal(cols * (cols + 1) // 2 + rows, indices)


def test_inconsistent_equalities_are_rejected():
    E = np.array([[1.0, 1.0], [1.0, 1.0]])
    with pytest.raises(exceptions.RelaxationError):
        nullspace_reduction(E, np.array([1.0, 2.0]))


@pytest.mark.parametrize("seed", range(20))
def test_random_rank_one_points_satisfy_every_family(random_document, seed):
    instance = build_instance(random_document(seed))
    for index, sense in enumerate((SenseEnum.BEST_CASE, SenseEnum.WORST_CASE)):
        qp = build(instance.lp, instance.uncertainty_set, sense)
        theta, b, c = sample_extreme(qp.system, [seed, index])
        solution = solve_perturbed(qp.lp, b, c)
        size = max(1.0, float(np.abs(solution.x).max()),
                   float(np.abs(solution.y).max()))
        _, violations = _rank_one_violations(qp, theta)
        for family, worst in violations.items():
            assert worst <= 1e-7 * size ** 2, family


_LATTICE = list(itertools.product((False, True), repeat=3))


def _row_keys(model):
    keys = set()
    for (_, kind), rows in model.families.items():
        if kind == "soc":
            for head, tail in rows.cones:
                keys.add(("soc", form_key(head),
                          tuple(form_key(form) for form in tail)))
        else:
            for form, rhs in zip(rows.forms, rows.rhs):
                keys.add((kind, form_key(form, rhs)))
    return keys


def _implied(key, keys):
    return key in keys or (key[0] == "ge" and ("eq",) + key[1:] in keys)


@pytest.mark.parametrize("sense", [SenseEnum.BEST_CASE, SenseEnum.WORST_CASE])
def test_stronger_options_keep_every_weaker_row(sense):
    instance = build_instance(BALL_DOCUMENT)
    qp = build(instance.lp, instance.uncertainty_set, sense)
    keys = dict(
        (flags, _row_keys(build_model(qp, RelaxationOptions(*flags))))
        for flags in _LATTICE
    )
    for weak, strong in itertools.product(_LATTICE, repeat=2):
        if weak == strong or not all(s or not w for w, s in zip(weak, strong)):
            continue
        missing = [k for k in keys[weak] if not _implied(k, keys[strong])]
        assert not missing, (weak, strong)


def test_stronger_options_never_loosen_the_bounds():
    instance = build_instance(BALL_DOCUMENT)
    bounds = {}
    for flags in itertools.product((False, True), repeat=2):
        options = RelaxationOptions(
            use_complementarity=flags[0], rlt=True, soc_rlt=flags[1]
        )
        bounds[flags] = tuple(
            extract_bound(solve_relaxation(
                build(instance.lp, instance.uncertainty_set, sense), options
            ))
            for sense in (SenseEnum.BEST_CASE, SenseEnum.WORST_CASE)
        )
    for weak, strong in itertools.product(bounds, repeat=2):
        if not all(s or not w for w, s in zip(weak, strong)):
            continue
        (low_weak, high_weak), (low_strong, high_strong) = \
            bounds[weak], bounds[strong]
        tol = 1e-5 * max(1.0, abs(low_strong), abs(high_strong))
        assert low_weak <= low_strong + tol, (weak, strong)
        assert high_weak >= high_strong - tol, (weak, strong)

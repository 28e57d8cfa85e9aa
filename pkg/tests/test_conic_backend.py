import os

import numpy as np
import pytest
from scipy import sparse

from lp_sensitivity_lib import exceptions
from lp_sensitivity_lib.core.conic_backend import (ConicBackend,
                                                   ConicProgramBuilder,
                                                   ConicSolution,
                                                   dump_conic, render_conic,
                                                   smat, svec, svec_form,
                                                   svec_index)
from lp_sensitivity_lib.core.conic_backend.cvxpy_backend import CvxpyBackend
from lp_sensitivity_lib.enums import (ConeEnum, ConicStatusEnum,
                                      ConstraintFamilyEnum)

FAMILY = ConstraintFamilyEnum.BASE_EQUALITY


def _covering_lp():
    """min x1 + x2 s.t. x1 + 2 x2 >= 2, x >= 0."""
    builder = ConicProgramBuilder("covering")
    builder.add_block("x", ConeEnum.NONNEGATIVE, 2)
    builder.add_inequalities([[1.0, 2.0]], [2.0], FAMILY)
    builder.set_objective([1.0, 1.0])
    return builder.build()


def test_svec_inner_product():
    """svec(A).svec(B) is the trace inner product."""
    A = np.array([[2.0, 1.0, 0.5], [1.0, 3.0, -1.0], [0.5, -1.0, 1.0]])
    B = np.array([[1.0, -2.0, 0.0], [-2.0, 0.5, 4.0], [0.0, 4.0, 2.0]])
    assert svec(A).dot(svec(B)) == pytest.approx(np.trace(A.dot(B)))
    np.testing.assert_array_almost_equal(smat(svec(A), 3), A)


def test_svec_form_matches_trace():
    B = np.array([[0.0, 1.5], [1.5, -1.0]])
    M = np.array([[4.0, 2.0], [2.0, 3.0]])
    indices, values = svec_form(sparse.csr_matrix(B))
    assert values.dot(svec(M)[indices]) == pytest.approx(np.sum(B * M))
    assert svec_index(1, 0) == svec_index(0, 1) == 1


def test_unknown_backend():
    with pytest.raises(exceptions.BackendNotImplementedError):
        ConicBackend.get_backend("simplex-by-hand")


def test_inequalities_receive_slacks():
    program = _covering_lp()
    assert [block.name for block in program.blocks] == ["x", "slack"]
    assert program.n_variables == 3
    assert program.is_linear


@pytest.mark.parametrize("backend", ["highs", "cvxpy", "auto"])
def test_backends_agree_on_an_lp(backend):
    solution = ConicBackend.get_backend(backend).solve(_covering_lp())
    assert solution.status == ConicStatusEnum.OPTIMAL
    assert solution.objective == pytest.approx(1.0, abs=1e-6)
    np.testing.assert_array_almost_equal(solution.value("x"), [0.0, 1.0])
    assert solution.residuals.worst <= 1e-6


def test_highs_infeasibility_certificate():
    builder = ConicProgramBuilder("negative")
    builder.add_block("x", ConeEnum.NONNEGATIVE, 2)
    builder.add_equalities([[1.0, 1.0]], [-1.0], FAMILY)
    solution = ConicBackend.get_backend("highs").solve(builder.build())
    assert solution.status == ConicStatusEnum.INFEASIBLE
    assert not solution.is_usable
    assert solution.certificate is not None
    assert solution.certificate[0] < 0.0


def test_highs_rejects_cones():
    builder = ConicProgramBuilder("psd")
    builder.add_block("M", ConeEnum.PSD, 2)
    with pytest.raises(exceptions.UnsupportedConeError):
        ConicBackend.get_backend("highs").solve(builder.build())


def test_cvxpy_psd_block():
    """min 2 M01 with unit diagonal is attained at M01 = -1."""
    builder = ConicProgramBuilder("psd")
    block = builder.add_block("M", ConeEnum.PSD, 2)
    assert block.dim == 3
    rows = np.zeros((2, 3))
    rows[0, svec_index(0, 0)] = 1.0
    rows[1, svec_index(1, 1)] = 1.0
    builder.add_equalities(rows, [1.0, 1.0], FAMILY)
    indices, values = svec_form(np.array([[0.0, 1.0], [1.0, 0.0]]))
    objective = np.zeros(3)
    objective[indices] = values
    builder.set_objective(objective)
    solution = ConicBackend.get_backend("cvxpy").solve(builder.build())
    assert solution.is_usable
    assert solution.objective == pytest.approx(-2.0, abs=1e-5)
    M = solution.value("M")
    assert M[0, 1] == pytest.approx(-1.0, abs=1e-5)


def _unit_diagonal_psd():
    builder = ConicProgramBuilder("psd")
    builder.add_block("M", ConeEnum.PSD, 2)
    rows = np.zeros((2, 3))
    rows[0, svec_index(0, 0)] = 1.0
    rows[1, svec_index(1, 1)] = 1.0
    builder.add_equalities(rows, [1.0, 1.0], FAMILY)
    indices, values = svec_form(np.array([[0.0, 1.0], [1.0, 0.0]]))
    objective = np.zeros(3)
    objective[indices] = values
    builder.set_objective(objective)
    return builder.build()


def _scripted_attempts(monkeypatch, backend, outcomes):
    """Replace solver attempts: a status fakes that attempt, None runs
    the real solver."""
    attempts = []
    real_attempt = backend._attempt

    def attempt(compiled, program, solver, settings):
        outcome = outcomes[len(attempts)]
        attempts.append(solver)
        if outcome is None:
            return real_attempt(compiled, program, solver, settings)
        primal = np.zeros(program.n_variables) \
            if outcome == ConicStatusEnum.INACCURATE else None
        return ConicSolution(
            outcome, program, primal=primal, stage="solver",
            message="scripted",
        )

    monkeypatch.setattr(backend, "_attempt", attempt)
    monkeypatch.setattr(
        backend, "_solver_chain", lambda requested: ["CLARABEL"] * len(outcomes)
    )
    return attempts


def test_failed_solve_moves_down_the_chain(monkeypatch):
    backend = CvxpyBackend()
    attempts = _scripted_attempts(
        monkeypatch, backend, [ConicStatusEnum.FAILED, None]
    )
    solution = backend.solve(_unit_diagonal_psd())
    assert len(attempts) == 2
    assert solution.status == ConicStatusEnum.OPTIMAL
    assert solution.objective == pytest.approx(-2.0, abs=1e-5)


def test_inaccurate_result_is_kept_when_the_chain_fails(monkeypatch):
    backend = CvxpyBackend()
    attempts = _scripted_attempts(
        monkeypatch, backend,
        [ConicStatusEnum.INACCURATE, ConicStatusEnum.FAILED],
    )
    solution = backend.solve(_unit_diagonal_psd())
    assert len(attempts) == 2
    assert solution.status == ConicStatusEnum.INACCURATE
    assert solution.message == "scripted"


def test_solver_chain_starts_with_the_requested_solver():
    chain = CvxpyBackend()._solver_chain("CLARABEL")
    assert chain[0] == "CLARABEL"
    assert len(chain) == len(set(chain))


def test_cvxpy_second_order_cone():
    """Distance from the origin to (3, 4)."""
    builder = ConicProgramBuilder("soc")
    builder.add_block("x", ConeEnum.FREE, 2)
    builder.add_block("t", ConeEnum.FREE, 1)
    builder.fix_block("x", [0.0, 0.0], ConstraintFamilyEnum.FIXED_BLOCK)
    builder.add_soc(
        [[0.0, 0.0, 1.0]], 0.0, [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
        [-3.0, -4.0], ConstraintFamilyEnum.CONE_MEMBERSHIP,
    )
    builder.set_objective([1.0], col_offset=2)
    program = builder.build()
    assert ConeEnum.SECOND_ORDER in program.cones
    solution = ConicBackend.get_backend("auto").solve(program)
    assert solution.is_usable
    assert solution.objective == pytest.approx(5.0, abs=1e-5)


def test_structure_key_reuses_the_compiled_program():
    backend = ConicBackend.get_backend("cvxpy")
    base = _covering_lp()
    program = base.with_objective(np.array([1.0, 3.0, 0.0]))
    program.structure_key = ("covering", 1)
    first = backend.solve(program)
    second = backend.solve(program.with_objective(np.array([3.0, 1.0, 0.0])))
    assert first.objective == pytest.approx(2.0, abs=1e-6)
    assert second.objective == pytest.approx(1.0, abs=1e-6)


def test_conic_dump(tmp_path):
    builder = ConicProgramBuilder("dumped")
    builder.add_block("x", ConeEnum.NONNEGATIVE, 2)
    builder.add_equalities([[1.0, 0.1]], [0.3], FAMILY)
    builder.set_objective([1.0, 0.0])
    program = builder.build()

    text = render_conic(program)
    lines = text.splitlines()
    assert lines[0] == "# conic program dump"
    assert "NAME dumped" in lines
    assert "BLOCK x nonnegative size=2 offset=0 dim=2" in lines
    assert (
        "ROW 0 base_equality 0:1 1:0.10000000000000001 = "
        "0.29999999999999999"
    ) in lines
    assert lines[-1] == "END"

    path = dump_conic(program, str(tmp_path / "nested" / "dumped.txt"))
    assert os.path.isfile(path)
    with open(path) as f:
        assert f.read() == text

from itertools import count

import numpy as np
from scipy import sparse

from ... import exceptions
from ...constants import SAMPLE_MAX_RETRIES
from ...enums import ConeEnum, ConicStatusEnum, ConstraintFamilyEnum
from ...logger import logger
from ..conic_backend import ConicProgramBuilder
from ..environment import ExecutionEnvironment
from ..lp import check_assumptions

_system_ids = count()

BLOCKS = ("theta_b", "theta_c", "w", "x", "y", "s")


class ConstraintSystem:
    """Joint description of the restricted set over (theta, w, x, y, s).

        A x - map_b theta_b == b_hat
        A^T y + s - map_c theta_c == c_hat
        x >= 0, s >= 0, u = (theta, w) in U

    Programs are built on demand with a linear objective over any of
    the blocks and with some blocks fixed to given values. Programs that
    only differ in objective or fixed values share a structure key.
    """

    def __init__(self, lp, uncertainty_set):
        self.lp = lp
        self.uncertainty_set = uncertainty_set.conform(lp.m, lp.n)
        self._uid = next(_system_ids)

    @property
    def sizes(self):
        uset = self.uncertainty_set
        return dict(
            theta_b=uset.k_b, theta_c=uset.k_c, w=uset.aux_count,
            x=self.lp.n, y=self.lp.m, s=self.lp.n,
        )

    def program(self, objective=None, fixed=None, constant=0.0, name=None):
        """Build the joint program.

        Args:
            objective (dict): block name -> linear coefficients (minimized)
            fixed (dict): block name -> values
            constant (float): objective constant
            name (string)

        Returns:
            ConicProgram
        """
        objective = objective or {}
        fixed = fixed or {}
        sizes = self.sizes
        builder, blocks = self.populate(name)

        for block in sorted(fixed):
            if sizes[block]:
                builder.fix_block(
                    block, fixed[block], ConstraintFamilyEnum.FIXED_BLOCK
                )
        for block, vector in objective.items():
            if sizes[block]:
                builder.set_objective(
                    vector, col_offset=blocks[block].offset
                )
        builder.set_objective([], constant=constant)

        return builder.build(
            structure_key=("restricted", self._uid, tuple(sorted(fixed))),
            source=self,
        )

    def populate(self, name=None):
        """Builder holding the blocks and rows of the joint system.

        Returns:
            tuple: (ConicProgramBuilder, dict of VariableBlock by name)
        """
        lp, uset = self.lp, self.uncertainty_set
        sizes = self.sizes
        builder = ConicProgramBuilder(
            name or "{}_restricted".format(lp.name)
        )
        cones = dict(
            theta_b=ConeEnum.FREE, theta_c=ConeEnum.FREE, w=ConeEnum.FREE,
            x=ConeEnum.NONNEGATIVE, y=ConeEnum.FREE, s=ConeEnum.NONNEGATIVE,
        )
        blocks = dict(
            (block, builder.add_block(block, cones[block], sizes[block]))
            for block in BLOCKS
        )

        # A x - map_b theta_b == b_hat
        primal = np.hstack([
            -uset.map_b, np.zeros((lp.m, uset.k_c + uset.aux_count)), lp.A,
        ])
        builder.add_equalities(
            sparse.csr_matrix(primal), lp.b_hat,
            ConstraintFamilyEnum.BASE_EQUALITY,
        )
        # A^T y + s - map_c theta_c == c_hat
        dual = np.hstack([
            np.zeros((lp.n, uset.k_b)), -uset.map_c,
            np.zeros((lp.n, uset.aux_count + lp.n)), lp.A.T, np.eye(lp.n),
        ])
        builder.add_equalities(
            sparse.csr_matrix(dual), lp.c_hat,
            ConstraintFamilyEnum.BASE_EQUALITY,
        )
        uset.add_rows(builder, 0, ConstraintFamilyEnum.RESTRICTED_SET)
        return builder, blocks

    def solve(self, objective=None, fixed=None, constant=0.0, name=None):
        program = self.program(objective, fixed, constant, name)
        return ExecutionEnvironment().conic_backend.solve(program)

    def contains(self, theta, tol=None):
        """Decide theta in the restricted set by a feasibility solve."""
        uset = self.uncertainty_set
        theta = np.asarray(theta, dtype=float).reshape(-1)
        if not uset.membership(theta, tol):
            return False
        solution = self.solve(
            fixed={"theta_b": theta[:uset.k_b],
                   "theta_c": theta[uset.k_b:uset.k]},
            name="{}_contains".format(self.lp.name),
        )
        if solution.status == ConicStatusEnum.INFEASIBLE:
            return False
        if not solution.is_usable:
            raise exceptions.NumericalFailureError(
                "Membership solve ended {}".format(solution.status.value),
                solution.stage,
            )
        return True

    def point(self, solution):
        """Split a program solution into block values."""
        return dict(
            (block, np.asarray(solution.value(block), dtype=float))
            for block in BLOCKS
        )

    def __repr__(self):
        return "ConstraintSystem({}, {})".format(
            self.lp.name, self.uncertainty_set.name
        )


def build_restricted(uncertainty_set, lp):
    """Joint system describing the restricted set.

    Raises:
        NominalInfeasibleError: P(0) or D(0) is empty
        RestrictedSetEmptyError: no perturbation admits both
    """
    system = ConstraintSystem(lp, uncertainty_set)
    solution = system.solve(name="{}_restricted_check".format(lp.name))
    if solution.is_usable:
        return system
    if solution.status != ConicStatusEnum.INFEASIBLE:
        raise exceptions.NumericalFailureError(
            "Restricted set feasibility check ended {}".format(solution.status.value),
            solution.stage,
        )
    report = check_assumptions(lp)
    if not (report.primal_feasible and report.dual_feasible):
        raise exceptions.NominalInfeasibleError(
            "Restricted set is empty: {}".format(report.violated_clause),
            report.violated_clause,
        )
    raise exceptions.RestrictedSetEmptyError(
        "No perturbation in {} admits both primal and dual "
        "feasibility".format(uncertainty_set.name)
    )


def sphere_direction(rng, size):
    """Standard normals normalized to unit length."""
    direction = rng.standard_normal(size)
    norm = np.linalg.norm(direction)
    if norm == 0.0:
        return direction
    return direction / norm


def _substreams(rng_seed):
    base = list(np.atleast_1d(rng_seed).astype(int))
    yield base
    for retry in range(1, SAMPLE_MAX_RETRIES + 1):
        yield base + [retry]


def sample_extreme(system, rng_seed):
    """Minimize a random linear objective in (b, c) space over the
    restricted set; the minimizer is an extreme point with probability 1.

    Args:
        system (ConstraintSystem)
        rng_seed (int|list): seed or substream key, e.g. [seed, trial]

    Returns:
        tuple: (theta, b, c)
    """
    lp, uset = system.lp, system.uncertainty_set
    for seed in _substreams(rng_seed):
        rng = np.random.default_rng(seed)
        direction = sphere_direction(rng, lp.m + lp.n)
        f, g = direction[:lp.m], direction[lp.m:]
        solution = system.solve(
            objective={"theta_b": uset.map_b.T.dot(f),
                       "theta_c": uset.map_c.T.dot(g)},
            name="{}_sample".format(lp.name),
        )
        if solution.is_usable:
            point = system.point(solution)
            theta = np.concatenate([point["theta_b"], point["theta_c"]])
            b, c = uset.perturbation(theta)
            return theta, b, c
        logger.warning("Sample {} failed with {}, retrying".format(
            seed, solution.status.value
        ))
    raise exceptions.NumericalFailureError(
        "Sampling {} failed after {} retries".format(
            rng_seed, SAMPLE_MAX_RETRIES
        ),
        "sampling",
    )

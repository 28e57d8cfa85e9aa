import math

import numpy as np
from scipy import sparse

from ... import exceptions
from ...constants import RESIDUAL_ACCEPTANCE_FACTOR
from ...enums import ConeEnum, ConicStatusEnum, SettingEnum

SQRT2 = math.sqrt(2.0)


def svec_dim(side):
    return side * (side + 1) // 2


def svec_index(i, j):
    """Position of entry (i, j) in the column-major upper triangle."""
    if i > j:
        i, j = j, i
    return j * (j + 1) // 2 + i


def svec(matrix):
    """Scaled half-vectorization; off-diagonals carry sqrt(2) so that
    svec(A).dot(svec(B)) == trace(A B) for symmetric A, B."""
    matrix = np.asarray(matrix, dtype=float)
    side = matrix.shape[0]
    rows, cols = np.triu_indices(side)
    values = matrix[rows, cols].copy()
    values[rows != cols] *= SQRT2
    order = np.argsort(cols * (cols + 1) // 2 + rows, kind="stable")
    return values[order]


def smat(vector, side):
    """Inverse of svec."""
    vector = np.asarray(vector, dtype=float)
    matrix = np.zeros((side, side))
    rows, cols = np.triu_indices(side)
    positions = cols * (cols + 1) // 2 + rows
    values = vector[positions].copy()
    values[rows != cols] /= SQRT2
    matrix[rows, cols] = values
    matrix[cols, rows] = values
    return matrix


def svec_form(matrix):
    """Coefficients c with c.dot(svec(M)) == B . M for symmetric B.

    Args:
        matrix (scipy.sparse matrix|numpy.ndarray): symmetric B

    Returns:
        tuple: (indices, values) sorted by index
    """
    upper = sparse.triu(sparse.coo_matrix(matrix)).tocoo()
    upper.sum_duplicates()
    keep = upper.data != 0.0
    rows = upper.row[keep]
    cols = upper.col[keep]
    values = upper.data[keep].astype(float)
    values[rows != cols] *= SQRT2
    indices = cols.astype(np.int64) * (cols + 1) // 2 + rows
    order = np.argsort(indices, kind="stable")
    return indices[order], values[order]


class ConicSettings:
    """Solver-side settings passed to every backend."""

    def __init__(
        self, feas_tol=1e-8, gap_tol=1e-8, max_iterations=200,
        solver="CLARABEL", verbose=False, acceptance_tol=None
    ):
        self.feas_tol = feas_tol
        self.gap_tol = gap_tol
        self.max_iterations = max_iterations
        self.solver = solver
        self.verbose = verbose
        self.acceptance_tol = (
            acceptance_tol if acceptance_tol is not None
            else RESIDUAL_ACCEPTANCE_FACTOR * feas_tol
        )

    @classmethod
    def from_settings(cls, settings):
        return cls(
            feas_tol=settings.get(SettingEnum.SOLVER_FEAS_TOL),
            gap_tol=settings.get(SettingEnum.SOLVER_GAP_TOL),
            max_iterations=settings.get(SettingEnum.MAX_ITERATIONS),
            solver=settings.get(SettingEnum.CONIC_SOLVER),
            verbose=settings.get(SettingEnum.VERBOSE),
        )


class VariableBlock:
    def __init__(self, name, cone, size, offset):
        self.name = name
        self.cone = cone
        self.size = size
        self.offset = offset

    @property
    def dim(self):
        if self.cone == ConeEnum.PSD:
            return svec_dim(self.size)
        return self.size

    @property
    def slice(self):
        return slice(self.offset, self.offset + self.dim)

    def __repr__(self):
        return "VariableBlock({}, {}, size={}, offset={})".format(
            self.name, self.cone.value, self.size, self.offset
        )


class ConicResiduals:
    """Residuals recomputed from a primal point, relative to data scale."""

    def __init__(self, equality, cone):
        self.equality = equality
        self.cone = cone

    @property
    def worst(self):
        return max(self.equality, self.cone)

    def __repr__(self):
        return "ConicResiduals(equality={:.3e}, cone={:.3e})".format(
            self.equality, self.cone
        )


class ConicProgram:
    """min c.x + constant  s.t.  A x = b,  x in K_1 x ... x K_p.

    Blocks are laid out contiguously in declaration order. PSD blocks
    hold svec of a symmetric matrix.
    """

    def __init__(
        self, name, blocks, A, b, c, objective_constant=0.0,
        row_families=None, structure_key=None, source=None
    ):
        self.name = name
        self.blocks = list(blocks)
        self.A = sparse.csr_matrix(A)
        self.b = np.asarray(b, dtype=float)
        self.c = np.asarray(c, dtype=float)
        self.objective_constant = float(objective_constant)
        self.row_families = list(row_families or [])
        self.structure_key = structure_key
        self.source = source

        n_variables = sum(block.dim for block in self.blocks)
        if self.A.shape != (self.b.shape[0], n_variables):
            raise exceptions.DimensionMismatchError(
                "Program {} has A {} but {} rows and {} variables".format(
                    name, self.A.shape, self.b.shape[0], n_variables
                )
            )
        if self.c.shape[0] != n_variables:
            raise exceptions.DimensionMismatchError(
                "Objective has length {}, expected {}".format(
                    self.c.shape[0], n_variables
                )
            )

    @property
    def n_variables(self):
        return self.c.shape[0]

    @property
    def n_rows(self):
        return self.b.shape[0]

    @property
    def cones(self):
        return set(block.cone for block in self.blocks)

    @property
    def is_linear(self):
        return not (self.cones & {ConeEnum.SECOND_ORDER, ConeEnum.PSD})

    def block(self, name):
        for block in self.blocks:
            if block.name == name:
                return block
        raise KeyError(name)

    def block_value(self, x, name):
        block = self.block(name)
        values = np.asarray(x)[block.slice]
        if block.cone == ConeEnum.PSD:
            return smat(values, block.size)
        return values

    def evaluate_objective(self, x):
        return float(self.c.dot(x)) + self.objective_constant

    def with_objective(self, c, objective_constant=0.0):
        """Copy sharing the constraint data."""
        return ConicProgram(
            self.name, self.blocks, self.A, self.b, c,
            objective_constant=objective_constant,
            row_families=self.row_families,
            structure_key=self.structure_key, source=self.source,
        )

    def residuals(self, x):
        """Recompute feasibility residuals of a primal point.

        Equality residual is scaled by max(1, |b|_inf); cone residuals
        by the magnitude of the block.
        """
        x = np.asarray(x, dtype=float)
        equality = 0.0
        if self.n_rows:
            scale = max(1.0, float(np.abs(self.b).max()))
            equality = float(np.abs(self.A.dot(x) - self.b).max()) / scale

        cone = 0.0
        for block in self.blocks:
            values = x[block.slice]
            if not values.size:
                continue
            magnitude = max(1.0, float(np.abs(values).max()))
            if block.cone == ConeEnum.ZERO:
                violation = float(np.abs(values).max())
            elif block.cone == ConeEnum.NONNEGATIVE:
                violation = max(0.0, -float(values.min()))
            elif block.cone == ConeEnum.SECOND_ORDER:
                violation = max(
                    0.0, float(np.linalg.norm(values[1:])) - values[0]
                )
            elif block.cone == ConeEnum.PSD:
                eigenvalues = np.linalg.eigvalsh(smat(values, block.size))
                magnitude = max(1.0, float(np.abs(eigenvalues).max()))
                violation = max(0.0, -float(eigenvalues.min()))
            else:
                violation = 0.0
            cone = max(cone, violation / magnitude)
        return ConicResiduals(equality, cone)

    def __repr__(self):
        return "ConicProgram({}, rows={}, variables={}, cones={})".format(
            self.name, self.n_rows, self.n_variables,
            sorted(cone.value for cone in self.cones)
        )


class ConicSolution:
    def __init__(
        self, status, program, primal=None, dual=None, iterations=0,
        wall_time=0.0, stage=None, message="", certificate=None
    ):
        self.status = status
        self.program = program
        self.primal = primal
        self.dual = dual
        self.iterations = iterations
        self.wall_time = wall_time
        self.stage = stage
        self.message = message
        self.certificate = certificate
        self.residuals = None
        self.objective = None
        if primal is not None:
            self.objective = program.evaluate_objective(primal)
            self.residuals = program.residuals(primal)

    @property
    def is_usable(self):
        return (
            self.status in (ConicStatusEnum.OPTIMAL, ConicStatusEnum.INACCURATE)
            and self.primal is not None
        )

    def value(self, name):
        return self.program.block_value(self.primal, name)

    def __repr__(self):
        return "ConicSolution({}, objective={}, {})".format(
            self.status.value, self.objective, self.residuals
        )


class ConicProgramBuilder:
    """Incrementally assemble a ConicProgram.

    Inequalities `a.x >= rhs` receive a slack in a trailing
    nonnegative block. Second-order rows receive their own block
    linked by equalities.
    """

    def __init__(self, name):
        self.name = name
        self._blocks = []
        self._offset = 0
        self._rows = []
        self._cols = []
        self._vals = []
        self._rhs = []
        self._families = []
        self._slack_rows = []
        self._objective = {}
        self._objective_constant = 0.0
        self._soc_count = 0

    @property
    def n_columns(self):
        return self._offset

    @property
    def n_rows(self):
        return len(self._rhs)

    def add_block(self, name, cone, size):
        block = VariableBlock(name, cone, size, self._offset)
        self._blocks.append(block)
        self._offset += block.dim
        return block

    def block(self, name):
        for block in self._blocks:
            if block.name == name:
                return block
        raise KeyError(name)

    def _append(self, matrix, rhs, family, col_offset):
        coo = sparse.coo_matrix(matrix)
        rhs = np.atleast_1d(np.asarray(rhs, dtype=float))
        if coo.shape[0] != rhs.shape[0]:
            raise exceptions.DimensionMismatchError(
                "{} rows but {} right-hand sides".format(
                    coo.shape[0], rhs.shape[0]
                )
            )
        if col_offset + coo.shape[1] > self._offset:
            raise exceptions.DimensionMismatchError(
                "Rows reach column {} but only {} columns exist".format(
                    col_offset + coo.shape[1], self._offset
                )
            )
        first = self.n_rows
        self._rows.append(coo.row + first)
        self._cols.append(coo.col + col_offset)
        self._vals.append(coo.data.astype(float))
        self._rhs.extend(rhs.tolist())
        self._families.extend([family] * rhs.shape[0])
        return np.arange(first, first + rhs.shape[0])

    def add_equalities(self, matrix, rhs, family, col_offset=0):
        return self._append(matrix, rhs, family, col_offset)

    def add_inequalities(self, matrix, rhs, family, col_offset=0):
        """Rows matrix . x >= rhs."""
        rows = self._append(matrix, rhs, family, col_offset)
        self._slack_rows.extend(rows.tolist())
        return rows

    def add_soc(self, head, head_const, tail, tail_const, family,
                col_offset=0):
        """|| tail . x + tail_const || <= head . x + head_const."""
        if not sparse.issparse(head):
            head = np.atleast_2d(np.asarray(head, dtype=float))
        head = sparse.csr_matrix(head)
        tail = sparse.csr_matrix(tail)
        tail_const = np.asarray(tail_const, dtype=float).reshape(-1)
        dim = 1 + tail.shape[0]

        block = self.add_block(
            "soc_{}".format(self._soc_count), ConeEnum.SECOND_ORDER, dim
        )
        self._soc_count += 1

        linked = sparse.vstack([head, tail]).tocsr()
        link_rhs = np.concatenate([[float(head_const)], tail_const])
        # v - linked . x = const
        self._append(
            sparse.identity(dim, format="csr"), link_rhs, family,
            col_offset=block.offset,
        )
        first = self.n_rows - dim
        coo = sparse.coo_matrix(-linked)
        self._rows.append(coo.row + first)
        self._cols.append(coo.col + col_offset)
        self._vals.append(coo.data.astype(float))
        return block

    def fix_block(self, name, values, family):
        block = self.block(name)
        values = np.asarray(values, dtype=float).reshape(-1)
        return self.add_equalities(
            sparse.identity(block.dim, format="csr"), values, family,
            col_offset=block.offset,
        )

    def set_objective(self, vector, constant=0.0, col_offset=0):
        vector = np.asarray(vector, dtype=float).reshape(-1)
        for position in np.flatnonzero(vector):
            key = int(position) + col_offset
            self._objective[key] = self._objective.get(key, 0.0) + \
                float(vector[position])
        self._objective_constant += float(constant)

    def build(self, structure_key=None, source=None):
        blocks = list(self._blocks)
        rows = list(self._rows)
        cols = list(self._cols)
        vals = list(self._vals)
        n_columns = self._offset

        if self._slack_rows:
            slack = VariableBlock(
                "slack", ConeEnum.NONNEGATIVE, len(self._slack_rows),
                n_columns,
            )
            blocks.append(slack)
            rows.append(np.asarray(self._slack_rows))
            cols.append(np.arange(len(self._slack_rows)) + n_columns)
            vals.append(-np.ones(len(self._slack_rows)))
            n_columns += slack.dim

        if rows:
            A = sparse.coo_matrix(
                (np.concatenate(vals),
                 (np.concatenate(rows), np.concatenate(cols))),
                shape=(self.n_rows, n_columns),
            ).tocsr()
        else:
            A = sparse.csr_matrix((0, n_columns))
        A.sum_duplicates()

        c = np.zeros(n_columns)
        for key, value in self._objective.items():
            c[key] = value

        return ConicProgram(
            self.name, blocks, A, np.asarray(self._rhs, dtype=float), c,
            objective_constant=self._objective_constant,
            row_families=self._families, structure_key=structure_key,
            source=source,
        )

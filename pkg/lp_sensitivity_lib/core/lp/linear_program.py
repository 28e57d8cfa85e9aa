import math
from collections import namedtuple

import numpy as np

from ... import exceptions
from ...enums import ConversionStepEnum, RowSenseEnum
from ...logger import logger
from ..utils import as_matrix, as_vector

ConversionStep = namedtuple(
    "ConversionStep", ["kind", "target", "columns", "rows"]
)


class Conversion:
    """Provenance of a general-form to standard-form conversion.

    row_map[i] is the standard row carrying general row i;
    column_map[j] lists (standard column, sign) pairs whose signed sum
    is general variable j.
    """

    def __init__(self, row_map, column_map, steps, row_names, variable_names):
        self.row_map = list(row_map)
        self.column_map = [list(pairs) for pairs in column_map]
        self.steps = list(steps)
        self.row_names = list(row_names)
        self.variable_names = list(variable_names)

    @classmethod
    def identity(cls, m, n, row_names=None, variable_names=None):
        return cls(
            range(m), [[(j, 1.0)] for j in range(n)], [],
            row_names or ["r{}".format(i) for i in range(m)],
            variable_names or ["x{}".format(j) for j in range(n)],
        )

    def rhs_map(self, general_rows, m):
        """m x len(general_rows) matrix sending perturbations of the named
        general rows to standard right-hand-side coordinates."""
        matrix = np.zeros((m, len(general_rows)))
        for k, row in enumerate(general_rows):
            matrix[self.row_map[row], k] = 1.0
        return matrix

    def objective_map(self, general_columns, n):
        """n x len(general_columns) matrix for objective perturbations."""
        matrix = np.zeros((n, len(general_columns)))
        for k, column in enumerate(general_columns):
            for std_column, sign in self.column_map[column]:
                matrix[std_column, k] = sign
        return matrix

    def general_x(self, x):
        x = np.asarray(x, dtype=float)
        return np.array([
            sum(sign * x[column] for column, sign in pairs)
            for pairs in self.column_map
        ])


class LinearProgram:
    """Nominal standard-form data: min c_hat.x + offset, A x = b_hat, x >= 0.

    Immutable after construction.
    """

    def __init__(
        self, A, b_hat, c_hat, row_names=None, col_names=None, offset=0.0,
        conversion=None, name="lp"
    ):
        A = as_matrix(A, name="A")
        m, n = A.shape
        if m < 1 or n < 1:
            raise exceptions.DimensionMismatchError(
                "Standard form needs m >= 1 and n >= 1, got {}x{}".format(m, n)
            )
        zero_rows = np.flatnonzero(~np.any(A != 0.0, axis=1))
        if zero_rows.size:
            label = row_names[zero_rows[0]] if row_names else zero_rows[0]
            raise exceptions.DegenerateRowError(
                "Constraint row {} is all zero".format(label), label
            )

        self.name = name
        self._A = A
        self._A.setflags(write=False)
        self.b_hat = as_vector(b_hat, m, "b_hat")
        self.b_hat.setflags(write=False)
        self.c_hat = as_vector(c_hat, n, "c_hat")
        self.c_hat.setflags(write=False)
        self.row_names = list(row_names or ["r{}".format(i) for i in range(m)])
        self.col_names = list(col_names or ["x{}".format(j) for j in range(n)])
        self.offset = float(offset)
        self.conversion = conversion or Conversion.identity(
            m, n, self.row_names, self.col_names
        )

    @property
    def A(self):
        return self._A

    @property
    def m(self):
        return self._A.shape[0]

    @property
    def n(self):
        return self._A.shape[1]

    @property
    def conversion_log(self):
        return self.conversion.steps

    def __repr__(self):
        return "LinearProgram({}, m={}, n={}, steps={})".format(
            self.name, self.m, self.n, len(self.conversion_log)
        )


class _Standardizer:
    def __init__(self, general_lp):
        self.general_lp = general_lp
        self.col_names = []
        self.column_map = []
        self.bound_rows = []
        self.steps = []

    def _column(self, name):
        self.col_names.append(name)
        return len(self.col_names) - 1

    def _bound(self, coefficients, sense, rhs, name, kind, target):
        self.bound_rows.append((coefficients, sense, rhs, name))
        self.steps.append(ConversionStep(
            kind, target, tuple(sorted(coefficients)), (name,)
        ))

    def map_variables(self):
        for variable in self.general_lp.variables:
            lower, upper, name = variable.lower, variable.upper, variable.name
            if lower >= 0.0:
                column = self._column(name)
                self.column_map.append([(column, 1.0)])
                if lower > 0.0:
                    self._bound(
                        {column: 1.0}, RowSenseEnum.GREATER_EQUAL, lower,
                        "{}_lb".format(name),
                        ConversionStepEnum.LOWER_BOUND_ROW, name,
                    )
                if upper < math.inf:
                    self._bound(
                        {column: 1.0}, RowSenseEnum.LESS_EQUAL, upper,
                        "{}_ub".format(name),
                        ConversionStepEnum.UPPER_BOUND_ROW, name,
                    )
                continue

            plus = self._column("{}_pos".format(name))
            minus = self._column("{}_neg".format(name))
            self.column_map.append([(plus, 1.0), (minus, -1.0)])
            self.steps.append(ConversionStep(
                ConversionStepEnum.SPLIT, name, (plus, minus), ()
            ))
            if lower > -math.inf:
                # bound each part so the split adds no recession direction
                self._bound(
                    {minus: 1.0}, RowSenseEnum.LESS_EQUAL, -lower,
                    "{}_lb".format(name),
                    ConversionStepEnum.LOWER_BOUND_ROW, name,
                )
                if upper < math.inf and upper >= 0.0:
                    self._bound(
                        {plus: 1.0}, RowSenseEnum.LESS_EQUAL, upper,
                        "{}_ub".format(name),
                        ConversionStepEnum.UPPER_BOUND_ROW, name,
                    )
                elif upper < math.inf:
                    self._bound(
                        {plus: 1.0, minus: -1.0}, RowSenseEnum.LESS_EQUAL,
                        upper, "{}_ub".format(name),
                        ConversionStepEnum.UPPER_BOUND_ROW, name,
                    )
            elif upper < math.inf:
                self._bound(
                    {plus: 1.0, minus: -1.0}, RowSenseEnum.LESS_EQUAL, upper,
                    "{}_ub".format(name),
                    ConversionStepEnum.UPPER_BOUND_ROW, name,
                )

    def rows(self):
        rows = []
        for row in self.general_lp.rows:
            coefficients = {}
            for variable_name, value in row.coefficients.items():
                j = self.general_lp.variable_index(variable_name)
                for column, sign in self.column_map[j]:
                    coefficients[column] = coefficients.get(column, 0.0) + \
                        sign * float(value)
            rows.append((coefficients, row.sense, row.rhs, row.name))
        return rows + self.bound_rows

    def build(self):
        self.map_variables()
        rows = self.rows()

        slack_of = {}
        for i, (_, sense, _, row_name) in enumerate(rows):
            if sense == RowSenseEnum.EQUAL:
                continue
            slack_of[i] = self._column("{}_slack".format(row_name))
            self.steps.append(ConversionStep(
                ConversionStepEnum.SLACK, row_name, (slack_of[i],), (row_name,)
            ))

        m, n = len(rows), len(self.col_names)
        A = np.zeros((m, n))
        b = np.zeros(m)
        for i, (coefficients, sense, rhs, _) in enumerate(rows):
            for column, value in coefficients.items():
                A[i, column] = value
            if sense == RowSenseEnum.LESS_EQUAL:
                A[i, slack_of[i]] = 1.0
            elif sense == RowSenseEnum.GREATER_EQUAL:
                A[i, slack_of[i]] = -1.0
            b[i] = rhs

        c = np.zeros(n)
        general_cost = self.general_lp.cost()
        for j, pairs in enumerate(self.column_map):
            for column, sign in pairs:
                c[column] += sign * general_cost[j]

        conversion = Conversion(
            range(self.general_lp.n_rows), self.column_map, self.steps,
            self.general_lp.row_names, self.general_lp.variable_names,
        )
        return LinearProgram(
            A, b, c, row_names=[row[3] for row in rows],
            col_names=self.col_names,
            offset=self.general_lp.objective_constant,
            conversion=conversion, name=self.general_lp.name,
        )


def standardize(general_lp):
    """Convert a GeneralFormLp into an equality-only x >= 0 program.

    Variables are never shifted: nonnegative variables keep their
    column, positive lower bounds and finite upper bounds become rows,
    and variables allowed below zero are split into two nonnegative
    parts. Inequality rows receive slacks. General rows keep their
    index, bound rows follow.

    Args:
        general_lp (GeneralFormLp)

    Returns:
        LinearProgram: with conversion_log listing every step
    """
    lp = _Standardizer(general_lp).build()
    logger.info("Standardized {}: {}x{} with {} conversion steps".format(
        general_lp.name, lp.m, lp.n, len(lp.conversion_log)
    ))
    return lp

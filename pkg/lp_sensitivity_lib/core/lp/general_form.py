import math

import numpy as np

from ... import exceptions
from ...enums import RowSenseEnum


class LpVariable:
    def __init__(self, name, lower=0.0, upper=math.inf):
        self.name = name
        self.lower = -math.inf if lower is None else float(lower)
        self.upper = math.inf if upper is None else float(upper)

    @property
    def is_free(self):
        return self.lower == -math.inf and self.upper == math.inf

    def __repr__(self):
        return "LpVariable({}, [{}, {}])".format(
            self.name, self.lower, self.upper
        )


class LpRow:
    def __init__(self, name, coefficients, sense, rhs):
        self.name = name
        self.coefficients = dict(coefficients)
        self.sense = RowSenseEnum(sense)
        self.rhs = float(rhs)

    def __repr__(self):
        return "LpRow({}, {} {})".format(
            self.name, self.sense.value, self.rhs
        )


class GeneralFormLp:
    """min c.x + constant over rows (<=, =, >=) and variable bounds.

    Variables with lower=None (or -inf) are free from below.
    """

    def __init__(
        self, variables, rows, objective, objective_constant=0.0,
        name="lp"
    ):
        self.name = name
        self.variables = list(variables)
        self.rows = list(rows)
        self.objective = dict(objective)
        self.objective_constant = float(objective_constant)
        self._validate()

    def _validate(self):
        names = [variable.name for variable in self.variables]
        if not names or not self.rows:
            raise exceptions.DimensionMismatchError(
                "{} needs at least one variable and one row".format(self.name)
            )
        if len(set(names)) != len(names):
            raise exceptions.InstanceSchemaError(
                "Duplicate variable names in {}".format(self.name)
            )
        row_names = [row.name for row in self.rows]
        if len(set(row_names)) != len(row_names):
            raise exceptions.InstanceSchemaError(
                "Duplicate row names in {}".format(self.name)
            )

        known = set(names)
        for variable in self.variables:
            if math.isnan(variable.lower) or math.isnan(variable.upper):
                raise exceptions.NonFiniteDataError(
                    "Variable {} has NaN bounds".format(variable.name)
                )
            if variable.lower > variable.upper:
                raise exceptions.InconsistentBoundsError(
                    "Variable {} has lower bound {} above upper bound {}".format(
                        variable.name, variable.lower, variable.upper
                    ),
                    variable.name,
                )
        for row in self.rows:
            unknown = set(row.coefficients) - known
            if unknown:
                raise exceptions.UnknownTargetError(
                    "Row {} references unknown variables {}".format(
                        row.name, sorted(unknown)
                    ),
                    sorted(unknown),
                )
            values = list(row.coefficients.values()) + [row.rhs]
            if not all(math.isfinite(value) for value in values):
                raise exceptions.NonFiniteDataError(
                    "Row {} has non-finite data".format(row.name)
                )
        unknown = set(self.objective) - known
        if unknown:
            raise exceptions.UnknownTargetError(
                "Objective references unknown variables {}".format(
                    sorted(unknown)
                ),
                sorted(unknown),
            )
        if not all(math.isfinite(value) for value in self.objective.values()):
            raise exceptions.NonFiniteDataError("Objective is not finite")

    @property
    def n_variables(self):
        return len(self.variables)

    @property
    def n_rows(self):
        return len(self.rows)

    @property
    def variable_names(self):
        return [variable.name for variable in self.variables]

    @property
    def row_names(self):
        return [row.name for row in self.rows]

    def variable_index(self, name):
        return self.variable_names.index(name)

    def row_index(self, name):
        return self.row_names.index(name)

    def matrix(self):
        index = dict((name, j) for j, name in enumerate(self.variable_names))
        A = np.zeros((self.n_rows, self.n_variables))
        for i, row in enumerate(self.rows):
            for name, value in row.coefficients.items():
                A[i, index[name]] = float(value)
        return A

    def rhs(self):
        return np.array([row.rhs for row in self.rows])

    def cost(self):
        return np.array([
            float(self.objective.get(name, 0.0))
            for name in self.variable_names
        ])

    def __repr__(self):
        return "GeneralFormLp({}, rows={}, variables={})".format(
            self.name, self.n_rows, self.n_variables
        )

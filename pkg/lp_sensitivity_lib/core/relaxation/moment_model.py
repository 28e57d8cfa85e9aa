from collections import OrderedDict
from itertools import count

import numpy as np
from scipy import sparse

from ... import exceptions
from ...constants import REDUCED_ROW_TOL
from ...enums import ConeEnum, ConstraintFamilyEnum, SenseEnum
from ...logger import logger
from ..conic_backend import ConicProgramBuilder, smat, svec, svec_dim
from ..environment import ExecutionEnvironment
from ..lp import solve_perturbed
from .forms import (anchor_form, forms_matrix, linear_form, matrix_form,
                    pair_form, sparse_vector)
from .reduction import nullspace_reduction
from .rows import FormFamily, collect_homogeneous_rows, gen_rlt, gen_soc_rlt

_model_ids = count()

# E z = f and diag(E Z E^T) = f * f hold for every reduced matrix
_BUILT_IN = (ConstraintFamilyEnum.BASE_EQUALITY, ConstraintFamilyEnum.DIAG_EZE)


class RelaxationOptions:
    def __init__(self, use_complementarity=True, rlt=True, soc_rlt=True):
        self.use_complementarity = use_complementarity
        self.rlt = rlt
        self.soc_rlt = soc_rlt

    @property
    def flags(self):
        return (self.use_complementarity, self.rlt, self.soc_rlt)

    def __repr__(self):
        return (
            "RelaxationOptions(complementarity={}, rlt={}, soc_rlt={})"
        ).format(*self.flags)


class MomentModel:
    """Constraint registry of the lifted program over M = [[1, z^T], [z, Z]].

    Every family is stored as sparse forms over svec(M), so the same
    registry checks arbitrary moment matrices. The emitted ConicProgram
    works on the reduced matrix of `reduction`; its solutions are mapped
    back with `moment_values`.
    """

    def __init__(self, qp, options):
        self.qp = qp
        self.options = options
        self.side = qp.N + 1
        self.dim = svec_dim(self.side)
        self.families = OrderedDict()
        self.objective = None
        self.reduction = None
        self._uid = next(_model_ids)

    def family(self, family, kind):
        key = (family, kind)
        if key not in self.families:
            self.families[key] = FormFamily(family, kind)
        return self.families[key]

    def rows(self, family, kind=None):
        for (name, rows_kind), rows in self.families.items():
            if name == family and kind in (None, rows_kind):
                return rows
        return None

    def moment(self, z):
        """svec of the rank-one moment matrix of z."""
        vector = np.concatenate([[1.0], np.asarray(z, dtype=float)])
        return svec(np.outer(vector, vector))

    def extract_z(self, values):
        return smat(values, self.side)[0, 1:]

    def extract_Z(self, values):
        return smat(values, self.side)[1:, 1:]

    def internal_value(self, values):
        """W . Z + 2 w_lin . z at svec(M) = values."""
        indices, coefficients = self.objective
        return float(coefficients.dot(np.asarray(values)[indices]))

    def counts(self):
        result = OrderedDict()
        for (family, _), rows in self.families.items():
            result[family.value] = result.get(family.value, 0) + len(rows)
        return result

    def violations(self, values):
        """Largest violation per family at svec(M) = values."""
        values = np.asarray(values, dtype=float)
        result = OrderedDict()
        for (family, _), rows in self.families.items():
            worst = 0.0
            if rows.kind == "soc":
                for head, tail in rows.cones:
                    head_value = head[1].dot(values[head[0]])
                    tail_value = np.linalg.norm([
                        form[1].dot(values[form[0]]) for form in tail
                    ])
                    worst = max(worst, tail_value - head_value)
            elif rows.forms:
                lhs = forms_matrix(rows.forms, self.dim).dot(values)
                rhs = np.asarray(rows.rhs)
                if rows.kind == "eq":
                    worst = float(np.abs(lhs - rhs).max())
                else:
                    worst = max(0.0, float((rhs - lhs).max()))
            result[family.value] = max(result.get(family.value, 0.0), worst)
        return result

    def _reduced_rows(self, rows):
        """Reduced and row-scaled linear rows; constant rows that hold at
        M00 = 1 are dropped."""
        matrix, rhs = [], []
        anchor = rows.family == ConstraintFamilyEnum.MOMENT_ANCHOR
        for form, value in zip(rows.forms, rows.rhs):
            row = self.reduction.form(form)
            size = max(1.0, abs(row[0]), abs(value))
            if not anchor and \
                    np.abs(row[1:]).max(initial=0.0) <= REDUCED_ROW_TOL * size:
                slack = row[0] - value
                holds = abs(slack) if rows.kind == "eq" else -slack
                if holds <= REDUCED_ROW_TOL * size:
                    continue
            scale = max(float(np.abs(row).max()), abs(value))
            if scale == 0.0:
                continue
            matrix.append(row / scale)
            rhs.append(value / scale)
        return matrix, rhs

    def program(self):
        """ConicProgram over the reduced moment matrix.

        E z = f and diag(E Z E^T) = f * f are carried by the reduction
        and not emitted; every other row is scaled to unit size.
        """
        reduction = self.reduction
        builder = ConicProgramBuilder("{}_{}_relaxation".format(
            self.qp.lp.name, self.qp.sense.value
        ))
        builder.add_block("M", ConeEnum.PSD, reduction.side)
        for (family, _), rows in self.families.items():
            if family in _BUILT_IN:
                continue
            if rows.kind == "soc":
                for head, tail in rows.cones:
                    head_row = reduction.form(head)
                    tail_rows = np.array([reduction.form(form) for form in tail])
                    scale = max(
                        float(np.abs(head_row).max()),
                        float(np.abs(tail_rows).max(initial=0.0)),
                    )
                    if scale == 0.0:
                        continue
                    builder.add_soc(
                        head_row[None, :] / scale, 0.0, tail_rows / scale,
                        np.zeros(len(tail)), family,
                    )
                continue
            matrix, rhs = self._reduced_rows(rows)
            if not matrix:
                continue
            if rows.kind == "eq":
                builder.add_equalities(np.array(matrix), rhs, family)
            else:
                builder.add_inequalities(np.array(matrix), rhs, family)

        objective = reduction.form(self.objective)
        size = float(np.abs(objective).max())
        builder.set_objective(objective / size if size > 0.0 else objective)
        return builder.build(
            structure_key=("relaxation", self._uid), source=self
        )

    def __repr__(self):
        return "MomentModel(side={}, reduced={}, {})".format(
            self.side, self.reduction.side if self.reduction else None,
            dict(self.counts()),
        )


def _objective_form(qp):
    W = sparse.coo_matrix(qp.W)
    quadratic = matrix_form(W.row + 1, W.col + 1, W.data)
    linear = linear_form(sparse_vector(2.0 * qp.w_lin))
    indices = np.concatenate([quadratic[0], linear[0]])
    values = np.concatenate([quadratic[1], linear[1]])
    unique, inverse = np.unique(indices, return_inverse=True)
    summed = np.zeros(unique.shape[0])
    np.add.at(summed, inverse, values)
    return unique, summed


def _nominal_point(qp):
    """Nominal primal-dual optimum embedded at theta = 0, or None."""
    lp, uset = qp.lp, qp.uncertainty_set
    solution = solve_perturbed(lp, np.zeros(lp.m), np.zeros(lp.n))
    if not solution.is_optimal:
        return None
    return qp.embed(
        np.zeros(uset.k), np.zeros(uset.aux_count), solution.x, solution.y,
        solution.s,
    )


def build_model(qp, options=None):
    """Populate the constraint registry for qp.

    Raises:
        RelaxationTooLargeError: N above the relaxation size cap
    """
    options = options or RelaxationOptions()
    cap = ExecutionEnvironment().settings.relaxation_size_cap
    if qp.N > cap:
        raise exceptions.RelaxationTooLargeError(
            "Lifted dimension N={} exceeds the relaxation size cap {}; "
            "raise it with `lp-sensitivity settings set "
            "relaxation_size_cap <value>`".format(qp.N, cap),
            qp.N,
        )

    model = MomentModel(qp, options)
    anchor = model.family(ConstraintFamilyEnum.MOMENT_ANCHOR, "eq")
    anchor.add(anchor_form(), 1.0, "M00 == 1")

    E = sparse.csr_matrix(qp.E)
    base = model.family(ConstraintFamilyEnum.BASE_EQUALITY, "eq")
    diag = model.family(ConstraintFamilyEnum.DIAG_EZE, "eq")
    for r in range(E.shape[0]):
        start, end = E.indptr[r], E.indptr[r + 1]
        row = (E.indices[start:end], E.data[start:end])
        base.add(linear_form(row), qp.f[r], "E[{}] z == f".format(r))
        diag.add(pair_form(row, row), qp.f[r] ** 2,
                 "E[{}] Z E[{}]^T == f^2".format(r, r))

    rows = collect_homogeneous_rows(qp)
    membership = model.family(ConstraintFamilyEnum.CONE_MEMBERSHIP, "ge")
    for row in rows.linear:
        membership.add(linear_form(row.vector), 0.0, row.label)
    if rows.soc:
        conic = model.family(ConstraintFamilyEnum.CONE_MEMBERSHIP, "soc")
        for cone in rows.soc:
            conic.add_cone(
                linear_form(cone.head),
                [linear_form(tail) for tail in cone.tail], cone.label,
            )
        if options.soc_rlt:
            model.families[(ConstraintFamilyEnum.SOC_RLT, "soc")] = \
                gen_soc_rlt(rows, ConstraintFamilyEnum.SOC_RLT)

    products = []
    if options.use_complementarity:
        for i_x, i_s in qp.complementarity_pairs:
            products.append(pair_form(
                (np.array([i_x]), np.array([1.0])),
                (np.array([i_s]), np.array([1.0])),
            ))

    if options.rlt:
        # x_i s_i >= 0 is implied by x_i s_i == 0
        model.families[(ConstraintFamilyEnum.RLT, "ge")] = gen_rlt(
            rows, ConstraintFamilyEnum.RLT, implied=products
        )

    if products:
        complementarity = model.family(
            ConstraintFamilyEnum.COMPLEMENTARITY, "eq"
        )
        for i, form in enumerate(products):
            complementarity.add(form, 0.0, "x[{0}] s[{0}] == 0".format(i))

    model.objective = _objective_form(qp)
    model.reduction = nullspace_reduction(qp.E, qp.f, _nominal_point(qp))
    logger.info("Relaxation model for {} {}: N={}, reduced side={}, {}".format(
        qp.lp.name, qp.sense.value, qp.N, model.reduction.side,
        dict(model.counts())
    ))
    return model


def build_relaxation(qp, options=None):
    """Conic relaxation of a GeneralQp over the PSD moment matrix.

    Args:
        qp (GeneralQp)
        options (RelaxationOptions)

    Returns:
        ConicProgram: its `source` is the MomentModel
    """
    return build_model(qp, options).program()


def moment_values(solution):
    """svec of the full moment matrix [[1, z^T], [z, Z]] of a relaxation
    solution."""
    model = solution.program.source
    reduced = np.asarray(solution.primal)[:model.reduction.dim]
    return model.reduction.lift(reduced)


def extract_bound(solution, sense=None):
    """Relaxation bound in reported units (sign restored, offset added)."""
    model = solution.program.source
    sense = SenseEnum(sense) if sense is not None else model.qp.sense
    sign = 1.0 if sense == SenseEnum.BEST_CASE else -1.0
    return sign * model.internal_value(moment_values(solution)) + \
        model.qp.lp.offset


def extract_z(solution):
    """z part of the relaxation solution; E z = f holds exactly."""
    model = solution.program.source
    return model.extract_z(moment_values(solution))

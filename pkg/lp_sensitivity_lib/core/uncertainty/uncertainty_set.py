import math
from itertools import count

import numpy as np
from scipy import sparse

from ... import exceptions
from ...enums import (ConeEnum, ConstraintFamilyEnum, NormEnum,
                      PerturbationTargetEnum)
from ...logger import logger
from ..conic_backend import ConicProgramBuilder
from ..environment import ExecutionEnvironment
from ..utils import as_matrix, as_vector

_set_ids = count()


class SocBlock:
    """|| d - C u || <= beta - a.u over the lifted parameters u."""

    def __init__(self, C, d, a, beta, label="soc"):
        self.C = as_matrix(C, name="C")
        self.d = as_vector(d, self.C.shape[0], "d")
        self.a = as_vector(a, self.C.shape[1], "a")
        self.beta = float(beta)
        self.label = label

    @property
    def dim(self):
        return self.C.shape[1]

    def violation(self, u):
        u = np.asarray(u, dtype=float)
        return float(
            np.linalg.norm(self.d - self.C.dot(u))
            - (self.beta - self.a.dot(u))
        )

    def relocated(self, positions, dim):
        return SocBlock(
            _relocate(self.C, positions, dim), self.d,
            _relocate(self.a[None, :], positions, dim)[0], self.beta,
            self.label,
        )


def _relocate(matrix, positions, dim):
    """Copy columns of matrix to the given positions of a wider matrix."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    wide = np.zeros((matrix.shape[0], dim))
    if matrix.shape[1]:
        wide[:, np.asarray(positions, dtype=int)] = matrix
    return wide


def _empty_rows(dim):
    return np.zeros((0, dim)), np.zeros(0)


def _stack(rows, width):
    if not rows:
        return np.zeros((0, width))
    return np.array(rows, dtype=float)


class UncertaintySet:
    """Lifted description of the perturbation set.

    Parameters u = (theta_b, theta_c, w) act on the data through
    b = map_b theta_b and c = map_c theta_c; w are auxiliary lifting
    variables. Rows:

        G_eq u == g_eq
        G_in u <= g_in
        || d - C u || <= beta - a.u  for every SocBlock

    Construction validates that zero belongs to the set and that every
    coordinate of u is bounded, unless validate=False.
    """

    def __init__(
        self, map_b, map_c, aux_count=0, G_eq=None, g_eq=None, G_in=None,
        g_in=None, soc_blocks=(), eq_labels=None, in_labels=None,
        name="U", validate=True
    ):
        self.name = name
        self.map_b = as_matrix(map_b, name="map_b")
        self.map_c = as_matrix(map_c, name="map_c")
        self.aux_count = int(aux_count)
        dim = self.dim

        if G_eq is None:
            G_eq, g_eq = _empty_rows(dim)
        if G_in is None:
            G_in, g_in = _empty_rows(dim)
        self.G_eq = as_matrix(G_eq, (None, dim), "G_eq")
        self.g_eq = as_vector(g_eq, self.G_eq.shape[0], "g_eq")
        self.G_in = as_matrix(G_in, (None, dim), "G_in")
        self.g_in = as_vector(g_in, self.G_in.shape[0], "g_in")
        self.soc_blocks = list(soc_blocks)
        for block in self.soc_blocks:
            if block.dim != dim:
                raise exceptions.DimensionMismatchError(
                    "SOC block {} spans {} columns, expected {}".format(
                        block.label, block.dim, dim
                    )
                )
        self.eq_labels = list(eq_labels or [
            "eq{}".format(i) for i in range(self.G_eq.shape[0])
        ])
        self.in_labels = list(in_labels or [
            "in{}".format(i) for i in range(self.G_in.shape[0])
        ])
        self._uid = next(_set_ids)
        self._parameter_ranges = None

        if validate:
            self.validate()

    @property
    def k_b(self):
        return self.map_b.shape[1]

    @property
    def k_c(self):
        return self.map_c.shape[1]

    @property
    def k(self):
        return self.k_b + self.k_c

    @property
    def dim(self):
        return self.k + self.aux_count

    @property
    def m(self):
        return self.map_b.shape[0]

    @property
    def n(self):
        return self.map_c.shape[0]

    @property
    def is_polytopal(self):
        return not self.soc_blocks

    @property
    def is_singleton_zero(self):
        tol = ExecutionEnvironment().settings.feas_tol
        ranges = self.parameter_ranges[:self.k]
        return bool(np.all(np.abs(ranges) <= tol))

    def split(self, u):
        u = np.asarray(u, dtype=float)
        return u[:self.k_b], u[self.k_b:self.k], u[self.k:]

    def perturbation(self, theta):
        """(b, c) for parameters theta (length k or dim)."""
        theta = np.asarray(theta, dtype=float)
        theta_b, theta_c = theta[:self.k_b], theta[self.k_b:self.k]
        return self.map_b.dot(theta_b), self.map_c.dot(theta_c)

    def row_violations(self, u):
        """(label, violation) for every row, positive when violated."""
        u = as_vector(u, self.dim, "u")
        violations = []
        for label, value in zip(
            self.eq_labels, np.abs(self.G_eq.dot(u) - self.g_eq)
        ):
            violations.append((label, float(value)))
        for label, value in zip(self.in_labels, self.G_in.dot(u) - self.g_in):
            violations.append((label, float(value)))
        for block in self.soc_blocks:
            violations.append((block.label, block.violation(u)))
        return violations

    def residual(self, u):
        values = [value for _, value in self.row_violations(u)]
        return max([0.0] + values)

    def conform(self, m, n):
        """Copy whose empty maps are resized to the program dimensions."""
        map_b, map_c = self.map_b, self.map_c
        if self.k_b == 0:
            map_b = np.zeros((m, 0))
        if self.k_c == 0:
            map_c = np.zeros((n, 0))
        if map_b.shape[0] != m or map_c.shape[0] != n:
            raise exceptions.DimensionMismatchError(
                "{} maps into ({}, {}) but the program has m={}, n={}".format(
                    self.name, map_b.shape[0], map_c.shape[0], m, n
                )
            )
        if map_b is self.map_b and map_c is self.map_c:
            return self
        conformed = self._replace(map_b=map_b, map_c=map_c, validate=False)
        conformed._parameter_ranges = self._parameter_ranges
        return conformed

    def _replace(self, **kwargs):
        fields = dict(
            map_b=self.map_b, map_c=self.map_c, aux_count=self.aux_count,
            G_eq=self.G_eq, g_eq=self.g_eq, G_in=self.G_in, g_in=self.g_in,
            soc_blocks=self.soc_blocks, eq_labels=self.eq_labels,
            in_labels=self.in_labels, name=self.name,
        )
        fields.update(kwargs)
        return UncertaintySet(**fields)

    def add_rows(self, builder, col_offset, family, elastic_col=None):
        """Append the set rows to a ConicProgramBuilder.

        u must occupy `dim` contiguous columns starting at col_offset. When
        elastic_col is given, every row is relaxed by that nonnegative
        column.
        """
        dim = self.dim
        width = dim
        if elastic_col is not None:
            width = elastic_col - col_offset + 1

        def widen(matrix, elastic_sign):
            wide = np.zeros((matrix.shape[0], width))
            wide[:, :dim] = matrix
            if elastic_col is not None:
                wide[:, -1] = elastic_sign
            return sparse.csr_matrix(wide)

        if self.G_eq.shape[0]:
            if elastic_col is None:
                builder.add_equalities(
                    widen(self.G_eq, 0.0), self.g_eq, family, col_offset
                )
            else:
                builder.add_inequalities(
                    widen(self.G_eq, 1.0), self.g_eq, family, col_offset
                )
                builder.add_inequalities(
                    widen(-self.G_eq, 1.0), -self.g_eq, family, col_offset
                )
        if self.G_in.shape[0]:
            builder.add_inequalities(
                widen(-self.G_in, 1.0), -self.g_in, family, col_offset
            )
        for block in self.soc_blocks:
            builder.add_soc(
                widen(-block.a[None, :], 1.0), block.beta,
                widen(-block.C, 0.0), block.d, family, col_offset,
            )

    def _elastic_program(self, theta, name):
        """min e over w with theta fixed and every row relaxed by e."""
        builder = ConicProgramBuilder(name)
        u_block = builder.add_block("u", ConeEnum.FREE, self.dim)
        elastic = builder.add_block("e", ConeEnum.NONNEGATIVE, 1)
        self.add_rows(
            builder, u_block.offset, ConstraintFamilyEnum.ELASTIC,
            elastic_col=elastic.offset,
        )
        if self.k:
            builder.add_equalities(
                sparse.eye(self.k, self.dim), theta,
                ConstraintFamilyEnum.FIXED_BLOCK, u_block.offset,
            )
        builder.set_objective([1.0], col_offset=elastic.offset)
        return builder.build()

    def _elastic_solve(self, theta, name):
        program = self._elastic_program(theta, name)
        solution = ExecutionEnvironment().conic_backend.solve(program)
        if not solution.is_usable:
            raise exceptions.NumericalFailureError(
                "Elastic membership solve for {} ended {}".format(
                    self.name, solution.status.value
                ),
                solution.stage,
            )
        return max(0.0, solution.objective), solution.value("u")

    def membership(self, theta, tol=None):
        """True iff some w certifies theta against every row within tol.

        Args:
            theta (numpy.ndarray): parameters, length k (or dim to give w)
            tol (float): defaults to the feas_tol setting
        """
        if tol is None:
            tol = ExecutionEnvironment().settings.feas_tol
        theta = np.asarray(theta, dtype=float).reshape(-1)
        if theta.shape[0] == self.dim:
            return self.residual(theta) <= tol
        theta = as_vector(theta, self.k, "theta")
        if self.aux_count == 0:
            return self.residual(theta) <= tol
        elastic, _ = self._elastic_solve(theta, self.name + "_member")
        return elastic <= tol

    def lift(self, theta):
        """Full u = (theta, w) with w certifying theta."""
        theta = as_vector(theta, self.k, "theta")
        if self.aux_count == 0:
            return theta
        _, u = self._elastic_solve(theta, self.name + "_lift")
        return np.concatenate([theta, np.asarray(u)[self.k:]])

    def validate(self):
        """Check that zero is a member and that every coordinate is
        bounded; fills parameter_ranges."""
        tol = ExecutionEnvironment().settings.feas_tol
        zero = np.zeros(self.k)
        if self.aux_count == 0:
            u = np.zeros(self.dim)
            elastic = self.residual(u)
        else:
            elastic, u = self._elastic_solve(zero, self.name + "_zero")
        if elastic > tol:
            violated = [
                label for label, value in self.row_violations(u)
                if value > tol
            ]
            raise exceptions.ZeroNotContainedError(
                "{} does not contain the zero perturbation; "
                "violated rows: {}".format(self.name, ", ".join(violated)),
                violated,
            )
        self._parameter_ranges = self._compute_ranges()
        logger.info("Validated {}: k_b={}, k_c={}, aux={}".format(
            self.name, self.k_b, self.k_c, self.aux_count
        ))

    def _compute_ranges(self):
        if self.dim == 0:
            return np.zeros((0, 2))
        builder = ConicProgramBuilder(self.name + "_ranges")
        u_block = builder.add_block("u", ConeEnum.FREE, self.dim)
        self.add_rows(
            builder, u_block.offset, ConstraintFamilyEnum.RESTRICTED_SET
        )
        base = builder.build(structure_key=("ranges", self._uid))
        backend = ExecutionEnvironment().conic_backend

        ranges = np.zeros((self.dim, 2))
        for i in range(self.dim):
            for column, sign in ((0, 1.0), (1, -1.0)):
                c = np.zeros(base.n_variables)
                c[u_block.offset + i] = sign
                solution = backend.solve(base.with_objective(c))
                if not solution.is_usable:
                    raise exceptions.UnboundedUncertaintySetError(
                        "Coordinate {} of {} is not bounded ({})".format(
                            i, self.name, solution.status.value
                        ),
                        i,
                    )
                ranges[i, column] = sign * solution.objective
        return ranges

    @property
    def parameter_ranges(self):
        """dim x 2 array of coordinate-wise min/max over the set."""
        if self._parameter_ranges is None:
            self._parameter_ranges = self._compute_ranges()
        return self._parameter_ranges

    def __repr__(self):
        return (
            "UncertaintySet({}, k_b={}, k_c={}, aux={}, eq={}, in={}, soc={})"
        ).format(
            self.name, self.k_b, self.k_c, self.aux_count,
            self.G_eq.shape[0], self.G_in.shape[0], len(self.soc_blocks),
        )


def _default_maps(map_b, map_c, size_b, size_c):
    if map_b is None:
        map_b = np.eye(size_b) if size_b else np.zeros((0, 0))
    if map_c is None:
        map_c = np.eye(size_c) if size_c else np.zeros((0, 0))
    return as_matrix(map_b, name="map_b"), as_matrix(map_c, name="map_c")


def _coordinate_labels(prefix, labels, size):
    if labels is None:
        return ["{}[{}]".format(prefix, i) for i in range(size)]
    return list(labels)


def box(intervals_b, intervals_c, map_b=None, map_c=None, labels_b=None,
        labels_c=None, name="box", validate=True):
    """Interval per parameter; None leaves a parameter unconstrained and
    lo == hi pins it with an equality row.

    Args:
        intervals_b (list): (lo, hi) or None per right-hand-side parameter
        intervals_c (list): (lo, hi) or None per objective parameter
        map_b, map_c (numpy.ndarray): default to identities

    Returns:
        UncertaintySet
    """
    intervals = list(intervals_b or []) + list(intervals_c or [])
    map_b, map_c = _default_maps(
        map_b, map_c, len(intervals_b or []), len(intervals_c or [])
    )
    k = map_b.shape[1] + map_c.shape[1]
    if len(intervals) != k:
        raise exceptions.DimensionMismatchError(
            "{} intervals for {} parameters".format(len(intervals), k)
        )
    labels = (
        _coordinate_labels("b", labels_b, map_b.shape[1])
        + _coordinate_labels("c", labels_c, map_c.shape[1])
    )

    eq_rows, eq_rhs, eq_labels = [], [], []
    in_rows, in_rhs, in_labels = [], [], []
    for i, interval in enumerate(intervals):
        if interval is None:
            continue
        lo, hi = (
            -math.inf if interval[0] is None else float(interval[0]),
            math.inf if interval[1] is None else float(interval[1]),
        )
        if lo > hi:
            raise exceptions.InvalidSetParameterError(
                "Interval [{}, {}] on {} is empty".format(lo, hi, labels[i]),
                labels[i],
            )
        unit = np.zeros(k)
        unit[i] = 1.0
        if lo == hi:
            eq_rows.append(unit)
            eq_rhs.append(lo)
            eq_labels.append("{} == {}".format(labels[i], lo))
            continue
        if hi < math.inf:
            in_rows.append(unit)
            in_rhs.append(hi)
            in_labels.append("{} <= {}".format(labels[i], hi))
        if lo > -math.inf:
            in_rows.append(-unit)
            in_rhs.append(-lo)
            in_labels.append("{} >= {}".format(labels[i], lo))

    return UncertaintySet(
        map_b, map_c,
        G_eq=_stack(eq_rows, k), g_eq=eq_rhs,
        G_in=_stack(in_rows, k), g_in=in_rhs,
        eq_labels=eq_labels, in_labels=in_labels, name=name,
        validate=validate,
    )


def simplex_100pct(deltas_b, deltas_c, map_b=None, map_c=None, labels_b=None,
                   labels_c=None, name="simplex", validate=True):
    """The 100%-rule set: theta_i / delta_i >= 0 and the sum of the
    fractions theta_i / delta_i at most 1.

    Signed deltas give the direction of the allowed change; a zero delta
    pins the parameter and None leaves it out of the rule.
    """
    deltas = list(deltas_b or []) + list(deltas_c or [])
    map_b, map_c = _default_maps(
        map_b, map_c, len(deltas_b or []), len(deltas_c or [])
    )
    k = map_b.shape[1] + map_c.shape[1]
    if len(deltas) != k:
        raise exceptions.DimensionMismatchError(
            "{} deltas for {} parameters".format(len(deltas), k)
        )
    labels = (
        _coordinate_labels("b", labels_b, map_b.shape[1])
        + _coordinate_labels("c", labels_c, map_c.shape[1])
    )

    eq_rows, eq_labels = [], []
    in_rows, in_labels = [], []
    total = np.zeros(k)
    for i, delta in enumerate(deltas):
        if delta is None:
            continue
        unit = np.zeros(k)
        unit[i] = 1.0
        if float(delta) == 0.0:
            eq_rows.append(unit)
            eq_labels.append("{} == 0".format(labels[i]))
            continue
        in_rows.append(-unit / float(delta))
        in_labels.append("{} / {} >= 0".format(labels[i], delta))
        total[i] = 1.0 / float(delta)
    if np.any(total):
        in_rows.append(total)
        in_labels.append("sum of fractions <= 1")

    return UncertaintySet(
        map_b, map_c,
        G_eq=_stack(eq_rows, k), g_eq=np.zeros(len(eq_rows)),
        G_in=_stack(in_rows, k),
        g_in=[0.0] * (len(in_rows) - 1) + [1.0] if in_rows else [],
        eq_labels=eq_labels, in_labels=in_labels, name=name,
        validate=validate,
    )


def norm_ball(kind, radius, target, size=None, map_b=None, map_c=None,
              coordinates=None, name=None, validate=True):
    """{theta : ||theta_S|| <= radius} on one side of the perturbation.

    A 1-norm ball is lifted with one auxiliary variable per coordinate
    (|theta_i| <= w_i, sum w <= radius); a 2-norm ball is one SOC block.
    Radius zero pins the coordinates to zero.

    Args:
        kind (NormEnum)
        radius (float): must be nonnegative
        target (PerturbationTargetEnum): side carrying the ball
        size (int): parameter count when no maps are given
        map_b, map_c (numpy.ndarray): shared parameterization
        coordinates (list): indices of the target side inside the ball,
            all of them by default
    """
    kind = NormEnum(kind)
    target = PerturbationTargetEnum(target)
    if radius < 0 or not math.isfinite(radius):
        raise exceptions.InvalidSetParameterError(
            "Ball radius must be finite and nonnegative, got {}".format(
                radius
            )
        )
    if map_b is None and map_c is None:
        if size is None:
            raise exceptions.InvalidSetParameterError(
                "norm_ball needs either size or maps"
            )
        if target == PerturbationTargetEnum.RHS:
            map_b, map_c = np.eye(size), np.zeros((0, 0))
        else:
            map_b, map_c = np.zeros((0, 0)), np.eye(size)
    map_b, map_c = _default_maps(map_b, map_c, 0, 0)
    k_b, k_c = map_b.shape[1], map_c.shape[1]
    k = k_b + k_c
    first = 0 if target == PerturbationTargetEnum.RHS else k_b
    side = k_b if target == PerturbationTargetEnum.RHS else k_c
    if coordinates is None:
        coordinates = range(side)
    positions = [first + int(i) for i in coordinates]
    name = name or "{}_ball_{}".format(kind.value, target.value)

    if radius == 0.0:
        G_eq = np.zeros((len(positions), k))
        G_eq[np.arange(len(positions)), positions] = 1.0
        return UncertaintySet(
            map_b, map_c, G_eq=G_eq, g_eq=np.zeros(len(positions)),
            eq_labels=["{}[{}] == 0".format(target.value, p - first)
                       for p in positions],
            name=name, validate=validate,
        )

    if kind == NormEnum.TWO:
        C = np.zeros((len(positions), k))
        C[np.arange(len(positions)), positions] = 1.0
        block = SocBlock(
            C, np.zeros(len(positions)), np.zeros(k), radius,
            label="||{}|| <= {}".format(target.value, radius),
        )
        return UncertaintySet(
            map_b, map_c, soc_blocks=[block], name=name, validate=validate
        )

    aux = len(positions)
    dim = k + aux
    rows, labels = [], []
    for j, position in enumerate(positions):
        for sign in (1.0, -1.0):
            row = np.zeros(dim)
            row[position] = sign
            row[k + j] = -1.0
            rows.append(row)
            labels.append("|{}[{}]| <= w{}".format(
                target.value, position - first, j
            ))
    budget = np.zeros(dim)
    budget[k:] = 1.0
    rows.append(budget)
    labels.append("||{}||_1 <= {}".format(target.value, radius))
    return UncertaintySet(
        map_b, map_c, aux_count=aux, G_in=np.array(rows),
        g_in=[0.0] * (len(rows) - 1) + [float(radius)],
        in_labels=labels, name=name, validate=validate,
    )


def affine_image(Q, base, target, name=None, validate=True):
    """Push the target side of base through Q: map_target <- Q map_target."""
    target = PerturbationTargetEnum(target)
    Q = as_matrix(Q, name="Q")
    current = base.map_b if target == PerturbationTargetEnum.RHS \
        else base.map_c
    if Q.shape[1] != current.shape[0]:
        raise exceptions.InvalidSetParameterError(
            "Q has {} columns but {} maps into {} coordinates".format(
                Q.shape[1], base.name, current.shape[0]
            )
        )
    image = Q.dot(current)
    kwargs = {"name": name or "{}_image".format(base.name),
              "validate": validate}
    if target == PerturbationTargetEnum.RHS:
        kwargs["map_b"] = image
    else:
        kwargs["map_c"] = image
    return base._replace(**kwargs)


def intersect(first, second, name=None, validate=True):
    """Intersection in (b, c) space.

    Sets sharing their maps are intersected by stacking rows. Otherwise
    both parameter vectors are kept and linked by map_1 theta_1 ==
    map_2 theta_2.
    """
    name = name or "{}&{}".format(first.name, second.name)
    first_m = first.m if first.k_b else second.m
    first_n = first.n if first.k_c else second.n
    first = first.conform(first_m, first_n)
    second = second.conform(first_m, first_n)

    shared = (
        first.map_b.shape == second.map_b.shape
        and first.map_c.shape == second.map_c.shape
        and np.allclose(first.map_b, second.map_b)
        and np.allclose(first.map_c, second.map_c)
    )
    if shared:
        k = first.k
        dim = k + first.aux_count + second.aux_count
        first_pos = list(range(first.dim))
        second_pos = list(range(k)) + list(
            range(first.dim, first.dim + second.aux_count)
        )
        map_b, map_c = first.map_b, first.map_c
        link_rows = np.zeros((0, dim))
        link_labels = []
    else:
        kb1, kb2, kc1, kc2 = first.k_b, second.k_b, first.k_c, second.k_c
        k = kb1 + kb2 + kc1 + kc2
        dim = k + first.aux_count + second.aux_count
        first_pos = (
            list(range(kb1))
            + list(range(kb1 + kb2, kb1 + kb2 + kc1))
            + list(range(k, k + first.aux_count))
        )
        second_pos = (
            list(range(kb1, kb1 + kb2))
            + list(range(kb1 + kb2 + kc1, k))
            + list(range(k + first.aux_count, dim))
        )
        map_b = np.hstack([first.map_b, np.zeros((first.m, kb2))])
        map_c = np.hstack([first.map_c, np.zeros((first.n, kc2))])
        link_b = np.zeros((first.m, dim))
        link_b[:, :kb1] = first.map_b
        link_b[:, kb1:kb1 + kb2] = -second.map_b
        link_c = np.zeros((first.n, dim))
        link_c[:, kb1 + kb2:kb1 + kb2 + kc1] = first.map_c
        link_c[:, kb1 + kb2 + kc1:k] = -second.map_c
        link_rows = np.vstack([link_b, link_c])
        keep = np.any(link_rows != 0.0, axis=1)
        link_rows = link_rows[keep]
        link_labels = [
            label for label, kept in zip(
                ["link b[{}]".format(i) for i in range(first.m)]
                + ["link c[{}]".format(j) for j in range(first.n)],
                keep,
            ) if kept
        ]

    G_eq = np.vstack([
        _relocate(first.G_eq, first_pos, dim),
        _relocate(second.G_eq, second_pos, dim),
        link_rows,
    ])
    G_in = np.vstack([
        _relocate(first.G_in, first_pos, dim),
        _relocate(second.G_in, second_pos, dim),
    ])
    return UncertaintySet(
        map_b, map_c, aux_count=dim - (map_b.shape[1] + map_c.shape[1]),
        G_eq=G_eq,
        g_eq=np.concatenate([first.g_eq, second.g_eq,
                             np.zeros(link_rows.shape[0])]),
        G_in=G_in, g_in=np.concatenate([first.g_in, second.g_in]),
        soc_blocks=(
            [block.relocated(first_pos, dim) for block in first.soc_blocks]
            + [block.relocated(second_pos, dim)
               for block in second.soc_blocks]
        ),
        eq_labels=first.eq_labels + second.eq_labels + link_labels,
        in_labels=first.in_labels + second.in_labels,
        name=name, validate=validate,
    )

from collections import OrderedDict

import numpy as np
from scipy import sparse

from ... import exceptions
from ...enums import SenseEnum
from ...logger import logger
from ..environment import ExecutionEnvironment
from ..uncertainty import ConstraintSystem, homogenize
from ..utils import relative_scale


class QpResiduals:
    def __init__(self, equality, cone, complementarity):
        self.equality = equality
        self.cone = cone
        self.complementarity = complementarity

    @property
    def worst(self):
        return max(self.equality, self.cone, self.complementarity)

    def __repr__(self):
        return (
            "QpResiduals(equality={:.3e}, cone={:.3e}, "
            "complementarity={:.3e})"
        ).format(self.equality, self.cone, self.complementarity)


class GeneralQp:
    """min z^T W z + 2 w_lin.z  s.t.  E z = f,  z in K.

    z = (t, theta_b, theta_c, w, x, y, s) and
    K = homg(U) x R+^n x R^m x R+^n. The worst case is stored as the
    minimization of -(b_hat + b).y; objective_value restores the sign and
    adds the program offset.
    """

    def __init__(self, lp, uncertainty_set, sense, layout, W, w_lin, E, f,
                 cone, complementarity_pairs, system):
        self.lp = lp
        self.uncertainty_set = uncertainty_set
        self.sense = sense
        self.layout = layout
        self.W = W
        self.w_lin = w_lin
        self.E = E
        self.f = f
        self.cone = cone
        self.complementarity_pairs = complementarity_pairs
        self.system = system

    @property
    def N(self):
        return self.w_lin.shape[0]

    @property
    def sign(self):
        return 1.0 if self.sense == SenseEnum.BEST_CASE else -1.0

    def index(self, block):
        return self.layout[block]

    @property
    def H(self):
        """Symmetric matrices with H_i . zz^T = x_i s_i."""
        matrices = []
        for i_x, i_s in self.complementarity_pairs:
            matrices.append(sparse.coo_matrix(
                ([0.5, 0.5], ([i_x, i_s], [i_s, i_x])),
                shape=(self.N, self.N),
            ).tocsr())
        return matrices

    def embed(self, theta, w, x, y, s, t=1.0):
        uset = self.uncertainty_set
        theta = np.asarray(theta, dtype=float).reshape(-1)
        z = np.zeros(self.N)
        z[self.layout["t"]] = t
        z[self.layout["theta_b"]] = theta[:uset.k_b]
        z[self.layout["theta_c"]] = theta[uset.k_b:uset.k]
        z[self.layout["w"]] = np.asarray(w, dtype=float).reshape(-1)
        z[self.layout["x"]] = x
        z[self.layout["y"]] = y
        z[self.layout["s"]] = s
        return z

    def split(self, z):
        z = np.asarray(z, dtype=float)
        parts = OrderedDict(
            (block, z[index]) for block, index in self.layout.items()
        )
        parts["t"] = float(parts["t"][0])
        return parts

    def evaluate(self, z):
        """Internal objective z^T W z + 2 w_lin.z."""
        z = np.asarray(z, dtype=float)
        return float(z.dot(self.W.dot(z)) + 2.0 * self.w_lin.dot(z))

    def objective_value(self, z):
        """Reported value: sign restored, offset added."""
        return self.sign * self.evaluate(z) + self.lp.offset

    def residuals(self, z):
        z = np.asarray(z, dtype=float)
        parts = self.split(z)
        equality = float(np.abs(self.E.dot(z) - self.f).max())

        cone_violations = [
            -parts["t"],
            -float(parts["x"].min()),
            -float(parts["s"].min()),
        ]
        u = z[self.layout["u"]]
        point = np.concatenate([[parts["t"]], u])
        if self.cone.linear_rows.shape[0]:
            cone_violations.append(-float(self.cone.linear_rows.dot(point).min()))
        for head, tail, _ in self.cone.soc_rows:
            cone_violations.append(
                float(np.linalg.norm(tail.dot(point)) - head.dot(point))
            )
        cone = max(0.0, max(cone_violations))

        complementarity = 0.0
        if self.complementarity_pairs:
            complementarity = float(np.abs(parts["x"] * parts["s"]).max())
        return QpResiduals(equality, cone, complementarity)

    def is_feasible(self, z, tol=None):
        if tol is None:
            tol = ExecutionEnvironment().settings.feas_tol
        scale = relative_scale(z, self.lp.b_hat, self.lp.c_hat)
        residuals = self.residuals(z)
        return (
            max(residuals.equality, residuals.cone) <= tol * scale
            and residuals.complementarity <= tol * scale * scale
        )

    def __repr__(self):
        return "GeneralQp({}, {}, N={}, E rows={})".format(
            self.lp.name, self.sense.value, self.N, self.E.shape[0]
        )


def _layout(uset, lp):
    sizes = OrderedDict([
        ("t", 1), ("theta_b", uset.k_b), ("theta_c", uset.k_c),
        ("w", uset.aux_count), ("x", lp.n), ("y", lp.m), ("s", lp.n),
    ])
    layout = OrderedDict()
    offset = 0
    for block, size in sizes.items():
        layout[block] = np.arange(offset, offset + size)
        offset += size
    layout["u"] = np.arange(1, 1 + uset.dim)
    return layout, offset


def _symmetric_block(rows, cols, block, N):
    """Sparse N x N matrix with block at (rows, cols) and its transpose."""
    block = sparse.coo_matrix(block)
    upper = sparse.coo_matrix(
        (block.data, (rows[block.row], cols[block.col])), shape=(N, N)
    )
    return (upper + upper.T).tocsr()


def build(lp, uncertainty_set, sense, system=None):
    """Cast the best- or worst-case bilinear program into general form.

    Args:
        lp (LinearProgram)
        uncertainty_set (UncertaintySet)
        sense (SenseEnum)
        system (ConstraintSystem): reused when given

    Returns:
        GeneralQp
    """
    sense = SenseEnum(sense)
    if system is None:
        system = ConstraintSystem(lp, uncertainty_set)
    uset = system.uncertainty_set
    layout, N = _layout(uset, lp)
    t = layout["t"][0]

    w_lin = np.zeros(N)
    if sense == SenseEnum.BEST_CASE:
        w_lin[layout["x"]] = lp.c_hat / 2.0
        W = _symmetric_block(
            layout["theta_c"], layout["x"], uset.map_c.T / 2.0, N
        )
    else:
        w_lin[layout["y"]] = -lp.b_hat / 2.0
        W = _symmetric_block(
            layout["theta_b"], layout["y"], -uset.map_b.T / 2.0, N
        )

    rows = []
    # A x - map_b theta_b - b_hat t == 0
    primal = np.zeros((lp.m, N))
    primal[:, layout["x"]] = lp.A
    primal[:, layout["theta_b"]] = -uset.map_b
    primal[:, t] = -lp.b_hat
    rows.append(primal)
    # A^T y + s - map_c theta_c - c_hat t == 0
    dual = np.zeros((lp.n, N))
    dual[:, layout["y"]] = lp.A.T
    dual[:, layout["s"]] = np.eye(lp.n)
    dual[:, layout["theta_c"]] = -uset.map_c
    dual[:, t] = -lp.c_hat
    rows.append(dual)
    # G_eq u - g_eq t == 0
    if uset.G_eq.shape[0]:
        equality = np.zeros((uset.G_eq.shape[0], N))
        equality[:, layout["u"]] = uset.G_eq
        equality[:, t] = -uset.g_eq
        rows.append(equality)
    anchor = np.zeros((1, N))
    anchor[0, t] = 1.0
    rows.append(anchor)

    E = sparse.csr_matrix(np.vstack(rows))
    f = np.zeros(E.shape[0])
    f[-1] = 1.0

    pairs = list(zip(layout["x"].tolist(), layout["s"].tolist()))
    qp = GeneralQp(
        lp, uset, sense, layout, W, w_lin, E, f, homogenize(uset), pairs,
        system,
    )
    logger.info("Built {}".format(qp))
    return qp


def _bilinear_side_vanishes(uset, sense):
    if sense == SenseEnum.BEST_CASE:
        mapping, positions = uset.map_c, slice(uset.k_b, uset.k)
    else:
        mapping, positions = uset.map_b, slice(0, uset.k_b)
    if mapping.shape[1] == 0 or not np.any(mapping):
        return True
    tol = ExecutionEnvironment().settings.feas_tol
    ranges = uset.parameter_ranges[positions]
    return bool(np.all(np.abs(ranges) <= tol))


class ConvexExact:
    """Exact value of a side whose bilinear term vanishes, with the
    perturbation that attains it."""

    def __init__(self, sense, value, theta, w):
        self.sense = sense
        self.value = float(value)
        self.theta = np.asarray(theta, dtype=float)
        self.w = np.asarray(w, dtype=float)

    def __repr__(self):
        return "ConvexExact({}, value={})".format(self.sense.value, self.value)


def convex_exact(lp, uncertainty_set, sense, system=None):
    """Solve a side exactly when its bilinear term vanishes.

    The best case with c fixed at zero is min c_hat.x over the joint
    system; the worst case with b fixed at zero is max b_hat.y.

    Returns:
        ConvexExact|None: None when the side is genuinely bilinear

    Raises:
        NumericalFailureError: the convex solve returned no usable point
    """
    sense = SenseEnum(sense)
    if system is None:
        system = ConstraintSystem(lp, uncertainty_set)
    if not _bilinear_side_vanishes(system.uncertainty_set, sense):
        return None

    if sense == SenseEnum.BEST_CASE:
        objective = {"x": lp.c_hat}
    else:
        objective = {"y": -lp.b_hat}
    solution = system.solve(
        objective=objective, name="{}_convex_{}".format(lp.name, sense.value)
    )
    if not solution.is_usable:
        raise exceptions.NumericalFailureError(
            "Convex-exact solve for {} ended {}".format(
                sense.value, solution.status.value
            ),
            solution.stage,
        )
    sign = 1.0 if sense == SenseEnum.BEST_CASE else -1.0
    point = system.point(solution)
    result = ConvexExact(
        sense, sign * solution.objective + lp.offset,
        np.concatenate([point["theta_b"], point["theta_c"]]), point["w"],
    )
    logger.info("{} {} value is convex-exact: {}".format(
        lp.name, sense.value, result.value
    ))
    return result


def polynomial_case(lp, uncertainty_set, sense, system=None):
    """Exact value when the bilinear term vanishes, else None.

    Returns:
        float|None: reported value including the offset
    """
    result = convex_exact(lp, uncertainty_set, sense, system)
    return None if result is None else result.value

import math
from itertools import combinations

import numpy as np

from ... import exceptions
from ...constants import ORACLE_MAX_COMBINATIONS, ORACLE_VERTEX_DIGITS
from ...enums import LpStatusEnum
from ...logger import logger
from ..environment import ExecutionEnvironment
from ..lp import solve_perturbed


def _vertex_key(vector, scale):
    return tuple(np.round(np.asarray(vector) / scale, ORACLE_VERTEX_DIGITS))


def enumerate_vertices(uncertainty_set, tol=None):
    """Vertices of the lifted polytope {u : G_eq u == g_eq, G_in u <= g_in}.

    Every choice of dim - rank(G_eq) inequality rows is tried as the
    active set; a nonsingular choice whose solution satisfies all rows
    is a vertex.

    Returns:
        numpy.ndarray: one vertex per row

    Raises:
        NonPolytopalSetError: the set has SOC blocks
        VertexLimitExceededError: too many active-set combinations
    """
    uset = uncertainty_set
    if not uset.is_polytopal:
        raise exceptions.NonPolytopalSetError(
            "{} has second-order rows; vertices are undefined".format(
                uset.name
            )
        )
    if tol is None:
        tol = ExecutionEnvironment().settings.feas_tol
    dim = uset.dim
    if dim == 0:
        return np.zeros((1, 0))

    rank_eq = np.linalg.matrix_rank(uset.G_eq) if uset.G_eq.shape[0] else 0
    free = dim - rank_eq
    n_in = uset.G_in.shape[0]
    total = math.comb(n_in, free) if free <= n_in else 0
    if total > ORACLE_MAX_COMBINATIONS:
        raise exceptions.VertexLimitExceededError(
            "{} needs {} active-set combinations (limit {})".format(
                uset.name, total, ORACLE_MAX_COMBINATIONS
            ),
            total,
        )

    scale = max(
        1.0,
        float(np.abs(uset.g_eq).max()) if uset.g_eq.size else 1.0,
        float(np.abs(uset.g_in).max()) if uset.g_in.size else 1.0,
    )
    vertices = []
    keys = set()
    for active in combinations(range(n_in), free):
        active = list(active)
        matrix = np.vstack([uset.G_eq, uset.G_in[active]])
        rhs = np.concatenate([uset.g_eq, uset.g_in[active]])
        if np.linalg.matrix_rank(matrix) < dim:
            continue
        u = np.linalg.lstsq(matrix, rhs, rcond=None)[0]
        if np.abs(matrix.dot(u) - rhs).max() > tol * scale:
            continue
        if n_in and (uset.G_in.dot(u) - uset.g_in).max() > tol * scale:
            continue
        key = _vertex_key(u, scale)
        if key not in keys:
            keys.add(key)
            vertices.append(u)
    logger.info("{}: {} vertices from {} combinations".format(
        uset.name, len(vertices), total
    ))
    return np.array(vertices).reshape(-1, dim)


def oracle_vertices(lp, uncertainty_set):
    """Exact best and worst case over the vertices of a polytopal set.

    Vertices whose perturbed LP is infeasible or unbounded lie outside
    the restricted set and are skipped. The result is exact when no
    vertex was skipped; otherwise the restricted set has vertices that
    are not vertices of the set itself and the values are only
    indicative.

    Args:
        lp (LinearProgram)
        uncertainty_set (UncertaintySet)

    Returns:
        tuple: (q_minus, q_plus, exact)
    """
    uset = uncertainty_set.conform(lp.m, lp.n)
    vertices = enumerate_vertices(uset)

    values = []
    skipped = 0
    seen = set()
    for u in vertices:
        theta = u[:uset.k]
        key = _vertex_key(theta, 1.0)
        if key in seen:
            continue
        seen.add(key)
        b, c = uset.perturbation(theta)
        solution = solve_perturbed(lp, b, c)
        if solution.is_optimal:
            values.append(solution.objective)
            continue
        skipped += 1
        log = logger.warning \
            if solution.status == LpStatusEnum.NUMERICAL_FAILURE \
            else logger.info
        log("Vertex {} skipped: {}".format(theta, solution.status.value))

    if not values:
        logger.warning("{}: no vertex inside the restricted set".format(
            lp.name
        ))
        return None, None, False
    exact = skipped == 0
    logger.info("Oracle {}: [{}, {}] over {} vertices, {} skipped".format(
        lp.name, min(values), max(values), len(values), skipped
    ))
    return min(values), max(values), exact

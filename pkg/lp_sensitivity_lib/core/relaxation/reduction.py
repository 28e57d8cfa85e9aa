import numpy as np
from scipy import sparse
from scipy.linalg import null_space

from ... import exceptions
from ...logger import logger
from ..conic_backend import smat, svec, svec_dim
from .forms import INV_SQRT2


def svec_positions(indices):
    """(row, col) of svec positions, row <= col."""
    indices = np.asarray(indices, dtype=np.int64)
    cols = ((np.sqrt(8.0 * indices + 1.0) - 1.0) // 2).astype(np.int64)
    cols += ((cols + 1) * (cols + 2) // 2 <= indices).astype(np.int64)
    cols -= (cols * (cols + 1) // 2 > indices).astype(np.int64)
    return indices - cols * (cols + 1) // 2, cols


class NullspaceReduction:
    """Parametrization z = z0 + scale * V zeta of {z : E z = f}.

    With P = [[1, 0], [z0, scale * V]] every bordered moment matrix
    that satisfies E z = f and diag(E Z E^T) = f * f is P M P^T for a
    PSD matrix M of side d + 1, d = dim null(E). Forms over svec of the
    full moment matrix are pulled back to svec(M) by congruence.
    """

    def __init__(self, z0, V, scale):
        self.z0 = np.asarray(z0, dtype=float)
        self.V = np.asarray(V, dtype=float)
        self.scale = float(scale)
        N, d = self.V.shape
        self.P = np.zeros((N + 1, d + 1))
        self.P[0, 0] = 1.0
        self.P[1:, 0] = self.z0
        self.P[1:, 1:] = self.scale * self.V

    @property
    def side(self):
        return self.P.shape[1]

    @property
    def dim(self):
        return svec_dim(self.side)

    def form(self, form):
        """Dense coefficients over svec(M) of a sparse form over the
        full moment matrix."""
        indices, values = form
        if not len(indices):
            return np.zeros(self.dim)
        rows, cols = svec_positions(indices)
        values = np.asarray(values, dtype=float)
        weights = np.where(rows == cols, 0.5 * values, values * INV_SQRT2)
        half = (self.P[rows] * weights[:, None]).T.dot(self.P[cols])
        return svec(half + half.T)

    def lift(self, values):
        """svec of the full moment matrix P M P^T."""
        M = smat(values, self.side)
        return svec(self.P.dot(M).dot(self.P.T))

    def point(self, zeta):
        return self.z0 + self.scale * self.V.dot(zeta)

    def __repr__(self):
        return "NullspaceReduction(N={}, side={}, scale={:.3g})".format(
            self.V.shape[0], self.side, self.scale
        )


def nullspace_reduction(E, f, reference=None):
    """Reduction of {z : E z = f} centred at the projection of reference.

    Args:
        E (scipy.sparse matrix|numpy.ndarray)
        f (numpy.ndarray)
        reference (numpy.ndarray): point to centre on, the origin if None

    Returns:
        NullspaceReduction

    Raises:
        RelaxationError: E z = f has no solution
    """
    E = E.toarray() if sparse.issparse(E) else np.asarray(E, dtype=float)
    f = np.asarray(f, dtype=float)
    if reference is None:
        reference = np.zeros(E.shape[1])
    correction = np.linalg.lstsq(E, E.dot(reference) - f, rcond=None)[0]
    z0 = reference - correction
    residual = float(np.abs(E.dot(z0) - f).max()) if f.size else 0.0
    if residual > 1e-8 * max(1.0, float(np.abs(f).max())):
        raise exceptions.RelaxationError(
            "E z = f is inconsistent (residual {:.3e})".format(residual)
        )
    V = null_space(E)
    scale = max(1.0, float(np.abs(z0).max()))
    reduction = NullspaceReduction(z0, V, scale)
    logger.debug("{} for E of shape {}".format(reduction, E.shape))
    return reduction

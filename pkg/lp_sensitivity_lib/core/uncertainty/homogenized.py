import numpy as np

from ..utils import as_vector


class HomogenizedCone:
    """homg(U) over (t, u): right-hand sides ride on t.

        G_eq u == t g_eq
        t g_in - G_in u >= 0
        || t d - C u || <= t beta - a.u
        t >= 0

    Row matrices act on the stacked vector (t; u).
    """

    def __init__(self, uncertainty_set):
        self.uncertainty_set = uncertainty_set
        uset = uncertainty_set
        self.equality_rows = np.hstack([-uset.g_eq[:, None], uset.G_eq])
        self.linear_rows = np.hstack([uset.g_in[:, None], -uset.G_in])
        self.linear_labels = list(uset.in_labels)
        self.soc_rows = []
        for block in uset.soc_blocks:
            head = np.concatenate([[block.beta], -block.a])
            tail = np.hstack([block.d[:, None], -block.C])
            self.soc_rows.append((head, tail, block.label))

    @property
    def dim(self):
        return 1 + self.uncertainty_set.dim

    def contains(self, t, u, tol=1e-9):
        if t < -tol:
            return False
        point = np.concatenate([[float(t)], as_vector(u, self.dim - 1, "u")])
        scale = max(1.0, float(np.abs(point).max()))
        if self.equality_rows.shape[0] and \
                np.abs(self.equality_rows.dot(point)).max() > tol * scale:
            return False
        if self.linear_rows.shape[0] and \
                self.linear_rows.dot(point).min() < -tol * scale:
            return False
        for head, tail, _ in self.soc_rows:
            if np.linalg.norm(tail.dot(point)) > head.dot(point) + tol * scale:
                return False
        return True

    def __repr__(self):
        return "HomogenizedCone(dim={}, linear={}, soc={})".format(
            self.dim, self.linear_rows.shape[0], len(self.soc_rows)
        )


def homogenize(uncertainty_set):
    """Homogenization of a validated UncertaintySet; the slice t = 1
    reproduces membership."""
    return HomogenizedCone(uncertainty_set)

import math

import numpy as np
from scipy import sparse

from ...constants import CANONICAL_DIGITS
from ..utils import canonical_key

INV_SQRT2 = 1.0 / math.sqrt(2.0)


def sparse_vector(vector):
    """(indices, values) of the nonzeros of a dense vector."""
    vector = np.asarray(vector, dtype=float).reshape(-1)
    indices = np.flatnonzero(vector)
    return indices, vector[indices]


def matrix_form(rows, cols, values):
    """svec coefficients of P . M for the entries P[rows, cols] of M.

    Symmetric pairs listed twice (as W stores them) add up to the
    symmetric inner product; off-diagonal entries carry 1/sqrt(2).
    """
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    values = np.asarray(values, dtype=float)
    low = np.minimum(rows, cols)
    high = np.maximum(rows, cols)
    values = np.where(low == high, values, values * INV_SQRT2)
    positions = high * (high + 1) // 2 + low
    unique, inverse = np.unique(positions, return_inverse=True)
    summed = np.zeros(unique.shape[0])
    np.add.at(summed, inverse, values)
    keep = summed != 0.0
    return unique[keep], summed[keep]


def pair_form(first, second):
    """Coefficients of first^T Z second for sparse vectors over z.

    z coordinate p sits at row/column p + 1 of the moment matrix.
    """
    first_idx, first_val = first
    second_idx, second_val = second
    rows = np.repeat(np.asarray(first_idx) + 1, len(second_idx))
    cols = np.tile(np.asarray(second_idx) + 1, len(first_idx))
    values = np.outer(first_val, second_val).reshape(-1)
    return matrix_form(rows, cols, values)


def linear_form(vector):
    """Coefficients of a^T z read from the border of the moment matrix."""
    idx, val = vector
    rows = np.zeros(len(idx), dtype=np.int64)
    cols = np.asarray(idx, dtype=np.int64) + 1
    # the form covers both border entries M[0, p] and M[p, 0]
    return matrix_form(
        np.concatenate([rows, cols]), np.concatenate([cols, rows]),
        np.concatenate([val, val]) / 2.0,
    )


def anchor_form():
    return np.array([0]), np.array([1.0])


def form_key(form, rhs=0.0):
    indices, values = form
    return (
        canonical_key(values, CANONICAL_DIGITS, indices),
        round(float(rhs), CANONICAL_DIGITS),
    )


def forms_matrix(forms, dim):
    """Stack sparse forms into a CSR matrix with dim columns."""
    if not forms:
        return sparse.csr_matrix((0, dim))
    rows = np.concatenate([
        np.full(len(form[0]), position) for position, form in enumerate(forms)
    ])
    cols = np.concatenate([form[0] for form in forms])
    values = np.concatenate([form[1] for form in forms])
    return sparse.csr_matrix(
        (values, (rows, cols)), shape=(len(forms), dim)
    )

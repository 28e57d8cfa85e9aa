import numpy as np


class Singleton(type):
    _instances = {}

    def __call__(cls, *args, **kwargs):
        if cls not in cls._instances:
            cls._instances[cls] = super(Singleton, cls).__call__(
                *args, **kwargs
            )
        return cls._instances[cls]


class SubclassesMixin:
    @classmethod
    def _get_all_subclasses(cls):
        all_subclasses = []
        for subclass in cls.__subclasses__():
            all_subclasses.append(subclass)
            all_subclasses.extend(subclass._get_all_subclasses())

        return all_subclasses

    @classmethod
    def _get_subclasses_dict(cls, attribute):
        return dict(
            [
                (getattr(x, attribute), x)
                for x in cls._get_all_subclasses()
                if hasattr(x, attribute)
            ]
        )


def as_vector(values, size=None, name="vector"):
    """Coerce input to a finite 1-D float array.

    Args:
        values (array-like|None): None is read as the zero vector
        size (int): expected length
        name (string): used in error messages

    Returns:
        numpy.ndarray
    """
    from ..exceptions import DimensionMismatchError, NonFiniteDataError

    if values is None:
        if size is None:
            raise DimensionMismatchError(
                "Cannot build {} without a size".format(name)
            )
        return np.zeros(size)

    vector = np.asarray(values, dtype=float).reshape(-1)
    if size is not None and vector.shape[0] != size:
        raise DimensionMismatchError(
            "{} has length {}, expected {}".format(name, vector.shape[0], size)
        )
    if not np.all(np.isfinite(vector)):
        raise NonFiniteDataError("{} has non-finite entries".format(name))
    return vector


def as_matrix(values, shape=None, name="matrix"):
    """Coerce input (dense, nested lists or scipy.sparse) to a 2-D array."""
    from ..exceptions import DimensionMismatchError, NonFiniteDataError

    if hasattr(values, "toarray"):
        values = values.toarray()
    matrix = np.asarray(values, dtype=float)
    if matrix.ndim == 1 and shape is not None and shape[0] == 0:
        matrix = matrix.reshape(0, shape[1])
    if matrix.ndim != 2:
        raise DimensionMismatchError("{} must be two-dimensional".format(name))
    if shape is not None:
        expected = tuple(
            actual if want is None else want
            for actual, want in zip(matrix.shape, shape)
        )
        if matrix.shape != expected:
            raise DimensionMismatchError(
                "{} has shape {}, expected {}".format(
                    name, matrix.shape, expected
                )
            )
    if not np.all(np.isfinite(matrix)):
        raise NonFiniteDataError("{} has non-finite entries".format(name))
    return matrix


def relative_scale(*values):
    """max(1, |v|) over all given scalars and arrays."""
    scale = 1.0
    for value in values:
        if value is None:
            continue
        array = np.abs(np.asarray(value, dtype=float))
        if array.size:
            scale = max(scale, float(array.max()))
    return scale


def canonical_key(values, digits, indices=None):
    """Hashable key of a vector scaled to unit infinity-norm.

    Vectors that differ only by a positive factor share a key. With
    indices, values are the nonzeros of a sparse vector.
    """
    array = np.asarray(values, dtype=float).reshape(-1)
    if indices is None:
        indices = np.arange(array.shape[0])
    indices = np.asarray(indices).reshape(-1)
    peak = np.abs(array).max() if array.size else 0.0
    if peak == 0.0:
        return ()
    scaled = np.round(array / peak, digits)
    order = np.argsort(indices, kind="stable")
    return tuple(
        (int(indices[i]), float(scaled[i])) for i in order if scaled[i] != 0.0
    )

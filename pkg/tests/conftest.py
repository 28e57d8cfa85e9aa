import os
import tempfile

import numpy as np
import pytest

# settings and logs must not touch the real XDG directories
_SANDBOX = tempfile.mkdtemp(prefix="lp_sensitivity_tests_")
os.environ["XDG_CONFIG_HOME"] = os.path.join(_SANDBOX, "config")
os.environ["XDG_CACHE_HOME"] = os.path.join(_SANDBOX, "cache")
os.environ.pop("LP_SENSITIVITY_BACKEND", None)

from lp_sensitivity_lib.core.analysis import load_instance
from lp_sensitivity_lib.core.environment import ExecutionEnvironment


@pytest.fixture
def environment():
    env = ExecutionEnvironment()
    yield env
    env.settings.reset_to_default_configs()
    env.reset()


@pytest.fixture
def example_2_1():
    return load_instance("example_2_1")


@pytest.fixture
def example_2_2():
    return load_instance("example_2_2")


@pytest.fixture
def smoke():
    return load_instance("smoke")


@pytest.fixture
def wendell_1():
    return load_instance("wendell_1")


def _random_document(seed):
    """Standard-form LP with positive data: the primal is bounded and every
    perturbation below keeps the nominal point strictly feasible."""
    rng = np.random.default_rng(seed)
    m = int(rng.integers(2, 4))
    n = m + int(rng.integers(2, 4))
    names = ["x{}".format(j + 1) for j in range(n)]
    A = np.round(rng.uniform(0.5, 1.5, (m, n)), 3)
    b_hat = np.round(A.dot(rng.uniform(1.0, 2.0, n)), 3)
    c_hat = np.round(rng.uniform(1.0, 3.0, n), 3)
    rows = [
        {"name": "R{}".format(i + 1), "sense": "=", "rhs": float(b_hat[i]),
         "coefficients": dict(
             (names[j], float(A[i, j])) for j in range(n)
         )}
        for i in range(m)
    ]
    uncertainty = [{
        "type": "box", "rows": {"R1": [-0.1, 0.1]},
        "objective": {"x1": [-0.5, 0.5]},
    }]
    if seed % 2:
        uncertainty.append({
            "type": "ball_l2", "target": "c", "objective": names[1:3],
            "radius": 0.3,
        })
    else:
        uncertainty[0]["rows"]["R2"] = [-0.1, 0.1]
    return {
        "name": "random_{}".format(seed),
        "variables": [{"name": name, "lower": 0} for name in names],
        "rows": rows,
        "objective": {"coefficients": dict(
            (names[j], float(c_hat[j])) for j in range(n)
        )},
        "uncertainty": uncertainty,
    }


@pytest.fixture
def random_document():
    return _random_document

import numpy as np
import pytest

from pita import LTISystem


@pytest.fixture
def sys2x2():
    """Damped rotation driven by a constant input; the running 2x2 example."""
    return LTISystem(A=[[-1.0, 5.0], [-5.0, -1.0]],
                     B=[[0.0], [1.0]],
                     u=[10.0],
                     y0=[0.0, 1.0])


@pytest.fixture
def scalar_decay():
    return LTISystem(A=[[-2.0]], B=[[1.0]], u=[0.0], y0=[1.0])


def approx_vec(a, b, tol):
    return float(np.linalg.norm(np.asarray(a) - np.asarray(b))) <= tol

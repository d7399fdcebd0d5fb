import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240917)


def rotation(n, rng):
    Q, R = np.linalg.qr(rng.standard_normal((n, n)))
    return Q * np.sign(np.diag(R))

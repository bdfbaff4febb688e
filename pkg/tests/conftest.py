import numpy as np
import pytest
from scipy.linalg import expm

from realforms import matcore as mc

# criterion number -> (passed, detail); filled by tests/test_acceptance.py
ACCEPTANCE_RESULTS = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_RESULTS):
        ok, detail = ACCEPTANCE_RESULTS[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def crandn(rng, *shape, scale=1.0):
    return scale * (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))


def random_unitary_symplectic(rng, n, scale=0.7):
    A = crandn(rng, n, n, scale=scale)
    B = crandn(rng, n, n, scale=scale)
    A = (A - A.conj().T) / 2
    B = (B + B.T) / 2
    return expm(np.block([[A, B], [-B.conj(), A.conj()]]))


def random_symplectic(rng, n, scale=0.5):
    S = crandn(rng, 2 * n, 2 * n, scale=scale)
    return expm(mc.J(n) @ (S + S.T) / 2)


def random_complex_orthogonal(rng, n, scale=0.5):
    A = crandn(rng, n, n, scale=scale)
    return expm((A - A.T) / 2)

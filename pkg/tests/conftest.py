import math

import numpy as np
import pytest
from scipy.linalg import expm

from ewlgame.payoff import make_payoff_matrix

D_HAT = np.array([[0, 1], [-1, 0]], dtype=complex)
SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
HADAMARD = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
Q_HAT = np.diag([1j, -1j])


def random_valid_matrix(rng, legacy=False):
    delta = -rng.uniform(0.0, 5.0)
    gamma = delta + rng.uniform(0.1, 5.0)
    alpha = gamma + rng.uniform(0.1, 5.0)
    beta = alpha + rng.uniform(0.1, 5.0)
    return make_payoff_matrix(alpha, beta, gamma, delta, legacy=legacy)


def random_unitary(rng, n):
    z = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def random_state(rng):
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    return v / np.linalg.norm(v)


def reference_final_state(tau, base, ua, ub):
    """Independent EWL pipeline: scipy expm for J, explicit kron."""
    j = expm(1j * tau / 2 * np.kron(base, base))
    return j.conj().T @ np.kron(ua, ub) @ j @ np.array([1, 0, 0, 0], dtype=complex)


@pytest.fixture
def rng():
    return np.random.default_rng(20261019)


@pytest.fixture
def pd():
    return make_payoff_matrix(3, 5, 1, 0)


@pytest.fixture
def np_table():
    return make_payoff_matrix(1_000_000, 1_001_000, 1000, 0)

"""Dense complex linear algebra for two-qubit games.

Operators are plain ``numpy`` arrays (2x2 or 4x4 complex) and states are
length-4 complex vectors in the basis order |00>, |01>, |10>, |11> with
qubit A as the first (most significant) factor.  Every function is pure and
returns fresh arrays.
"""

from __future__ import annotations

import math

import numpy as np

UNITARY_TOL = 1e-12
NORM_TOL = 1e-12
SERIES_TERM_TOL = 1e-16

I2 = np.eye(2, dtype=complex)
I4 = np.eye(4, dtype=complex)
KET_00 = np.array([1, 0, 0, 0], dtype=complex)


class NonUnitaryError(ValueError):
    pass


class NonHermitianError(ValueError):
    pass


class NotNormalizedError(ValueError):
    pass


def _as_square(m, n: int, what: str) -> np.ndarray:
    arr = np.asarray(m, dtype=complex)
    if arr.shape != (n, n):
        raise ValueError(f"{what} must be {n}x{n}, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{what} has non-finite entries")
    return arr


def unitarity_error(u) -> float:
    """Max entrywise deviation of U^dagger U from the identity."""
    u = np.asarray(u, dtype=complex)
    return float(np.max(np.abs(u.conj().T @ u - np.eye(u.shape[0]))))


def is_unitary(u, tol: float = UNITARY_TOL) -> bool:
    return unitarity_error(u) <= tol


def is_hermitian(g, tol: float = UNITARY_TOL) -> bool:
    g = np.asarray(g, dtype=complex)
    return bool(np.max(np.abs(g - g.conj().T)) <= tol)


def check_unitary(u, n: int, what: str = "operator") -> np.ndarray:
    arr = _as_square(u, n, what)
    err = unitarity_error(arr)
    if err > UNITARY_TOL:
        raise NonUnitaryError(f"{what} is not unitary (max |U^dag U - I| = {err:.3e})")
    return arr


def check_state(s) -> np.ndarray:
    arr = np.asarray(s, dtype=complex)
    if arr.shape != (4,):
        raise ValueError(f"two-qubit state must have 4 amplitudes, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ValueError("state has non-finite amplitudes")
    norm = float(np.sum(np.abs(arr) ** 2))
    if abs(norm - 1.0) > NORM_TOL:
        raise NotNormalizedError(f"state norm^2 is {norm!r}, expected 1")
    return arr


def tensor2(a, b) -> np.ndarray:
    """Kronecker product ``a (x) b`` of two single-qubit unitaries."""
    a = check_unitary(a, 2, "first factor")
    b = check_unitary(b, 2, "second factor")
    return np.kron(a, b)


def apply(u, s) -> np.ndarray:
    u = check_unitary(u, 4, "two-qubit operator")
    s = check_state(s)
    return u @ s


def dagger4(u) -> np.ndarray:
    u = check_unitary(u, 4, "two-qubit operator")
    return u.conj().T


def expm_series(a) -> np.ndarray:
    """exp(a) for a small dense matrix by Taylor series with scaling and squaring.

    The argument is halved until its infinity norm is at most 1/2, the series
    is summed until the next term's largest entry drops below 1e-16, and the
    result is squared back up.
    """
    a = np.asarray(a, dtype=complex)
    norm = float(np.max(np.sum(np.abs(a), axis=1))) if a.size else 0.0
    squarings = max(0, math.ceil(math.log2(norm)) + 1) if norm > 0.5 else 0
    b = a / (2.0**squarings)

    result = np.eye(a.shape[0], dtype=complex)
    term = np.eye(a.shape[0], dtype=complex)
    k = 1
    while True:
        term = term @ b / k
        if np.max(np.abs(term)) < SERIES_TERM_TOL:
            break
        result = result + term
        k += 1
        if k > 200:  # unreachable for ||b|| <= 1/2
            raise RuntimeError("matrix exponential series did not converge")

    for _ in range(squarings):
        result = result @ result
    return result


def unitary_exp(angle: float, g, method: str = "auto") -> np.ndarray:
    """Return exp(i * angle * g) for a Hermitian 4x4 generator ``g``.

    ``method`` is ``"closed"`` (requires g @ g == I, uses cos/sin),
    ``"series"`` (scaling-and-squaring Taylor sum), or ``"auto"``, which
    takes the closed form whenever the generator is an involution.
    """
    g = _as_square(g, 4, "generator")
    if not is_hermitian(g):
        raise NonHermitianError("generator must be Hermitian for exp(i*angle*g) to be unitary")
    if not math.isfinite(angle):
        raise ValueError(f"angle must be finite, got {angle!r}")

    involution = bool(np.max(np.abs(g @ g - I4)) <= UNITARY_TOL)
    if method == "auto":
        method = "closed" if involution else "series"
    if method == "closed":
        if not involution:
            raise ValueError("closed-form exponential needs g @ g == I")
        return math.cos(angle) * I4 + 1j * math.sin(angle) * g
    if method == "series":
        return expm_series(1j * angle * g)
    raise ValueError(f"unknown method {method!r}")


def concurrence(s) -> float:
    """Pure-state concurrence 2|a00 a11 - a01 a10|."""
    a = check_state(s)
    c = 2.0 * abs(a[0] * a[3] - a[1] * a[2])
    return min(1.0, float(c))


def equal_up_to_phase(s, t, tol: float = 1e-10) -> bool:
    """True if two states differ only by a global phase."""
    s = np.asarray(s, dtype=complex)
    t = np.asarray(t, dtype=complex)
    overlap = np.vdot(s, t)
    return bool(abs(abs(overlap) - 1.0) <= tol and np.max(np.abs(s * overlap - t)) <= tol * 10)

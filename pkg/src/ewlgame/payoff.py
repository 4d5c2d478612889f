"""Payoff-matrix algebra and the classical 2x2 bimatrix solver.

A :class:`PayoffMatrix` holds the four numbers of the row player's table::

                 opp. C   opp. D
        me C  [  alpha    delta ]
        me D  [  beta     gamma ]

ordered ``beta > alpha > gamma > delta`` with ``delta <= 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np


class OrderingViolation(ValueError):
    """Raised when payoff entries break the required ordering."""

    def __init__(self, inequality: str, values: dict):
        self.inequality = inequality
        self.values = values
        shown = ", ".join(f"{k}={v!r}" for k, v in values.items())
        super().__init__(f"payoff ordering violated: {inequality} does not hold ({shown})")


@dataclass(frozen=True)
class PayoffMatrix:
    alpha: float
    beta: float
    gamma: float
    delta: float
    legacy: bool = False

    def as_array(self) -> np.ndarray:
        return np.array([[self.alpha, self.delta], [self.beta, self.gamma]], dtype=float)

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.alpha, self.beta, self.gamma, self.delta)


def make_payoff_matrix(alpha, beta, gamma, delta, legacy: bool = False) -> PayoffMatrix:
    """Validate and build a payoff matrix.

    Strict mode enforces ``beta > alpha > gamma > delta`` and ``delta <= 0``;
    ``delta = 0`` is accepted whenever ``gamma > 0`` (the textbook PD and
    Newcomb tables).  ``legacy=True`` drops only the ``delta <= 0`` check.
    """
    vals = {"alpha": alpha, "beta": beta, "gamma": gamma, "delta": delta}
    for name, v in vals.items():
        if not isinstance(v, (int, float, np.integer, np.floating)) or isinstance(v, bool):
            raise TypeError(f"{name} must be a real number, got {type(v).__name__}")
        if not math.isfinite(v):
            raise ValueError(f"{name} must be finite, got {v!r}")
    a, b, g, d = (float(alpha), float(beta), float(gamma), float(delta))

    if not b > a:
        raise OrderingViolation("beta > alpha", vals)
    if not a > g:
        raise OrderingViolation("alpha > gamma", vals)
    if not g > d:
        raise OrderingViolation("gamma > delta", vals)
    if not legacy and not d <= 0:
        raise OrderingViolation("delta <= 0", vals)
    return PayoffMatrix(a, b, g, d, legacy)


# -- decomposition and classification ---------------------------------------


@dataclass(frozen=True)
class MatrixDecomposition:
    diagonal_part: np.ndarray = field(compare=False)
    offdiagonal_part: np.ndarray = field(compare=False)

    def reconstruct(self) -> np.ndarray:
        return self.diagonal_part + self.offdiagonal_part


class MatrixClass(Enum):
    ASYMMETRIC = "Asymmetric"
    QUASI_SKEW_SYMMETRIC = "QuasiSkewSymmetric"
    GENERAL_OFF_DIAGONAL = "GeneralOffDiagonal"


def decompose(m: PayoffMatrix) -> MatrixDecomposition:
    diag = np.array([[m.alpha, 0.0], [0.0, m.gamma]])
    off = np.array([[0.0, m.delta], [m.beta, 0.0]])
    return MatrixDecomposition(diag, off)


def classify(m: PayoffMatrix) -> MatrixClass:
    # beta > 0 under the ordering, so the off-diagonal part is never symmetric
    if m.delta == -m.beta:
        return MatrixClass.QUASI_SKEW_SYMMETRIC
    if abs(m.delta) < m.beta:
        return MatrixClass.ASYMMETRIC
    return MatrixClass.GENERAL_OFF_DIAGONAL


# -- bimatrix games ---------------------------------------------------------


@dataclass(frozen=True)
class BimatrixGame:
    """Two-player 2x2 game; both tables are indexed [row strategy, column strategy]."""

    row_payoffs: np.ndarray = field(compare=False)
    col_payoffs: np.ndarray = field(compare=False)
    row_labels: tuple[str, str] = ("C", "D")
    col_labels: tuple[str, str] = ("C", "D")

    def __post_init__(self):
        for name in ("row_payoffs", "col_payoffs"):
            arr = np.asarray(getattr(self, name), dtype=float)
            if arr.shape != (2, 2):
                raise ValueError(f"{name} must be 2x2, got {arr.shape}")
            object.__setattr__(self, name, arr)

    def cell(self, i: int, j: int) -> tuple[float, float]:
        return (float(self.row_payoffs[i, j]), float(self.col_payoffs[i, j]))


def extend_symmetric(m: PayoffMatrix, labels: tuple[str, str] = ("C", "D")) -> BimatrixGame:
    """Symmetric two-person extension: the column player gets the transpose."""
    row = m.as_array()
    return BimatrixGame(row, row.T.copy(), labels, labels)


@dataclass(frozen=True)
class ClassicalSolution:
    dominant_row: int | None
    dominant_row_strict: bool
    dominant_col: int | None
    dominant_col_strict: bool
    pure_nash: list[tuple[int, int]]
    pareto_optimal: list[tuple[tuple[int, int], tuple[float, float]]]


def _dominant(table: np.ndarray) -> tuple[int | None, bool]:
    # table[mine, theirs]
    for i in (0, 1):
        other = 1 - i
        if np.all(table[i, :] >= table[other, :]):
            return i, bool(np.all(table[i, :] > table[other, :]))
    return None, False


def solve_classical(g: BimatrixGame) -> ClassicalSolution:
    A, B = g.row_payoffs, g.col_payoffs
    dom_row, row_strict = _dominant(A)
    dom_col, col_strict = _dominant(B.T)

    cells = [(i, j) for i in (0, 1) for j in (0, 1)]
    nash = [
        (i, j)
        for i, j in cells
        if A[i, j] >= A[1 - i, j] and B[i, j] >= B[i, 1 - j]
    ]

    pareto = []
    for i, j in cells:
        a, b = A[i, j], B[i, j]
        dominated = any(
            A[k, l] >= a and B[k, l] >= b and (A[k, l] > a or B[k, l] > b)
            for k, l in cells
        )
        if not dominated:
            pareto.append(((i, j), g.cell(i, j)))

    return ClassicalSolution(dom_row, row_strict, dom_col, col_strict, nash, pareto)


def _check_prob(x, name: str) -> float:
    x = float(x)
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"{name} must lie in [0, 1], got {x!r}")
    return x


def mixed_payoff_classical(g: BimatrixGame, p: float, q: float) -> tuple[float, float]:
    """Expected payoffs when the row player plays strategy 0 w.p. ``p`` and
    the column player plays strategy 0 w.p. ``q``, independently."""
    p = _check_prob(p, "p")
    q = _check_prob(q, "q")
    x = np.array([p, 1.0 - p])
    y = np.array([q, 1.0 - q])
    return (float(x @ g.row_payoffs @ y), float(x @ g.col_payoffs @ y))

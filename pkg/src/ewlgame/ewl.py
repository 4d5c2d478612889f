"""EWL protocol engine.

A game starts in |00>, the umpire entangles it with
``J = exp(i * tau/2 * U~ (x) U~)``, each player applies a local unitary,
the umpire applies ``J^dagger`` and the result is measured in the
computational basis.  Outcome 0 of a qubit is read as C (Box1), outcome 1
as D (Box2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Sequence

import numpy as np

from . import qlin
from .payoff import PayoffMatrix

THETA_MAX = math.pi
PHI_MAX = math.pi / 2
TAU_MAX = math.pi / 2
_ANGLE_SLACK = 1e-12


class NonHermitianBase(qlin.NonHermitianError):
    pass


class AngleOutOfRange(ValueError):
    pass


def _check_angle(x: float, hi: float, name: str) -> float:
    x = float(x)
    if not (math.isfinite(x) and -_ANGLE_SLACK <= x <= hi + _ANGLE_SLACK):
        raise AngleOutOfRange(f"{name}={x!r} outside [0, {hi!r}]")
    return min(max(x, 0.0), hi)


# -- strategies ---------------------------------------------------------------


@dataclass(frozen=True)
class StrategyParams:
    theta: float
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "theta", _check_angle(self.theta, THETA_MAX, "theta"))
        object.__setattr__(self, "phi", _check_angle(self.phi, PHI_MAX, "phi"))


def strategy_unitary(s: StrategyParams) -> np.ndarray:
    c, sn = math.cos(s.theta / 2), math.sin(s.theta / 2)
    e = complex(math.cos(s.phi), math.sin(s.phi))
    return np.array([[e * c, sn], [-sn, e.conjugate() * c]], dtype=complex)


class NamedStrategy(Enum):
    C = "C"
    D = "D"
    Q = "Q"
    HADAMARD = "H"
    SIGMA_X = "X"
    SIGMA_Y = "Y"
    SIGMA_Z = "Z"

    @property
    def in_two_parameter_family(self) -> bool:
        """Member of the U(theta, phi) family, counting SIGMA_Z (= -i Q) as in."""
        return self in _FAMILY_PARAMS or self is NamedStrategy.SIGMA_Z

    @property
    def family_note(self) -> str:
        if self is NamedStrategy.SIGMA_Z:
            return "equals Q up to the global phase -i"
        return ""

    @classmethod
    def parse(cls, text: str) -> "NamedStrategy":
        key = text.strip().upper()
        aliases = {"HADAMARD": "H", "SIGMAX": "X", "SIGMAY": "Y", "SIGMAZ": "Z"}
        key = aliases.get(key, key)
        try:
            return cls(key)
        except ValueError:
            raise ValueError(f"unknown strategy {text!r} (expected one of C, D, Q, H, X, Y, Z)") from None


_FAMILY_PARAMS = {
    NamedStrategy.C: (0.0, 0.0),
    NamedStrategy.D: (math.pi, 0.0),
    NamedStrategy.Q: (0.0, math.pi / 2),
}

_S2 = 1 / math.sqrt(2)
_LITERALS = {
    NamedStrategy.HADAMARD: np.array([[_S2, _S2], [_S2, -_S2]], dtype=complex),
    NamedStrategy.SIGMA_X: np.array([[0, 1], [1, 0]], dtype=complex),
    NamedStrategy.SIGMA_Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    NamedStrategy.SIGMA_Z: np.array([[1, 0], [0, -1]], dtype=complex),
}


def named_unitary(n: NamedStrategy) -> np.ndarray:
    if n in _FAMILY_PARAMS:
        # exact literals rather than cos(pi/2) round-off
        if n is NamedStrategy.C:
            return np.eye(2, dtype=complex)
        if n is NamedStrategy.D:
            return np.array([[0, 1], [-1, 0]], dtype=complex)
        return np.array([[1j, 0], [0, -1j]], dtype=complex)
    return _LITERALS[n].copy()


def _fmt_angle(x: float, unit: float) -> str:
    return f"{x / unit:.6g}pi"


@dataclass(frozen=True)
class Strategy:
    """A labelled single-qubit strategy: a family point or a named operator."""

    label: str
    matrix: np.ndarray = field(compare=False, repr=False)
    params: StrategyParams | None = None
    named: NamedStrategy | None = None

    @classmethod
    def from_params(cls, theta: float, phi: float) -> "Strategy":
        p = StrategyParams(theta, phi)
        label = f"U({_fmt_angle(p.theta, math.pi)},{_fmt_angle(p.phi, math.pi)})"
        return cls(label, strategy_unitary(p), p, None)

    @classmethod
    def from_name(cls, n: NamedStrategy | str) -> "Strategy":
        if isinstance(n, str):
            n = NamedStrategy.parse(n)
        params = StrategyParams(*_FAMILY_PARAMS[n]) if n in _FAMILY_PARAMS else None
        return cls(n.value, named_unitary(n), params, n)

    def describe(self) -> dict:
        d = {"label": self.label}
        if self.params is not None:
            d["theta"] = self.params.theta
            d["phi"] = self.params.phi
        if self.named is not None:
            d["named"] = self.named.name
        return d


# -- game configuration and evolution ---------------------------------------


@dataclass(frozen=True)
class GameConfig:
    tau: float
    base: Strategy
    payoffs: PayoffMatrix

    def __post_init__(self):
        object.__setattr__(self, "tau", _check_angle(self.tau, TAU_MAX, "tau"))
        g = np.kron(self.base.matrix, self.base.matrix)
        if not qlin.is_hermitian(g):
            raise NonHermitianBase(f"entangler base {self.base.label} gives a non-Hermitian U~(x)U~")

    @cached_property
    def j(self) -> np.ndarray:
        return entangler(self.tau, self.base.matrix)

    @cached_property
    def j_dagger(self) -> np.ndarray:
        return qlin.dagger4(self.j)

    @cached_property
    def initial_state(self) -> np.ndarray:
        return self.j @ qlin.KET_00

    def with_tau(self, tau: float) -> "GameConfig":
        return GameConfig(tau, self.base, self.payoffs)


def entangler(tau: float, base, method: str = "auto") -> np.ndarray:
    tau = _check_angle(tau, TAU_MAX, "tau")
    b = qlin.check_unitary(base, 2, "entangler base")
    g = qlin.tensor2(b, b)
    if not qlin.is_hermitian(g):
        raise NonHermitianBase("entangler base must give a Hermitian U~(x)U~")
    return qlin.unitary_exp(tau / 2, g, method=method)


def play(cfg: GameConfig, u_a, u_b) -> np.ndarray:
    """Final state J^dagger (u_a (x) u_b) J |00>."""
    local = qlin.tensor2(_matrix(u_a), _matrix(u_b))
    psi = qlin.apply(cfg.j, qlin.KET_00)
    psi = qlin.apply(local, psi)
    return qlin.apply(cfg.j_dagger, psi)


def _matrix(u) -> np.ndarray:
    return u.matrix if isinstance(u, Strategy) else np.asarray(u, dtype=complex)


@dataclass(frozen=True)
class OutcomeProbs:
    p_cc: float
    p_cd: float
    p_dc: float
    p_dd: float

    def as_array(self) -> np.ndarray:
        return np.array([self.p_cc, self.p_cd, self.p_dc, self.p_dd])


@dataclass(frozen=True)
class PayoffPair:
    a: float
    b: float


def outcome_probs(s) -> OutcomeProbs:
    s = qlin.check_state(s)
    p = np.abs(s) ** 2
    return OutcomeProbs(*(float(x) for x in p))


def observable_weights(m: PayoffMatrix) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal payoff observables for A and B over (cc, cd, dc, dd).

    B's observable swaps the roles of beta and delta.
    """
    wa = np.array([m.alpha, m.delta, m.beta, m.gamma])
    wb = np.array([m.alpha, m.beta, m.delta, m.gamma])
    return wa, wb


def expected_payoffs(p: OutcomeProbs, m: PayoffMatrix) -> PayoffPair:
    pa = m.alpha * p.p_cc + m.delta * p.p_cd + m.beta * p.p_dc + m.gamma * p.p_dd
    pb = m.alpha * p.p_cc + m.beta * p.p_cd + m.delta * p.p_dc + m.gamma * p.p_dd
    return PayoffPair(float(pa), float(pb))


def play_and_score(cfg: GameConfig, u_a, u_b) -> tuple[OutcomeProbs, PayoffPair]:
    probs = outcome_probs(play(cfg, u_a, u_b))
    return probs, expected_payoffs(probs, cfg.payoffs)


# -- batched evaluation -----------------------------------------------------

_CHUNK_CELLS = 1 << 18


def _stack(strategies: Sequence) -> np.ndarray:
    return np.stack([_matrix(s) for s in strategies]).astype(complex)


def outcome_table(cfg: GameConfig, strategies_a: Sequence, strategies_b: Sequence) -> np.ndarray:
    """Outcome probabilities for every (a, b) pair, shape (len_a, len_b, 4).

    Same quantity as :func:`play` followed by :func:`outcome_probs`, computed
    in vectorised chunks: (U_a (x) U_b) psi is U_a Psi U_b^T with Psi the
    initial state reshaped to 2x2.
    """
    ua = _stack(strategies_a)
    ub = _stack(strategies_b)
    psi0 = cfg.initial_state.reshape(2, 2)
    jd = cfg.j_dagger
    left = np.einsum("aij,jk->aik", ua, psi0)
    na, nb = len(ua), len(ub)
    out = np.empty((na, nb, 4))
    rows = max(1, _CHUNK_CELLS // max(nb, 1))
    for start in range(0, na, rows):
        blk = np.einsum("aik,blk->abil", left[start:start + rows], ub)
        blk = blk.reshape(blk.shape[0], nb, 4) @ jd.T
        out[start:start + rows] = blk.real**2 + blk.imag**2
    return out


def payoff_table(cfg: GameConfig, strategies_a: Sequence, strategies_b: Sequence) -> tuple[np.ndarray, np.ndarray]:
    """Expected payoffs (A table, B table), each of shape (len_a, len_b)."""
    probs = outcome_table(cfg, strategies_a, strategies_b)
    wa, wb = observable_weights(cfg.payoffs)
    return probs @ wa, probs @ wb

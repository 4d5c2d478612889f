"""Newcomb's problem played as a symmetric two-person dilemma.

The human is the row player, the predictor (SB) the column player; Box1 is
the cooperative strategy C and Box2 the defecting strategy D.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .equilibrium import (
    NAMED_EPSILON,
    EquilibriumReport,
    SpaceLike,
    StrategySpace,
    verify_nash,
)
from .ewl import GameConfig, NamedStrategy, OutcomeProbs, PayoffPair, Strategy, play_and_score
from .payoff import PayoffMatrix, extend_symmetric, make_payoff_matrix, solve_classical

BOX_LABELS = ("Box1", "Box2")


@dataclass(frozen=True)
class NewcombInstance:
    box1_full: float
    both_when_full: float
    box2_only: float
    penalty: float = 0.0


def np_matrix(inst: NewcombInstance) -> PayoffMatrix:
    return make_payoff_matrix(inst.box1_full, inst.both_when_full, inst.box2_only, inst.penalty)


@dataclass(frozen=True)
class MixedHumanState:
    p: float
    matrix: np.ndarray


def _check_p(p) -> float:
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"p must lie in [0, 1], got {p!r}")
    return p


def mixed_state(p: float) -> MixedHumanState:
    """Human qubit after a Box1-with-probability-p mixture passes through H."""
    p = _check_p(p)
    c = 2 * p - 1
    return MixedHumanState(p, 0.5 * np.array([[1.0, c], [c, 1.0]]))


def mixed_payoff(p: float, m: PayoffMatrix) -> float:
    p = _check_p(p)
    return 0.25 * (m.alpha + (2 * p - 1) * (m.delta + m.beta) + m.gamma)


def mixed_payoff_density(p: float, m: PayoffMatrix) -> float:
    """Same payoff via the density matrix: (1/2) tr(M rho).

    At p = 1 the weights rho/2 are the uniform 1/4 outcome distribution of
    Hadamard-vs-Hadamard play, which fixes the 1/2 normalisation.
    """
    rho = mixed_state(p).matrix
    return 0.5 * float(np.trace(m.as_array() @ rho))


def prediction_accuracy(p: OutcomeProbs) -> float:
    return min(1.0, p.p_cc + p.p_dd)


@dataclass(frozen=True)
class NewcombReport:
    classical_recommendation: str
    classical_recommendation_strict: bool
    classical_payoff: float
    quantum_equilibrium: EquilibriumReport
    quantum_probs: OutcomeProbs
    prediction_accuracy: float
    hadamard_payoffs: PayoffPair

    def to_dict(self) -> dict:
        return {
            "classical": {
                "recommendation": self.classical_recommendation,
                "strictly_dominant": self.classical_recommendation_strict,
                "payoff_against_correct_prediction": self.classical_payoff,
            },
            "quantum": self.quantum_equilibrium.to_dict(),
            "quantum_outcome_probs": [
                self.quantum_probs.p_cc,
                self.quantum_probs.p_cd,
                self.quantum_probs.p_dc,
                self.quantum_probs.p_dd,
            ],
            "prediction_accuracy": self.prediction_accuracy,
            "hadamard_payoffs": [self.hadamard_payoffs.a, self.hadamard_payoffs.b],
        }


def solve_np(
    inst: NewcombInstance,
    tau: float = math.pi / 2,
    base: Strategy | None = None,
    space: SpaceLike | None = None,
    epsilon: float = NAMED_EPSILON,
) -> NewcombReport:
    """Classical dominance analysis plus the sigma_z quantum equilibrium check.

    ``tau``, ``base`` (default D), ``space`` (default 65x33 family grid) and
    ``epsilon`` override the quantum game configuration.
    """
    m = np_matrix(inst)
    game = extend_symmetric(m, BOX_LABELS)
    sol = solve_classical(game)
    if sol.dominant_row is None:
        raise ValueError("no dominant human strategy; payoff ordering should guarantee one")
    rec = sol.dominant_row
    # the predictor is right when it matches the human's box
    classical_payoff = game.cell(rec, rec)[0]

    cfg = GameConfig(tau, base or Strategy.from_name(NamedStrategy.D), m)
    z = Strategy.from_name(NamedStrategy.SIGMA_Z)
    report = verify_nash(cfg, (z, z), space if space is not None else StrategySpace(), epsilon)
    probs, _ = play_and_score(cfg, z, z)
    h = Strategy.from_name(NamedStrategy.HADAMARD)
    _, h_pay = play_and_score(cfg, h, h)

    return NewcombReport(
        BOX_LABELS[rec],
        sol.dominant_row_strict,
        classical_payoff,
        report,
        probs,
        prediction_accuracy(probs),
        h_pay,
    )

"""Grid-certified Nash equilibria over EWL strategy spaces."""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Sequence, Union

import numpy as np

from . import qlin
from .ewl import (
    GameConfig,
    NamedStrategy,
    PayoffPair,
    Strategy,
    payoff_table,
    play_and_score,
)

DEFAULT_THETA_STEPS = 65
DEFAULT_PHI_STEPS = 33
NAMED_EPSILON = 1e-9
GRID_EPSILON = 1e-6
MAX_GRID_POINTS = 10_000

OUT_OF_FAMILY = (
    NamedStrategy.HADAMARD,
    NamedStrategy.SIGMA_X,
    NamedStrategy.SIGMA_Y,
    NamedStrategy.SIGMA_Z,
)


class GridTooLarge(ValueError):
    pass


class SpaceKind(Enum):
    TWO_PARAMETER_FAMILY = "TwoParameterFamily"
    TWO_PARAMETER_PLUS_NAMED = "TwoParameterPlusNamed"
    CLASSICAL_PURE = "ClassicalPure"


@dataclass(frozen=True)
class StrategySpace:
    kind: SpaceKind = SpaceKind.TWO_PARAMETER_FAMILY
    theta_steps: int = DEFAULT_THETA_STEPS
    phi_steps: int = DEFAULT_PHI_STEPS

    def __post_init__(self):
        if self.kind is not SpaceKind.CLASSICAL_PURE and (self.theta_steps < 2 or self.phi_steps < 2):
            raise ValueError(
                f"grid needs at least 2 steps per axis, got {self.theta_steps}x{self.phi_steps}"
            )

    def describe(self) -> dict:
        if self.kind is SpaceKind.CLASSICAL_PURE:
            return {"kind": self.kind.value}
        return {"kind": self.kind.value, "theta_steps": self.theta_steps, "phi_steps": self.phi_steps}


# A space is either a StrategySpace or an explicit list of strategies.
SpaceLike = Union[StrategySpace, Sequence[Strategy]]


def build_grid(space: StrategySpace) -> list[Strategy]:
    """Strategies of a space, theta-major then phi, then named extras."""
    if space.kind is SpaceKind.CLASSICAL_PURE:
        return [Strategy.from_name(NamedStrategy.C), Strategy.from_name(NamedStrategy.D)]
    thetas = np.linspace(0.0, math.pi, space.theta_steps)
    phis = np.linspace(0.0, math.pi / 2, space.phi_steps)
    grid = [Strategy.from_params(t, p) for t in thetas for p in phis]
    if space.kind is SpaceKind.TWO_PARAMETER_PLUS_NAMED:
        grid.extend(Strategy.from_name(n) for n in OUT_OF_FAMILY)
    return grid


def _resolve(space: SpaceLike) -> tuple[list[Strategy], dict]:
    if isinstance(space, StrategySpace):
        grid = build_grid(space)
        meta = space.describe()
    else:
        grid = list(space)
        meta = {"kind": "Explicit", "labels": [s.label for s in grid]}
    if not grid:
        raise ValueError("strategy space is empty")
    if len(grid) > MAX_GRID_POINTS:
        raise GridTooLarge(f"{len(grid)} strategies per player exceeds the limit of {MAX_GRID_POINTS}")
    return grid, meta


def best_response(
    cfg: GameConfig, opponent: Strategy, space: SpaceLike, responder: str = "A"
) -> tuple[Strategy, float]:
    """Best grid reply to ``opponent``; ties go to the lowest grid index."""
    grid, _ = _resolve(space)
    if responder == "A":
        values = payoff_table(cfg, grid, [opponent])[0][:, 0]
    elif responder == "B":
        values = payoff_table(cfg, [opponent], grid)[1][0, :]
    else:
        raise ValueError(f"responder must be 'A' or 'B', got {responder!r}")
    k = int(np.argmax(values))  # argmax returns the first maximum
    return grid[k], float(values[k])


@dataclass(frozen=True)
class EquilibriumReport:
    pair: tuple[Strategy, Strategy]
    payoffs: PayoffPair
    max_unilateral_gain_a: float
    max_unilateral_gain_b: float
    best_deviation_a: Strategy
    best_deviation_b: Strategy
    grid: dict
    epsilon: float

    @property
    def is_nash(self) -> bool:
        return self.max_unilateral_gain_a <= self.epsilon and self.max_unilateral_gain_b <= self.epsilon

    def to_dict(self) -> dict:
        return {
            "pair": [self.pair[0].describe(), self.pair[1].describe()],
            "payoffs": [self.payoffs.a, self.payoffs.b],
            "is_nash": self.is_nash,
            "max_unilateral_gain_a": self.max_unilateral_gain_a,
            "max_unilateral_gain_b": self.max_unilateral_gain_b,
            "best_deviation_a": self.best_deviation_a.describe(),
            "best_deviation_b": self.best_deviation_b.describe(),
            "grid": self.grid,
            "epsilon": self.epsilon,
        }


def verify_nash(
    cfg: GameConfig,
    pair: tuple[Strategy, Strategy],
    space: SpaceLike,
    epsilon: float = NAMED_EPSILON,
) -> EquilibriumReport:
    """Largest gain either player can get by deviating alone within the grid."""
    grid, meta = _resolve(space)
    sa, sb = pair
    _, payoffs = play_and_score(cfg, sa, sb)
    dev_a, best_a = best_response(cfg, sb, grid, "A")
    dev_b, best_b = best_response(cfg, sa, grid, "B")
    gain_a = max(0.0, best_a - payoffs.a)
    gain_b = max(0.0, best_b - payoffs.b)
    return EquilibriumReport(pair, payoffs, gain_a, gain_b, dev_a, dev_b, meta, epsilon)


def search_equilibria(
    cfg: GameConfig, space: SpaceLike, epsilon: float = GRID_EPSILON
) -> list[EquilibriumReport]:
    """Every grid pair from which no single-player grid deviation gains more
    than ``epsilon``, in row-major order (A's index, then B's)."""
    grid, meta = _resolve(space)
    table_a, table_b = payoff_table(cfg, grid, grid)
    best_a = table_a.max(axis=0)  # A's best reply value to each B column
    best_b = table_b.max(axis=1)
    arg_a = table_a.argmax(axis=0)
    arg_b = table_b.argmax(axis=1)
    gain_a = np.maximum(0.0, best_a[None, :] - table_a)
    gain_b = np.maximum(0.0, best_b[:, None] - table_b)
    ok = (gain_a <= epsilon) & (gain_b <= epsilon)

    reports = []
    for i, j in zip(*np.nonzero(ok)):  # np.nonzero is row-major
        reports.append(
            EquilibriumReport(
                (grid[i], grid[j]),
                PayoffPair(float(table_a[i, j]), float(table_b[i, j])),
                float(gain_a[i, j]),
                float(gain_b[i, j]),
                grid[arg_a[j]],
                grid[arg_b[i]],
                meta,
                epsilon,
            )
        )
    return reports


@dataclass(frozen=True)
class TauSweep:
    tau_values: list[float]
    payoff_pairs: list[PayoffPair]
    concurrences: list[float]


def sweep_tau(cfg_base: GameConfig, pair: tuple[Strategy, Strategy], steps: int) -> TauSweep:
    """Payoffs of a fixed pair at ``steps`` evenly spaced tau in [0, pi/2]."""
    if steps < 2:
        raise ValueError(f"sweep needs at least 2 steps, got {steps}")
    taus = [float(t) for t in np.linspace(0.0, math.pi / 2, steps)]
    pairs, conc = [], []
    for t in taus:
        cfg = cfg_base.with_tau(t)
        pairs.append(play_and_score(cfg, *pair)[1])
        conc.append(qlin.concurrence(cfg.initial_state))
    return TauSweep(taus, pairs, conc)

"""Command-line front end.

    ewlgame solve-classical --payoffs 3,5,1,0
    ewlgame play --tau 0.5pi --base D --a Q --b Q --payoffs 3,5,1,0
    ewlgame search-nash --tau 0.5pi --grid 9x5 --payoffs 3,5,1,0
    ewlgame sweep-tau --base Y --a H --b H --steps 9 --csv --payoffs 3,5,1,0
    ewlgame newcomb --payoffs 1000000,1001000,1000,0

Exit codes: 0 success, 2 invalid input, 1 internal error.
"""

from __future__ import annotations

import argparse
import io
import json
import math
import re
import sys
from dataclasses import dataclass, field
from typing import Any

from . import __version__
from .equilibrium import (
    NAMED_EPSILON,
    GridTooLarge,
    SpaceKind,
    StrategySpace,
    search_equilibria,
    sweep_tau,
    verify_nash,
)
from .ewl import AngleOutOfRange, GameConfig, NamedStrategy, Strategy, play_and_score
from .newcomb import NewcombInstance, prediction_accuracy, solve_np
from .payoff import (
    OrderingViolation,
    PayoffMatrix,
    classify,
    extend_symmetric,
    make_payoff_matrix,
    solve_classical,
)

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_USAGE = 2

VERBS = ("solve-classical", "play", "search-nash", "sweep-tau", "newcomb")
BASES = {"D": NamedStrategy.D, "Y": NamedStrategy.SIGMA_Y, "Z": NamedStrategy.SIGMA_Z}
SPACES = {
    "family": SpaceKind.TWO_PARAMETER_FAMILY,
    "named": SpaceKind.TWO_PARAMETER_PLUS_NAMED,
    "classical": SpaceKind.CLASSICAL_PURE,
}

_ANGLE_RE = re.compile(r"^\s*([+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?)?\s*pi\s*$", re.IGNORECASE)
_FAMILY_RE = re.compile(r"^\s*u\((.+),(.+)\)\s*$", re.IGNORECASE)


class UsageError(Exception):
    pass


def parse_angle(text: str) -> float:
    """``"0.5pi"``, ``"pi"`` or raw radians such as ``"1.25"``."""
    m = _ANGLE_RE.match(text)
    if m:
        coef = float(m.group(1)) if m.group(1) else 1.0
        value = coef * math.pi
    else:
        try:
            value = float(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"malformed angle {text!r}") from None
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"angle must be finite, got {text!r}")
    return value


def parse_strategy(text: str) -> Strategy:
    m = _FAMILY_RE.match(text)
    try:
        if m:
            return Strategy.from_params(parse_angle(m.group(1)), parse_angle(m.group(2)))
        return Strategy.from_name(text)
    except (ValueError, AngleOutOfRange) as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_payoffs(text: str) -> tuple[float, float, float, float]:
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError(f"--payoffs needs 4 comma-separated numbers, got {text!r}")
    try:
        vals = tuple(float(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed payoff list {text!r}") from None
    if not all(math.isfinite(v) for v in vals):
        raise argparse.ArgumentTypeError("payoffs must be finite")
    return vals  # type: ignore[return-value]


def parse_grid(text: str) -> tuple[int, int]:
    m = re.match(r"^\s*(\d+)\s*[xX]\s*(\d+)\s*$", text)
    if not m:
        raise argparse.ArgumentTypeError(f"--grid expects TxP such as 65x33, got {text!r}")
    t, p = int(m.group(1)), int(m.group(2))
    if t < 2 or p < 2:
        raise argparse.ArgumentTypeError("--grid needs at least 2 steps per axis")
    return t, p


def parse_epsilon(text: str) -> float:
    try:
        e = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed epsilon {text!r}") from None
    if not (math.isfinite(e) and e >= 0):
        raise argparse.ArgumentTypeError("epsilon must be a finite non-negative number")
    return e


def parse_steps(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed step count {text!r}") from None
    if n < 2:
        raise argparse.ArgumentTypeError("--steps must be at least 2")
    return n


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: error: {message}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ewlgame", description="EWL quantum game engine")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    def common(p, *, quantum=True, grid=False):
        p.add_argument("--payoffs", type=parse_payoffs, default=(3.0, 5.0, 1.0, 0.0),
                       help="alpha,beta,gamma,delta (default 3,5,1,0)")
        p.add_argument("--legacy-delta", action="store_true",
                       help="do not require delta <= 0")
        p.add_argument("--out", metavar="FILE", help="write the report here instead of stdout")
        if quantum:
            p.add_argument("--tau", type=parse_angle, default=math.pi / 2)
            p.add_argument("--base", type=str.upper, choices=sorted(BASES), default="D")
        if grid:
            p.add_argument("--grid", type=parse_grid, default=(65, 33))
            p.add_argument("--space", choices=sorted(SPACES), default="family")

    common(sub.add_parser("solve-classical", help="dominance, pure Nash and Pareto cells"), quantum=False)

    p = sub.add_parser("play", help="play one strategy pair")
    common(p)
    p.add_argument("--a", type=parse_strategy, default=parse_strategy("C"))
    p.add_argument("--b", type=parse_strategy, default=parse_strategy("C"))
    p.add_argument("--epsilon", type=parse_epsilon, default=None,
                   help="also verify the pair as a Nash point on --grid")
    p.add_argument("--grid", type=parse_grid, default=(65, 33))
    p.add_argument("--space", choices=sorted(SPACES), default="family")

    p = sub.add_parser("search-nash", help="all grid pairs that pass the Nash check")
    common(p, grid=True)
    p.add_argument("--epsilon", type=parse_epsilon, default=NAMED_EPSILON)

    p = sub.add_parser("sweep-tau", help="payoffs of a fixed pair as tau goes 0 -> pi/2")
    common(p)
    p.add_argument("--a", type=parse_strategy, default=parse_strategy("C"))
    p.add_argument("--b", type=parse_strategy, default=parse_strategy("C"))
    p.add_argument("--steps", type=parse_steps, default=9)
    p.add_argument("--csv", action="store_true")

    p = sub.add_parser("newcomb", help="classical vs quantum Newcomb analysis")
    common(p, grid=True)
    p.add_argument("--epsilon", type=parse_epsilon, default=NAMED_EPSILON)
    return parser


@dataclass
class Command:
    verb: str
    options: argparse.Namespace
    argv: list[str] = field(default_factory=list)
    payoffs: PayoffMatrix | None = None


def _strip_out(argv: list[str]) -> list[str]:
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
            continue
        if tok == "--out":
            skip = True
            continue
        if tok.startswith("--out="):
            continue
        out.append(tok)
    return out


def parse(argv: list[str]) -> Command:
    """Parse and validate; raises UsageError or OrderingViolation."""
    ns = build_parser().parse_args(argv)
    a, b, g, d = ns.payoffs
    m = make_payoff_matrix(a, b, g, d, legacy=ns.legacy_delta)
    if hasattr(ns, "tau") and not 0.0 <= ns.tau <= math.pi / 2 + 1e-12:
        raise UsageError(f"--tau must lie in [0, pi/2], got {ns.tau!r}")
    return Command(ns.verb, ns, _strip_out(list(argv)), m)


# -- execution ----------------------------------------------------------------


def _num(x: float) -> float:
    if isinstance(x, bool):
        return x
    y = float(f"{float(x):.12g}")
    return 0.0 if y == 0 else y


def _clean(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, (int, float)):
        return _num(obj)
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if hasattr(obj, "item"):
        return _clean(obj.item())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _space(ns) -> StrategySpace:
    t, p = ns.grid
    return StrategySpace(SPACES[ns.space], t, p)


def _config(ns, m: PayoffMatrix) -> GameConfig:
    return GameConfig(ns.tau, Strategy.from_name(BASES[ns.base]), m)


def _run_solve_classical(c: Command) -> tuple[dict, dict | None]:
    game = extend_symmetric(c.payoffs)
    sol = solve_classical(game)
    lab = game.row_labels

    def name(i):
        return None if i is None else lab[i]

    result = {
        "matrix_class": classify(c.payoffs).value,
        "bimatrix": [[list(game.cell(i, j)) for j in (0, 1)] for i in (0, 1)],
        "dominant_row": name(sol.dominant_row),
        "dominant_row_strict": sol.dominant_row_strict,
        "dominant_col": name(sol.dominant_col),
        "dominant_col_strict": sol.dominant_col_strict,
        "pure_nash": [
            {"cell": [lab[i], lab[j]], "payoffs": list(game.cell(i, j))} for i, j in sol.pure_nash
        ],
        "pareto_optimal": [
            {"cell": [lab[i], lab[j]], "payoffs": list(pay)} for (i, j), pay in sol.pareto_optimal
        ],
    }
    return result, None


def _run_play(c: Command) -> tuple[dict, dict | None]:
    ns = c.options
    cfg = _config(ns, c.payoffs)
    probs, pay = play_and_score(cfg, ns.a, ns.b)
    result = {
        "tau": cfg.tau,
        "base": cfg.base.label,
        "a": ns.a.describe(),
        "b": ns.b.describe(),
        "outcome_probs": {"cc": probs.p_cc, "cd": probs.p_cd, "dc": probs.p_dc, "dd": probs.p_dd},
        "payoffs": [pay.a, pay.b],
        "prediction_accuracy": prediction_accuracy(probs),
    }
    grid = None
    if ns.epsilon is not None:
        space = _space(ns)
        result["nash_check"] = verify_nash(cfg, (ns.a, ns.b), space, ns.epsilon).to_dict()
        grid = space.describe()
    return result, grid


def _run_search(c: Command) -> tuple[dict, dict | None]:
    ns = c.options
    cfg = _config(ns, c.payoffs)
    space = _space(ns)
    found = search_equilibria(cfg, space, ns.epsilon)
    result = {
        "tau": cfg.tau,
        "base": cfg.base.label,
        "epsilon": ns.epsilon,
        "count": len(found),
        "equilibria": [
            {
                "pair": [r.pair[0].describe(), r.pair[1].describe()],
                "payoffs": [r.payoffs.a, r.payoffs.b],
                "max_unilateral_gain": [r.max_unilateral_gain_a, r.max_unilateral_gain_b],
            }
            for r in found
        ],
    }
    return result, space.describe()


def _run_sweep(c: Command) -> tuple[dict, dict | None]:
    ns = c.options
    cfg = _config(ns, c.payoffs)
    sw = sweep_tau(cfg, (ns.a, ns.b), ns.steps)
    result = {
        "base": cfg.base.label,
        "a": ns.a.describe(),
        "b": ns.b.describe(),
        "rows": [
            {"tau": t, "payoff_a": p.a, "payoff_b": p.b, "concurrence": k}
            for t, p, k in zip(sw.tau_values, sw.payoff_pairs, sw.concurrences)
        ],
    }
    return result, None


def _run_newcomb(c: Command) -> tuple[dict, dict | None]:
    ns = c.options
    m = c.payoffs
    inst = NewcombInstance(m.alpha, m.beta, m.gamma, m.delta)
    space = _space(ns)
    rep = solve_np(inst, ns.tau, Strategy.from_name(BASES[ns.base]), space, ns.epsilon)
    result = {"tau": ns.tau, "base": ns.base, **rep.to_dict()}
    return result, space.describe()


_RUNNERS = {
    "solve-classical": _run_solve_classical,
    "play": _run_play,
    "search-nash": _run_search,
    "sweep-tau": _run_sweep,
    "newcomb": _run_newcomb,
}


def execute(c: Command) -> dict:
    result, grid = _RUNNERS[c.verb](c)
    m = c.payoffs
    report = {
        "command": {"verb": c.verb, "argv": c.argv},
        "payoff_matrix": {"alpha": m.alpha, "beta": m.beta, "gamma": m.gamma, "delta": m.delta},
        "result": result,
        "meta": {"version": __version__, "grid": grid},
    }
    return _clean(report)


def render_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False, ensure_ascii=False) + "\n"


def render_csv(report: dict) -> str:
    buf = io.StringIO()
    buf.write("tau,payoff_a,payoff_b\n")
    for row in report["result"]["rows"]:
        buf.write(f"{row['tau']!r},{row['payoff_a']!r},{row['payoff_b']!r}\n")
    return buf.getvalue()


def run(argv: list[str]) -> tuple[int, str]:
    """Return (exit code, text) without touching stdout; used by main and tests."""
    try:
        cmd = parse(argv)
    except SystemExit as exc:  # --help / --version already printed
        return int(exc.code or 0), ""
    except (UsageError, argparse.ArgumentTypeError, OrderingViolation, ValueError) as exc:
        return EXIT_USAGE, f"{exc}\n"
    try:
        report = execute(cmd)
        csv = cmd.verb == "sweep-tau" and cmd.options.csv
        text = render_csv(report) if csv else render_json(report)
    except (OrderingViolation, AngleOutOfRange, GridTooLarge) as exc:
        return EXIT_USAGE, f"{exc}\n"
    except Exception as exc:  # noqa: BLE001
        return EXIT_INTERNAL, f"internal error: {type(exc).__name__}: {exc}\n"

    out = getattr(cmd.options, "out", None)
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        return EXIT_OK, ""
    return EXIT_OK, text


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    code, text = run(argv)
    stream = sys.stdout if code == EXIT_OK else sys.stderr
    stream.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Population cooperation rates and parameter sweeps.

The population is uniform over types ``(alpha, beta)`` in the unit
square.  A game's cooperation rate is the measure of types for which
cooperating is translucently rational, estimated either on a midpoint
grid or by seeded Monte Carlo.  Decisions come from the closed-form
conditions in :mod:`translucent.thresholds`.
"""

from __future__ import annotations

import io
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

from . import altmodels
from .errors import ParamDomainError
from .games import GameSpec, Variant, make_game, parse_pairs
from .thresholds import cooperation_decisions

STEP_TOL = 1e-9
RATIO_TOL = 0.02


@dataclass(frozen=True)
class RateMethod:
    kind: str  # "grid" or "mc"
    n: int
    seed: int = 0

    def __post_init__(self):
        if self.kind not in ("grid", "mc"):
            raise ParamDomainError(f"unknown rate method {self.kind!r}")
        if self.kind == "grid" and self.n < 2:
            raise ParamDomainError(f"grid method needs at least 2 points per axis, got {self.n}")
        if self.kind == "mc" and self.n < 1:
            raise ParamDomainError(f"monte carlo method needs at least 1 sample, got {self.n}")

    @classmethod
    def grid(cls, n: int = 201) -> "RateMethod":
        return cls("grid", int(n))

    @classmethod
    def monte_carlo(cls, n: int, seed: int = 0) -> "RateMethod":
        return cls("mc", int(n), int(seed))

    def describe(self) -> str:
        return f"grid({self.n})" if self.kind == "grid" else f"monte_carlo({self.n}, seed={self.seed})"


def midpoints(n: int) -> np.ndarray:
    return (np.arange(n) + 0.5) / n


def cooperation_rate(game: GameSpec, method: RateMethod | None = None) -> float:
    method = method or RateMethod.grid()
    if method.kind == "grid":
        axis = midpoints(method.n)
        decisions = cooperation_decisions(game, axis[:, None], axis[None, :])
    else:
        rng = np.random.default_rng(method.seed)
        alpha = rng.random(method.n)
        beta = rng.random(method.n)
        decisions = cooperation_decisions(game, alpha, beta)
    return float(np.count_nonzero(decisions)) / decisions.size


@dataclass
class RegionMap:
    alpha_grid: np.ndarray
    beta_grid: np.ndarray
    decisions: np.ndarray  # shape (len(alpha_grid), len(beta_grid))

    def to_csv(self) -> str:
        lines = ["alpha,beta,cooperate"]
        for i, a in enumerate(self.alpha_grid):
            for j, b in enumerate(self.beta_grid):
                lines.append(f"{a:.6f},{b:.6f},{int(self.decisions[i, j])}")
        return "\n".join(lines) + "\n"


def _check_grid(name: str, grid) -> np.ndarray:
    g = np.asarray(grid, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise ParamDomainError(f"{name} must be a nonempty 1-d grid")
    if np.any((g < 0) | (g > 1)) or np.any(np.diff(g) <= 0):
        raise ParamDomainError(f"{name} must be ascending values in [0, 1]")
    return g


def region_map(game: GameSpec, alpha_grid, beta_grid) -> RegionMap:
    a = _check_grid("alpha grid", alpha_grid)
    b = _check_grid("beta grid", beta_grid)
    return RegionMap(a, b, cooperation_decisions(game, a[:, None], b[None, :]))


@dataclass
class SweepSeries:
    parameter: str
    values: list[float]
    rates: list[float]
    family: str = ""

    def to_csv(self) -> str:
        rows = ["param,value,rate"]
        rows += [f"{self.parameter},{v:.12g},{r:.12g}" for v, r in zip(self.values, self.rates)]
        return "\n".join(rows) + "\n"


def sweep_series(family: str, swept_parameter: str, values: Iterable[float],
                 fixed_params: Mapping[str, object], rate_method: RateMethod | None = None,
                 rate: Callable[[GameSpec], float] | None = None) -> SweepSeries:
    """Cooperation rate at each value of one game parameter.

    ``rate`` overrides the translucent population rate; it is how the
    other behavioural models are swept over the same series.
    """
    method = rate_method or RateMethod.grid()
    rate = rate or (lambda g: cooperation_rate(g, method))
    values = [float(v) for v in values]
    rates = []
    for v in values:
        game = make_game(family, {**fixed_params, swept_parameter: v})
        rates.append(rate(game))
    return SweepSeries(swept_parameter, values, rates, Variant.parse(family).value)


def monotone(rates: Sequence[float], direction: str, tol: float = STEP_TOL) -> bool:
    """Weakly monotone in ``direction`` step by step, with a nonzero net change."""
    r = np.asarray(rates, dtype=float)
    steps = np.diff(r)
    if direction == "increasing":
        return bool(np.all(steps >= -tol) and r[-1] - r[0] > tol)
    if direction == "decreasing":
        return bool(np.all(steps <= tol) and r[0] - r[-1] > tol)
    raise ValueError(f"unknown direction {direction!r}")


# -- regularities ------------------------------------------------------------------------

@dataclass(frozen=True)
class Regularity:
    id: str
    family: str
    parameter: str
    values: tuple
    fixed: Mapping[str, object]
    direction: str
    kind: str = "observed"  # or "prediction"
    mandatory: bool = True
    note: str = ""


OBSERVED = (
    Regularity("pd_benefit", "pd", "b", tuple(range(2, 21, 2)), {"c": 1}, "increasing"),
    Regularity("pd_cost", "pd", "c", (1, 2, 4, 6, 8, 10, 12, 14, 16, 18), {"b": 20}, "decreasing"),
    Regularity("td_bonus", "td", "b", (2, 5, 10, 20, 40), {"l": 2, "h": 100}, "decreasing"),
    Regularity("pgg_rho", "pgg", "rho", (0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9), {"n": 4}, "increasing"),
    Regularity("pgg_players", "pgg", "n", tuple(range(3, 41)), {"rho": 0.5}, "increasing"),
    Regularity("bc_players", "bc", "n", tuple(range(2, 11)), {"l": 2, "h": 100}, "decreasing"),
    Regularity("bc_floor", "bc", "l", (2, 10, 25, 50), {"h": 100, "n": 2}, "decreasing"),
)

PREDICTIONS = (
    Regularity("td_spread", "td", "h", (20, 50, 100, 200), {"l": 2, "b": 10}, "increasing", "prediction"),
    Regularity("bc_ratio", "bc", "h", (100, 200, 500), {"n": 2}, "constant", "prediction",
               note="L = H/50; rates must agree within 0.02"),
    Regularity("bc_reservation", "bc", "h", (10, 50, 100, 500), {"l": 2, "n": 2}, "increasing", "prediction",
               mandatory=False,
               note="informational: the undercut branch carries an (H-1)/H factor, so H-monotonicity is not guaranteed"),
)


@dataclass
class RegularityOutcome:
    regularity: Regularity
    series: SweepSeries
    passed: bool


def _ratio_series(reg: Regularity, rate: Callable[[GameSpec], float]) -> SweepSeries:
    rates = []
    for h in reg.values:
        rates.append(rate(make_game(reg.family, {**reg.fixed, "h": h, "l": h // 50})))
    return SweepSeries(reg.parameter, [float(h) for h in reg.values], rates, reg.family)


def evaluate_regularity(reg: Regularity, rate: Callable[[GameSpec], float]) -> RegularityOutcome:
    if reg.id == "bc_ratio":
        series = _ratio_series(reg, rate)
        passed = max(series.rates) - min(series.rates) <= RATIO_TOL
    else:
        series = sweep_series(reg.family, reg.parameter, reg.values, reg.fixed, rate=rate)
        passed = monotone(series.rates, reg.direction)
    return RegularityOutcome(reg, series, passed)


@dataclass
class SuiteReport:
    outcomes: list[RegularityOutcome] = field(default_factory=list)
    method: str = ""

    @property
    def passed(self) -> bool:
        return all(o.passed for o in self.outcomes if o.regularity.mandatory)

    def outcome(self, regularity_id: str) -> RegularityOutcome:
        return next(o for o in self.outcomes if o.regularity.id == regularity_id)

    def table(self) -> str:
        out = io.StringIO()
        out.write(f"regularity suite, rate method {self.method}\n")
        out.write(f"{'id':<16}{'kind':<12}{'direction':<12}{'result':<8}rates\n")
        for o in self.outcomes:
            r = o.regularity
            result = "pass" if o.passed else "FAIL"
            if not r.mandatory:
                result = result.lower() + "*"
            rates = " ".join(f"{x:.4f}" for x in o.series.rates)
            out.write(f"{r.id:<16}{r.kind:<12}{r.direction:<12}{result:<8}{rates}\n")
        for o in self.outcomes:
            if o.regularity.note:
                out.write(f"  {o.regularity.id}: {o.regularity.note}\n")
        return out.getvalue()

    def csv(self, series_files: Mapping[str, str] | None = None) -> str:
        series_files = series_files or {}
        rows = ["regularity_id,direction,pass,series_file"]
        for o in self.outcomes:
            r = o.regularity
            rows.append(f"{r.id},{r.direction},{str(o.passed).lower()},{series_files.get(r.id, '')}")
        return "\n".join(rows) + "\n"


def regularity_suite(method: RateMethod | None = None, include_predictions: bool = True) -> SuiteReport:
    method = method or RateMethod.grid()
    rate = lambda g: cooperation_rate(g, method)  # noqa: E731
    regs = OBSERVED + (PREDICTIONS if include_predictions else ())
    return SuiteReport([evaluate_regularity(r, rate) for r in regs], method.describe())


# -- sweep config files ---------------------------------------------------------------------

@dataclass
class SweepConfig:
    family: str
    parameter: str
    values: list[float]
    fixed: dict[str, str]
    method: RateMethod


def parse_sweep_config(text: str) -> SweepConfig:
    """Parse the flat ``key=value`` sweep configuration.

    Recognised keys: ``family``, ``param``, ``values`` (comma separated),
    ``method`` (``grid`` or ``mc``), ``grid``, ``samples``, ``seed``; any
    other key is a fixed game parameter.
    """
    pairs = parse_pairs(text)
    try:
        family = pairs.pop("family")
        parameter = pairs.pop("param").lower()
        values = [float(v) for v in pairs.pop("values").split(",") if v]
    except KeyError as exc:
        raise ParamDomainError(f"sweep config missing key {exc.args[0]!r}") from None
    except ValueError:
        raise ParamDomainError("sweep config values must be comma-separated numbers") from None
    kind = pairs.pop("method", "grid")
    grid = int(pairs.pop("grid", 201))
    samples = int(pairs.pop("samples", 100_000))
    seed = int(pairs.pop("seed", 0))
    method = RateMethod.grid(grid) if kind == "grid" else RateMethod("mc", samples, seed)
    if not values:
        raise ParamDomainError("sweep config has no values")
    return SweepConfig(family, parameter, values, pairs, method)


def run_sweep_config(config: SweepConfig) -> SweepSeries:
    return sweep_series(config.family, config.parameter, config.values, config.fixed, config.method)


# -- model comparison -----------------------------------------------------------------------

MODELS = ("translucent", "fehr_schmidt", "charness_rabin", "qre")


@dataclass
class Comparison:
    regularity_ids: list[str]
    cells: dict[str, dict[str, str]]
    cr_points: list[tuple[float, float, str, bool]]

    def matrix_csv(self) -> str:
        rows = ["model," + ",".join(self.regularity_ids)]
        for model in MODELS:
            rows.append(model + "," + ",".join(self.cells[model][r] for r in self.regularity_ids))
        return "\n".join(rows) + "\n"

    def cr_points_csv(self) -> str:
        rows = ["a_cr,b_cr,regularity_id,pass"]
        rows += [f"{a:.6f},{b:.6f},{rid},{str(ok).lower()}" for a, b, rid, ok in self.cr_points]
        return "\n".join(rows) + "\n"


def model_comparison(grid: int = 201, social_grid: int = 11, qre_lambda: float = 1.0) -> Comparison:
    """Evaluate every observed regularity under each behavioural model.

    The translucent population is uniform over ``(alpha, beta)``; the
    Fehr-Schmidt and Charness-Rabin populations are uniform midpoint grids
    over their parameters and ``beta`` (opaque beliefs); the QRE "rate" is
    the equilibrium probability of cooperating and only exists for the
    Prisoner's Dilemma.
    """
    method = RateMethod.grid(grid)
    ids = [r.id for r in OBSERVED]
    cells: dict[str, dict[str, str]] = {m: {} for m in MODELS}
    rates = {
        "translucent": lambda g: cooperation_rate(g, method),
        "fehr_schmidt": lambda g: altmodels.fs_cooperation_rate(g, social_grid),
        "charness_rabin": lambda g: altmodels.cr_cooperation_rate(g, social_grid),
    }
    for model, rate in rates.items():
        for reg in OBSERVED:
            cells[model][reg.id] = "pass" if evaluate_regularity(reg, rate).passed else "fail"
    for reg in OBSERVED:
        if reg.family != "pd":
            cells["qre"][reg.id] = "n/a"
            continue
        qre = lambda g: altmodels.qre_logit_pd(g.b, g.c, qre_lambda)  # noqa: E731
        cells["qre"][reg.id] = "pass" if evaluate_regularity(reg, qre).passed else "fail"

    axis = midpoints(social_grid)
    cr_points = []
    for reg in OBSERVED:
        tables = np.array([
            altmodels.cr_rate_table(make_game(reg.family, {**reg.fixed, reg.parameter: v}), social_grid)
            for v in reg.values
        ])
        for i, a in enumerate(axis):
            for j, b in enumerate(axis):
                cr_points.append((float(a), float(b), reg.id, monotone(tables[:, i, j], reg.direction)))
    return Comparison(ids, cells, cr_points)

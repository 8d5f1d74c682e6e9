"""Translucent best responses.

A type-(alpha, beta, C) player compares the expected utility of
cooperating under the intended-play belief with the expected utility of
every other pure strategy under the post-deviation belief.  Cooperation is
translucently rational when no deviation does strictly better (up to
``EPS_TIE``).

Two routes are provided.  :func:`is_translucently_rational` works on
cooperator-count pmfs.  :func:`exhaustive_subset_oracle` enumerates every
detector subset and every cooperate/defect assignment of the remaining
opponents and evaluates full profiles; it shares nothing with the first
route except the game's payoff function.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import OracleCapExceededError, StrategyRangeError
from .games import GameSpec, symmetric_profiles
from .translucency import TranslucentType, cooperator_count_pmf, opponent_mix

EPS_TIE = 1e-9
ORACLE_MAX_PLAYERS = 12

CSV_HEADER = "game,params,alpha,beta,eu_cooperate,best_deviation,eu_best_deviation,cooperate_rational,tie"


@dataclass(frozen=True)
class BestResponseReport:
    eu_cooperate: float
    best_deviation: int
    eu_best_deviation: float
    cooperate_rational: bool
    tie: bool
    deviation_table: tuple[tuple[int, float], ...] | None = None

    def csv_row(self, game: GameSpec, ttype: TranslucentType) -> str:
        return ",".join([
            game.variant.value, game.params_text(), f"{ttype.alpha:.12g}", f"{ttype.beta:.12g}",
            f"{self.eu_cooperate:.12g}", game.format_strategy(self.best_deviation),
            f"{self.eu_best_deviation:.12g}", str(self.cooperate_rational).lower(),
            str(self.tie).lower(),
        ])


def _report(eu_coop: float, strategies, eus, with_table: bool) -> BestResponseReport:
    best_eu = max(eus)
    # smallest strategy among the (near-)maximizers
    best = next(s for s, eu in zip(strategies, eus) if eu >= best_eu - EPS_TIE)
    best_eu = eus[list(strategies).index(best)]
    table = tuple((int(s), float(e)) for s, e in zip(strategies, eus)) if with_table else None
    return BestResponseReport(
        eu_cooperate=eu_coop,
        best_deviation=int(best),
        eu_best_deviation=best_eu,
        cooperate_rational=eu_coop >= best_eu - EPS_TIE,
        tie=abs(eu_coop - best_eu) <= EPS_TIE,
        deviation_table=table,
    )


def _count_payoffs(game: GameSpec, strategies) -> np.ndarray:
    """``u[s, k]``: focal payoff of strategy ``s`` against ``k`` cooperators."""
    strategies = list(strategies)
    n = game.n_players - 1
    out = np.empty((len(strategies), n + 1))
    for k in range(n + 1):
        out[:, k] = game.payoff_batch(symmetric_profiles(game, strategies, k))[:, 0]
    return out


def _expectations(pmf: np.ndarray, payoffs: np.ndarray) -> list[float]:
    return [math.fsum(pmf * row) for row in payoffs]


def _deviations(game: GameSpec) -> np.ndarray:
    s = game.strategies
    return s[s != game.cooperate]


def expected_utility(game: GameSpec, ttype: TranslucentType, my_strategy, deviated: bool) -> float:
    try:
        s = game.parse_strategy(my_strategy)
    except ValueError:
        raise StrategyRangeError(f"strategy {my_strategy!r} not available in {game}") from None
    pmf = cooperator_count_pmf(game.n_players - 1, opponent_mix(ttype, deviated))
    return _expectations(pmf, _count_payoffs(game, [s]))[0]


def best_deviation(game: GameSpec, ttype: TranslucentType) -> tuple[int, float]:
    """Best non-cooperative strategy under the post-deviation belief.

    Ties (within ``EPS_TIE``) go to the smallest strategy value.
    """
    report = is_translucently_rational(game, ttype)
    return report.best_deviation, report.eu_best_deviation


def is_translucently_rational(game: GameSpec, ttype: TranslucentType,
                              with_table: bool = False) -> BestResponseReport:
    n = game.n_players - 1
    devs = _deviations(game)
    eu_coop = expected_utility(game, ttype, game.cooperate, deviated=False)
    pmf = cooperator_count_pmf(n, opponent_mix(ttype, deviated=True))
    eus = _expectations(pmf, _count_payoffs(game, devs))
    return _report(eu_coop, devs, eus, with_table)


@lru_cache(maxsize=None)
def _detector_layout(n: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Every (detector set, assignment of the undetected) pair for ``n`` opponents.

    Returns per-row detector count, cooperator count and the cooperate
    bitmask of the resulting opponent profile.
    """
    j_sizes, coops, masks = [], [], []
    for detectors in itertools.product((False, True), repeat=n):
        free = [i for i in range(n) if not detectors[i]]
        for assignment in itertools.product((0, 1), repeat=len(free)):
            mask = 0
            for i, a in zip(free, assignment):
                mask |= a << i
            j_sizes.append(sum(detectors))
            coops.append(sum(assignment))
            masks.append(mask)
    return np.array(j_sizes), np.array(coops), np.array(masks)


def _opponent_profiles(game: GameSpec, n: int) -> np.ndarray:
    masks = np.arange(2**n)
    bits = (masks[:, None] >> np.arange(n)[None, :]) & 1
    return np.where(bits == 1, game.cooperate, game.defect)


def _oracle_eus(game: GameSpec, strategies, opponents: np.ndarray, weights: np.ndarray) -> list[float]:
    m = len(opponents)
    rows = np.empty((len(strategies) * m, game.n_players), dtype=np.int64)
    rows[:, 0] = np.repeat(np.asarray(strategies), m)
    rows[:, 1:] = np.tile(opponents, (len(strategies), 1))
    u = game.payoff_batch(rows)[:, 0].reshape(len(strategies), m)
    return [math.fsum(weights * row) for row in u]


def exhaustive_subset_oracle(game: GameSpec, ttype: TranslucentType,
                             with_table: bool = False) -> BestResponseReport:
    """Reference best-response check by explicit enumeration.

    For ``n`` opponents this visits ``3**n`` (detector set, assignment)
    pairs, so it is capped at ``ORACLE_MAX_PLAYERS`` players.
    """
    n_players = game.n_players
    if n_players > ORACLE_MAX_PLAYERS:
        raise OracleCapExceededError(f"oracle supports at most {ORACLE_MAX_PLAYERS} players, got {n_players}")
    n = n_players - 1
    a, b = ttype.alpha, ttype.beta
    opponents = _opponent_profiles(game, n)

    # intended play: each opponent cooperates with probability beta
    masks = np.arange(2**n)
    r = np.array([bin(m).count("1") for m in masks])
    intended = np.array([b**ri * (1.0 - b) ** (n - ri) for ri in r])
    eu_coop = _oracle_eus(game, [game.cooperate], opponents, intended)[0]

    j, k, mask = _detector_layout(n)
    w = a**j * (1.0 - a) ** (n - j) * b**k * (1.0 - b) ** (n - j - k)
    deviated = np.bincount(mask, weights=w, minlength=2**n)
    devs = _deviations(game)
    eus = _oracle_eus(game, devs, opponents, deviated)
    return _report(eu_coop, devs, eus, with_table)

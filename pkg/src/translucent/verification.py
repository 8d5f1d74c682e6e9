"""Randomized agreement campaign between the closed-form conditions, the
count-based best-response engine and the subset-enumeration oracle."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .bestresponse import exhaustive_subset_oracle, is_translucently_rational
from .games import BertrandCompetition, GameSpec, PrisonersDilemma, PublicGoods, TravelersDilemma
from .thresholds import condition_for, td_condition_printed
from .translucency import TranslucentType

EU_TOL = 1e-9
FAMILIES = ("pd", "pgg", "bc", "td")

#: fixed Traveler's Dilemma probes (alpha, beta, L, H, b) run before the random ones
TD_PROBES = ((0.0, 1.0, 2, 100, 2), (0.25, 0.8, 2, 100, 10), (0.5, 0.5, 2, 100, 49))


def _open_unit(rng: np.random.Generator) -> float:
    while True:
        u = rng.random()
        if u > 0.0:
            return u


def sample_game(family: str, rng: np.random.Generator) -> GameSpec:
    """Draw one game from the campaign's parameter ranges."""
    if family == "pd":
        b = 100.0 * _open_unit(rng)
        return PrisonersDilemma(b, b * _open_unit(rng) * (1 - 1e-12))
    if family == "pgg":
        n = int(rng.integers(2, 9))
        lo = 1.0 / n
        while True:
            rho = lo + (1.0 - lo) * rng.random()
            if lo < rho < 1.0:
                return PublicGoods(n, rho)
    if family == "bc":
        n = int(rng.integers(2, 7))
        low = int(rng.integers(2, 60))
        return BertrandCompetition(n, low, int(rng.integers(low + 1, 61)))
    if family == "td":
        low = int(rng.integers(2, 120))
        high = int(rng.integers(low + 1, 121))
        return TravelersDilemma(low, high, int(rng.integers(2, 61)))
    raise ValueError(f"unknown family {family!r}")


@dataclass
class FamilyTally:
    family: str
    samples: int = 0
    closed_form_agree: int = 0
    engine_agree: int = 0
    max_eu_error: float = 0.0
    printed_disagree: list[tuple] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def ok(self) -> bool:
        return (self.closed_form_agree == self.samples and self.engine_agree == self.samples
                and self.max_eu_error <= EU_TOL)


def _record(tally: FamilyTally, game: GameSpec, ttype: TranslucentType) -> None:
    oracle = exhaustive_subset_oracle(game, ttype)
    engine = is_translucently_rational(game, ttype)
    closed = condition_for(game, ttype.alpha, ttype.beta)
    tally.samples += 1
    tally.closed_form_agree += closed.holds == oracle.cooperate_rational
    tally.engine_agree += engine.cooperate_rational == oracle.cooperate_rational
    err = max(abs(engine.eu_cooperate - oracle.eu_cooperate),
              abs(engine.eu_best_deviation - oracle.eu_best_deviation))
    tally.max_eu_error = max(tally.max_eu_error, err)
    if isinstance(game, TravelersDilemma):
        printed = td_condition_printed(ttype.alpha, ttype.beta, game.low, game.high, game.bonus)
        if printed.holds != oracle.cooperate_rational:
            tally.printed_disagree.append(
                (ttype.alpha, ttype.beta, game.low, game.high, game.bonus, printed.holds, oracle.cooperate_rational))


def run_family(family: str, samples: int, seed: int) -> FamilyTally:
    rng = np.random.default_rng([seed, FAMILIES.index(family)])
    tally = FamilyTally(family)
    start = time.perf_counter()
    if family == "td":
        for a, b, low, high, bonus in TD_PROBES:
            _record(tally, TravelersDilemma(low, high, bonus), TranslucentType(a, b))
    for _ in range(samples):
        game = sample_game(family, rng)
        _record(tally, game, TranslucentType(rng.random(), rng.random()))
    tally.seconds = time.perf_counter() - start
    return tally


@dataclass
class CampaignResult:
    tallies: dict[str, FamilyTally]

    @property
    def ok(self) -> bool:
        return all(t.ok for t in self.tallies.values())

    def summary(self, max_listed: int = 10) -> str:
        lines = []
        for t in self.tallies.values():
            closed = "td_derived" if t.family == "td" else "closed_form"
            lines.append(
                f"{t.family:<4} samples={t.samples} {closed}_agree={t.closed_form_agree} "
                f"engine_agree={t.engine_agree} max_eu_error={t.max_eu_error:.3g} "
                f"{'OK' if t.ok else 'MISMATCH'}")
        td = self.tallies.get("td")
        if td is not None:
            lines.append(f"td_printed disagreements with oracle: {len(td.printed_disagree)} of {td.samples}")
            lines.append("  alpha,beta,l,h,b,printed,oracle")
            for row in td.printed_disagree[:max_listed]:
                a, b, low, high, bonus, printed, oracle = row
                lines.append(f"  {a:.6g},{b:.6g},{low},{high},{bonus},{str(printed).lower()},{str(oracle).lower()}")
        return "\n".join(lines)


def oracle_campaign(samples: int = 10_000, seed: int = 7, families=FAMILIES) -> CampaignResult:
    return CampaignResult({f: run_family(f, samples, seed) for f in families})

"""Acceptance suite.

Each test checks one numbered criterion at its stated tolerance and
prints a single ``[criterion N] PASS|FAIL ...`` line.  The lines are
repeated in pytest's terminal summary, and running this file directly
(``python tests/test_acceptance.py``) prints them without pytest.
"""

from __future__ import annotations

import math
import time

import numpy as np

from translucent.altmodels import fs_pgg_symmetric_equilibrium, fs_pgg_threshold, qre_logit_pd
from translucent.games import (
    BertrandCompetition,
    PrisonersDilemma,
    PublicGoods,
    TravelersDilemma,
    verify_social_dilemma,
)
from translucent.sweep import (
    OBSERVED,
    PREDICTIONS,
    RATIO_TOL,
    RateMethod,
    cooperation_rate,
    evaluate_regularity,
    monotone,
    regularity_suite,
)
from translucent.thresholds import bertrand_condition, bertrand_limit_n0, f_of_gamma, f_of_gamma_sum, pgg_condition
from translucent.verification import oracle_campaign

ACCEPTANCE_LINES: dict[int, str] = {}


def record(number: int, ok: bool, detail: str) -> None:
    line = f"[criterion {number}] {'PASS' if ok else 'FAIL'} {detail}"
    ACCEPTANCE_LINES[number] = line
    print(line)
    assert ok, line


def test_criterion_01_oracle_equivalence():
    start = time.perf_counter()
    result = oracle_campaign(10_000, seed=7, families=("pd", "pgg", "bc"))
    seconds = time.perf_counter() - start
    parts = [f"{t.family}: {t.closed_form_agree}/{t.samples} err={t.max_eu_error:.1e}" for t in result.tallies.values()]
    ok = result.ok and all(t.samples >= 10_000 for t in result.tallies.values()) and seconds <= 60
    record(1, ok, f"closed form vs oracle, {'; '.join(parts)}; {seconds:.1f}s")


def test_criterion_02_td_reconciliation():
    result = oracle_campaign(10_000, seed=7, families=("td",))
    td = result.tallies["td"]
    keys = {row[:5] for row in td.printed_disagree}
    summary = result.summary()
    ok = (td.ok and td.samples >= 10_000 and len(td.printed_disagree) > 0
          and (0.0, 1.0, 2, 100, 2) in keys
          and "td_derived_agree=" in summary and "td_printed disagreements" in summary)
    record(2, ok, f"derived {td.closed_form_agree}/{td.samples}; printed disagrees on {len(td.printed_disagree)}, "
                  f"probe (0,1,2,100,2) listed={(0.0, 1.0, 2, 100, 2) in keys}")


def test_criterion_03_pd_analytic_rate():
    worst_grid = worst_mc = 0.0
    for t in (0.05, 0.1, 0.2, 0.5):
        exact = 1 - t + t * math.log(t)
        game = PrisonersDilemma(1.0, t)
        worst_grid = max(worst_grid, abs(cooperation_rate(game, RateMethod.grid(401)) - exact))
        for seed in range(10):
            worst_mc = max(worst_mc, abs(cooperation_rate(game, RateMethod.monte_carlo(100_000, seed)) - exact))
    record(3, worst_grid <= 0.005 and worst_mc <= 0.01,
           f"max |grid401 - exact| = {worst_grid:.5f}, max |mc 1e5 - exact| over 10 seeds = {worst_mc:.5f}")


def _pgg_players_from_two(method: RateMethod) -> list[float]:
    # the N=2 point sits at rho = 1/N, outside the validated game domain
    first = cooperation_rate(PublicGoods.unchecked(n=2, rho=0.5, endowment=100), method)
    rest = evaluate_regularity(next(r for r in OBSERVED if r.id == "pgg_players"),
                               lambda g: cooperation_rate(g, method)).series.rates
    return [first, *rest]


def test_criterion_04_regularities():
    start = time.perf_counter()
    method = RateMethod.grid(201)
    report = regularity_suite(method, include_predictions=False)
    verdicts = {o.regularity.id: o.passed for o in report.outcomes}
    verdicts["pgg_players"] = monotone(_pgg_players_from_two(method), "increasing")
    seconds = time.perf_counter() - start
    failing = [k for k, v in verdicts.items() if not v]
    detail = f"{sum(verdicts.values())}/{len(verdicts)} clauses pass in {seconds:.1f}s"
    if failing:
        bc = report.outcome("bc_players").series.rates
        detail += f"; failing: {', '.join(failing)} (bc N=2,3 rates {bc[0]:.4f}, {bc[1]:.4f})"
    record(4, not failing and seconds <= 120, detail)


def test_criterion_05_predictions():
    rate = lambda g: cooperation_rate(g, RateMethod.grid(201))  # noqa: E731
    outcomes = {r.id: evaluate_regularity(r, rate) for r in PREDICTIONS}
    spread, ratio, reservation = outcomes["td_spread"], outcomes["bc_ratio"], outcomes["bc_reservation"]
    ok = spread.passed and ratio.passed
    record(5, ok,
           f"td_spread {'pass' if spread.passed else 'fail'}; "
           f"bc_ratio {'pass' if ratio.passed else 'fail'} (spread {max(ratio.series.rates) - min(ratio.series.rates):.4f} "
           f"<= {RATIO_TOL}); bc_reservation {'pass' if reservation.passed else 'fail'} "
           f"(informational, (H-1)/H caveat)")


def test_criterion_06_qre():
    worst = 0.0
    above = False
    for c in (0.5, 1.0, 2.0):
        for i in range(51):
            lam = i / 10
            s = qre_logit_pd(10.0, c, lam)
            worst = max(worst, abs(s - 1 / (1 + math.exp(lam * c))))
            above |= s > 0.5 + 1e-15 or (lam > 0 and s >= 0.5)
    record(6, worst <= 1e-9 and not above and qre_logit_pd(10.0, 1.0, 0.0) == 0.5,
           f"max |iteration - closed form| = {worst:.2e}; sigma(C) < 0.5 for every lambda > 0: {not above}")


def test_criterion_07_fehr_schmidt():
    n = 4
    b_axis = (np.arange(50) + 0.5) * (3.0 / 50)
    rho_axis = 1 / n + (np.arange(50) + 0.5) * ((1 - 1 / n) / 50)
    b_step, rho_step = b_axis[1] - b_axis[0], rho_axis[1] - rho_axis[0]
    far = 0
    total = 0
    for x in (1, 50, 100):
        for b_fs in b_axis:
            for rho in rho_axis:
                total += 1
                scan = fs_pgg_symmetric_equilibrium(float(b_fs), float(rho), n, x)
                analytic = b_fs >= fs_pgg_threshold(rho)
                near = (abs(b_fs - fs_pgg_threshold(rho)) < b_step or abs(rho - 1 / (1 + b_fs)) < rho_step)
                far += scan != analytic and not near
    record(7, far == 0, f"scan vs b_fs >= (1-rho)/rho: {far} of {total} cells disagree away from the boundary")


def test_criterion_08_f_forms():
    gammas = np.linspace(0, 1, 1001)
    worst = 0.0
    in_range = True
    for n in range(2, 65):
        closed = f_of_gamma(gammas, n)
        direct = f_of_gamma_sum(gammas, n)
        worst = max(worst, float(np.max(np.abs(closed - direct))))
        in_range &= bool(np.all(closed >= 1 / n - 1e-15) and np.all(closed <= 1 + 1e-15))
    record(8, worst <= 1e-12 and in_range, f"max |sum - closed form| = {worst:.2e}; range [1/N, 1] holds: {in_range}")


def test_criterion_09_limits():
    pgg_holds = all(pgg_condition(0.3, 0.5, n, 0.5).holds for n in range(8, 129))
    pgg_n0 = not pgg_condition(0.3, 0.5, 7, 0.5).holds
    bc_n0 = bertrand_limit_n0(0.5, 0.9, 2, 100)
    bc_ok = bc_n0 is not None and bc_n0 <= 128 and all(
        not bertrand_condition(0.5, 0.9, n, 2, 100).holds for n in range(bc_n0, 129))
    record(9, pgg_holds and pgg_n0 and bc_ok,
           f"public goods N0 = 8 ({'ok' if pgg_holds and pgg_n0 else 'wrong'}); Bertrand fails for all N >= {bc_n0}")


def test_criterion_10_social_dilemmas():
    passing = [PrisonersDilemma(10, 1), TravelersDilemma(2, 100, 2), PublicGoods(4, 0.5, 4), BertrandCompetition(2, 2, 5)]
    statuses = {g.to_text(): verify_social_dilemma(g).status for g in passing}
    capped = verify_social_dilemma(PublicGoods(4, 0.5, 100)).status
    td1 = verify_social_dilemma(TravelersDilemma.unchecked(low=2, high=6, bonus=1))
    ok = (all(s == "pass" for s in statuses.values()) and capped == "skipped"
          and td1.status == "fail" and td1.nash_unique is False)
    record(10, ok, f"{sum(s == 'pass' for s in statuses.values())}/4 pass; PGG E=100 {capped} at cap; "
                   f"TD(2,6,1) {td1.status} on NE uniqueness ({len(td1.nash_equilibria)} equilibria)")


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                pass

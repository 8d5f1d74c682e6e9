import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from translucent.bestresponse import (
    CSV_HEADER,
    best_deviation,
    exhaustive_subset_oracle,
    expected_utility,
    is_translucently_rational,
)
from translucent.errors import OracleCapExceededError, StrategyRangeError
from translucent.games import (
    COOPERATE,
    DEFECT,
    BertrandCompetition,
    PrisonersDilemma,
    PublicGoods,
    TravelersDilemma,
)
from translucent.translucency import TranslucentType as T

PD = PrisonersDilemma(10, 1)


class TestExpectedUtility:
    def test_pd_cooperate_intended(self):
        assert expected_utility(PD, T(0.5, 0.5), COOPERATE, deviated=False) == pytest.approx(4)

    def test_pd_defect_after_deviation(self):
        assert expected_utility(PD, T(0.5, 0.5), DEFECT, deviated=True) == pytest.approx(2.5)

    def test_pgg_full_contribution(self):
        assert expected_utility(PublicGoods(2, 0.6), T(0.5, 0.5), 100, deviated=False) == pytest.approx(90)

    def test_out_of_range_strategy(self):
        with pytest.raises(StrategyRangeError):
            expected_utility(PublicGoods(2, 0.6), T(0.5, 0.5), 101, deviated=False)
        with pytest.raises(StrategyRangeError):
            expected_utility(BertrandCompetition(2, 2, 10), T(0.5, 0.5), 1, deviated=True)


class TestBestDeviation:
    def test_td_undercut_by_one(self):
        s, eu = best_deviation(TravelersDilemma(2, 100, 2), T(0.0, 1.0))
        assert s == 99
        assert eu == pytest.approx(101)

    def test_pgg_contributes_nothing(self):
        s, _ = best_deviation(PublicGoods(2, 0.6), T(0.5, 0.5))
        assert s == 0

    def test_bc_undercut(self):
        s, eu = best_deviation(BertrandCompetition(2, 2, 100), T(0.5, 0.9))
        assert s == 99
        assert eu == pytest.approx(44.55)
        # pricing at the floor: 2 * f(0.45, 2) = 2 * (1 + 0.45) / 2
        assert expected_utility(BertrandCompetition(2, 2, 100), T(0.5, 0.9), 2, True) == pytest.approx(1.45)

    def test_pd_only_defect(self):
        assert best_deviation(PD, T(0.3, 0.3))[0] == DEFECT


class TestRationality:
    def test_pd_example(self):
        r = is_translucently_rational(PD, T(0.5, 0.5))
        assert r.cooperate_rational
        assert (r.eu_cooperate, r.eu_best_deviation) == pytest.approx((4, 2.5))

    @pytest.mark.parametrize("beta", [0.0, 0.3, 0.7, 1.0])
    @pytest.mark.parametrize("b,c", [(10, 1), (2, 1.9), (100, 0.01)])
    def test_opaque_pd_defects(self, b, c, beta):
        assert not is_translucently_rational(PrisonersDilemma(b, c), T(0.0, beta)).cooperate_rational

    def test_bc_example(self):
        r = is_translucently_rational(BertrandCompetition(2, 2, 100), T(0.5, 0.9))
        assert r.cooperate_rational
        assert r.eu_cooperate == pytest.approx(45)
        assert r.eu_best_deviation == pytest.approx(44.55)

    def test_boundary_tie_counts_as_cooperation(self):
        # alpha * beta * b == c exactly
        r = is_translucently_rational(PD, T(0.2, 0.5))
        assert r.cooperate_rational and r.tie

    def test_table(self):
        r = is_translucently_rational(TravelersDilemma(2, 10, 2), T(0.4, 0.6), with_table=True)
        assert [s for s, _ in r.deviation_table] == list(range(2, 10))

    def test_csv_row(self):
        row = is_translucently_rational(PD, T(0.5, 0.5)).csv_row(PD, T(0.5, 0.5))
        assert len(row.split(",")) == len(CSV_HEADER.split(","))
        assert row.startswith("pd,")


class TestOracle:
    def test_pd_matches_engine(self):
        a = exhaustive_subset_oracle(PD, T(0.5, 0.5))
        b = is_translucently_rational(PD, T(0.5, 0.5))
        assert a.cooperate_rational == b.cooperate_rational
        assert a.best_deviation == b.best_deviation
        assert a.eu_cooperate == pytest.approx(b.eu_cooperate, abs=1e-12)
        assert a.eu_best_deviation == pytest.approx(b.eu_best_deviation, abs=1e-12)

    def test_pgg_eight_players(self):
        # 0.3 * 0.5 * 0.5 * 7 = 0.525 >= 0.5
        assert exhaustive_subset_oracle(PublicGoods(8, 0.5), T(0.3, 0.5)).cooperate_rational

    @pytest.mark.parametrize("game", [PD, TravelersDilemma(2, 20, 3), PublicGoods(3, 0.5, 10),
                                      BertrandCompetition(3, 2, 9)])
    def test_certain_detection_meets_all_defect(self, game):
        r = exhaustive_subset_oracle(game, T(1.0, 1.0), with_table=True)
        nash = np.full(game.n_players, game.defect)
        for s, eu in r.deviation_table:
            prof = nash.copy()
            prof[0] = s
            assert eu == pytest.approx(game.payoff_batch(prof[None, :])[0, 0])

    def test_cap(self):
        with pytest.raises(OracleCapExceededError):
            exhaustive_subset_oracle(PublicGoods(13, 0.5, 2), T(0.5, 0.5))


# -- properties -----------------------------------------------------------------------------

types = st.builds(T, st.floats(0, 1), st.floats(0, 1))
oracle_games = st.one_of(
    st.builds(PrisonersDilemma, st.floats(1.5, 50), st.floats(0.05, 1.0)),
    st.builds(TravelersDilemma, st.integers(2, 10), st.integers(11, 40), st.integers(2, 20)),
    st.integers(2, 6).flatmap(lambda n: st.builds(PublicGoods, st.just(n), st.floats(1 / n + 0.01, 0.99),
                                                  st.integers(1, 100))),
    st.integers(2, 5).flatmap(lambda n: st.builds(BertrandCompetition, st.just(n), st.integers(2, 10),
                                                  st.integers(11, 40))),
)


@settings(max_examples=150, deadline=None)
@given(oracle_games, types)
def test_engine_matches_oracle(game, t):
    a = is_translucently_rational(game, t)
    b = exhaustive_subset_oracle(game, t)
    assert a.cooperate_rational == b.cooperate_rational
    assert abs(a.eu_cooperate - b.eu_cooperate) <= 1e-9
    assert abs(a.eu_best_deviation - b.eu_best_deviation) <= 1e-9


@settings(max_examples=100, deadline=None)
@given(st.floats(1.01, 100), st.floats(0.01, 0.99), st.floats(0.01, 1000), types)
def test_pd_scale_invariance(b, ratio, k, t):
    c = b * ratio
    r1 = is_translucently_rational(PrisonersDilemma(b, c), t)
    r2 = is_translucently_rational(PrisonersDilemma(k * b, k * c), t)
    gap1 = r1.eu_cooperate - r1.eu_best_deviation
    gap2 = r2.eu_cooperate - r2.eu_best_deviation
    assert gap2 == pytest.approx(k * gap1, rel=1e-9, abs=1e-9 * k * b)
    if abs(gap1) > 1e-6 * b:
        assert r1.cooperate_rational == r2.cooperate_rational


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 6).flatmap(lambda n: st.tuples(st.just(n), st.floats(1 / n + 0.01, 0.99))),
       st.integers(1, 20), st.integers(1, 20), types)
def test_pgg_endowment_irrelevant(n_rho, e1, e2, t):
    n, rho = n_rho
    r1 = is_translucently_rational(PublicGoods(n, rho, e1), t)
    r2 = is_translucently_rational(PublicGoods(n, rho, e2), t)
    g1 = (r1.eu_cooperate - r1.eu_best_deviation) / e1
    g2 = (r2.eu_cooperate - r2.eu_best_deviation) / e2
    assert g1 == pytest.approx(g2, abs=1e-9)
    if abs(g1) > 1e-7:
        assert r1.cooperate_rational == r2.cooperate_rational


def _monotone_in(game, vary):
    grid = np.linspace(0, 1, 26)
    for fixed in grid:
        flags = [is_translucently_rational(game, T(*vary(v, fixed))).cooperate_rational for v in grid]
        # once true, stays true
        assert flags == sorted(flags), (game, fixed)


@pytest.mark.parametrize("game", [PD, TravelersDilemma(2, 100, 10), PublicGoods(4, 0.5),
                                  BertrandCompetition(2, 2, 100), BertrandCompetition(4, 2, 30)])
def test_monotone_in_alpha(game):
    _monotone_in(game, lambda a, b: (a, b))


@pytest.mark.parametrize("game", [PD, TravelersDilemma(2, 100, 10), TravelersDilemma(5, 30, 20),
                                  PublicGoods(4, 0.5)])
def test_monotone_in_beta(game):
    _monotone_in(game, lambda b, a: (a, b))


@settings(max_examples=60, deadline=None)
@given(st.integers(2, 5), st.integers(0, 4), types)
def test_focal_index_irrelevant(n, focal, t):
    """Recompute cooperation EU with the focal player at another seat."""
    focal %= n
    game = BertrandCompetition(n, 2, 12)
    rng = np.random.default_rng(0)
    draws = rng.random((4000, n - 1)) < t.beta
    opp = np.where(draws, game.cooperate, game.defect)
    rows = np.insert(opp, focal, game.cooperate, axis=1)
    mc = game.payoff_batch(rows)[:, focal].mean()
    rows0 = np.insert(opp, 0, game.cooperate, axis=1)
    assert mc == pytest.approx(game.payoff_batch(rows0)[:, 0].mean())
    assert abs(mc - expected_utility(game, t, game.cooperate, False)) < 1.0

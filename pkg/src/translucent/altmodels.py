"""Competing explanations of cooperation: Fehr-Schmidt inequity aversion,
Charness-Rabin social preferences and the logit quantal response
equilibrium of the Prisoner's Dilemma.

All best-response checks here use opaque beliefs: opponents cooperate
with probability ``beta`` and defect otherwise, regardless of the focal
player's own choice.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .bestresponse import EPS_TIE
from .errors import ParamDomainError
from .games import TOL, GameSpec, PrisonersDilemma, PublicGoods, payoff, symmetric_profiles
from .translucency import cooperator_count_pmf


@dataclass(frozen=True)
class FSParams:
    """Fehr-Schmidt aversion to disadvantageous (``a_fs``) and advantageous
    (``b_fs``) inequity."""

    a_fs: float
    b_fs: float

    def __post_init__(self):
        if not 0.0 <= self.b_fs <= self.a_fs:
            raise ParamDomainError(f"Fehr-Schmidt requires 0 <= b_fs <= a_fs, got a_fs={self.a_fs}, b_fs={self.b_fs}")


@dataclass(frozen=True)
class CRParams:
    a_cr: float
    b_cr: float

    def __post_init__(self):
        for name in ("a_cr", "b_cr"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ParamDomainError(f"Charness-Rabin {name} must lie in [0, 1], got {v}")


@dataclass(frozen=True)
class QREParams:
    lam: float

    def __post_init__(self):
        if not self.lam >= 0.0:
            raise ParamDomainError(f"QRE precision lambda must be >= 0, got {self.lam}")


# -- utilities on batches of payoff vectors ---------------------------------------

def _inequity_terms(pay: np.ndarray, i: int) -> tuple[np.ndarray, np.ndarray]:
    """Normalized disadvantageous and advantageous inequity of player ``i``."""
    n = pay.shape[1]
    diff = pay - pay[:, [i]]
    behind = np.clip(diff, 0.0, None).sum(axis=1) / (n - 1)
    ahead = np.clip(-diff, 0.0, None).sum(axis=1) / (n - 1)
    return behind, ahead


def fs_utility(game: GameSpec, profile: Sequence, player_index: int, params: FSParams) -> float:
    pay = np.array([payoff(game, profile)])
    behind, ahead = _inequity_terms(pay, player_index)
    return float(pay[0, player_index] - params.a_fs * behind[0] - params.b_fs * ahead[0])


def cr_utility(game: GameSpec, profile: Sequence, player_index: int, params: CRParams) -> float:
    u = payoff(game, profile)
    a, b = params.a_cr, params.b_cr
    return (1.0 - a) * u[player_index] + a * (b * min(u) + (1.0 - b) * math.fsum(u))


def fs_pgg_threshold(rho: float) -> float:
    """Commonly quoted sufficient ``b_fs`` for a symmetric contribution profile: ``(1 - rho) / rho``."""
    return (1.0 - rho) / rho


def fs_pgg_scan_threshold(rho: float) -> float:
    """``b_fs`` at which a downward deviation stops paying under the utility
    as defined: the inequity created is ``x - x'`` (not ``rho (x - x')``),
    so the boundary is ``1 - rho``."""
    return 1.0 - rho


def fs_pgg_symmetric_equilibrium(b_fs: float, rho: float, n: int, x: int, endowment: int = 100,
                                 a_fs: float | None = None) -> bool:
    """Is everyone contributing ``x`` a (weak) equilibrium under Fehr-Schmidt?

    Scans every unilateral deviation ``x'`` in ``0..endowment``.  ``a_fs``
    defaults to ``b_fs``.
    """
    game = PublicGoods(n, rho, endowment)
    if not 0 <= x <= endowment or int(x) != x:
        raise ParamDomainError(f"contribution x must be an integer in [0, {endowment}], got {x}")
    params = FSParams(b_fs if a_fs is None else a_fs, b_fs)
    others = np.full((endowment + 1, n - 1), int(x))
    rows = np.column_stack([game.strategies, others])
    pay = game.payoff_batch(rows)
    behind, ahead = _inequity_terms(pay, 0)
    utility = pay[:, 0] - params.a_fs * behind - params.b_fs * ahead
    return bool(utility.max() <= utility[int(x)] + TOL)


# -- opaque best responses with social utilities --------------------------------------

def _count_matrices(game: GameSpec) -> dict[str, np.ndarray]:
    """Per (strategy, cooperating-opponent count) ingredients of the social utilities.

    Keys: ``own`` material payoff, ``behind``/``ahead`` normalized
    inequity, ``min`` and ``total`` of the payoff vector.
    """
    s = game.strategies
    n = game.n_players - 1
    out = {key: np.empty((len(s), n + 1)) for key in ("own", "behind", "ahead", "min", "total")}
    for k in range(n + 1):
        pay = game.payoff_batch(symmetric_profiles(game, s, k))
        behind, ahead = _inequity_terms(pay, 0)
        out["own"][:, k] = pay[:, 0]
        out["behind"][:, k] = behind
        out["ahead"][:, k] = ahead
        out["min"][:, k] = pay.min(axis=1)
        out["total"][:, k] = pay.sum(axis=1)
    return out


def _pmf_matrix(n: int, betas: np.ndarray) -> np.ndarray:
    return np.column_stack([cooperator_count_pmf(n, float(b)) for b in betas])


def _coop_decisions(game: GameSpec, eu: np.ndarray) -> np.ndarray:
    """``eu`` has strategies on axis 0; returns cooperation decisions over the rest."""
    s = game.strategies
    coop = int(np.flatnonzero(s == game.cooperate)[0])
    others = np.delete(eu, coop, axis=0)
    return eu[coop] >= others.max(axis=0) - EPS_TIE


def cr_cooperation_rational(game: GameSpec, beta: float, params: CRParams) -> bool:
    """Opaque best response under Charness-Rabin utility with cooperate-or-defect opponents."""
    if not 0.0 <= beta <= 1.0:
        raise ParamDomainError(f"beta must lie in [0, 1], got {beta}")
    m = _count_matrices(game)
    a, b = params.a_cr, params.b_cr
    u = (1.0 - a) * m["own"] + a * (b * m["min"] + (1.0 - b) * m["total"])
    pmf = cooperator_count_pmf(game.n_players - 1, beta)
    eu = np.array([math.fsum(row * pmf) for row in u])
    return bool(_coop_decisions(game, eu))


def fs_cooperation_rational(game: GameSpec, beta: float, params: FSParams) -> bool:
    if not 0.0 <= beta <= 1.0:
        raise ParamDomainError(f"beta must lie in [0, 1], got {beta}")
    m = _count_matrices(game)
    u = m["own"] - params.a_fs * m["behind"] - params.b_fs * m["ahead"]
    pmf = cooperator_count_pmf(game.n_players - 1, beta)
    eu = np.array([math.fsum(row * pmf) for row in u])
    return bool(_coop_decisions(game, eu))


def _midpoints(n: int) -> np.ndarray:
    return (np.arange(n) + 0.5) / n


def fs_cooperation_rate(game: GameSpec, grid: int = 21) -> float:
    """Share of Fehr-Schmidt types ``(a_fs, b_fs, beta)`` that cooperate.

    Types are midpoints of a uniform grid on ``[0, 1]^3`` restricted to
    ``b_fs <= a_fs``.
    """
    m = _count_matrices(game)
    P = _pmf_matrix(game.n_players - 1, _midpoints(grid))
    own, behind, ahead = m["own"] @ P, m["behind"] @ P, m["ahead"] @ P
    axis = _midpoints(grid)
    hits = total = 0
    for a in axis:
        for b in axis[axis <= a]:
            hits += int(_coop_decisions(game, own - a * behind - b * ahead).sum())
            total += grid
    return hits / total


def cr_rate_table(game: GameSpec, grid: int = 21) -> np.ndarray:
    """Cooperation rate over ``beta`` for every ``(a_cr, b_cr)`` grid midpoint."""
    m = _count_matrices(game)
    P = _pmf_matrix(game.n_players - 1, _midpoints(grid))
    own, low, total = m["own"] @ P, m["min"] @ P, m["total"] @ P
    axis = _midpoints(grid)
    out = np.empty((grid, grid))
    for i, a in enumerate(axis):
        for j, b in enumerate(axis):
            eu = (1.0 - a) * own + a * (b * low + (1.0 - b) * total)
            out[i, j] = _coop_decisions(game, eu).mean()
    return out


def cr_cooperation_rate(game: GameSpec, grid: int = 21) -> float:
    return float(cr_rate_table(game, grid).mean())


# -- logit QRE --------------------------------------------------------------------------

def _logistic(x: float) -> float:
    # 1 / (1 + e^x) without overflow
    if x >= 0:
        z = math.exp(-x)
        return z / (1.0 + z)
    return 1.0 / (1.0 + math.exp(x))


def qre_logit_pd_closed_form(c: float, lam: float) -> float:
    return _logistic(lam * c)


def qre_logit_pd(b: float, c: float, lam: float, damping: float = 0.5,
                 tol: float = 1e-12, max_iter: int = 10_000) -> float:
    """Symmetric logit QRE probability of cooperating in the Prisoner's Dilemma.

    Damped fixed-point iteration on the logit response map, with expected
    utilities taken from the game's payoffs.
    """
    QREParams(lam)
    game = PrisonersDilemma(b, c)
    cc, cd = payoff(game, ["C", "C"])[0], payoff(game, ["C", "D"])[0]
    dc, dd = payoff(game, ["D", "C"])[0], payoff(game, ["D", "D"])[0]
    sigma = 0.5
    for _ in range(max_iter):
        eu_c = sigma * cc + (1.0 - sigma) * cd
        eu_d = sigma * dc + (1.0 - sigma) * dd
        target = _logistic(lam * (eu_d - eu_c))
        new = (1.0 - damping) * sigma + damping * target
        if abs(new - sigma) < tol:
            return new
        sigma = new
    raise RuntimeError(f"logit QRE iteration did not converge for b={b}, c={c}, lambda={lam}")

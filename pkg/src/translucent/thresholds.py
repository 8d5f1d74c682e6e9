"""Closed-form cooperation conditions for the four social dilemmas.

Every condition is written as ``margin >= -EPS_TIE``.  The private
``*_margin`` helpers broadcast over numpy arrays so that whole
(alpha, beta) grids can be decided at once; the public functions wrap
them for scalar use and report which branch binds.

For the Traveler's Dilemma two versions are kept side by side:
:func:`td_condition_printed` evaluates the commonly quoted bound as is, and
:func:`td_condition_derived` compares expected utilities of cooperating
against the two candidate deviations (the Nash claim ``L`` and the
undercut ``H - 1``).  Only the derived form matches the brute-force
best response everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bestresponse import EPS_TIE
from .errors import ParamDomainError
from .games import (
    BertrandCompetition,
    GameSpec,
    PrisonersDilemma,
    PublicGoods,
    TravelersDilemma,
)

CSV_HEADER = "condition,holds,binding_branch,margin"

#: above this gamma, f(gamma, N) is evaluated by its defining sum
F_SEAM = 1.0 - 1e-6


@dataclass(frozen=True)
class ThresholdResult:
    condition: str
    holds: bool
    binding_branch: str
    margin: float

    def csv_row(self) -> str:
        return f"{self.condition},{str(self.holds).lower()},{self.binding_branch},{self.margin:.12g}"


def _result(name: str, margin: float, branch: str) -> ThresholdResult:
    margin = float(margin)
    return ThresholdResult(name, margin >= -EPS_TIE, branch, margin)


def _check_type(alpha: float, beta: float) -> None:
    for name, v in (("alpha", alpha), ("beta", beta)):
        if not 0.0 <= v <= 1.0:
            raise ParamDomainError(f"{name} must lie in [0, 1], got {v}")


# -- Prisoner's Dilemma -------------------------------------------------------

def _pd_margin(alpha, beta, b, c):
    return alpha * beta * b - c


def pd_condition(alpha: float, beta: float, b: float, c: float) -> ThresholdResult:
    """Cooperate iff ``alpha * beta * b >= c``."""
    _check_type(alpha, beta)
    PrisonersDilemma(b, c)
    return _result("pd", _pd_margin(alpha, beta, b, c), "benefit")


# -- Traveler's Dilemma -------------------------------------------------------

def _td_printed_bounds(alpha, beta, low, high):
    alpha, beta = np.broadcast_arrays(np.asarray(alpha, float), np.asarray(beta, float))
    spread = high - low
    denom1 = 1.0 - alpha * beta
    first = np.divide(spread * beta, denom1, out=np.full(alpha.shape, np.inf), where=denom1 > 0)
    denom2 = 1.0 - 2.0 * alpha
    second = np.divide(spread - 1.0, denom2, out=np.full(alpha.shape, np.inf), where=alpha < 0.5)
    return first, second


def _td_printed_margin(alpha, beta, low, high, bonus):
    first, second = _td_printed_bounds(alpha, beta, low, high)
    return np.minimum(first, second) - bonus


def td_condition_printed(alpha: float, beta: float, low: int, high: int, bonus: int) -> ThresholdResult:
    """The commonly quoted closed-form bound, with margin in units of the bonus.

    ``b <= (H-L) beta / (1 - alpha beta)`` when ``alpha >= 1/2``, otherwise
    ``b <= min((H-L) beta / (1 - alpha beta), (H-L-1) / (1 - 2 alpha))``.
    """
    _check_type(alpha, beta)
    TravelersDilemma(low, high, bonus)
    first, second = _td_printed_bounds(alpha, beta, low, high)
    branch = "claim_floor" if first <= second else "undercut"
    return _result("td_printed", min(float(first), float(second)) - bonus, branch)


def _td_derived_margins(alpha, beta, low, high, bonus):
    spread = high - low
    # EU(H) - EU(L), cooperation against the Nash claim
    vs_floor = beta * spread - bonus * (1.0 - alpha * beta)
    # EU(H) - EU(H - 1), only a distinct deviation when H - 1 > L
    if spread > 1:
        vs_undercut = beta * (1.0 + alpha * (spread - 1) - bonus * (1.0 - 2.0 * alpha))
    else:
        vs_undercut = np.full(np.shape(vs_floor), np.inf)
    return vs_floor, vs_undercut


def _td_derived_margin(alpha, beta, low, high, bonus):
    return np.minimum(*_td_derived_margins(alpha, beta, low, high, bonus))


def td_condition_derived(alpha: float, beta: float, low: int, high: int, bonus: int) -> ThresholdResult:
    """Cooperation condition obtained by comparing expected utilities directly.

    Holds iff ``b (1 - alpha beta) <= (H-L) beta`` and, when
    ``alpha < 1/2``, ``b (1 - 2 alpha) <= 1 + alpha (H-L-1)``.  The margin
    is the smaller expected-utility advantage of cooperating, in dollars.
    """
    _check_type(alpha, beta)
    TravelersDilemma(low, high, bonus)
    vs_floor, vs_undercut = _td_derived_margins(alpha, beta, low, high, bonus)
    branch = "claim_floor" if vs_floor <= vs_undercut else "undercut"
    return _result("td_derived", min(float(vs_floor), float(vs_undercut)), branch)


# -- Public Goods --------------------------------------------------------------

def _pgg_margin(alpha, beta, n, rho):
    return alpha * beta * rho * (n - 1) - (1.0 - rho)


def pgg_condition(alpha: float, beta: float, n: int, rho: float) -> ThresholdResult:
    """Cooperate iff ``alpha beta rho (N-1) >= 1 - rho``.

    ``rho = 1`` is admitted here (cooperation then always holds) even though
    no such game can be constructed.
    """
    _check_type(alpha, beta)
    if n < 2:
        raise ParamDomainError(f"public goods condition requires n >= 2, got n={n}")
    if not 1.0 / n < rho <= 1.0:
        raise ParamDomainError(f"public goods condition requires rho in (1/n, 1], got rho={rho} with n={n}")
    return _result("pgg", _pgg_margin(alpha, beta, n, rho), "marginal_return")


# -- Bertrand Competition ---------------------------------------------------------

def f_of_gamma_sum(gamma, n: int):
    """Expected reciprocal share by its defining binomial sum.

    ``sum_k C(n-1, k) (1-gamma)^k gamma^(n-1-k) / (k+1)`` for ``k = 0..n-1``.
    """
    g = np.asarray(gamma, dtype=float)
    terms = [math.comb(n - 1, k) * (1.0 - g) ** k * g ** (n - 1 - k) / (k + 1) for k in range(n)]
    return np.sum(terms, axis=0) if g.ndim else float(math.fsum(float(t) for t in terms))


def _f_closed(gamma: np.ndarray, n: int) -> np.ndarray:
    # (1 - g^n) / (n (1 - g)), with 1 - g^n taken as -expm1(n log1p(-d)) to avoid cancellation
    d = 1.0 - gamma
    with np.errstate(divide="ignore"):
        return -np.expm1(n * np.log1p(-d)) / (n * d)


def f_of_gamma(gamma, n: int):
    """``f(gamma, N)``: expected share of a sale when undercutting to the floor.

    Uses the closed form ``(1 - gamma^N) / (N (1 - gamma))`` away from
    ``gamma = 1`` and the defining sum near it.  The numerator is
    evaluated as ``-expm1(N log1p(gamma - 1))`` so it keeps full relative
    precision close to the seam.  The value lies in
    ``[1/N, 1]``.
    """
    if n < 2:
        raise ParamDomainError(f"f(gamma, N) requires N >= 2, got {n}")
    g = np.asarray(gamma, dtype=float)
    if np.any((g < 0.0) | (g > 1.0)):
        raise ParamDomainError("gamma must lie in [0, 1]")
    if g.ndim == 0:
        gf = float(g)
        if gf > F_SEAM:
            return f_of_gamma_sum(gf, n)
        return float(_f_closed(np.asarray(gf), n))
    out = np.empty_like(g)
    near = g > F_SEAM
    far = ~near
    out[far] = _f_closed(g[far], n)
    if near.any():
        out[near] = f_of_gamma_sum(g[near], n)
    return out


def _bc_terms(alpha, beta, n, low, high):
    gamma = (1.0 - alpha) * beta
    lhs = beta ** (n - 1)
    undercut = gamma ** (n - 1) * n * (high - 1) / high
    floor = f_of_gamma(gamma, n) * low * n / high
    return lhs, undercut, floor


def _bc_margin(alpha, beta, n, low, high):
    lhs, undercut, floor = _bc_terms(alpha, beta, n, low, high)
    return lhs - np.maximum(undercut, floor)


def bertrand_condition(alpha: float, beta: float, n: int, low: int, high: int) -> ThresholdResult:
    """Cooperate iff ``beta^(N-1) >= max(gamma^(N-1) N (H-1)/H, f(gamma, N) L N / H)``
    with ``gamma = (1 - alpha) beta``.

    ``binding_branch`` is ``undercut`` when the first term is the larger
    one, ``floor`` otherwise.
    """
    _check_type(alpha, beta)
    BertrandCompetition(n, low, high)
    lhs, undercut, floor = _bc_terms(alpha, beta, n, low, high)
    branch = "undercut" if undercut >= floor else "floor"
    return _result("bc", lhs - max(undercut, floor), branch)


# -- dispatch -----------------------------------------------------------------------

def condition_for(game: GameSpec, alpha: float, beta: float) -> ThresholdResult:
    """Closed-form decision for ``game`` (derived form for the Traveler's Dilemma)."""
    if isinstance(game, PrisonersDilemma):
        return pd_condition(alpha, beta, game.b, game.c)
    if isinstance(game, TravelersDilemma):
        return td_condition_derived(alpha, beta, game.low, game.high, game.bonus)
    if isinstance(game, PublicGoods):
        return pgg_condition(alpha, beta, game.n, game.rho)
    if isinstance(game, BertrandCompetition):
        return bertrand_condition(alpha, beta, game.n, game.low, game.high)
    raise TypeError(f"unsupported game {game!r}")


def condition_margin(game: GameSpec, alpha, beta):
    """Vectorized margin of :func:`condition_for`; broadcasts ``alpha`` and ``beta``."""
    alpha = np.asarray(alpha, dtype=float)
    beta = np.asarray(beta, dtype=float)
    if isinstance(game, PrisonersDilemma):
        return _pd_margin(alpha, beta, game.b, game.c)
    if isinstance(game, TravelersDilemma):
        return _td_derived_margin(alpha, beta, game.low, game.high, game.bonus)
    if isinstance(game, PublicGoods):
        return _pgg_margin(alpha, beta, game.n, game.rho)
    if isinstance(game, BertrandCompetition):
        return _bc_margin(alpha, beta, game.n, game.low, game.high)
    raise TypeError(f"unsupported game {game!r}")


def cooperation_decisions(game: GameSpec, alpha, beta) -> np.ndarray:
    return condition_margin(game, alpha, beta) >= -EPS_TIE


# -- inversion ------------------------------------------------------------------------

def min_beta(game: GameSpec, alpha: float, tol: float = 1e-6) -> float | None:
    """Smallest ``beta`` at which cooperation is rational, or ``None``.

    Plain bisection for the games whose condition is monotone in ``beta``.
    For Bertrand competition, where that monotonicity is not established,
    a 10^4-point ascending grid locates the first cooperative point and
    bisection then refines the bracket below it.
    """
    _check_type(alpha, 0.0)

    def holds(beta: float) -> bool:
        return bool(cooperation_decisions(game, alpha, beta))

    if isinstance(game, BertrandCompetition):
        grid = np.linspace(0.0, 1.0, 10_001)
        ok = cooperation_decisions(game, alpha, grid)
        if not ok.any():
            return None
        i = int(np.argmax(ok))
        if i == 0:
            return 0.0
        lo, hi = float(grid[i - 1]), float(grid[i])
    else:
        if not holds(1.0):
            return None
        if holds(0.0):
            return 0.0
        lo, hi = 0.0, 1.0
    while hi - lo > tol / 10:
        mid = 0.5 * (lo + hi)
        if holds(mid):
            hi = mid
        else:
            lo = mid
    return hi


def pgg_limit_n0(alpha: float, beta: float, rho: float, n_max: int = 128) -> int | None:
    """Smallest ``N0`` with the public-goods condition holding for every ``N0 <= N <= n_max``."""
    n0 = None
    for n in range(n_max, 1, -1):
        if not 1.0 / n < rho:
            break
        if pgg_condition(alpha, beta, n, rho).holds:
            n0 = n
        else:
            break
    return n0


def bertrand_limit_n0(alpha: float, beta: float, low: int, high: int, n_max: int = 128) -> int | None:
    """Smallest ``N0`` with the Bertrand condition failing for every ``N0 <= N <= n_max``."""
    n0 = None
    for n in range(n_max, 1, -1):
        if bertrand_condition(alpha, beta, n, low, high).holds:
            break
        n0 = n
    return n0

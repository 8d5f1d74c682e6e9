"""Beliefs of a type-(alpha, beta, C) player.

A player who intends to cooperate believes each opponent independently
cooperates with probability ``beta`` and defects otherwise.  If the player
deviates, each opponent independently notices with probability ``alpha``
and, having noticed, defects.  Beliefs are kept as probability mass
functions over the *number* of cooperating opponents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParamDomainError


def _check_probability(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ParamDomainError(f"{name} must lie in [0, 1], got {value}")
    return value


@dataclass(frozen=True)
class TranslucentType:
    """Detection probability ``alpha`` and believed cooperation rate ``beta``."""

    alpha: float
    beta: float

    def __post_init__(self):
        object.__setattr__(self, "alpha", _check_probability("alpha", self.alpha))
        object.__setattr__(self, "beta", _check_probability("beta", self.beta))

    @property
    def gamma(self) -> float:
        """Probability an opponent still cooperates once the player has deviated."""
        return (1.0 - self.alpha) * self.beta


@dataclass(frozen=True)
class OpponentMix:
    p_cooperate: float
    p_defect: float

    def __post_init__(self):
        _check_probability("p_cooperate", self.p_cooperate)
        _check_probability("p_defect", self.p_defect)
        if abs(self.p_cooperate + self.p_defect - 1.0) > 1e-12:
            raise ParamDomainError("opponent mix probabilities must sum to 1")


def opponent_mix(ttype: TranslucentType, deviated: bool) -> OpponentMix:
    p = ttype.gamma if deviated else ttype.beta
    return OpponentMix(p, 1.0 - p)


def cooperator_count_pmf(n_opponents: int, mix: OpponentMix | float) -> np.ndarray:
    """Binomial pmf of the number of cooperating opponents, index ``k = 0..n``."""
    if n_opponents < 1:
        raise ParamDomainError(f"need at least one opponent, got {n_opponents}")
    p = mix.p_cooperate if isinstance(mix, OpponentMix) else float(mix)
    q = 1.0 - p
    return np.array([math.comb(n_opponents, k) * p**k * q ** (n_opponents - k)
                     for k in range(n_opponents + 1)])


def subset_weight(j_size: int, n_opponents: int, alpha: float) -> float:
    """Probability that exactly one given set of ``j_size`` opponents detects."""
    if not 0 <= j_size <= n_opponents:
        raise ParamDomainError(f"subset size {j_size} outside 0..{n_opponents}")
    return alpha**j_size * (1.0 - alpha) ** (n_opponents - j_size)


def deviation_belief(ttype: TranslucentType, n_opponents: int) -> np.ndarray:
    """Cooperator-count pmf after a deviation, built from detector subsets.

    Sums, over every detector set ``J``, the weight of ``J`` times the pmf of
    cooperators among the ``n - |J|`` undetected opponents (detectors always
    defect).  Subsets of equal size contribute identically, so each size is
    taken once with multiplicity ``C(n, |J|)``.  The result coincides with a
    binomial pmf at ``(1 - alpha) * beta``.
    """
    if n_opponents < 1:
        raise ParamDomainError(f"need at least one opponent, got {n_opponents}")
    beta = ttype.beta
    pmf = np.zeros(n_opponents + 1)
    for j in range(n_opponents + 1):
        weight = math.comb(n_opponents, j) * subset_weight(j, n_opponents, ttype.alpha)
        free = n_opponents - j
        for k in range(free + 1):
            pmf[k] += weight * math.comb(free, k) * beta**k * (1.0 - beta) ** (free - k)
    return pmf


def intended_belief(ttype: TranslucentType, n_opponents: int) -> np.ndarray:
    return cooperator_count_pmf(n_opponents, opponent_mix(ttype, deviated=False))


def pmf_rows(pmf: np.ndarray) -> list[str]:
    """``k,probability`` CSV rows for debugging output."""
    return [f"{k},{p:.12g}" for k, p in enumerate(pmf)]

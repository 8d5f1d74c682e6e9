"""Translucent-player rationality for four social dilemmas."""

from .errors import (
    CapExceededError,
    OracleCapExceededError,
    ParamDomainError,
    ProfileShapeError,
    StrategyRangeError,
)
from .games import (
    BertrandCompetition,
    GameSpec,
    PrisonersDilemma,
    PublicGoods,
    TravelersDilemma,
    make_game,
    parse_game,
    payoff,
    reference_profiles,
    verify_social_dilemma,
)

__version__ = "0.1.0"

"""The four social dilemmas: Prisoner's Dilemma, Traveler's Dilemma,
linear Public Goods and Bertrand Competition.

Every game is a finite symmetric normal-form game whose strategies are
integers.  For the Prisoner's Dilemma the two strategies are encoded as
``DEFECT = 0`` and ``COOPERATE = 1``; the other games use their native
units (dollars, cents, prices).

Payoffs are evaluated in batches: ``payoff_batch`` maps an ``(M, N)``
integer array of profiles to an ``(M, N)`` float array of material payoffs.
"""

from __future__ import annotations

import abc
import dataclasses
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import ClassVar, Iterable, Mapping, Sequence

import numpy as np

from .errors import CapExceededError, ParamDomainError, ProfileShapeError

DEFECT = 0
COOPERATE = 1

#: absolute tolerance for every payoff / expected-utility comparison
TOL = 1e-9

_PD_LABELS = {DEFECT: "D", COOPERATE: "C"}
_PD_CODES = {"D": DEFECT, "C": COOPERATE}


class Variant(str, Enum):
    PRISONERS_DILEMMA = "pd"
    TRAVELERS_DILEMMA = "td"
    PUBLIC_GOODS = "pgg"
    BERTRAND_COMPETITION = "bc"

    @classmethod
    def parse(cls, value: "str | Variant") -> "Variant":
        if isinstance(value, Variant):
            return value
        key = str(value).strip().lower().replace("_", "").replace("'", "")
        aliases = {
            "pd": cls.PRISONERS_DILEMMA,
            "prisonersdilemma": cls.PRISONERS_DILEMMA,
            "td": cls.TRAVELERS_DILEMMA,
            "travelersdilemma": cls.TRAVELERS_DILEMMA,
            "pgg": cls.PUBLIC_GOODS,
            "publicgoods": cls.PUBLIC_GOODS,
            "bc": cls.BERTRAND_COMPETITION,
            "bertrand": cls.BERTRAND_COMPETITION,
            "bertrandcompetition": cls.BERTRAND_COMPETITION,
        }
        try:
            return aliases[key]
        except KeyError:
            raise ParamDomainError(f"unknown game variant {value!r}") from None


def _as_int(name: str, value) -> int:
    try:
        as_float = float(value)
    except (TypeError, ValueError):
        raise ParamDomainError(f"{name} must be an integer, got {value!r}") from None
    if not math.isfinite(as_float) or as_float != int(as_float):
        raise ParamDomainError(f"{name} must be an integer, got {value!r}")
    return int(as_float)


def _as_float(name: str, value) -> float:
    try:
        out = float(value)
    except (TypeError, ValueError):
        raise ParamDomainError(f"{name} must be a number, got {value!r}") from None
    if not math.isfinite(out):
        raise ParamDomainError(f"{name} must be finite, got {value!r}")
    return out


def _fmt(value: float) -> str:
    return f"{value:.12g}"


@dataclass(frozen=True)
class GameSpec(abc.ABC):
    """A validated social dilemma.  Instances are immutable."""

    variant: ClassVar[Variant]

    @property
    @abc.abstractmethod
    def n_players(self) -> int: ...

    @property
    @abc.abstractmethod
    def strategies(self) -> np.ndarray:
        """Ascending array of every pure strategy of one player."""

    @property
    @abc.abstractmethod
    def cooperate(self) -> int:
        """One player's component of the welfare-maximizing profile."""

    @property
    @abc.abstractmethod
    def defect(self) -> int:
        """One player's component of the Nash equilibrium profile."""

    @abc.abstractmethod
    def payoff_batch(self, profiles: np.ndarray) -> np.ndarray: ...

    @abc.abstractmethod
    def params(self) -> dict[str, float | int]:
        """Lower-case key/value parameters, as used by the text form."""

    def to_text(self) -> str:
        parts = [f"game={self.variant.value}"]
        parts += [f"{k}={_fmt(v)}" for k, v in self.params().items()]
        return " ".join(parts)

    def params_text(self) -> str:
        return " ".join(f"{k}={_fmt(v)}" for k, v in self.params().items())

    def __str__(self) -> str:
        return self.to_text()

    def contains(self, strategy) -> bool:
        lo, hi = self.strategies[0], self.strategies[-1]
        try:
            value = float(strategy)
        except (TypeError, ValueError):
            return False
        return value == int(value) and lo <= value <= hi

    def format_strategy(self, strategy: int) -> str:
        return str(int(strategy))

    def parse_strategy(self, value) -> int:
        if isinstance(value, (int, np.integer)) and self.contains(value):
            return int(value)
        if isinstance(value, float) and self.contains(value):
            return int(value)
        raise ProfileShapeError(f"strategy {value!r} not in {self.variant.value} strategy set")

    def profile_count(self) -> int:
        return len(self.strategies) ** self.n_players

    @classmethod
    def unchecked(cls, **values):
        """Build an instance without domain validation.

        Only meant for probing parameterizations that are *not* social
        dilemmas (e.g. a traveler's dilemma with bonus 1).
        """
        obj = object.__new__(cls)
        for f in dataclasses.fields(cls):
            if f.name in values:
                object.__setattr__(obj, f.name, values[f.name])
            elif f.default is not dataclasses.MISSING:
                object.__setattr__(obj, f.name, f.default)
            else:
                raise TypeError(f"missing field {f.name!r}")
        return obj


@dataclass(frozen=True)
class PrisonersDilemma(GameSpec):
    """Cooperating costs ``c`` and gives ``b`` to the other player."""

    b: float
    c: float
    variant: ClassVar[Variant] = Variant.PRISONERS_DILEMMA

    def __post_init__(self):
        b = _as_float("b", self.b)
        c = _as_float("c", self.c)
        if not c > 0:
            raise ParamDomainError(f"prisoner's dilemma requires c > 0, got c={c}")
        if not b > c:
            raise ParamDomainError(f"prisoner's dilemma requires b > c, got b={b}, c={c}")
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "c", c)

    @property
    def n_players(self) -> int:
        return 2

    @property
    def strategies(self) -> np.ndarray:
        return np.array([DEFECT, COOPERATE])

    @property
    def cooperate(self) -> int:
        return COOPERATE

    @property
    def defect(self) -> int:
        return DEFECT

    def payoff_batch(self, profiles: np.ndarray) -> np.ndarray:
        p = np.asarray(profiles, dtype=float)
        # each player receives b per cooperating opponent and pays c if cooperating
        return self.b * (p.sum(axis=1, keepdims=True) - p) - self.c * p

    def params(self):
        return {"b": self.b, "c": self.c}

    def format_strategy(self, strategy: int) -> str:
        return _PD_LABELS[int(strategy)]

    def parse_strategy(self, value) -> int:
        if isinstance(value, str):
            try:
                return _PD_CODES[value.strip().upper()]
            except KeyError:
                raise ProfileShapeError(f"prisoner's dilemma strategy must be C or D, got {value!r}") from None
        return super().parse_strategy(value)


@dataclass(frozen=True)
class TravelersDilemma(GameSpec):
    """Two travelers ask for an integer amount in ``[low, high]``.

    The lower claimant gets their claim plus ``bonus``, the higher one
    gets the lower claim minus ``bonus``; equal claims are paid as asked.
    """

    low: int
    high: int
    bonus: int
    variant: ClassVar[Variant] = Variant.TRAVELERS_DILEMMA

    def __post_init__(self):
        low = _as_int("l", self.low)
        high = _as_int("h", self.high)
        bonus = _as_int("b", self.bonus)
        if low < 1:
            raise ParamDomainError(f"traveler's dilemma requires a positive L, got l={low}")
        if not low < high:
            raise ParamDomainError(f"traveler's dilemma requires L < H, got l={low}, h={high}")
        if bonus < 2:
            raise ParamDomainError(
                f"traveler's dilemma requires bonus b >= 2 for a unique Nash equilibrium, got b={bonus}"
            )
        object.__setattr__(self, "low", low)
        object.__setattr__(self, "high", high)
        object.__setattr__(self, "bonus", bonus)

    @property
    def n_players(self) -> int:
        return 2

    @property
    def strategies(self) -> np.ndarray:
        return np.arange(self.low, self.high + 1)

    @property
    def cooperate(self) -> int:
        return self.high

    @property
    def defect(self) -> int:
        return self.low

    def payoff_batch(self, profiles: np.ndarray) -> np.ndarray:
        p = np.asarray(profiles, dtype=float)
        low_claim = p.min(axis=1, keepdims=True)
        return np.where(p == p.max(axis=1, keepdims=True),
                        np.where(p == low_claim, low_claim, low_claim - self.bonus),
                        low_claim + self.bonus)

    def params(self):
        return {"l": self.low, "h": self.high, "b": self.bonus}


@dataclass(frozen=True)
class PublicGoods(GameSpec):
    """Linear public goods game with contributions in whole cents.

    Player ``i`` earns ``endowment - x_i + rho * sum(x)`` cents.
    """

    n: int
    rho: float
    endowment: int = 100
    variant: ClassVar[Variant] = Variant.PUBLIC_GOODS

    def __post_init__(self):
        n = _as_int("n", self.n)
        rho = _as_float("rho", self.rho)
        endowment = _as_int("e", self.endowment)
        if n < 2:
            raise ParamDomainError(f"public goods game requires n >= 2, got n={n}")
        if not (1.0 / n < rho < 1.0):
            raise ParamDomainError(f"public goods game requires rho in (1/n, 1), got rho={rho} with n={n}")
        if endowment < 1:
            raise ParamDomainError(f"public goods game requires a positive endowment, got e={endowment}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "rho", rho)
        object.__setattr__(self, "endowment", endowment)

    @property
    def n_players(self) -> int:
        return self.n

    @property
    def strategies(self) -> np.ndarray:
        return np.arange(0, self.endowment + 1)

    @property
    def cooperate(self) -> int:
        return self.endowment

    @property
    def defect(self) -> int:
        return 0

    def payoff_batch(self, profiles: np.ndarray) -> np.ndarray:
        p = np.asarray(profiles, dtype=float)
        return self.endowment - p + self.rho * p.sum(axis=1, keepdims=True)

    def params(self):
        return {"n": self.n, "rho": self.rho, "e": self.endowment}


@dataclass(frozen=True)
class BertrandCompetition(GameSpec):
    """``n`` firms post integer prices in ``[low, high]``; the lowest price
    wins and ties split the sale equally."""

    n: int
    low: int
    high: int
    variant: ClassVar[Variant] = Variant.BERTRAND_COMPETITION

    def __post_init__(self):
        n = _as_int("n", self.n)
        low = _as_int("l", self.low)
        high = _as_int("h", self.high)
        if n < 2:
            raise ParamDomainError(f"bertrand competition requires n >= 2, got n={n}")
        if low < 2:
            raise ParamDomainError(f"bertrand competition requires price floor L >= 2, got l={low}")
        if not high > low:
            raise ParamDomainError(f"bertrand competition requires H > L, got l={low}, h={high}")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "low", low)
        object.__setattr__(self, "high", high)

    @property
    def n_players(self) -> int:
        return self.n

    @property
    def strategies(self) -> np.ndarray:
        return np.arange(self.low, self.high + 1)

    @property
    def cooperate(self) -> int:
        return self.high

    @property
    def defect(self) -> int:
        return self.low

    def payoff_batch(self, profiles: np.ndarray) -> np.ndarray:
        p = np.asarray(profiles, dtype=float)
        best = p.min(axis=1, keepdims=True)
        winners = p == best
        return np.where(winners, best / winners.sum(axis=1, keepdims=True), 0.0)

    def params(self):
        return {"n": self.n, "l": self.low, "h": self.high}


_KEYS = {
    Variant.PRISONERS_DILEMMA: (PrisonersDilemma, {"b": "b", "c": "c"}),
    Variant.TRAVELERS_DILEMMA: (TravelersDilemma, {"l": "low", "h": "high", "b": "bonus"}),
    Variant.PUBLIC_GOODS: (PublicGoods, {"n": "n", "rho": "rho", "e": "endowment"}),
    Variant.BERTRAND_COMPETITION: (BertrandCompetition, {"n": "n", "l": "low", "h": "high"}),
}


def make_game(variant: "str | Variant", params: Mapping[str, object]) -> GameSpec:
    """Build and validate a game from its lower-case symbol parameters.

    >>> make_game("pd", {"b": 10, "c": 1})
    PrisonersDilemma(b=10.0, c=1.0)
    """
    cls, keys = _KEYS[Variant.parse(variant)]
    given = {str(k).lower(): v for k, v in params.items()}
    unknown = set(given) - set(keys)
    if unknown:
        raise ParamDomainError(f"unknown parameter(s) for {cls.__name__}: {', '.join(sorted(unknown))}")
    kwargs = {}
    for key, attr in keys.items():
        if key in given:
            kwargs[attr] = given[key]
        elif not (cls is PublicGoods and attr == "endowment"):
            raise ParamDomainError(f"missing parameter {key!r} for {cls.__name__}")
    return cls(**kwargs)


def parse_pairs(text: str) -> dict[str, str]:
    """Split ``key=value`` tokens separated by whitespace; ``#`` starts a comment."""
    pairs: dict[str, str] = {}
    for line in text.splitlines():
        line = line.split("#", 1)[0]
        for token in line.split():
            key, sep, value = token.partition("=")
            if not sep or not key or not value:
                raise ParamDomainError(f"malformed token {token!r}, expected key=value")
            pairs[key.lower()] = value
    return pairs


def parse_game(text: str) -> GameSpec:
    pairs = parse_pairs(text)
    try:
        variant = pairs.pop("game")
    except KeyError:
        raise ParamDomainError("missing 'game=' key") from None
    return make_game(variant, pairs)


def _check_profile(game: GameSpec, profile: Sequence) -> np.ndarray:
    if len(profile) != game.n_players:
        raise ProfileShapeError(f"profile has {len(profile)} entries, {game.variant.value} game has {game.n_players} players")
    return np.array([game.parse_strategy(s) for s in profile], dtype=np.int64)


def payoff(game: GameSpec, profile: Sequence) -> tuple[float, ...]:
    """Material payoff of every player at a single pure profile."""
    row = _check_profile(game, profile)
    return tuple(float(v) for v in game.payoff_batch(row[None, :])[0])


def reference_profiles(game: GameSpec) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """``(nash, welfare)``: everybody defecting and everybody cooperating."""
    n = game.n_players
    return (game.defect,) * n, (game.cooperate,) * n


def all_profiles(game: GameSpec) -> np.ndarray:
    s = game.strategies
    grids = np.meshgrid(*([s] * game.n_players), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


@dataclass
class SocialDilemmaReport:
    status: str  # "pass", "fail" or "skipped"
    profile_count: int
    nash_unique: bool | None = None
    welfare_unique: bool | None = None
    pareto: bool | None = None
    nash_equilibria: list[tuple[int, ...]] = field(default_factory=list)
    message: str = ""

    @property
    def passed(self) -> bool:
        return self.status == "pass"


def verify_social_dilemma(game: GameSpec, exhaustive_cap: int = 10**7,
                          on_cap: str = "skip") -> SocialDilemmaReport:
    """Exhaustively check that ``game`` is a social dilemma.

    Clauses: (a) the all-defect profile is the only pure (weak) Nash
    equilibrium; (b) the all-cooperate profile is the unique maximizer of
    total payoff; (c) every player strictly prefers it to the equilibrium.
    Instances with more than ``exhaustive_cap`` profiles are skipped, or
    raise :class:`CapExceededError` when ``on_cap="raise"``.
    """
    count = game.profile_count()
    if count > exhaustive_cap:
        msg = f"{count} profiles exceeds exhaustive cap {exhaustive_cap}"
        if on_cap == "raise":
            raise CapExceededError(msg)
        return SocialDilemmaReport("skipped", count, message=msg)

    n, k = game.n_players, len(game.strategies)
    profiles = all_profiles(game)
    pay = game.payoff_batch(profiles).reshape((k,) * n + (n,))

    is_ne = np.ones((k,) * n, dtype=bool)
    for i in range(n):
        u_i = pay[..., i]
        is_ne &= u_i >= u_i.max(axis=i, keepdims=True) - TOL
    nash_idx = [tuple(int(game.strategies[j]) for j in idx) for idx in zip(*np.nonzero(is_ne))]
    s_nash, s_welfare = reference_profiles(game)
    nash_unique = nash_idx == [s_nash]

    total = pay.sum(axis=-1)
    top = total.max()
    maximizers = [tuple(int(game.strategies[j]) for j in idx)
                  for idx in zip(*np.nonzero(total >= top - TOL))]
    welfare_unique = maximizers == [s_welfare]

    u_nash = np.array(payoff(game, s_nash))
    u_welfare = np.array(payoff(game, s_welfare))
    pareto = bool(np.all(u_welfare > u_nash + TOL))

    failures = []
    if not nash_unique:
        failures.append(f"(a) Nash equilibrium not unique: {len(nash_idx)} pure equilibria")
    if not welfare_unique:
        failures.append(f"(b) welfare maximizer not unique or not s^W: {maximizers[:5]}")
    if not pareto:
        failures.append("(c) s^W does not strictly Pareto-dominate s^N")
    return SocialDilemmaReport(
        "fail" if failures else "pass", count, nash_unique, welfare_unique, pareto,
        nash_equilibria=nash_idx[:20], message="; ".join(failures),
    )


def symmetric_profiles(game: GameSpec, my_strategies: Iterable[int], n_cooperators: int) -> np.ndarray:
    """Profiles with the focal player at index 0 and ``n_cooperators``
    opponents cooperating, the rest defecting."""
    n = game.n_players
    opp = [game.cooperate] * n_cooperators + [game.defect] * (n - 1 - n_cooperators)
    mine = np.fromiter(my_strategies, dtype=np.int64)
    out = np.empty((len(mine), n), dtype=np.int64)
    out[:, 0] = mine
    out[:, 1:] = opp
    return out


__all__ = [
    "COOPERATE", "DEFECT", "TOL", "Variant", "GameSpec", "PrisonersDilemma",
    "TravelersDilemma", "PublicGoods", "BertrandCompetition", "make_game",
    "parse_game", "parse_pairs", "payoff", "reference_profiles",
    "verify_social_dilemma", "SocialDilemmaReport", "all_profiles",
    "symmetric_profiles",
]

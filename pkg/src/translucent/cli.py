"""Command-line front end.

Subcommands: ``check``, ``region``, ``sweep``, ``compare``, ``verify``.
Human-readable summaries go to stdout, machine output to the ``--out``
files.  Exit status: 0 success, 1 verification failure, 2 usage or
domain error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

import numpy as np

from . import bestresponse, sweep, thresholds, verification
from .errors import TranslucentError
from .games import make_game, verify_social_dilemma
from .translucency import TranslucentType, deviation_belief, pmf_rows

GAME_FLAGS = ("b", "c", "l", "h", "n", "rho", "e")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _add_game_flags(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--game", required=required, choices=["pd", "td", "pgg", "bc"])
    p.add_argument("--b", type=float, help="PD benefit or TD bonus")
    p.add_argument("--c", type=float, help="PD cost")
    p.add_argument("--l", type=float, help="TD low claim / BC price floor")
    p.add_argument("--h", type=float, help="TD high claim / BC reservation value")
    p.add_argument("--n", type=float, help="number of players (PGG, BC)")
    p.add_argument("--rho", type=float, help="PGG marginal return")
    p.add_argument("--e", type=float, help="PGG endowment in cents (default 100)")


def _game_from_args(args):
    params = {k: getattr(args, k) for k in GAME_FLAGS if getattr(args, k) is not None}
    return make_game(args.game, params)


def _write(path: str, text: str) -> None:
    Path(path).write_text(text)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="translucent", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", help="best-response report for one game and type")
    _add_game_flags(p)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--beta", type=float, required=True)
    p.add_argument("--oracle", action="store_true", help="also run the subset-enumeration oracle")

    p = sub.add_parser("region", help="write the (alpha, beta) decision map as CSV")
    _add_game_flags(p)
    p.add_argument("--grid", type=int, default=201, help="points per axis, endpoints included")
    p.add_argument("--out", required=True)

    p = sub.add_parser("sweep", help="cooperation rate over one swept parameter")
    p.add_argument("--config", help="key=value sweep configuration file")
    p.add_argument("--out", required=True)
    p.add_argument("--regularities", action="store_true", help="run the full regularity suite")
    p.add_argument("--grid", type=int, default=201)

    p = sub.add_parser("compare", help="model-vs-regularity matrix")
    p.add_argument("--out", required=True)
    p.add_argument("--grid", type=int, default=201)
    p.add_argument("--social-grid", type=int, default=11)
    p.add_argument("--qre-lambda", type=float, default=1.0)

    p = sub.add_parser("verify", help="oracle equivalence campaign")
    p.add_argument("--samples", type=int, default=10_000, help="random configurations per family")
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--show-pmf", type=int, metavar="N_OPPONENTS",
                   help="print the post-deviation cooperator-count pmf for --alpha/--beta")
    p.add_argument("--alpha", type=float, default=0.5)
    p.add_argument("--beta", type=float, default=0.5)
    return parser


def _cmd_check(args) -> int:
    game = _game_from_args(args)
    ttype = TranslucentType(args.alpha, args.beta)
    report = bestresponse.is_translucently_rational(game, ttype)
    cond = thresholds.condition_for(game, ttype.alpha, ttype.beta)
    print(bestresponse.CSV_HEADER)
    print(report.csv_row(game, ttype))
    print(thresholds.CSV_HEADER)
    print(cond.csv_row())
    if game.variant.value == "td":
        print(thresholds.td_condition_printed(ttype.alpha, ttype.beta, game.low, game.high, game.bonus).csv_row())
    print(f"cooperate_rational={str(report.cooperate_rational).lower()} "
          f"eu_cooperate={report.eu_cooperate:.10g} eu_best_deviation={report.eu_best_deviation:.10g} "
          f"best_deviation={game.format_strategy(report.best_deviation)} margin={cond.margin:.10g}")
    if args.oracle:
        oracle = bestresponse.exhaustive_subset_oracle(game, ttype)
        print("oracle:", oracle.csv_row(game, ttype))
    return 0


def _cmd_region(args) -> int:
    game = _game_from_args(args)
    if args.grid < 2:
        raise UsageError("--grid must be at least 2")
    axis = np.linspace(0.0, 1.0, args.grid)
    region = sweep.region_map(game, axis, axis)
    _write(args.out, region.to_csv())
    print(f"{game}: {int(region.decisions.sum())} of {region.decisions.size} cells cooperate; wrote {args.out}")
    return 0


def _cmd_sweep(args) -> int:
    if args.regularities:
        report = sweep.regularity_suite(sweep.RateMethod.grid(args.grid))
        out = Path(args.out)
        files = {}
        for o in report.outcomes:
            name = f"{out.stem}_{o.regularity.id}.csv"
            (out.parent / name).write_text(o.series.to_csv())
            files[o.regularity.id] = name
        out.write_text(report.csv(files))
        print(report.table(), end="")
        return 0
    if not args.config:
        raise UsageError("sweep needs --config or --regularities")
    config = sweep.parse_sweep_config(Path(args.config).read_text())
    series = sweep.run_sweep_config(config)
    _write(args.out, series.to_csv())
    print(f"swept {config.family} {config.parameter} over {len(series.values)} values "
          f"({config.method.describe()}); wrote {args.out}")
    return 0


def _cmd_compare(args) -> int:
    comparison = sweep.model_comparison(args.grid, args.social_grid, args.qre_lambda)
    out = Path(args.out)
    out.write_text(comparison.matrix_csv())
    points = out.parent / f"{out.stem}_cr_points.csv"
    points.write_text(comparison.cr_points_csv())
    print(comparison.matrix_csv(), end="")
    print(f"wrote {out} and {points}")
    return 0


def _cmd_verify(args) -> int:
    if args.show_pmf is not None:
        ttype = TranslucentType(args.alpha, args.beta)
        print("k,probability")
        print("\n".join(pmf_rows(deviation_belief(ttype, args.show_pmf))))
    if args.samples < 0:
        raise UsageError("--samples must be nonnegative")
    result = verification.oracle_campaign(args.samples, args.seed)
    print(result.summary())
    for game in (make_game("pd", {"b": 10, "c": 1}), make_game("td", {"l": 2, "h": 100, "b": 2}),
                 make_game("pgg", {"n": 4, "rho": 0.5, "e": 4}), make_game("bc", {"n": 2, "l": 2, "h": 5})):
        rep = verify_social_dilemma(game)
        print(f"social dilemma check {game}: {rep.status}")
    return 0 if result.ok else 1


COMMANDS = {"check": _cmd_check, "region": _cmd_region, "sweep": _cmd_sweep,
            "compare": _cmd_compare, "verify": _cmd_verify}


def run(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except (UsageError, TranslucentError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command-line front end: ``multilateral {analyze,xi,scan,demo}``.

Exit codes: 0 success, 1 invalid input, 2 resource limit.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from typing import Any, Sequence

from . import gallery
from .continuous import cournot_analysis, cournot_game, discretize
from .equilibrium import (
    check_fg_criterion,
    check_grouped_criterion,
    check_simultaneous_fixed_point,
    filtration,
    is_k_lateral,
    marginal_values,
    nash_equilibria,
)
from .errors import DegenerateParameters, InvalidArgument, ResourceLimit
from .family import fiberwise_fixed_point_check, scan
from .game import FiniteGame, format_rational
from .io import load_family, load_game
from .kneser import EXACT_MAX_N, KneserCover, exact_search, greedy_cover, lower_bound
from .mixed import (
    MixedProfile,
    find_2lateral_witness,
    inspection_equilibrium,
    ineq02_slacks,
    mixed_v_k,
    pure_payoffs_against,
    verify_ineq02,
)
from .nikaido_isoda import v_k

EXIT_OK, EXIT_INVALID, EXIT_LIMIT = 0, 1, 2

#: analyze cross-checks every profile below this size, otherwise only the equilibria
CROSS_CHECK_PROFILES = 20000


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _num(v) -> Any:
    if isinstance(v, int):
        return v
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else format_rational(v)
    return float(v)


def _cover_for(n: int, k: int) -> KneserCover:
    return exact_search(n, k).cover if n <= EXACT_MAX_N else greedy_cover(n, k)


# --- analyze ---------------------------------------------------------------


def analyze_report(game: FiniteGame, max_k: int | None, tol: float | None) -> dict:
    n = game.num_players
    max_k = n if max_k is None else max_k
    if not 1 <= max_k <= n:
        raise InvalidArgument(f"--max-k must be in 1..{n}, got {max_k}")
    filt = filtration(game, tol)
    levels = []
    for k in range(1, max_k + 1):
        eqs = filt[k]
        levels.append(
            {
                "k": k,
                "equilibria": [list(x) for x in eqs],
                "labels": [game.label(x) for x in eqs],
                "v_k": [_num(v_k(game, k, x)) for x in eqs],
            }
        )
    exhaustive = game.num_profiles <= CROSS_CHECK_PROFILES
    checked = 0
    disagreements = []
    for k in range(1, max_k + 1):
        cover = _cover_for(n, k)
        profiles = game.profiles() if exhaustive else filt[k]
        for x in profiles:
            verdicts = {
                "definition": is_k_lateral(game, k, x, tol),
                "coincidence": check_fg_criterion(game, k, x, tol),
                "fixed_point": check_simultaneous_fixed_point(game, k, x, tol),
                "grouped": check_grouped_criterion(game, k, x, cover, tol),
                "enumeration": x in filt[k],
            }
            if not game.exact:
                verdicts["v_k_zero"] = abs(float(v_k(game, k, x))) <= game.tolerance(tol)
            else:
                verdicts["v_k_zero"] = v_k(game, k, x) == 0
            checked += 1
            if len(set(verdicts.values())) != 1:
                disagreements.append({"k": k, "profile": list(x), "verdicts": verdicts})
    notes = []
    if not filt[1]:
        notes.append("no pure equilibria")
    return {
        "command": "analyze",
        "players": n,
        "strategy_counts": list(game.strategy_counts),
        "exact": game.exact,
        "levels": levels,
        "cross_check": {
            "scope": "all profiles" if exhaustive else "equilibria only",
            "checked": checked,
            "disagreements": disagreements,
        },
        "notes": notes,
    }


def _print_analyze(r: dict) -> None:
    print(f"game: {r['players']} players, strategy counts {r['strategy_counts']}, "
          f"{'exact' if r['exact'] else 'float'} payoffs")
    for level in r["levels"]:
        print(f"NE_{level['k']}: {len(level['equilibria'])} profile(s)")
        for label, value in zip(level["labels"], level["v_k"]):
            print(f"  {label}  V_{level['k']} = {value}")
    cc = r["cross_check"]
    print(f"criterion cross-check ({cc['scope']}): {cc['checked']} checks, "
          f"{len(cc['disagreements'])} disagreements")
    for note in r["notes"]:
        print(f"note: {note}")


# --- xi --------------------------------------------------------------------


def xi_report(n: int, k: int, mode: str) -> dict:
    if mode == "exact":
        res = exact_search(n, k)
        cover, certified = res.cover, res.certified_by
    else:
        cover, certified = greedy_cover(n, k), None
    return {
        "command": "xi",
        "n": n,
        "k": k,
        "mode": mode,
        "value": cover.size,
        "exact": mode == "exact",
        "certified_by": certified,
        "lower_bound": lower_bound(n, k),
        "partition": [[list(s) for s in group] for group in cover.classes],
    }


def _print_xi(r: dict) -> None:
    what = "xi" if r["exact"] else "upper bound on xi"
    print(f"{what}({r['n']},{r['k']}) = {r['value']}   (counting lower bound {r['lower_bound']})")
    if r["certified_by"]:
        print(f"optimality certified by: {r['certified_by']}")
    for c, group in enumerate(r["partition"], start=1):
        print(f"  class {c}: " + " ".join("{" + ",".join(map(str, s)) + "}" for s in group))


# --- scan ------------------------------------------------------------------


def scan_report(path: str, k: int, tol: float | None, threads: int) -> dict:
    family = load_family(path)
    result = scan(family, k, tol, workers=threads)
    out = {
        "command": "scan",
        "k": k,
        "kind": family.kind,
        "points": [
            {
                "point": list(e.point.coords),
                "label": e.point.name(),
                "nonempty": e.nonempty,
                "count": len(e.equilibria),
                "witness": list(e.witness) if e.witness else None,
                "witness_coords": list(e.witness_coords) if e.witness_coords else None,
            }
            for e in result.entries
        ],
        "nonempty_points": [p.name() for p in result.nonempty_points],
    }
    if family.kind == "finite":
        out["fixed_point_check"] = fiberwise_fixed_point_check(family, k, tol)
    return out


def _print_scan(r: dict) -> None:
    print(f"k = {r['k']}, {r['kind']} fibers")
    width = max(len(p["label"]) for p in r["points"])
    for p in r["points"]:
        mark = "nonempty" if p["nonempty"] else "empty"
        line = f"  {p['label']:<{width}}  {mark:<8}  {p['count']:>6}"
        if p["witness"]:
            line += f"  witness {tuple(p['witness'])}"
        if p["witness_coords"]:
            line += f" at {tuple(p['witness_coords'])}"
        print(line)
    print(f"nonempty points: {len(r['nonempty_points'])} of {len(r['points'])}")
    if "fixed_point_check" in r:
        print(f"fiberwise fixed-point check: {r['fixed_point_check']}")


# --- demo ------------------------------------------------------------------


def _demo_date() -> dict:
    game = gallery.date_dilemma()
    filt = filtration(game)
    cc = game.check_profile((1, 1))
    return {
        "name": "date",
        "payoff_table": [_num(v) for v in game.flat_payoffs(1)],
        "NE_1": [game.label(x) for x in filt[1]],
        "NE_2": [game.label(x) for x in filt[2]],
        "marginal_values_at_CC": {
            "{1}": {str(i): _num(v) for i, v in marginal_values(game, (1,), cc).items()},
            "{1,2}": {str(i): _num(v) for i, v in marginal_values(game, (1, 2), cc).items()},
        },
    }


def _demo_majority() -> dict:
    rows = []
    for n in (1, 2):
        game = gallery.majority_voting(n)
        filt = filtration(game)
        players = 2 * n + 1
        consensus = (1,) * players
        split = (1,) * (n + 2) + (n + 2,) * (n - 1)
        losing = (2,) * (n + 1) + (1,) * n
        rows.append(
            {
                "n": n,
                "players": players,
                "level_sizes": [len(level) for level in filt.levels],
                "profiles": [
                    {"profile": list(x), "leader": gallery.elected_leader(x), "laterality": filt.laterality(x)}
                    for x in dict.fromkeys((consensus, split, losing))
                ],
            }
        )
    return {"name": "majority", "tables": rows}


def _demo_inspection(w=10, g=2, h=1, v=20) -> dict:
    game = gallery.inspection_game(w, g, h, v)
    mix = inspection_equilibrium(w, g, h, v)
    swapped = MixedProfile(((g / w, 1 - g / w), (h / w, 1 - h / w)))
    return {
        "name": "inspection",
        "parameters": {"w": w, "g": g, "h": h, "v": v},
        "pure_equilibria": [game.label(x) for x in filtration(game)[1]],
        "mixed_equilibrium": {
            "employee": [float(p) for p in mix.probs[0]],
            "boss": [float(p) for p in mix.probs[1]],
            "mixed_v_1": mixed_v_k(game, 1, mix),
            "mixed_v_2": mixed_v_k(game, 2, mix),
            "employee_pure_payoffs": pure_payoffs_against(game, 1, mix).tolist(),
            "boss_pure_payoffs": pure_payoffs_against(game, 2, mix).tolist(),
        },
        "swapped_assignment": {
            "employee": [float(p) for p in swapped.probs[0]],
            "boss": [float(p) for p in swapped.probs[1]],
            "mixed_v_1": mixed_v_k(game, 1, swapped),
        },
    }


def _demo_cournot(m: int = 400) -> dict:
    rep = cournot_analysis()
    disc = discretize(cournot_game(), m)
    grid_eq = [disc.point(x) for x in nash_equilibria(disc.game)]
    return {
        "name": "cournot",
        "best_response_1": list(rep.best_response_1),
        "best_response_2": list(rep.best_response_2),
        "equilibrium": list(rep.equilibrium),
        "price": rep.price,
        "profits": list(rep.profits),
        "cross_partials": list(rep.cross_partials),
        "deviation": list(rep.deviation),
        "deviation_profit": rep.deviation_profit,
        "bilateral_counterexample": rep.bilateral_counterexample,
        "grid": {"m": m, "equilibria": [list(p) for p in grid_eq]},
    }


def _demo_witness3(seed: int = 0) -> dict:
    t = find_2lateral_witness(seed)
    game = t.game()
    filt = filtration(game)
    vertex = MixedProfile.pure((2, 2, 2), (2, 2, 2))
    slacks = ineq02_slacks(t)
    return {
        "name": "witness3",
        "seed": seed,
        "tensors": {name: [_num(v) for v in vals] for name, vals in zip("ABC", (t.xa, t.xb, t.xc))},
        "certificate": {
            "corner_check": verify_ineq02(t),
            "min_slack": _num(min(slacks)),
            "max_slack": _num(max(slacks)),
            "in_NE_2": (2, 2, 2) in filt[2],
            "mixed_v_2": mixed_v_k(game, 2, vertex),
        },
    }


DEMOS = {
    "date": _demo_date,
    "majority": _demo_majority,
    "inspection": _demo_inspection,
    "cournot": _demo_cournot,
    "witness3": _demo_witness3,
}


def demo_report(name: str, seed: int = 0) -> dict:
    if name not in DEMOS:
        raise InvalidArgument(f"unknown demo {name!r}; choose from {', '.join(DEMOS)}")
    body = DEMOS[name](seed) if name == "witness3" else DEMOS[name]()
    return {"command": "demo", **body}


def _print_demo(r: dict) -> None:
    name = r["name"]
    if name == "date":
        print(f"payoffs (C,C) (C,A) (A,C) (A,A): {r['payoff_table']}")
        print(f"NE_1: {', '.join(r['NE_1'])}")
        print(f"NE_2: {', '.join(r['NE_2'])}")
        for coalition, vals in r["marginal_values_at_CC"].items():
            print(f"marginal values of {coalition} at (C,C): {vals}")
    elif name == "majority":
        for t in r["tables"]:
            print(f"n={t['n']} ({t['players']} voters): |NE_k| for k=1..{t['players']}: {t['level_sizes']}")
            for p in t["profiles"]:
                print(f"  {tuple(p['profile'])}: leader {p['leader']}, laterality {p['laterality']}")
    elif name == "inspection":
        pr = r["parameters"]
        print(f"w={pr['w']} g={pr['g']} h={pr['h']} v={pr['v']}")
        print(f"pure equilibria: {r['pure_equilibria'] or 'none'}")
        me = r["mixed_equilibrium"]
        print(f"mixed equilibrium: employee (shirk, work) = {tuple(me['employee'])}, "
              f"boss (inspect, trust) = {tuple(me['boss'])}")
        print(f"  V_1 = {me['mixed_v_1']:.3g}, V_2 = {me['mixed_v_2']:.3g}")
        print(f"  employee pure payoffs {me['employee_pure_payoffs']}, boss pure payoffs {me['boss_pure_payoffs']}")
        sw = r["swapped_assignment"]
        print(f"swapped assignment employee {tuple(sw['employee'])}, boss {tuple(sw['boss'])}: "
              f"V_1 = {sw['mixed_v_1']:.3g}")
    elif name == "cournot":
        print(f"best responses: x1 = {r['best_response_1'][0]} + {r['best_response_1'][1]}*x2, "
              f"x2 = {r['best_response_2'][0]:.6g} + {r['best_response_2'][1]:.6g}*x1")
        x1, x2 = r["equilibrium"]
        print(f"equilibrium ({x1:g}, {x2:g}), price {r['price']:g}, "
              f"profits {r['profits'][0]:g} / {r['profits'][1]:g}")
        print(f"cross partials at equilibrium: {r['cross_partials'][0]:g}, {r['cross_partials'][1]:g}")
        d1, d2 = r["deviation"]
        print(f"joint deviation ({d1:g}, {d2:g}): firm 1 profit {r['deviation_profit']:g} "
              f"(beats equilibrium: {r['bilateral_counterexample']})")
        g = r["grid"]
        print(f"grid m={g['m']}: 1-lateral equilibria {[tuple(p) for p in g['equilibria']]}")
    elif name == "witness3":
        print(f"seed {r['seed']}")
        for player, vals in r["tensors"].items():
            print(f"  X_{player}: {vals}")
        c = r["certificate"]
        print(f"corner check {c['corner_check']} (slack {c['min_slack']}..{c['max_slack']}), "
              f"(2,2,2) in NE_2: {c['in_NE_2']}, mixed V_2 = {c['mixed_v_2']:.3g}")


# --- entry point -----------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="multilateral", description="k-lateral equilibria of finite games")
    parser.add_argument("--json", action="store_true", help="emit one JSON object")
    parser.add_argument("--threads", type=int, default=1, help="worker threads (results are identical)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("analyze", help="filtration and criterion cross-check of a game file")
    p.add_argument("path")
    p.add_argument("--max-k", type=int, default=None)
    p.add_argument("--tol", type=float, default=None)

    p = sub.add_parser("xi", help="clique covering number of the Kneser graph K(n, k)")
    p.add_argument("n", type=int)
    p.add_argument("k", type=int)
    p.add_argument("--mode", choices=("exact", "greedy"), default="exact")

    p = sub.add_parser("scan", help="k-lateral equilibria across a family file")
    p.add_argument("path")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--tol", type=float, default=None)

    p = sub.add_parser("demo", help="worked examples")
    p.add_argument("name")
    p.add_argument("--seed", type=int, default=0, help="witness3 sampling seed")

    for action in sub.choices.values():
        action.add_argument("--json", action="store_true", default=argparse.SUPPRESS)
        action.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    return parser


def run(args: argparse.Namespace) -> dict:
    if args.threads < 1:
        raise InvalidArgument(f"--threads must be at least 1, got {args.threads}")
    if args.command == "analyze":
        return analyze_report(load_game(args.path), args.max_k, args.tol)
    if args.command == "xi":
        return xi_report(args.n, args.k, args.mode)
    if args.command == "scan":
        return scan_report(args.path, args.k, args.tol, args.threads)
    return demo_report(args.name, args.seed)


PRINTERS = {"analyze": _print_analyze, "xi": _print_xi, "scan": _print_scan, "demo": _print_demo}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = run(args)
    except ResourceLimit as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return EXIT_LIMIT
    except (InvalidArgument, DegenerateParameters) as exc:
        print(f"invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        PRINTERS[args.command](report)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

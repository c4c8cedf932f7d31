"""JSON game and family files.

A game file::

    {"players": 2, "strategy_counts": [2, 2],
     "labels": [["C", "A"], ["C", "A"]],
     "payoffs": [[3, 0, 0, 5], [3, 0, 0, 5]]}

Payoff entries are integers, decimals (read exactly) or ``"p/q"`` strings;
each tensor is flat and row-major with the last player's index fastest.
Written files use ``"p/q"`` for non-integers.  See ``docs/`` for the family
file forms.
"""

from __future__ import annotations

import json
from decimal import Decimal
from fractions import Fraction
from pathlib import Path
from typing import Any

from .errors import InvalidArgument
from .family import GameFamily, ParameterPoint, finite_family, segment_family, template_family
from .game import FiniteGame, format_rational, to_rational


class FileFormatError(InvalidArgument):
    """Bad input file; the message starts with the location of the problem."""


def _fail(where: str, message: str):
    raise FileFormatError(f"{where}: {message}")


def parse_json(text: str, source: str = "<input>") -> Any:
    try:
        return json.loads(text, parse_float=Decimal)
    except json.JSONDecodeError as exc:
        raise FileFormatError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None


def _read(path: str | Path) -> Any:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise FileFormatError(f"{path}: cannot read file ({exc.strerror})") from None
    return parse_json(text, str(path))


def _int(value, where: str, minimum: int) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        _fail(where, f"expected an integer, got {json.dumps(value, default=str)}")
    if value < minimum:
        _fail(where, f"must be at least {minimum}, got {value}")
    return value


def _entry(value, where: str) -> Fraction:
    if isinstance(value, bool):
        _fail(where, "booleans are not payoffs")
    try:
        return to_rational(value)
    except (InvalidArgument, ValueError, ZeroDivisionError, TypeError):
        _fail(where, f"not a rational number: {value!r}")


def _list(value, where: str) -> list:
    if not isinstance(value, list):
        _fail(where, f"expected a list, got {type(value).__name__}")
    return value


def game_from_data(data: Any, where: str = "$") -> FiniteGame:
    if not isinstance(data, dict):
        _fail(where, "a game must be a JSON object")
    unknown = set(data) - {"players", "strategy_counts", "labels", "payoffs"}
    if unknown:
        _fail(where, f"unknown keys {sorted(unknown)}")
    for key in ("strategy_counts", "payoffs"):
        if key not in data:
            _fail(where, f"missing key {key!r}")
    counts = [
        _int(d, f"{where}.strategy_counts[{n}]", 1)
        for n, d in enumerate(_list(data["strategy_counts"], f"{where}.strategy_counts"))
    ]
    if not counts:
        _fail(f"{where}.strategy_counts", "a game needs at least one player")
    if "players" in data and _int(data["players"], f"{where}.players", 1) != len(counts):
        _fail(f"{where}.players", f"says {data['players']} but strategy_counts lists {len(counts)}")
    size = 1
    for d in counts:
        size *= d
    tensors = _list(data["payoffs"], f"{where}.payoffs")
    if len(tensors) != len(counts):
        _fail(f"{where}.payoffs", f"{len(tensors)} tensors for {len(counts)} players")
    payoffs = []
    for i, tensor in enumerate(tensors):
        at = f"{where}.payoffs[{i}]"
        tensor = _list(tensor, at)
        if len(tensor) != size:
            _fail(at, f"player {i + 1} tensor has {len(tensor)} entries, expected {size}")
        payoffs.append([_entry(v, f"{at}[{n}]") for n, v in enumerate(tensor)])
    labels = None
    if data.get("labels") is not None:
        rows = _list(data["labels"], f"{where}.labels")
        if len(rows) != len(counts):
            _fail(f"{where}.labels", f"{len(rows)} label rows for {len(counts)} players")
        labels = []
        for i, (row, d) in enumerate(zip(rows, counts)):
            row = _list(row, f"{where}.labels[{i}]")
            if len(row) != d or not all(isinstance(s, str) for s in row):
                _fail(f"{where}.labels[{i}]", f"expected {d} strings")
            labels.append(tuple(row))
        labels = tuple(labels)
    return FiniteGame(tuple(counts), tuple(payoffs), labels)


def game_to_data(game: FiniteGame) -> dict:
    def entry(v):
        if not game.exact:
            return float(v)
        return int(v) if v.denominator == 1 else format_rational(v)

    out: dict[str, Any] = {
        "players": game.num_players,
        "strategy_counts": list(game.strategy_counts),
    }
    if game.labels is not None:
        out["labels"] = [list(row) for row in game.labels]
    out["payoffs"] = [[entry(v) for v in game.flat_payoffs(i)] for i in range(1, game.num_players + 1)]
    return out


def loads_game(text: str, source: str = "<input>") -> FiniteGame:
    return game_from_data(parse_json(text, source), source)


def load_game(path: str | Path) -> FiniteGame:
    return game_from_data(_read(path), str(path))


def dumps_game(game: FiniteGame) -> str:
    return json.dumps(game_to_data(game), indent=2)


def _points(data: Any, where: str) -> tuple[ParameterPoint, ...]:
    raw = _list(data, where)
    if not raw:
        _fail(where, "the parameter grid is empty")
    out = []
    for n, item in enumerate(raw):
        at = f"{where}[{n}]"
        label = None
        if isinstance(item, dict):
            label = item.get("label")
            item = item.get("coords")
        if isinstance(item, (int, Decimal)) and not isinstance(item, bool):
            item = [item]
        coords = _list(item, at)
        if not coords or not all(isinstance(c, (int, Decimal)) and not isinstance(c, bool) for c in coords):
            _fail(at, "coordinates must be a non-empty list of numbers")
        out.append(ParameterPoint(tuple(float(c) for c in coords), label))
    return tuple(out)


def _game_ref(value: Any, where: str, base: Path | None) -> FiniteGame:
    if isinstance(value, str):
        path = (base / value) if base is not None else Path(value)
        return load_game(path)
    return game_from_data(value, where)


def family_from_data(data: Any, where: str = "$", base: Path | None = None) -> GameFamily:
    """Parse one of the three family forms: ``games``, ``segment`` or ``template``."""
    if not isinstance(data, dict):
        _fail(where, "a family must be a JSON object")
    forms = [key for key in ("games", "segment", "template") if key in data]
    if len(forms) != 1:
        _fail(where, "give exactly one of 'games', 'segment' or 'template'")
    if "grid" not in data:
        _fail(where, "missing key 'grid'")
    grid = _points(data["grid"], f"{where}.grid")
    form = forms[0]
    if form == "games":
        games = [
            _game_ref(g, f"{where}.games[{n}]", base)
            for n, g in enumerate(_list(data["games"], f"{where}.games"))
        ]
        if len(games) != len(grid):
            _fail(f"{where}.games", f"{len(games)} games for {len(grid)} grid points")
        shapes = {g.strategy_counts for g in games}
        if len(shapes) != 1:
            _fail(f"{where}.games", f"games disagree on strategy shape: {sorted(shapes)}")
        return finite_family(games, grid)
    if form == "segment":
        seg = data["segment"]
        if not isinstance(seg, dict) or set(seg) != {"from", "to"}:
            _fail(f"{where}.segment", "expected an object with keys 'from' and 'to'")
        g0 = _game_ref(seg["from"], f"{where}.segment.from", base)
        g1 = _game_ref(seg["to"], f"{where}.segment.to", base)
        if any(len(p.coords) != 1 for p in grid):
            _fail(f"{where}.grid", "segment families take one coordinate t per point")
        try:
            return segment_family(g0, g1, [p.coords[0] for p in grid])
        except InvalidArgument as exc:
            _fail(f"{where}.segment", str(exc))
    tpl = data["template"]
    at = f"{where}.template"
    if not isinstance(tpl, dict) or not {"intervals", "payoffs"} <= set(tpl):
        _fail(at, "expected an object with keys 'intervals' and 'payoffs'")
    intervals = []
    for n, iv in enumerate(_list(tpl["intervals"], f"{at}.intervals")):
        iv = _list(iv, f"{at}.intervals[{n}]")
        if len(iv) != 2 or not all(isinstance(c, (int, Decimal)) and not isinstance(c, bool) for c in iv):
            _fail(f"{at}.intervals[{n}]", "expected [lower, upper]")
        intervals.append((float(iv[0]), float(iv[1])))
    formulas = _list(tpl["payoffs"], f"{at}.payoffs")
    if not all(isinstance(f, str) for f in formulas):
        _fail(f"{at}.payoffs", "formulas must be strings")
    if "resolution" not in data:
        _fail(where, "template families need a grid 'resolution'")
    m = _int(data["resolution"], f"{where}.resolution", 1)
    try:
        return template_family(intervals, formulas, grid, m)
    except InvalidArgument as exc:
        _fail(at, str(exc))


def load_family(path: str | Path) -> GameFamily:
    path = Path(path)
    return family_from_data(_read(path), str(path), path.parent)


def loads_family(text: str, source: str = "<input>") -> GameFamily:
    return family_from_data(parse_json(text, source), source)

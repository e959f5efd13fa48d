"""JSON interchange for systems and exact rationals.

System format::

    {"pairs": [{"A": ["x", "y"], "B": ["z", "a"]}, ...]}

Element names are strings; ids are assigned in order of first appearance.
Rationals are ``{"num": "p", "den": "q", "approx": float}``; ``approx`` is
informative and ignored on input.
"""
from __future__ import annotations

import json
import os
import tempfile
import time
from fractions import Fraction
from pathlib import Path
from typing import Any

from .core import InvalidArgumentError, SetPairSystem


class SystemFormatError(InvalidArgumentError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(message + where)
        self.line = line
        self.column = column


def rational_to_json(q: Fraction) -> dict[str, Any]:
    return {"num": str(q.numerator), "den": str(q.denominator), "approx": float(q)}


def rational_from_json(d: dict[str, Any]) -> Fraction:
    return Fraction(int(d["num"]), int(d["den"]))


def rational_str(q: Fraction) -> str:
    return f"{q.numerator}/{q.denominator}"


def _sorted_names(S: SetPairSystem, ids) -> list[str]:
    return [S.labels[e] for e in sorted(ids)]


def system_to_json(S: SetPairSystem) -> dict[str, Any]:
    return {"pairs": [{"A": _sorted_names(S, p.A), "B": _sorted_names(S, p.B)} for p in S.pairs]}


def system_from_json(data: Any) -> SetPairSystem:
    if not isinstance(data, dict) or not isinstance(data.get("pairs"), list):
        raise SystemFormatError('expected an object with a "pairs" list')
    raw = []
    for k, entry in enumerate(data["pairs"]):
        if not isinstance(entry, dict) or not isinstance(entry.get("A"), list) or not isinstance(entry.get("B"), list):
            raise SystemFormatError(f'pair {k}: expected {{"A": [...], "B": [...]}}')
        for name in (*entry["A"], *entry["B"]):
            if not isinstance(name, str):
                raise SystemFormatError(f"pair {k}: element names must be strings, got {name!r}")
        raw.append((entry["A"], entry["B"]))
    try:
        return SetPairSystem.from_pairs(raw)
    except InvalidArgumentError as exc:
        raise SystemFormatError(str(exc)) from None


def dumps_system(S: SetPairSystem) -> str:
    return json.dumps(system_to_json(S), indent=1) + "\n"


def loads_system(text: str) -> SetPairSystem:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SystemFormatError(exc.msg, exc.lineno, exc.colno) from None
    return system_from_json(data)


def load_system(path: str | os.PathLike) -> SetPairSystem:
    return loads_system(Path(path).read_text())


def save_system(S: SetPairSystem, path: str | os.PathLike) -> None:
    Path(path).write_text(dumps_system(S))


def dump_counterexample(S: SetPairSystem, reason: str) -> str:
    """Write a system that broke a verified bound; returns the file path.

    The directory is ``$SETPAIRS_DUMP_DIR`` or the system temp dir.
    """
    directory = Path(os.environ.get("SETPAIRS_DUMP_DIR") or tempfile.gettempdir())
    directory.mkdir(parents=True, exist_ok=True)
    path = directory / f"counterexample-{time.strftime('%Y%m%d-%H%M%S')}-{os.getpid()}.json"
    payload = system_to_json(S)
    payload["reason"] = reason
    path.write_text(json.dumps(payload, indent=1) + "\n")
    return str(path)

"""JSON documents holding a CRT-module.

Layout::

    {"name": ..., "provenance": ...,          # optional
     "O": [orders x 8], "U": [...], "T": [...],
     "maps": {"etaO": [matrix x 8], ...}}    # all twelve families

A matrix is a list of rows.  Any matrix with no rows or no columns is written
``[]``; its shape is recovered from the groups it connects.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .abgroup import PresentedGroup
from .crtmod import FAMILIES, FAMILY_NAMES, PARTS, PERIOD, CRTModule
from .exactalg import IntMatrix

INT64_MIN, INT64_MAX = -(2 ** 63), 2 ** 63 - 1
TOP_KEYS = ("name", "provenance", *PARTS, "maps")


class DocumentError(ValueError):
    def __init__(self, location: str, message: str):
        self.location = location
        super().__init__(f"{location}: {message}")


@dataclass(frozen=True)
class ModuleDocument:
    module: CRTModule
    name: str | None = None
    provenance: str | None = None


def _int(x: Any, where: str) -> int:
    if type(x) is not int:
        raise DocumentError(where, f"expected an integer, got {json.dumps(x)}")
    if not INT64_MIN <= x <= INT64_MAX:
        raise DocumentError(where, f"integer {x} is outside the 64-bit range")
    return x


def _list(x: Any, where: str, length: int | None = None) -> list:
    if not isinstance(x, list):
        raise DocumentError(where, f"expected a list, got {type(x).__name__}")
    if length is not None and len(x) != length:
        raise DocumentError(where, f"expected {length} entries, got {len(x)}")
    return x


def _group(x: Any, where: str) -> PresentedGroup:
    orders = tuple(_int(d, f"{where}[{i}]") for i, d in enumerate(_list(x, where)))
    try:
        return PresentedGroup(orders)
    except ValueError as exc:
        raise DocumentError(where, str(exc)) from None


def _matrix(x: Any, where: str, rows: int, cols: int) -> IntMatrix:
    data = _list(x, where)
    if not data:
        return IntMatrix.zeros(rows, cols) if rows * cols == 0 else IntMatrix.zeros(0, 0)
    body = [[_int(v, f"{where}[{i}][{j}]") for j, v in enumerate(_list(row, f"{where}[{i}]"))]
            for i, row in enumerate(data)]
    width = len(body[0])
    for i, row in enumerate(body):
        if len(row) != width:
            raise DocumentError(f"{where}[{i}]", f"row has {len(row)} entries, expected {width}")
    return IntMatrix(body, len(body), width)


def parse_document(text: str) -> ModuleDocument:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno} column {exc.colno}", exc.msg) from None
    if not isinstance(raw, dict):
        raise DocumentError("document", "top level must be an object")
    for key in raw:
        if key not in TOP_KEYS:
            raise DocumentError(key, "unknown field")
    for key in (*PARTS, "maps"):
        if key not in raw:
            raise DocumentError(key, "missing field")
    meta = {}
    for key in ("name", "provenance"):
        if key in raw and raw[key] is not None:
            if not isinstance(raw[key], str):
                raise DocumentError(key, "expected a string")
            meta[key] = raw[key]
    groups = {p: tuple(_group(g, f"{p}[{n}]")
                       for n, g in enumerate(_list(raw[p], p, PERIOD))) for p in PARTS}
    rawmaps = raw["maps"]
    if not isinstance(rawmaps, dict):
        raise DocumentError("maps", "expected an object")
    for key in rawmaps:
        if key not in FAMILIES:
            raise DocumentError(f"maps.{key}", "unknown field")
    maps = {}
    for name in FAMILY_NAMES:
        if name not in rawmaps:
            raise DocumentError(f"maps.{name}", "missing field")
        src, dst, sh = FAMILIES[name]
        entries = _list(rawmaps[name], f"maps.{name}", PERIOD)
        maps[name] = tuple(
            _matrix(m, f"maps.{name}[{n}]", groups[dst][(n + sh) % PERIOD].ngens,
                    groups[src][n].ngens)
            for n, m in enumerate(entries))
    module = CRTModule(groups["O"], groups["U"], groups["T"], maps)
    return ModuleDocument(module, meta.get("name"), meta.get("provenance"))


def _dump(x: Any) -> str:
    return json.dumps(x, separators=(", ", ": "))


def render_document(M: CRTModule, name: str | None = None,
                    provenance: str | None = None) -> str:
    lines = ["{"]
    if name is not None:
        lines.append(f'  "name": {_dump(name)},')
    if provenance is not None:
        lines.append(f'  "provenance": {_dump(provenance)},')
    for p in PARTS:
        lines.append(f'  "{p}": {_dump([list(g.orders) for g in getattr(M, p)])},')
    lines.append('  "maps": {')
    for k, fam in enumerate(FAMILY_NAMES):
        mats = [m.tolist() if m.rows and m.cols else [] for m in M.maps[fam]]
        body = ",\n".join(f"      {_dump(m)}" for m in mats)
        tail = "," if k < len(FAMILY_NAMES) - 1 else ""
        lines.append(f'    "{fam}": [\n{body}\n    ]{tail}')
    lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"


def load_document(path) -> ModuleDocument:
    with open(path, encoding="utf-8") as fh:
        return parse_document(fh.read())


def save_document(path, M: CRTModule, name: str | None = None,
                  provenance: str | None = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_document(M, name, provenance))

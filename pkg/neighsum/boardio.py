"""Reading and writing boards, sequences and crosses."""

import itertools
import json
import os
from typing import Any, Dict, List, Sequence

from .errors import DomainError, ParseError
from .models import CrossSpec, IntGrid, KernelBasis

CROSS_SECTIONS = ("a", "b", "c", "d")


def text_from_file(filename: str) -> str:
    if not os.path.exists(filename):
        raise ParseError(f"File not found: {filename}")
    with open(filename, encoding="utf-8") as f:
        return f.read()


def _parse_int(raw: Any, where: str) -> int:
    if isinstance(raw, bool):
        raise ParseError(f"{where}: expected an integer, got {raw!r}")
    if isinstance(raw, int):
        return raw
    if isinstance(raw, str):
        try:
            return int(raw.strip())
        except ValueError:
            pass
    raise ParseError(f"{where}: expected an integer or decimal string, got {raw!r}")


def _flatten(cells: Any, dims: Sequence[int], where: str = "cells") -> List[int]:
    if not dims:
        return [_parse_int(cells, where)]
    if not isinstance(cells, list) or len(cells) != dims[0]:
        raise ParseError(f"{where}: expected a list of {dims[0]} entries")
    out = []
    for i, item in enumerate(cells):
        out.extend(_flatten(item, dims[1:], f"{where}[{i}]"))
    return out


def _nest(values: Sequence[str], dims: Sequence[int]) -> Any:
    if len(dims) == 1:
        return list(values)
    step = len(values) // dims[0]
    return [_nest(values[i * step : (i + 1) * step], dims[1:]) for i in range(dims[0])]


def board_from_json(data: Any) -> IntGrid:
    if not isinstance(data, dict) or "dims" not in data or "cells" not in data:
        raise ParseError("board JSON must be an object with 'dims' and 'cells'")
    dims = data["dims"]
    if not isinstance(dims, list) or not dims:
        raise ParseError("'dims' must be a non-empty list")
    dims = [_parse_int(d, "dims") for d in dims]
    try:
        return IntGrid(tuple(dims), tuple(_flatten(data["cells"], dims)))
    except DomainError as e:
        raise ParseError(str(e)) from e


def board_to_json(grid: IntGrid) -> Dict[str, Any]:
    return {"dims": list(grid.dims), "cells": _nest([str(c) for c in grid.cells], grid.dims)}


def board_from_csv(text: str) -> IntGrid:
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line:
            continue
        rows.append([_parse_int(v, f"line {lineno}") for v in line.split(",")])
    if not rows:
        raise ParseError("CSV board is empty")
    try:
        return IntGrid.from_rows(rows)
    except DomainError as e:
        raise ParseError(str(e)) from e


def board_to_csv(grid: IntGrid) -> str:
    if grid.ndim != 2:
        raise DomainError("CSV output needs a 2-D board")
    return "\n".join(",".join(str(c) for c in row) for row in grid.rows())


def basis_to_csv(basis: KernelBasis) -> str:
    """One column-stacked kernel vector per line; an empty string for a trivial kernel."""
    return "\n".join(",".join(str(x) for x in v) for v in basis.vectors)


def read_board(path: str) -> IntGrid:
    text = text_from_file(path)
    if path.endswith(".json"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise ParseError(f"{path}: {e}") from e
        return board_from_json(data)
    return board_from_csv(text)


def write_board(grid: IntGrid, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(board_to_json(grid), indent=2)
    if fmt == "csv":
        return board_to_csv(grid)
    if fmt == "ascii":
        return render_ascii(grid)
    raise DomainError(f"unknown board format '{fmt}'")


def _render_rows(rows: Sequence[Sequence[int]]) -> str:
    width = max(len(str(c)) for row in rows for c in row)
    ncols = len(rows[0])
    rule = "+" + "+".join("-" * (width + 2) for _ in range(ncols)) + "+"
    lines = [rule]
    for row in rows:
        lines.append("| " + " | ".join(str(c).rjust(width) for c in row) + " |")
        lines.append(rule)
    return "\n".join(lines)


def render_ascii(grid: IntGrid) -> str:
    """Boxed grid, row 0 on top; boards with d > 2 print one 2-D slice per trailing index."""
    if grid.ndim == 1:
        return _render_rows([list(grid.cells)])
    if grid.ndim == 2:
        return _render_rows(grid.rows())
    m, n = grid.dims[:2]
    blocks = []
    for rest in itertools.product(*(range(k) for k in grid.dims[2:])):
        rows = [[grid.at((i, j) + rest) for j in range(n)] for i in range(m)]
        label = ", ".join(str(k) for k in rest)
        blocks.append(f"[:, :, {label}]\n" + _render_rows(rows))
    return "\n\n".join(blocks)


def _content_lines(text: str):
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def read_sequence(path: str) -> List[int]:
    """One decimal integer per line; blank lines and # comments are skipped."""
    values = [_parse_int(line, f"{path}:{lineno}") for lineno, line in _content_lines(text_from_file(path))]
    if not values:
        raise ParseError(f"{path}: sequence is empty")
    return values


def parse_cross(text: str, where: str = "cross") -> CrossSpec:
    """Sections [a], [b], [c], [d], each line '<signed-index> <value>'."""
    sections: Dict[str, Dict[int, int]] = {name: {} for name in CROSS_SECTIONS}
    current = None
    for lineno, line in _content_lines(text):
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1].strip()
            if current not in sections:
                raise ParseError(f"{where}:{lineno}: unknown section [{current}]")
            continue
        if current is None:
            raise ParseError(f"{where}:{lineno}: entry outside a section")
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"{where}:{lineno}: expected '<index> <value>'")
        index = _parse_int(parts[0], f"{where}:{lineno}")
        if index in sections[current]:
            raise ParseError(f"{where}:{lineno}: index {index} repeated in [{current}]")
        sections[current][index] = _parse_int(parts[1], f"{where}:{lineno}")
    return CrossSpec(**sections)


def read_cross(path: str) -> CrossSpec:
    return parse_cross(text_from_file(path), path)

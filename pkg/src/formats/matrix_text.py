"""Plain-text matrix and dataset files.

A matrix block is a header line ``rows cols`` followed by ``rows`` lines of ``cols``
numbers. Lines starting with ``#`` are comments and blank lines are ignored. A dataset is a
sequence of blocks separated by ``---`` lines, each optionally tagged ``# id: <int>``.
"""

import math
import re
from pathlib import Path
from typing import Any

from src.exceptions import InvalidInputError, ParseError
from src.linalg.types import FloatArray, as_matrix
from src.search.dataset import SpdDataset

BLOCK_SEPARATOR = "---"
ID_COMMENT = re.compile(r"^#\s*id:\s*(-?\d+)\s*$")

NumberedLine = tuple[int, str]


def _significant(lines: list[NumberedLine]) -> list[NumberedLine]:
    stripped = [(number, line.strip()) for number, line in lines]
    return [(number, line) for number, line in stripped if line and not line.startswith("#")]


def _parse_header(number: int, line: str) -> tuple[int, int]:
    tokens = line.split()
    if len(tokens) != 2 or not all(token.isdigit() for token in tokens):
        raise ParseError(number, f"expected header 'rows cols', got {line!r}")
    rows, cols = int(tokens[0]), int(tokens[1])
    if rows == 0 or cols == 0:
        raise ParseError(number, f"matrix dimensions must be positive, got {rows} x {cols}")
    return rows, cols


def _parse_row(number: int, line: str, cols: int) -> list[float]:
    tokens = line.split()
    if len(tokens) != cols:
        raise ParseError(number, f"expected {cols} entries, got {len(tokens)}")
    values = []
    for token in tokens:
        try:
            value = float(token)
        except ValueError:
            raise ParseError(number, f"{token!r} is not a number") from None
        if not math.isfinite(value):
            raise ParseError(number, f"{token!r} is not a finite number")
        values.append(value)
    return values


def _parse_block(lines: list[NumberedLine], end_line: int) -> FloatArray:
    content = _significant(lines)
    if not content:
        raise ParseError(end_line, "missing matrix header")
    header_number, header = content[0]
    rows, cols = _parse_header(header_number, header)
    body = content[1:]
    if len(body) > rows:
        extra_number, _ = body[rows]
        raise ParseError(extra_number, f"unexpected line after {rows} rows")
    if len(body) < rows:
        raise ParseError(end_line, f"expected {rows} rows, got {len(body)}")
    return as_matrix([_parse_row(number, line, cols) for number, line in body])


def _numbered(text: str) -> list[NumberedLine]:
    return list(enumerate(text.splitlines(), start=1))


def parse_matrix(text: str) -> FloatArray:
    lines = _numbered(text)
    return _parse_block(lines, len(lines) + 1)


def _format_value(value: float) -> str:
    return f"{value:.17g}"


def serialize_matrix(matrix: Any) -> str:
    """17 significant digits, so :func:`parse_matrix` gives back the same doubles."""
    values = as_matrix(matrix)
    rows = [" ".join(_format_value(v) for v in row) for row in values.tolist()]
    return "\n".join([f"{values.shape[0]} {values.shape[1]}", *rows]) + "\n"


def _split_blocks(lines: list[NumberedLine]) -> list[tuple[list[NumberedLine], int]]:
    blocks: list[tuple[list[NumberedLine], int]] = []
    current: list[NumberedLine] = []
    for number, line in lines:
        if line.strip() == BLOCK_SEPARATOR:
            blocks.append((current, number))
            current = []
        else:
            current.append((number, line))
    blocks.append((current, len(lines) + 1))
    # a separator may close the file without opening another block
    return [(block, end) for block, end in blocks if _significant(block)]


def _block_id(block: list[NumberedLine]) -> tuple[int, int] | None:
    for number, line in block:
        match = ID_COMMENT.match(line.strip())
        if match:
            return number, int(match.group(1))
    return None


def parse_matrices(text: str) -> list[tuple[int, FloatArray]]:
    """Parse every block of a dataset file into ``(id, matrix)`` pairs.

    Blocks without an id comment take their 0-based position as id.
    """
    parsed: list[tuple[int, FloatArray]] = []
    seen: set[int] = set()
    for position, (block, end_line) in enumerate(_split_blocks(_numbered(text))):
        tagged = _block_id(block)
        if tagged is None:
            number, block_id = block[0][0], position
        else:
            number, block_id = tagged
        if block_id in seen:
            raise ParseError(number, f"duplicate id {block_id}")
        seen.add(block_id)
        parsed.append((block_id, _parse_block(block, end_line)))
    return parsed


def parse_dataset(text: str) -> SpdDataset:
    entries = parse_matrices(text)
    return SpdDataset.from_matrices(
        [matrix for _, matrix in entries], ids=[block_id for block_id, _ in entries]
    )


def serialize_dataset(ds: SpdDataset) -> str:
    blocks = [
        f"# id: {item_id}\n{serialize_matrix(item.matrix)}"
        for item_id, item in zip(ds.ids, ds.items, strict=True)
    ]
    return f"{BLOCK_SEPARATOR}\n".join(blocks)


def _read_text(path: Path) -> str:
    try:
        return path.read_text(encoding="utf-8")
    except OSError as e:
        msg = f"cannot read '{path}': {e.strerror or e}"
        raise InvalidInputError(msg) from e


def load_matrix(path: Path) -> FloatArray:
    return parse_matrix(_read_text(path))


def load_matrices(path: Path) -> list[tuple[int, FloatArray]]:
    return parse_matrices(_read_text(path))


def load_dataset(path: Path) -> SpdDataset:
    return parse_dataset(_read_text(path))


def write_text(path: Path, text: str) -> None:
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        msg = f"cannot write '{path}': {e.strerror or e}"
        raise InvalidInputError(msg) from e

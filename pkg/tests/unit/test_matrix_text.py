from pathlib import Path

import numpy as np
import pytest

from src.exceptions import InvalidInputError, NotPositiveDefiniteError, ParseError
from src.formats.matrix_text import (
    load_dataset,
    load_matrices,
    load_matrix,
    parse_dataset,
    parse_matrices,
    parse_matrix,
    serialize_dataset,
    serialize_matrix,
    write_text,
)
from src.random_matrices import random_matrix, random_spd
from src.search.dataset import SpdDataset

DATASET_TEXT = """\
# two items
# id: 4
2 2
2 0
0 1
---
# id: 1
2 2
1 0
0 3
---
"""


def test_parse_matrix_with_comments_and_blank_lines() -> None:
    text = "# header comment\n\n2 3\n1 2 3\n# inside\n4 5 6.5\n"
    np.testing.assert_array_equal(parse_matrix(text), [[1, 2, 3], [4, 5, 6.5]])


@pytest.mark.parametrize(
    ("text", "line", "reason"),
    [
        ("2 2\n1 0\n0\n", 3, "expected 2 entries"),
        ("2\n1 0\n", 1, "header"),
        ("0 2\n", 1, "positive"),
        ("1 2\n1 x\n", 2, "not a number"),
        ("1 2\n1 nan\n", 2, "not a finite number"),
        ("2 1\n1\n", 3, "expected 2 rows"),
        ("1 1\n1\n2\n", 3, "unexpected line"),
        ("# only a comment\n", 2, "missing matrix header"),
    ],
)
def test_parse_errors_carry_the_line_number(text: str, line: int, reason: str) -> None:
    with pytest.raises(ParseError, match=reason) as exc_info:
        parse_matrix(text)
    assert exc_info.value.line_number == line


def test_serialization_preserves_doubles() -> None:
    x = random_matrix((3, 4), seed=6)
    np.testing.assert_array_equal(parse_matrix(serialize_matrix(x)), x)
    assert serialize_matrix([[1.0, 0.5]]) == "1 2\n1 0.5\n"


def test_parse_dataset_with_ids() -> None:
    ds = parse_dataset(DATASET_TEXT)
    assert ds.ids == (4, 1)
    np.testing.assert_allclose(ds.items[1].eigenvalues, [3.0, 1.0])


def test_blocks_without_ids_use_their_position() -> None:
    entries = parse_matrices("1 1\n2\n---\n1 1\n3\n")
    assert [block_id for block_id, _ in entries] == [0, 1]


def test_duplicate_ids_are_rejected() -> None:
    with pytest.raises(ParseError, match="duplicate id 4") as exc_info:
        parse_matrices("# id: 4\n1 1\n2\n---\n# id: 4\n1 1\n3\n")
    assert exc_info.value.line_number == 5


def test_dataset_items_must_be_spd() -> None:
    with pytest.raises(NotPositiveDefiniteError):
        parse_dataset("1 1\n-2\n")


def test_dataset_serialization_reparses() -> None:
    ds = SpdDataset.from_matrices([random_spd(3, seed=k) for k in range(3)], ids=[10, 20, 30])
    again = parse_dataset(serialize_dataset(ds))
    assert again.ids == ds.ids
    for original, parsed in zip(ds.items, again.items, strict=True):
        np.testing.assert_array_equal(parsed.matrix, original.matrix)


def test_file_helpers(tmp_path: Path) -> None:
    matrix_path = tmp_path / "nested" / "x.txt"
    write_text(matrix_path, serialize_matrix(np.eye(2)))
    np.testing.assert_array_equal(load_matrix(matrix_path), np.eye(2))
    dataset_path = tmp_path / "ds.txt"
    write_text(dataset_path, DATASET_TEXT)
    assert load_dataset(dataset_path).ids == (4, 1)
    assert [block_id for block_id, _ in load_matrices(dataset_path)] == [4, 1]
    with pytest.raises(InvalidInputError, match="cannot read"):
        load_matrix(tmp_path / "missing.txt")

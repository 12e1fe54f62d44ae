"""JSON reports printed by every CLI command."""

import hashlib
import time
from collections.abc import Iterator
from contextlib import contextmanager
from typing import Any

from pydantic import BaseModel, ConfigDict

from src.formats.matrix_text import serialize_matrix

DIGEST_LENGTH = 16


class CommandReport(BaseModel):
    command: str
    input_digests: dict[str, str]
    parameters: dict[str, Any]
    result: dict[str, Any]
    elapsed_seconds: float

    model_config = ConfigDict(frozen=True, ser_json_inf_nan="constants")

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)


def matrix_digest(matrix: Any) -> str:
    """First 16 hex digits of the sha256 of the matrix's text serialization."""
    payload = serialize_matrix(matrix).encode("utf-8")
    return hashlib.sha256(payload).hexdigest()[:DIGEST_LENGTH]


def text_digest(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:DIGEST_LENGTH]


class Stopwatch:
    def __init__(self) -> None:
        self.elapsed = 0.0


@contextmanager
def timed() -> Iterator[Stopwatch]:
    stopwatch = Stopwatch()
    start = time.perf_counter()
    try:
        yield stopwatch
    finally:
        stopwatch.elapsed = time.perf_counter() - start


def build_report(
    command: str,
    result: BaseModel | dict[str, Any],
    elapsed_seconds: float,
    input_digests: dict[str, str] | None = None,
    parameters: dict[str, Any] | None = None,
) -> CommandReport:
    payload = result.model_dump(mode="python") if isinstance(result, BaseModel) else result
    return CommandReport(
        command=command,
        input_digests=input_digests or {},
        parameters=parameters or {},
        result=payload,
        elapsed_seconds=elapsed_seconds,
    )

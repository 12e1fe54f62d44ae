import logging
import math
from pathlib import Path


def validate_log_level(level: str) -> str:
    normalized = level.strip().upper()
    valid_levels = logging.getLevelNamesMapping()
    if normalized not in valid_levels:
        msg = f"Log level must be one of {sorted(valid_levels)}"
        raise ValueError(msg)
    return normalized


def validate_positive_float(value: str, field_name: str = "Value") -> float:
    try:
        number = float(value)
    except ValueError:
        msg = f"{field_name} must be a number, got '{value}'"
        raise ValueError(msg) from None
    if not math.isfinite(number) or number <= 0:
        msg = f"{field_name} must be a positive finite number"
        raise ValueError(msg)
    return number


def validate_fraction(value: str, field_name: str = "Value") -> float:
    number = validate_positive_float(value, field_name)
    if number >= 1:
        msg = f"{field_name} must be below 1"
        raise ValueError(msg)
    return number


def validate_positive_int(value: str, field_name: str = "Value") -> int:
    try:
        number = int(value)
    except ValueError:
        msg = f"{field_name} must be an integer, got '{value}'"
        raise ValueError(msg) from None
    if number < 1:
        msg = f"{field_name} must be at least 1"
        raise ValueError(msg)
    return number


def validate_seed(value: str) -> int:
    try:
        seed = int(value)
    except ValueError:
        msg = f"Seed must be an integer, got '{value}'"
        raise ValueError(msg) from None
    if seed < 0:
        msg = "Seed must be non-negative"
        raise ValueError(msg)
    return seed


def validate_optional_log_file(path_str: str) -> Path | None:
    """Empty input means no log file."""
    stripped = path_str.strip()
    if not stripped:
        return None
    path = Path(stripped).expanduser().resolve()
    if path.is_dir():
        msg = f"Log file path '{path}' is a directory"
        raise ValueError(msg)
    return path

from pathlib import Path

import pytest

from src.validators import (
    validate_fraction,
    validate_log_level,
    validate_optional_log_file,
    validate_positive_float,
    validate_positive_int,
    validate_seed,
)


def test_validate_log_level() -> None:
    assert validate_log_level(" debug ") == "DEBUG"
    with pytest.raises(ValueError, match="Log level must be one of"):
        validate_log_level("loud")


@pytest.mark.parametrize("value", ["0", "-1e-9", "inf", "nan", "abc"])
def test_validate_positive_float_rejects(value: str) -> None:
    with pytest.raises(ValueError, match="Tolerance"):
        validate_positive_float(value, "Tolerance")


def test_validate_numbers() -> None:
    assert validate_positive_float("1e-9") == 1e-9
    assert validate_fraction("0.2") == 0.2
    with pytest.raises(ValueError, match="below 1"):
        validate_fraction("1")
    assert validate_positive_int("12") == 12
    with pytest.raises(ValueError, match="at least 1"):
        validate_positive_int("0")
    with pytest.raises(ValueError, match="integer"):
        validate_positive_int("1.5")
    assert validate_seed("0") == 0
    with pytest.raises(ValueError, match="non-negative"):
        validate_seed("-3")


def test_validate_optional_log_file(tmp_path: Path) -> None:
    assert validate_optional_log_file("  ") is None
    assert validate_optional_log_file(str(tmp_path / "a.log")) == (tmp_path / "a.log").resolve()
    with pytest.raises(ValueError, match="is a directory"):
        validate_optional_log_file(str(tmp_path))

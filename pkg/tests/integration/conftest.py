import logging
import os
from collections.abc import Iterator
from pathlib import Path

import pytest


@pytest.fixture(autouse=True)
def isolated_settings(tmp_path: Path, monkeypatch: pytest.MonkeyPatch) -> Iterator[Path]:
    """An empty config directory and no SPECBOUND_ variables in the environment."""
    config_dir = tmp_path / "specbound-config"
    config_dir.mkdir()
    monkeypatch.setattr("src.settings.DEFAULT_CONFIG_DIR", config_dir)
    monkeypatch.setattr("src.cli.DEFAULT_CONFIG_DIR", config_dir)
    for name in [name for name in os.environ if name.startswith("SPECBOUND_")]:
        monkeypatch.delenv(name)
    monkeypatch.chdir(tmp_path)

    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield config_dir
    root.handlers[:] = handlers
    root.setLevel(level)
    logging.captureWarnings(False)

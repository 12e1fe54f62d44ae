from pathlib import Path

from pydantic import BaseModel, ConfigDict, Field
from pydantic_settings import (
    BaseSettings,
    PydanticBaseSettingsSource,
    SettingsConfigDict,
    TomlConfigSettingsSource,
)

from src.geometry.ab_divergence import CROSS_CHECK_REL_TOL
from src.inequalities.report import INEQUALITY_REL_TOL
from src.logging_setup import DEFAULT_LOG_LEVEL
from src.search.nearest import PRUNE_SLACK
from src.spectral.perturbation import (
    CLUSTER_ABS_TOL,
    CLUSTER_REL_TOL,
    NOISE_FLOOR,
    RATIO_THRESHOLD,
)

DEFAULT_CONFIG_DIR = Path.home() / ".specbound"
CONFIG_FILE_NAME = "config.toml"
ENV_PREFIX = "SPECBOUND_"


def find_first_toml(search_dir: Path, patterns: list[str] | None = None) -> Path:
    """Search for the first TOML file in the specified directory.

    Args:
        search_dir (Path): The directory to search for TOML files.
        patterns (list[str], optional): Glob patterns to match files. Defaults to ["*.toml"].

    Returns:
        Path: The first matching TOML file, in sorted order within each pattern.

    Raises:
        `FileNotFoundError`: If the directory does not exist or no matching TOML file is found.

    """
    if patterns is None:
        patterns = ["*.toml"]

    if not search_dir.exists():
        msg = f"Config directory '{search_dir}' does not exist."
        raise FileNotFoundError(msg)

    for pattern in patterns:
        for toml_path in sorted(search_dir.glob(pattern)):
            if toml_path.is_file():
                return toml_path
    msg = f"No TOML file found in {search_dir} matching {patterns}"
    raise FileNotFoundError(msg)


def find_config_file(search_dir: Path | None = None) -> Path | None:
    """The first TOML file in the config directory, or None when there is none."""
    try:
        return find_first_toml(search_dir or DEFAULT_CONFIG_DIR)
    except FileNotFoundError:
        return None


class CoreSettings(BaseModel):
    """Numerical tolerances threaded into the library calls by the CLI."""

    inequality_rel_tol: float = Field(default=INEQUALITY_REL_TOL, gt=0)
    cluster_rel_tol: float = Field(default=CLUSTER_REL_TOL, ge=0)
    cluster_abs_tol: float = Field(default=CLUSTER_ABS_TOL, ge=0)
    perturbation_ratio_threshold: float = Field(default=RATIO_THRESHOLD, gt=0, lt=1)
    perturbation_noise_floor: float = Field(default=NOISE_FLOOR, ge=0)
    cross_check_matrix_forms: bool = False
    cross_check_rel_tol: float = Field(default=CROSS_CHECK_REL_TOL, gt=0)
    knn_prune_slack: float = Field(default=PRUNE_SLACK, ge=0)

    model_config = ConfigDict(extra="forbid")


class LoggingSettings(BaseModel):
    min_log_level: str = DEFAULT_LOG_LEVEL
    log_file_path: Path | None = None

    model_config = ConfigDict(extra="forbid")


class VerifySettings(BaseModel):
    trials: int = Field(default=100, ge=1)
    dim: int = Field(default=4, ge=1)
    seed: int = 0

    model_config = ConfigDict(extra="forbid")


class AppSettings(BaseSettings):
    """Settings loaded from class initialization, an optional `toml` file and the environment.

    Precedence (as defined in `settings_customise_sources`):
    1. Initialization arguments
    2. The first `toml` file in `~/.specbound/`, when there is one
    3. Environment variables (including a `.env` file)

    NOTE: Nested environment variables use `SPECBOUND_{SECTION}__{PROPERTY}`,
    e.g. `SPECBOUND_CORE__INEQUALITY_REL_TOL`.
    """

    core: CoreSettings = CoreSettings()
    logging: LoggingSettings = LoggingSettings()
    verify: VerifySettings = VerifySettings()

    model_config = SettingsConfigDict(
        # only the CWD is checked here; the CLI calls load_dotenv() for parent folders
        env_file=".env",
        env_file_encoding="utf-8",
        env_prefix=ENV_PREFIX,
        env_nested_delimiter="__",
        extra="forbid",
    )

    @classmethod
    def settings_customise_sources(
        cls,
        settings_cls: type[BaseSettings],
        init_settings: PydanticBaseSettingsSource,
        env_settings: PydanticBaseSettingsSource,
        dotenv_settings: PydanticBaseSettingsSource,
        file_secret_settings: PydanticBaseSettingsSource,  # noqa: ARG003
    ) -> tuple[PydanticBaseSettingsSource, ...]:
        toml_file = find_config_file()
        if toml_file is None:
            return init_settings, env_settings, dotenv_settings
        return (
            init_settings,
            TomlConfigSettingsSource(settings_cls, toml_file=toml_file),
            env_settings,
            dotenv_settings,
        )

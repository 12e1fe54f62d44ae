from collections.abc import Callable
from functools import partial, wraps
from pathlib import Path
from typing import Any, TypeVar

import tomli_w
from rich.prompt import Confirm, Prompt

from src.console_utils import (
    format_bold,
    format_cyan,
    format_dim,
    format_success_with_checkmark,
    print_empty_line,
    print_error_inline,
    print_info,
    print_section,
    print_success,
    print_summary,
    print_warning,
)
from src.settings import CoreSettings, LoggingSettings, VerifySettings
from src.validators import (
    validate_fraction,
    validate_log_level,
    validate_optional_log_file,
    validate_positive_float,
    validate_positive_int,
    validate_seed,
)

T = TypeVar("T")


def _show_welcome() -> None:
    welcome_msg = "Welcome to specbound configuration"
    subtitle_msg = format_dim("Press enter to keep a default value.")
    print_info(f"{welcome_msg}\n\n{subtitle_msg}")


def _show_summary(config: dict[str, dict[str, Any]]) -> None:
    lines = [format_bold("Configuration Summary"), ""]
    for section, values in config.items():
        lines.append(format_bold(f"[{section}]"))
        lines.extend(f"{format_dim(f'{key}:')} {value!s}" for key, value in values.items())
    print_summary("\n".join(lines))


def _confirm_save() -> bool:
    if not Confirm.ask(format_cyan("Save this configuration?"), default=True):
        print_warning("Configuration cancelled.")
        return False
    return True


def _show_success(config_path: Path) -> None:
    success_msg = format_success_with_checkmark("Configuration saved successfully!")
    config_msg = format_dim(f"Config file: {config_path!s}")
    print_success(f"{success_msg}\n\n{config_msg}\n")


def _prompt_with_validation(
    prompt_text: str,
    validator: Callable[[str], T],
    default: str | None = None,
    hint: str | None = None,
) -> T:
    formatted_prompt = format_cyan(prompt_text)
    if hint:
        formatted_prompt += format_dim(hint)

    while True:
        user_input = Prompt.ask(formatted_prompt, default=default)
        try:
            return validator(user_input or "")
        except ValueError as e:
            print_error_inline(str(e))
            print_empty_line()


def section_decorator(section_name: str) -> Callable[[Callable[..., Any]], Callable[..., Any]]:
    def decorator(func: Callable[..., Any]) -> Callable[..., Any]:
        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> Any:
            print_section(section_name)
            result = func(*args, **kwargs)
            print_empty_line()
            return result

        return wrapper

    return decorator


@section_decorator("Numerical Tolerances")
def _collect_core_settings() -> dict[str, Any]:
    defaults = CoreSettings()
    return {
        "inequality_rel_tol": _prompt_with_validation(
            "Inequality relative tolerance",
            partial(validate_positive_float, field_name="Tolerance"),
            default=repr(defaults.inequality_rel_tol),
        ),
        "perturbation_ratio_threshold": _prompt_with_validation(
            "Perturbation error ratio threshold",
            partial(validate_fraction, field_name="Threshold"),
            default=repr(defaults.perturbation_ratio_threshold),
            hint=" (consecutive error ratios must stay below it)",
        ),
        "cross_check_matrix_forms": Confirm.ask(
            format_cyan("Cross-check divergences against their matrix forms?"),
            default=defaults.cross_check_matrix_forms,
        ),
    }


@section_decorator("Logging")
def _collect_logging_settings() -> dict[str, Any]:
    defaults = LoggingSettings()
    settings: dict[str, Any] = {
        "min_log_level": _prompt_with_validation(
            "Minimum log level", validate_log_level, default=defaults.min_log_level
        )
    }
    log_file = _prompt_with_validation(
        "Log file path", validate_optional_log_file, default="", hint=" (empty for none)"
    )
    # TOML has no null, an absent key keeps the default
    if log_file is not None:
        settings["log_file_path"] = str(log_file)
    return settings


@section_decorator("Verification Suites")
def _collect_verify_settings() -> dict[str, Any]:
    defaults = VerifySettings()
    return {
        "trials": _prompt_with_validation(
            "Trials per suite",
            partial(validate_positive_int, field_name="Trials"),
            default=str(defaults.trials),
        ),
        "dim": _prompt_with_validation(
            "Matrix dimension",
            partial(validate_positive_int, field_name="Dimension"),
            default=str(defaults.dim),
        ),
        "seed": _prompt_with_validation("Seed", validate_seed, default=str(defaults.seed)),
    }


def _write_toml_config(config_path: Path, config: dict[str, dict[str, Any]]) -> None:
    config_path.parent.mkdir(parents=True, exist_ok=True)
    with config_path.open("wb") as f:
        tomli_w.dump(config, f)


def initialize_settings(config_path: Path) -> None:
    try:
        _show_welcome()
        config = {
            "core": _collect_core_settings(),
            "logging": _collect_logging_settings(),
            "verify": _collect_verify_settings(),
        }
        _show_summary(config)
        if _confirm_save():
            _write_toml_config(config_path, config)
            _show_success(config_path)

    except KeyboardInterrupt:
        print_empty_line()
        print_warning("Configuration cancelled by user.")
        raise

"""Console printing shared by the CLI.

Diagnostics, panels and tables go to stderr; reports go to stdout unformatted.
"""

from collections.abc import Generator, Iterable
from contextlib import contextmanager
from typing import Any

from rich.console import Console
from rich.panel import Panel
from rich.table import Table

# diagnostics
console = Console(stderr=True)
# machine-readable output, never wrapped or highlighted
report_console = Console(soft_wrap=True, highlight=False)

_BOLD_CYAN = "[bold cyan]"
_BOLD_GREEN = "[bold green]"
_BOLD_RED = "[bold red]"
_BOLD = "[bold]"
_CYAN = "[cyan]"
_DIM = "[dim]"
_RED = "[red]"
_YELLOW = "[yellow]"
_RESET = "[/]"


def print_empty_line() -> None:
    console.print()


def print_report(text: str) -> None:
    """Write a JSON report to stdout as-is."""
    report_console.print(text, markup=False, emoji=False)


def print_success(message: str, title: str | None = None) -> None:
    formatted_message = f"{_BOLD_GREEN}{message}{_RESET}"
    console.print(Panel.fit(formatted_message, border_style="green", title=title))


def print_error(message: str, title: str = "Error") -> None:
    """Print an error message with red Panel.fit.

    Args:
        message: The error message to display (plain text, formatting applied internally)
        title: Title for the error panel (default: "Error")
    """
    formatted_message = f"{_BOLD_RED}{message}{_RESET}"
    console.print(Panel.fit(formatted_message, border_style="red", title=title))


def print_info(message: str) -> None:
    formatted_message = f"{_BOLD_CYAN}{message}{_RESET}"
    console.print()
    console.print(Panel.fit(formatted_message, border_style="cyan"))


def print_warning(message: str) -> None:
    console.print(f"{_YELLOW}{message}{_RESET}")


def print_section(title: str) -> None:
    formatted_title = f"{_BOLD}{title}{_RESET}"
    console.print(Panel(formatted_title, border_style="blue"))
    console.print()


def print_summary(content: str) -> None:
    console.print(Panel(content, border_style="green"))
    console.print()


def print_error_inline(message: str) -> None:
    console.print(f"{_RED}Error:{_RESET} {message}")


def print_label_value(label: str, value: Any) -> None:
    console.print(f"{_DIM}{label}:{_RESET} {value}")


def print_table(title: str, columns: Iterable[str], rows: Iterable[Iterable[Any]]) -> None:
    """Render rows as a rich table on stderr; the first column is the row label."""
    table = Table(title=title, title_style="bold", header_style="bold cyan")
    for index, column in enumerate(columns):
        table.add_column(column, justify="left" if index == 0 else "right")
    for row in rows:
        table.add_row(*(str(cell) for cell in row))
    console.print(table)


def format_success_with_checkmark(message: str) -> str:
    return f"{_BOLD_GREEN}✓ {message}{_RESET}"


def format_error_with_cross(message: str) -> str:
    return f"{_BOLD_RED}✗ {message}{_RESET}"


def format_dim(message: str) -> str:
    return f"{_DIM}{message}{_RESET}"


def format_cyan(message: str) -> str:
    return f"{_CYAN}{message}{_RESET}"


def format_bold(message: str) -> str:
    return f"{_BOLD}{message}{_RESET}"


@contextmanager
def get_status(message: str, spinner: str = "dots") -> Generator[None]:
    """Spinner on stderr while a long computation runs.

    Args:
        message: The status message to display (plain text, formatting applied internally)
        spinner: The spinner style (default: "dots")
    """
    with console.status(f"{_BOLD_GREEN}{message}{_RESET}", spinner=spinner):
        yield

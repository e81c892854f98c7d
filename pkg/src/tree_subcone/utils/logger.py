"""Logging utilities using Rich console."""

from rich.console import Console
from rich.markup import escape

# Global console instances; soft wrapping keeps long exact rationals on one line
console = Console(soft_wrap=True)
err_console = Console(stderr=True, soft_wrap=True)


def set_level(level: str) -> None:
    """Silence status output below WARNING; errors always reach stderr."""
    console.quiet = level.upper() in {"WARNING", "ERROR", "CRITICAL"}


def warn(message: str) -> None:
    err_console.print(f"[yellow]Warning:[/yellow] {escape(message)}")


def error(message: str) -> None:
    err_console.print(f"[red]Error:[/red] {escape(message)}")

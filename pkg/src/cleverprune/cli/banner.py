"""
Module: src/cleverprune/cli/banner.py

cleverprune CLI banner: a rich panel with the tool name, version and the
command being run.

Version: 0.1.0
License: Apache 2.0
"""

from typing import Optional

from rich.console import Console
from rich.panel import Panel
from rich.text import Text

from cleverprune import __version__


def print_banner(executed_command: Optional[str] = None, width: Optional[int] = None):
    """Print the cleverprune banner.

    Args:
        executed_command (Optional[str]): Command line echoed under the
            banner when given.
        width (Optional[int]): Panel width; defaults to the terminal width.

    Example:
        >>> print_banner("cleverprune run train --config cfg.json")
    """
    console = Console(width=width)

    banner = Text(justify="center")
    banner.append("cleverprune", style="bold cyan")
    banner.append(f"  v{__version__}\n", style="magenta")
    banner.append("Explanation-guided removal of Clever-Hans strategies\n", style="white")

    panel = Panel(
        banner,
        border_style="cyan",
        title="[bold blue]cleverprune",
        padding=(1, 4),
        expand=True,
        width=console.size.width,
    )

    console.print(panel, justify="left")
    if executed_command:
        console.print(f"\n[dim italic]$ {executed_command}[/dim italic]\n")
    else:
        console.print("")

"""
# Copyright 2026 The cleverprune Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

Module: src/cleverprune/cli/utils.py

cleverprune CLI Messaging Helpers

Status lines for the command-line interface, rendered with Rich. Every
message the CLI prints outside of a results table goes through one of the
four helpers below, so a given kind of message always has the same colour:
cyan for progress, green for completed steps, yellow for results that need
a second look and red for failures.

Logging is separate: these helpers talk to the person at the terminal, the
``cleverprune`` loggers record what the pipeline computed.

Version: 0.1.0
License: Apache 2.0
"""

from rich.console import Console

__version__ = "0.1.0"

_console = Console()


def info(msg: str):
    """Print a progress message in bold cyan.

    Used when a pipeline step starts or moves on to its next stage, such as
    loading a run directory or scoring candidates.

    Args:
        msg (str): Message to print.

    Example:
        >>> info("Training on 2000 images...")
        # Printed in bold cyan
    """
    _console.print(f"[bold cyan]{msg}[/]")


def success(msg: str):
    """Print a completion message in bold green.

    Used once a command has written its files, typically naming the file or
    directory that now holds the result.

    Args:
        msg (str): Message to print.

    Example:
        >>> success("Refined model written to runs/seed0/refined_egem.egem")
        # Printed in bold green
    """
    _console.print(f"[bold green]{msg}[/]")


def warn(msg: str):
    """Print a warning in bold yellow.

    Used when a command succeeds but its result deserves attention, for
    example when no candidate stayed within the slack and the weakest
    strength was kept.

    Args:
        msg (str): Message to print.

    Example:
        >>> warn("No candidate within 5.0 points; kept the weakest strength")
        # Printed in bold yellow
    """
    _console.print(f"[bold yellow]{msg}[/]")


def error(msg: str):
    """Print a failure in bold red.

    Used right before the CLI exits with a nonzero code, with the message
    of the error that ended the command.

    Args:
        msg (str): Message to print.

    Example:
        >>> error("Required file not found: runs/seed0/model.egem")
        # Printed in bold red
    """
    _console.print(f"[bold red]{msg}[/]")

"""cleverprune CLI Initialization

Module: src/cleverprune/cli/__init__.py
Version: 0.1.0
License: Apache 2.0
"""

from cleverprune.cli.cli import app

__all__ = ["app"]

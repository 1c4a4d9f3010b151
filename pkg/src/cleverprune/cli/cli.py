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

Module: src/cleverprune/cli/cli.py

cleverprune CLI Main Entry Point

Ties the pipeline together behind one ``run`` command:

    cleverprune run train --config cfg.json
    cleverprune run refine cfg.json --out runs/seed7
    cleverprune run sweep-slack cfg.json --threads 4

Exit codes: 0 on success, 1 for configuration problems (missing or
malformed files, schema violations, unknown commands) and other domain
errors, 2 for numerical failures such as a diverging training loss.

Version: 0.1.0
License: Apache 2.0
"""

from pathlib import Path
from typing import Optional

import typer
from pydantic import ValidationError

from cleverprune import __version__
from cleverprune.application.dto.experiment_config import ExperimentConfig
from cleverprune.application.use_cases.evaluate_use_case import EvaluateUseCase
from cleverprune.application.use_cases.explain_use_case import ExplainUseCase
from cleverprune.application.use_cases.refine_use_case import RefineUseCase
from cleverprune.application.use_cases.sweep_use_case import SweepUseCase
from cleverprune.application.use_cases.train_use_case import TrainUseCase
from cleverprune.cli.banner import print_banner
from cleverprune.cli.cli_output_service import render_metrics, render_selection
from cleverprune.cli.utils import error, info, success, warn
from cleverprune.domain.errors import CleverPruneError, ConfigError, NumericalError
from cleverprune.infrastructure.config import check_configuration, get_settings

COMMANDS = (
    "train",
    "refine",
    "evaluate",
    "sweep-slack",
    "sweep-samples",
    "sweep-artifacts",
    "explain",
)

EXIT_CONFIG = 1
EXIT_NUMERICAL = 2

app = typer.Typer(help="cleverprune -- remove Clever-Hans strategies from trained models")


@app.callback(invoke_without_command=True)
def main(ctx: typer.Context):
    """
    cleverprune CLI Entry Callback

    Prints the banner and help when no command is given.
    """
    if ctx.invoked_subcommand is None:
        print_banner()
        typer.echo(ctx.get_help())
        raise typer.Exit()


def _usage() -> str:
    return "Usage: cleverprune run COMMAND [CONFIG] [--config PATH]\n\nCommands: " + ", ".join(
        COMMANDS
    )


def _dispatch(command: str, config: ExperimentConfig, threads: int) -> None:
    if command == "train":
        outcome = TrainUseCase().execute(config)
        render_metrics([outcome.response], title="Trained model")
        success(f"Model written to {outcome.model_path}")
    elif command == "refine":
        outcome = RefineUseCase(threads).execute(config)
        render_selection(outcome.selection, config.method)
        if outcome.selection.no_candidate:
            warn(f"No candidate within {config.slack:g} points of slack; kept the weakest")
        success(f"Refined with {config.method} at strength {outcome.strength:g}")
    elif command == "evaluate":
        render_metrics(EvaluateUseCase().execute(config), title="Evaluation")
        success("Evaluation complete.")
    elif command.startswith("sweep-"):
        outcome = SweepUseCase(threads).execute(config, command[len("sweep-") :])
        success(f"Sweep written to {outcome.path} ({len(outcome.rows)} rows)")
        for name, path in outcome.diagnostics.items():
            info(f"{name}: {path}")
    else:
        relevance = ExplainUseCase().execute(config)
        success(f"Relevance of target {relevance.target} written")


@app.command("run")
def run(
    command: str = typer.Argument(..., help=f"One of: {', '.join(COMMANDS)}"),
    config_path: Optional[Path] = typer.Argument(None, help="Experiment JSON file"),
    config: Optional[Path] = typer.Option(None, "--config", help="Experiment JSON file"),
    out: Optional[Path] = typer.Option(None, "--out", help="Output directory"),
    seed: Optional[int] = typer.Option(None, "--seed", min=0, help="Overrides the config seed"),
    threads: Optional[int] = typer.Option(
        None, "--threads", min=1, help="Worker threads (default: CLEVER_PRUNE_THREADS)"
    ),
):
    """Run one pipeline command on an experiment configuration.

    Args:
        command (str): train, refine, evaluate, sweep-slack, sweep-samples,
            sweep-artifacts or explain.
        config_path (Optional[Path]): Experiment file given positionally.
        config (Optional[Path]): Experiment file given with ``--config``;
            wins over the positional one.
        out (Optional[Path]): Output directory, overriding ``output_dir``.
        seed (Optional[int]): Seed, overriding ``seed``.
        threads (Optional[int]): Worker threads for candidate refits and
            sweep runs.

    Raises:
        typer.Exit: Code 1 on configuration or domain errors, 2 on
            numerical failure.

    Example:
        $ cleverprune run train --config cfg.json --seed 7 --out runs/seed7
    """
    if command not in COMMANDS:
        error(f"Unknown command '{command}'")
        typer.echo(_usage())
        raise typer.Exit(code=EXIT_CONFIG)

    print_banner(f"cleverprune run {command}")
    path = config or config_path
    try:
        if path is None:
            raise ConfigError("No experiment configuration given (use --config PATH)")
        experiment = ExperimentConfig.load(path).with_overrides(
            seed=seed, output_dir=str(out) if out is not None else None
        )
        workers = get_settings().resolve_threads(threads)
        info(f"Running {command} (seed {experiment.seed}, {workers} thread(s))")
        _dispatch(command, experiment, workers)
    except NumericalError as exc:
        error(f"Numerical failure: {exc}")
        raise typer.Exit(code=EXIT_NUMERICAL)
    except ValidationError as exc:
        error(f"Invalid configuration: {exc}")
        raise typer.Exit(code=EXIT_CONFIG)
    except CleverPruneError as exc:
        error(str(exc))
        raise typer.Exit(code=EXIT_CONFIG)


@app.command("check-config")
def check_config():
    """Log the runtime settings read from the environment and .env."""
    check_configuration()


@app.command("version")
def version():
    """Show cleverprune version and banner."""
    print_banner()
    typer.echo(f"Version: {__version__}")


def get_app():
    return app


if __name__ == "__main__":
    app()

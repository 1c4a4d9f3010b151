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

Module: src/cleverprune/infrastructure/reports.py

CSV Reports

Every table the tool writes goes through pandas with a fixed float format,
so identical results give identical bytes. Metrics reports start with a
fixed column order followed by per-group recall columns; ``read_report``
parses any of the tool's CSVs back and checks the leading columns.

Version: 0.1.0
License: Apache 2.0
"""

import logging
from pathlib import Path
from typing import Any, Dict, Iterable, List, Mapping, Optional, Sequence

import pandas as pd

from cleverprune.domain.entities.dataset import GROUP_TAGS
from cleverprune.domain.entities.metrics_report import MetricsReport
from cleverprune.domain.entities.relevance import RelevanceMap
from cleverprune.domain.errors import FormatError
from cleverprune.infrastructure.model_store import PathLike

__version__ = "0.1.0"

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.12g"

REPORT_COLUMNS: List[str] = [
    "run_seed",
    "method",
    "alpha_or_lambda",
    "slack",
    "n_refine",
    "acc_clean",
    "acc_poisoned",
    "gap",
]
RECALL_COLUMNS: List[str] = [f"recall_{tag}" for tag in GROUP_TAGS]
TRACE_COLUMNS: List[str] = ["candidate", "val_accuracy", "chosen"]
RELEVANCE_COLUMNS: List[str] = ["layer", "unit", "R"]


def report_row(
    report: MetricsReport,
    method: str,
    strength: float,
    slack: float,
    n_refine: int,
    **extra: Any,
) -> Dict[str, Any]:
    """One metrics CSV row; missing recalls are left empty."""
    row: Dict[str, Any] = {
        "run_seed": report.run_seed,
        "method": method,
        "alpha_or_lambda": strength,
        "slack": slack,
        "n_refine": n_refine,
        "acc_clean": report.accuracy_clean,
        "acc_poisoned": report.accuracy_poisoned,
        "gap": report.gap,
    }
    for tag in GROUP_TAGS:
        row[f"recall_{tag}"] = report.recall_by_group.get(tag)
    row.update(extra)
    return row


def write_frame(frame: pd.DataFrame, path: PathLike) -> Path:
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    frame.to_csv(target, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    logger.debug(f"Wrote {len(frame)} rows to {target}")
    return target


def write_report(rows: Iterable[Mapping[str, Any]], path: PathLike) -> Path:
    """Metrics CSV with the fixed leading columns, then recall, then extras."""
    frame = pd.DataFrame(list(rows))
    fixed = REPORT_COLUMNS + RECALL_COLUMNS
    for column in fixed:
        if column not in frame.columns:
            frame[column] = None
    extras = [c for c in frame.columns if c not in fixed]
    return write_frame(frame[fixed + extras], path)


def relevance_frame(relevance: RelevanceMap, layers: Optional[Sequence[int]] = None) -> pd.DataFrame:
    rows = [r for r in relevance.rows() if layers is None or r[0] in layers]
    return pd.DataFrame(rows, columns=RELEVANCE_COLUMNS)


def per_site_frame(values: Mapping[int, Optional[float]], name: str, **key: Any) -> pd.DataFrame:
    """Long-format table of a per-site diagnostic (site, value, plus key columns)."""
    rows = [{**key, "site": site, name: value} for site, value in sorted(values.items())]
    return pd.DataFrame(rows)


def read_report(path: PathLike, leading: Optional[Sequence[str]] = None) -> pd.DataFrame:
    """Parse a CSV written by this tool.

    Args:
        path (PathLike): CSV file.
        leading (Optional[Sequence[str]]): Expected first columns; defaults
            to the metrics report columns when the header starts with
            ``run_seed``.

    Raises:
        FormatError: If the file cannot be parsed or its columns are out of order.
    """
    try:
        frame = pd.read_csv(path)
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise FormatError(f"Cannot parse report {path}: {exc}")
    if leading is None and list(frame.columns[:1]) == ["run_seed"]:
        leading = REPORT_COLUMNS
    if leading is not None and list(frame.columns[: len(leading)]) != list(leading):
        raise FormatError(
            f"Report {path} starts with columns {list(frame.columns[: len(leading)])}, "
            f"expected {list(leading)}"
        )
    return frame

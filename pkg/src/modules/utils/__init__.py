#  Copyright (c) 2025 ElasticaSplit contributors
#  Licensed under the GNU AGPL v3.0: https://www.gnu.org/licenses/agpl-3.0.html
#  Part of the ElasticaSplit project. All rights reserved where applicable.

__all__ = [
    "TRACE_HEADER",
    "format_seconds",
    "write_json",
    "write_trace_csv",
]

import csv
from pathlib import Path
from typing import Any, Union

import ujson

from ...helpers import EnergyTrace
from ...logger import LOGGER

TRACE_HEADER = (
    "iter",
    "E_total",
    "E_elastica",
    "E_fidelity",
    "E_p13",
    "E_lam13",
    "E_proj23",
    "E_u",
    "rel_err",
)


def _num(value: float) -> str:
    return "%.17g" % value


def format_seconds(seconds: float) -> str:
    """
    Format a duration into a short human-readable string.

    Sub-minute durations keep millisecond precision since solver runs on small
    grids finish well under a second.
    """
    if seconds < 60:
        return f"{seconds:.3f}s"
    minutes, seconds = divmod(seconds, 60)
    if minutes < 60:
        return f"{int(minutes)}m {int(seconds)}s"
    hours, minutes = divmod(minutes, 60)
    return f"{int(hours)}h {int(minutes)}m"


def write_trace_csv(trace: EnergyTrace, path: Union[str, Path]) -> Path:
    """
    Write one row per recorded iteration.

    Args:
        trace: The energy trace of a solver run.
        path: Destination CSV file.

    Returns:
        The path written.
    """
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_HEADER)
        for r in trace.records:
            writer.writerow(
                [
                    r.iter,
                    _num(r.e_total),
                    _num(r.e_elastica),
                    _num(r.e_fidelity),
                    _num(r.e_p13),
                    _num(r.e_lam13),
                    _num(r.e_proj23),
                    _num(r.e_u),
                    _num(r.rel_err),
                ]
            )
    LOGGER.info("Wrote %d trace rows to %s", len(trace), path)
    return path


def write_json(payload: Any, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(ujson.dumps(payload, indent=2), encoding="utf-8")
    return path

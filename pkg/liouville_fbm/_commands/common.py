from typing import Any, Dict

import pandas as pd

from liouville_fbm._core.command_registry import CommandContext
from liouville_fbm._frac.time_grid import TimeGrid
from liouville_fbm._io.csv_writer import write_csv
from liouville_fbm._io.json_writer import write_json


def grid_of(ctx: CommandContext) -> TimeGrid:
    return TimeGrid(t_end=ctx.config.T, n_cells=ctx.config.n_cells)


def artifact_header(ctx: CommandContext) -> Dict[str, Any]:
    """``# key=value`` lines for data files: the full config plus version and seed."""
    header = {f"config.{k}": v for k, v in ctx.config.echo().items()}
    header["command"] = ctx.report.command
    header["seed"] = ctx.config.seed
    header["version"] = ctx.report.version
    return header


def write_frame(ctx: CommandContext, name: str, frame: pd.DataFrame) -> None:
    path = write_csv(ctx.artifact(name), frame, artifact_header(ctx))
    ctx.report.record_artifact(path)


def write_document(ctx: CommandContext, name: str, payload: Dict[str, Any]) -> None:
    document = {
        "command": ctx.report.command,
        "version": ctx.report.version,
        "config": ctx.config.echo(),
        **payload,
    }
    path = write_json(ctx.artifact(name), document)
    ctx.report.record_artifact(path)

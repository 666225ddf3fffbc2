"""Pydantic run configuration shared by the CLI commands."""

from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field

import config


class RunConfig(BaseModel):
    command: Literal["graph", "invariants", "leakage", "bounds", "verify"]
    instance: Path | None = None
    t: int = Field(default=1, ge=1)
    t_max: int = Field(default=1, ge=1)
    subset: list[int] | None = None
    adversary_known: list[int] | None = None
    capability: int | dict[str, int] | None = None
    codes: list[Path] = Field(default_factory=list)
    search: bool = False
    simulate: bool = False
    samples: int = Field(default=100_000, ge=2)
    seed: int = Field(default=0, ge=0)
    shards: int = Field(default=1, ge=1)
    random: int = Field(default=0, ge=0)
    out: Path | None = None
    format: Literal["dot", "csv", "report"] | None = None
    known_rate: str | None = None
    citation: str = ""
    strict: bool = False
    vertex_cap: int = Field(default=config.VERTEX_CAP, ge=1)
    node_budget: int = Field(default=config.NODE_BUDGET, ge=1)
    search_budget: int = Field(default=config.SEARCH_BUDGET, ge=1)
    extra_colors: int = Field(default=config.SEARCH_EXTRA_COLORS, ge=0)

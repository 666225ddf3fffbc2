"""Instance documents (JSON or TOML) validated with pydantic."""

from __future__ import annotations

import json
import logging
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from pydantic import BaseModel, ConfigDict, Field, StrictInt, StrictStr, ValidationError

from ic_engine.bits import KnownRate, evaluate_rate_expression
from ic_engine.errors import InstanceValidationError
from ic_engine.model.distribution import Distribution
from ic_engine.model.instance import AdversarySpec, GuessBudget, Instance

logger = logging.getLogger(__name__)

Rational = StrictInt | StrictStr


class AdversaryBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    known: list[StrictInt] = Field(default_factory=list)
    capability: StrictInt | dict[str, StrictInt] | None = None


class ProductBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    product: list[list[Rational]]


class JointBody(BaseModel):
    model_config = ConfigDict(extra="forbid")

    joint: dict[str, Rational]


class InstanceDocument(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = ""
    n: StrictInt = Field(..., ge=1)
    q: StrictInt = Field(..., ge=2)
    side_info: list[list[StrictInt]]
    distribution: Literal["uniform"] | ProductBody | JointBody = "uniform"
    adversary: AdversaryBody = Field(default_factory=AdversaryBody)
    known_R_Q: str | None = None
    known_R_Q_citation: str = ""
    codes: list[str] = Field(default_factory=list)
    notes: str = ""


@dataclass(frozen=True)
class LoadedInstance:
    instance: Instance
    distribution: Distribution
    adversary: AdversarySpec
    name: str = ""
    known_rate: KnownRate | None = None
    codes: tuple[Path, ...] = field(default_factory=tuple)
    source: Path | None = None


def _capability(body: AdversaryBody) -> GuessBudget:
    if isinstance(body.capability, dict):
        try:
            table = {int(t): value for t, value in body.capability.items()}
        except ValueError:
            raise InstanceValidationError("capability table keys must be integers (t values)") from None
        return GuessBudget.of(table)
    return GuessBudget.of(body.capability)


def build_instance(document: InstanceDocument, source: Path | None = None) -> LoadedInstance:
    instance = Instance.from_lists(document.n, document.q, document.side_info)
    scope = instance.messages
    if document.distribution == "uniform":
        dist = Distribution.uniform(scope, instance.q)
    elif isinstance(document.distribution, ProductBody):
        dist = Distribution.product(scope, instance.q, document.distribution.product)
    else:
        dist = Distribution.joint(scope, instance.q, document.distribution.joint)
    adversary = AdversarySpec.build(instance.n, document.adversary.known, _capability(document.adversary))

    known_rate = None
    if document.known_R_Q is not None:
        evaluate_rate_expression(document.known_R_Q)
        known_rate = KnownRate(document.known_R_Q, document.known_R_Q_citation)
    base = source.parent if source is not None else Path.cwd()
    codes = tuple(base / entry for entry in document.codes)
    return LoadedInstance(instance, dist, adversary, document.name, known_rate, codes, source)


def load_instance(text: str, *, fmt: str = "json", source: Path | None = None) -> LoadedInstance:
    """Parse and validate an instance document; every failure is an InstanceValidationError."""
    try:
        raw = tomllib.loads(text) if fmt == "toml" else json.loads(text)
    except (json.JSONDecodeError, tomllib.TOMLDecodeError) as exc:
        raise InstanceValidationError(f"malformed {fmt} document: {exc}") from exc
    try:
        document = InstanceDocument.model_validate(raw)
    except ValidationError as exc:
        raise InstanceValidationError(f"invalid instance document: {exc}") from exc
    return build_instance(document, source)


def load_instance_file(path: str | Path) -> LoadedInstance:
    path = Path(path)
    fmt = "toml" if path.suffix.lower() == ".toml" else "json"
    loaded = load_instance(path.read_text(encoding="utf-8"), fmt=fmt, source=path)
    logger.info("loaded instance %s from %s", loaded.name or path.stem, path)
    return loaded

from __future__ import annotations

import logging
import os
import shutil
import tempfile
from typing import Any

from pydantic import BaseModel, Field, ValidationError, field_validator
from ruamel.yaml import YAML

from tracealg.errors import ConfigError

CURRENT_SCHEMA_VERSION = 1
TERM_BUDGET_ENV = "TRACEALG_TERM_BUDGET"


class Settings(BaseModel):
    # keep field names in lowerCamelCase (no underscores)
    schemaVersion: int = CURRENT_SCHEMA_VERSION

    # expansion limits
    termBudget: int = Field(default=1_000_000, gt=0)
    gcdTermThreshold: int = Field(default=5000, ge=0)

    # sampling
    sampleDenominator: int = Field(default=64, gt=0)
    precheckPoints: int = Field(default=3, ge=0)
    resampleLimit: int = Field(default=100, gt=0)
    failureExponent: int = Field(default=64, gt=0)

    # misc
    logLevel: str = "INFO"
    logJson: bool = False

    @field_validator("logLevel")
    @classmethod
    def upperLevel(cls, value: str) -> str:
        level = value.upper()
        if level not in ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"):
            raise ValueError(f"unknown log level {value!r}")
        return level


def yamlLoader() -> YAML:
    y = YAML(typ="rt")  # round-trip preserves comments & ordering
    y.indent(mapping=2, sequence=2, offset=2)
    return y

# --------- schema version ---------
def checkSchemaVersion(doc: dict[str, Any]) -> dict[str, Any]:
    """Only the current schema exists; files without schemaVersion are taken as current."""
    try:
        version = int(doc.get("schemaVersion", CURRENT_SCHEMA_VERSION))
    except (TypeError, ValueError) as e:
        raise ConfigError(f"schemaVersion must be an integer: {e}") from e
    if version > CURRENT_SCHEMA_VERSION:
        raise ConfigError(f"schema version {version} is newer than {CURRENT_SCHEMA_VERSION}")
    if version < CURRENT_SCHEMA_VERSION:
        raise ConfigError(f"unknown schema version {version}")
    return doc

def withEnvOverrides(settings: Settings) -> Settings:
    raw = os.environ.get(TERM_BUDGET_ENV)
    if raw is None or raw.strip() == "":
        return settings
    try:
        budget = int(raw)
    except ValueError as e:
        raise ConfigError(f"{TERM_BUDGET_ENV} must be an integer, got {raw!r}") from e
    if budget <= 0:
        raise ConfigError(f"{TERM_BUDGET_ENV} must be positive, got {budget}")
    logging.info("Config: term budget %d from %s", budget, TERM_BUDGET_ENV)
    return settings.model_copy(update={"termBudget": budget})

# --------- load / save ---------
def loadSettings(path: str | None = None) -> Settings:
    """Read settings from a YAML file, falling back to defaults when there is none."""
    if path is None or not os.path.exists(path):
        return withEnvOverrides(Settings())

    y = yamlLoader()
    with open(path, encoding="utf-8") as f:
        doc = y.load(f) or {}
    if not isinstance(doc, dict):
        raise ConfigError(f"{path}: top level must be a mapping")

    doc = checkSchemaVersion(dict(doc))

    # validate and coerce into our model
    try:
        settings = Settings.model_validate(doc)
    except ValidationError as e:
        raise ConfigError(f"config validation failed: {e}") from e
    return withEnvOverrides(settings)

def saveSettings(path: str, settings: Settings, makeBackup: bool = False) -> None:
    y = yamlLoader()
    # Load existing (if present) to preserve comments; else start fresh
    baseDoc: Any = {}
    if os.path.exists(path):
        try:
            with open(path, encoding="utf-8") as f:
                baseDoc = y.load(f) or {}
        except Exception as e:
            logging.warning("Config: ignoring unreadable %s: %s", path, e)
            baseDoc = {}

    fields = settings.model_dump()
    newDoc = baseDoc
    for k in list(newDoc.keys()):
        if k not in fields:
            del newDoc[k]
    for k, v in fields.items():
        newDoc[k] = v

    tmpDir = os.path.dirname(path) or "."
    fd, tmpPath = tempfile.mkstemp(prefix=".cfg-", dir=tmpDir)
    os.close(fd)
    try:
        with open(tmpPath, "w", encoding="utf-8") as f:
            y.dump(newDoc, f)
        if makeBackup and os.path.exists(path):
            shutil.copy2(path, path + ".bak")
        os.replace(tmpPath, path)
    finally:
        if os.path.exists(tmpPath):
            os.remove(tmpPath)

# --------- process-wide settings ---------
activeSettings: Settings | None = None

def currentSettings() -> Settings:
    global activeSettings
    if activeSettings is None:
        activeSettings = withEnvOverrides(Settings())
    return activeSettings

def useSettings(settings: Settings | None) -> None:
    """Install settings for the process; None reverts to defaults on next use."""
    global activeSettings
    activeSettings = settings

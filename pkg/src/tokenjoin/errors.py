"""Exception types shared across the package."""

from __future__ import annotations


class ConfigError(ValueError):
    """Invalid configuration (bad threshold, unknown mode, ...). CLI exit 2."""


class DataError(ValueError):
    """Invalid input data (duplicate record ids, malformed corpus file). CLI exit 1."""


class OracleGuardError(ConfigError):
    """Brute-force oracle invoked beyond its size guards."""


class StageError(RuntimeError):
    """A pipeline stage failed; carries the stage name and partition identity."""

    def __init__(self, stage: str, partition: int | None, cause: str):
        self.stage = stage
        self.partition = partition
        where = stage if partition is None else f"{stage}[partition {partition}]"
        super().__init__(f"stage {where} failed: {cause}")


class NotPartitionable(ValueError):
    """Token too short to split into the requested number of non-empty segments."""

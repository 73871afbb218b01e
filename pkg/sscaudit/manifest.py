"""Run manifests: provenance sidecars for every primary artifact."""

import json
import logging
import os
import sys
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

logger = logging.getLogger(__name__)

MANIFEST_SUFFIX = ".manifest.json"


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def manifest_path(artifact: Union[str, Path]) -> Path:
    """Sidecar path of an artifact: X -> X.manifest.json."""
    path = Path(artifact)
    return path.with_name(path.name + MANIFEST_SUFFIX)


@dataclass
class RunManifest:
    """
    Provenance of one command invocation.

    Attributes:
        command: Subcommand name
        argv: Full command line
        config: Settings snapshot the command ran with
        dataset_hash: Hash of the input dataset, when there is one
        model_ids: Models involved, by role
        seeds: Seeds in effect, by name
        version: ssc-audit version
        started_at: UTC start time
        finished_at: UTC end time (None while running)
        outputs: Artifacts written, relative to the manifest
    """

    command: str
    argv: List[str] = field(default_factory=lambda: list(sys.argv))
    config: Dict[str, Any] = field(default_factory=dict)
    dataset_hash: Optional[str] = None
    model_ids: Dict[str, str] = field(default_factory=dict)
    seeds: Dict[str, int] = field(default_factory=dict)
    version: str = ""
    started_at: str = field(default_factory=_now)
    finished_at: Optional[str] = None
    outputs: List[str] = field(default_factory=list)

    def __post_init__(self) -> None:
        if not self.command:
            raise ValueError("Manifest command cannot be empty")
        if not self.version:
            from . import __version__

            self.version = __version__

    def to_dict(self) -> Dict[str, Any]:
        return {
            "command": self.command,
            "argv": list(self.argv),
            "config": self.config,
            "dataset_hash": self.dataset_hash,
            "model_ids": dict(self.model_ids),
            "seeds": dict(self.seeds),
            "version": self.version,
            "started_at": self.started_at,
            "finished_at": self.finished_at,
            "outputs": list(self.outputs),
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunManifest":
        return cls(
            command=data["command"],
            argv=data.get("argv", []),
            config=data.get("config", {}),
            dataset_hash=data.get("dataset_hash"),
            model_ids=data.get("model_ids", {}),
            seeds=data.get("seeds", {}),
            version=data.get("version", ""),
            started_at=data.get("started_at", ""),
            finished_at=data.get("finished_at"),
            outputs=data.get("outputs", []),
        )

    def add_output(self, artifact: Union[str, Path]) -> None:
        name = Path(artifact).name
        if name not in self.outputs:
            self.outputs.append(name)

    def write(self, artifact: Union[str, Path]) -> Path:
        """
        Write the manifest next to an artifact (atomically).

        Called once before the command does any work and again on completion.
        """
        target = manifest_path(artifact)
        target.parent.mkdir(parents=True, exist_ok=True)
        tmp = target.with_name(f".{target.name}.tmp")
        with open(tmp, "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2)
            f.write("\n")
        os.replace(tmp, target)
        logger.debug(f"Manifest written to {target}")
        return target

    def finish(self, artifact: Union[str, Path]) -> Path:
        self.finished_at = _now()
        return self.write(artifact)


def read_manifest(path: Union[str, Path]) -> RunManifest:
    with open(path, "r", encoding="utf-8") as f:
        return RunManifest.from_dict(json.load(f))

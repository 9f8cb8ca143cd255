"""
Run manifests.

Every CLI run writes ``<command>.manifest.json`` next to its outputs. The
manifest records content fingerprints of the inputs and outputs together
with the seed and the effective options, and nothing that varies between
identical runs (no timestamps, no absolute paths).
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Mapping, Optional, Union

logger = logging.getLogger(__name__)

_CHUNK = 1 << 20


def file_fingerprint(path: Union[str, Path]) -> str:
    """SHA-256 hex digest of a file's content."""
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(_CHUNK), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _describe(path: Union[str, Path]) -> Dict[str, str]:
    path = Path(path)
    return {"file": path.name, "sha256": file_fingerprint(path)}


@dataclass
class RunManifest:
    """
    Provenance of one CLI run.

    Attributes:
        command: Subcommand name.
        version: Package version.
        seed: Global seed.
        config: Effective options, paths excluded.
        inputs: Role -> file name and content hash.
        outputs: Role -> file name and content hash.
    """

    command: str
    version: str
    seed: int
    config: Dict[str, Any] = field(default_factory=dict)
    inputs: Dict[str, Dict[str, str]] = field(default_factory=dict)
    outputs: Dict[str, Dict[str, str]] = field(default_factory=dict)

    @classmethod
    def create(
        cls,
        command: str,
        version: str,
        seed: int,
        config: Optional[Mapping[str, Any]] = None,
        inputs: Optional[Mapping[str, Union[str, Path]]] = None,
        outputs: Optional[Mapping[str, Union[str, Path]]] = None,
    ) -> "RunManifest":
        """
        Fingerprint the given files and build the manifest.

        Args:
            command: Subcommand name.
            version: Package version.
            seed: Global seed.
            config: Effective options.
            inputs: Role -> input path.
            outputs: Role -> output path.
        """
        return cls(
            command=command,
            version=version,
            seed=seed,
            config=dict(config or {}),
            inputs={role: _describe(p) for role, p in (inputs or {}).items()},
            outputs={role: _describe(p) for role, p in (outputs or {}).items()},
        )

    def to_json(self) -> str:
        text = json.dumps(asdict(self), sort_keys=True, indent=2, ensure_ascii=False)
        return text + "\n"

    def write(self, directory: Union[str, Path]) -> Path:
        """Write the manifest into ``directory`` and return its path."""
        path = Path(directory) / f"{self.command}.manifest.json"
        path.write_text(self.to_json(), encoding="utf-8")
        logger.debug(f"Wrote run manifest {path}")
        return path

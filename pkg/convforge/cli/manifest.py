import logging
from datetime import datetime, timezone
from importlib import metadata
from pathlib import Path
from time import perf_counter
from typing import Any, Dict, Optional, Type

from pydantic import BaseModel, Field

from convforge.cli.files import FileKind, ModelT, file_digest, manifest_path, read_payload, write_payload

logger = logging.getLogger(__name__)

PACKAGE_NAME = "convforge"


def tool_version() -> str:
    try:
        return metadata.version(PACKAGE_NAME)
    except metadata.PackageNotFoundError:
        return "0+unknown"


class RunManifest(BaseModel):
    command: str
    arguments: Dict[str, Any]
    seed: Optional[int] = None
    tool_version: str
    started_at: datetime
    wall_time: float = Field(..., ge=0)
    inputs: Dict[str, str] = Field(default_factory=dict)
    outputs: Dict[str, str] = Field(default_factory=dict)


class RunRecorder:
    """
    Reads inputs and writes outputs of one command while collecting the sha256 digests for its manifests
    """

    def __init__(self, command: str, arguments: Dict[str, Any], seed: Optional[int] = None) -> None:
        self.command = command
        self.arguments = {key: value for key, value in arguments.items() if key != "handler"}
        self.seed = seed
        self.started_at = datetime.now(timezone.utc)
        self._start = perf_counter()
        self.inputs: Dict[str, str] = {}
        self.outputs: Dict[str, str] = {}

    def read(self, path: Path, kind: FileKind, model: Optional[Type[ModelT]] = None) -> Any:
        self.inputs[str(path)] = file_digest(path)
        return read_payload(path, kind, model)

    def write(self, path: Path, kind: FileKind, data: Any) -> None:
        write_payload(path, kind, data)
        self.outputs[str(path)] = file_digest(path)
        logger.info(f"Wrote {kind.value} file {path}")

    def record_output(self, path: Path) -> None:
        self.outputs[str(path)] = file_digest(path)

    def manifest(self) -> RunManifest:
        return RunManifest(
            command=self.command,
            arguments={key: str(value) if isinstance(value, Path) else value for key, value in self.arguments.items()},
            seed=self.seed,
            tool_version=tool_version(),
            started_at=self.started_at,
            wall_time=perf_counter() - self._start,
            inputs=self.inputs,
            outputs=self.outputs,
        )

    def finish(self) -> Optional[RunManifest]:
        if not self.outputs:
            return None

        manifest = self.manifest()
        payload = manifest.model_dump(mode="json")

        for output in self.outputs:
            write_payload(manifest_path(Path(output)), FileKind.MANIFEST, payload)

        return manifest

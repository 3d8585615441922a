import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Optional, Type, TypeVar

from pydantic import BaseModel, ConfigDict, Field

from convforge.exceptions import SchemaMismatch
from convforge.utils.enums import StrChoicesEnum

SCHEMA = "convforge/v1"

ModelT = TypeVar("ModelT", bound=BaseModel)


class FileKind(StrChoicesEnum):
    SEQUENCE = "sequence"
    FACTORIZATION = "factorization"
    RIDGE = "ridge"
    NETWORK = "network"
    POINTS = "points"
    EVALUATION = "evaluation"
    VERIFICATION = "verification"
    RATE_STUDY = "rate-study"
    PRESET = "preset"
    MANIFEST = "manifest"


class Envelope(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    schema_tag: str = Field(SCHEMA, alias="schema")
    kind: FileKind
    data: Any


def dumps(payload: Any) -> str:
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def envelope(kind: FileKind, data: Any) -> dict:
    return Envelope(kind=kind, data=data).model_dump(mode="json", by_alias=True)


def atomic_write_text(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)

    try:
        with os.fdopen(fd, "w", encoding="utf-8") as tmp:
            tmp.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise


def write_payload(path: Path, kind: FileKind, data: Any) -> None:
    atomic_write_text(path, dumps(envelope(kind, data)))


def unwrap(raw: Any, kind: FileKind) -> Any:
    """
    Payload of an envelope of the given kind; objects without a "schema" key are taken as bare payloads
    """
    if not isinstance(raw, dict) or "schema" not in raw:
        return raw

    if raw["schema"] != SCHEMA:
        raise SchemaMismatch(
            f"Unsupported schema '{raw['schema']}', expected '{SCHEMA}'", {"schema": raw["schema"], "expected": SCHEMA}
        )

    parsed = Envelope.model_validate(raw)

    if parsed.kind != kind:
        raise SchemaMismatch(
            f"Expected a '{kind.value}' file, got '{parsed.kind.value}'",
            {"kind": parsed.kind.value, "expected": kind.value},
        )

    return parsed.data


def read_json(path: Path) -> Any:
    with open(path, encoding="utf-8") as file:
        return json.load(file)


def read_payload(path: Path, kind: FileKind, model: Optional[Type[ModelT]] = None) -> Any:
    data = unwrap(read_json(path), kind)
    return model.model_validate(data) if model is not None else data


def file_digest(path: Path) -> str:
    with open(path, "rb") as file:
        return hashlib.file_digest(file, "sha256").hexdigest()


def manifest_path(path: Path) -> Path:
    return path.with_name(f"{path.name}.manifest.json")

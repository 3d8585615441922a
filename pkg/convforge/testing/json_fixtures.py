import json
from typing import Any, List, Type, TypeVar

from pydantic import BaseModel

from convforge.cli.files import FileKind, unwrap

ModelT = TypeVar("ModelT", bound=BaseModel)


def load_json_fixture(fixture_path: str, kind: FileKind) -> Any:
    with open(fixture_path) as f:
        return unwrap(json.load(f), kind)


def json_to_models(schema: Type[ModelT], fixture_path: str, kind: FileKind) -> List[ModelT]:
    fixture_objects = load_json_fixture(fixture_path, kind)

    assert isinstance(fixture_objects, list), "List of objects expected"

    return [schema.model_validate(obj) for obj in fixture_objects]

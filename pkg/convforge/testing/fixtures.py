from os import environ
from typing import TYPE_CHECKING, Any, Callable, Dict, Generator, List

import numpy as np
import pytest

from convforge.settings import ConvForgeSettings, get_settings

if TYPE_CHECKING:
    from pathlib import Path

    from pytest_mock.plugin import MockerFixture


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240607)


@pytest.fixture
def clean_settings(
    monkeypatch: pytest.MonkeyPatch, tmp_path: "Path"
) -> Generator[Callable[..., ConvForgeSettings], None, None]:
    """
    Settings read from an environment without CONVFORGE_ variables; the returned callable sets some and reloads
    """
    for name in [key for key in environ if key.startswith("CONVFORGE_")]:
        monkeypatch.delenv(name)

    monkeypatch.setenv("CONVFORGE_ENV_FILE", str(tmp_path / "missing.env"))
    get_settings.cache_clear()

    def reload(**env: str) -> ConvForgeSettings:
        for name, value in env.items():
            monkeypatch.setenv(name, value)

        get_settings.cache_clear()
        return get_settings()

    yield reload

    get_settings.cache_clear()


@pytest.fixture
def stderr_payloads(mocker: "MockerFixture") -> List[Dict[str, Any]]:
    """
    Error payloads the CLI reports on stderr
    """
    written: List[Dict[str, Any]] = []
    mocker.patch("convforge.cli.main._report_error", side_effect=written.append)
    return written

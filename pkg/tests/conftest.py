from os import path

import pytest

from convforge.testing.fixtures import clean_settings as clean_settings_lib
from convforge.testing.fixtures import rng as rng_lib
from convforge.testing.fixtures import stderr_payloads as stderr_payloads_lib

clean_settings = clean_settings_lib
rng = rng_lib
stderr_payloads = stderr_payloads_lib


@pytest.fixture(scope="session")
def data_dir() -> str:
    return path.join(path.dirname(__file__), "test_convforge", "data")

from functools import lru_cache
from os import environ

from dotenv import load_dotenv
from pydantic import BaseModel, Field


class ConvForgeSettings(BaseModel):
    root_tol: float = Field(1e-12, gt=0)
    max_iterations: int = Field(500, ge=1)
    pairing_tol: float = Field(1e-8, gt=0)
    reconstruction_tol: float = Field(1e-6, gt=0)
    gradient_step: float = Field(1e-5, gt=0)
    sample_count: int = Field(4096, ge=1)
    candidate_pool: int = Field(256, ge=1)
    threads: int = Field(1, ge=1)
    log_level: str = "INFO"


_ENV_FIELDS = {
    "root_tol": "CONVFORGE_ROOT_TOL",
    "max_iterations": "CONVFORGE_MAX_ITERATIONS",
    "pairing_tol": "CONVFORGE_PAIRING_TOL",
    "reconstruction_tol": "CONVFORGE_RECONSTRUCTION_TOL",
    "gradient_step": "CONVFORGE_GRADIENT_STEP",
    "sample_count": "CONVFORGE_SAMPLE_COUNT",
    "candidate_pool": "CONVFORGE_CANDIDATE_POOL",
    "threads": "CONVFORGE_THREADS",
    "log_level": "CONVFORGE_LOG_LEVEL",
}


@lru_cache
def get_settings() -> ConvForgeSettings:
    load_dotenv(environ.get("CONVFORGE_ENV_FILE", ".env"), override=False)

    values = {field: environ[env_name] for field, env_name in _ENV_FIELDS.items() if env_name in environ}

    # pydantic converts the raw strings
    return ConvForgeSettings(**values)

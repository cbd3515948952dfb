from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Application
    ENVIRONMENT: str = "development"
    NAME: str = "groupmax"
    VERSION: str = "0.1.0"

    # Logging
    LOG_LEVEL: str = "info"
    LOGGING_CONFIG_PATH: str = "logging_config.json"
    LOG_TO_FILE: bool = False

    # Cut extraction
    CUT_ENUMERATION_CAP: int = 1_000_000
    CUT_DEDUP_TOLERANCE: float = 1e-12

    # Monte Carlo evaluation
    EVAL_SAMPLES: int = 1_000_000
    EVAL_SEED: int = 20_240_601
    EVAL_CHUNK_SIZE: int = 100_000

    # Targets and normalization
    SPD_SEED: int = 1234
    NORMALIZER_SAMPLES: int = 100_000

    # Benchmarks
    BENCH_WORKERS: int = 1
    RESULTS_DIR: str = "results"
    SHOW_PROGRESS: bool = False

    @field_validator("LOG_LEVEL", mode="before")
    def normalize_log_level(cls, v: str) -> str:
        return str(v).strip().lower()

    @field_validator("CUT_ENUMERATION_CAP", "EVAL_SAMPLES", "EVAL_CHUNK_SIZE", "BENCH_WORKERS")
    def require_positive(cls, v: int) -> int:
        if v < 1:
            raise ValueError("must be a positive integer")
        return v

    model_config = SettingsConfigDict(
        env_file=".env",
        env_file_encoding="utf-8",
        case_sensitive=True,
        extra="ignore",
    )


settings = Settings()

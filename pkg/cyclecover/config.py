from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict


class Settings(BaseSettings):
    # Exact oracle envelope
    ORACLE_MAX_N: int = 14
    ORACLE_HARD_CAP: int = 30
    ORACLE_TIME_LIMIT: Optional[float] = None

    # r-local pipeline defaults (see PipelineParams)
    PIPELINE_C: float = 2.0
    PIPELINE_TK_MIN: int = 3
    TK_SEARCH_LIMIT: int = 20000

    # 2-local guided search
    PATH_SEARCH_LIMIT: int = 256

    # Harness
    REPORT_DIR: str = "reports"
    EXHAUSTIVE_SEED_LIMIT: int = 4096

    LOG_LEVEL: str = "INFO"

    model_config = SettingsConfigDict(
        env_prefix="CYCLECOVER_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


settings = Settings()

from pathlib import Path

from pydantic_settings import BaseSettings, SettingsConfigDict

PACKAGE_DIR = Path(__file__).resolve().parent


class Settings(BaseSettings):
    model_config = SettingsConfigDict(env_file="config.env", env_file_encoding="utf-8")

    CASES_DIR: Path = PACKAGE_DIR / "cases"
    SHELL_CACHE: Path | None = None
    THREADS: int = 1
    SHELL6: bool = False
    SCREEN_POINTS: int = 100
    RANDOM_SEED: int = 20240611

from pathlib import Path
from typing import Optional

from pydantic_settings import BaseSettings, SettingsConfigDict

APP_DIR = Path(__file__).resolve().parent.parent


class Settings(BaseSettings):
    # Environment
    environment: str = "development"

    # Logging
    log_level: str = "INFO"
    log_file: Optional[str] = None

    # Scenarios
    scenario_dir: Path = APP_DIR / "scenarios"
    default_format: str = "text"

    # Number theory defaults
    certificate_modulus: int = 9
    brute_force_bound: int = 1000
    oracle_box_radius: int = 50

    # API
    api_v1_prefix: str = "/api/v1"

    model_config = SettingsConfigDict(env_prefix="WORKBENCH_", env_file=".env", extra="ignore")

    @property
    def builtin_scenarios(self) -> list:
        """Names of the scenario files shipped in scenario_dir"""
        if not self.scenario_dir.exists():
            return []
        return sorted(path.stem for path in self.scenario_dir.glob("*.json"))


settings = Settings()

from typing import List, Optional
from dotenv import load_dotenv
from pydantic import Field
from pydantic_settings import BaseSettings, SettingsConfigDict

# Загружаем переменные окружения из .env файла
load_dotenv()


class Settings(BaseSettings):
    """Настройки приложения"""

    # Параллелизм
    threads: Optional[int] = Field(
        None, description="Максимальное число рабочих потоков (MIMO_SELECT_THREADS)")

    # Ограничения перебора
    enumeration_cap: int = 1_000_000
    max_dim: int = 8

    # Численные параметры
    eigensolver: str = "lapack"
    jacobi_tolerance: float = 1e-12
    jacobi_max_sweeps: int = 100
    hermitian_tolerance: float = 1e-12
    tie_tolerance: float = 1e-12
    bound_tolerance: float = 1e-9

    # Монте-Карло
    default_powers: List[float] = Field(
        default_factory=lambda: [0.01, 1.0, 100.0])

    # Application Configuration
    schema_version: str = "1.0"
    log_level: str = "INFO"

    model_config = SettingsConfigDict(
        env_prefix="MIMO_SELECT_",
        env_file=".env",
        env_file_encoding="utf-8",
        extra="ignore",
    )


# Создаем глобальный экземпляр настроек
settings = Settings()


def validate_settings(current: Optional[Settings] = None):
    """Проверяет корректность настроек"""
    current = current or settings

    invalid_fields = []
    for field in ("enumeration_cap", "max_dim", "jacobi_max_sweeps"):
        if getattr(current, field) < 1:
            invalid_fields.append(field)
    for field in ("jacobi_tolerance", "hermitian_tolerance",
                  "tie_tolerance", "bound_tolerance"):
        if not getattr(current, field) > 0:
            invalid_fields.append(field)
    if current.threads is not None and current.threads < 1:
        invalid_fields.append("threads")
    if current.eigensolver not in ("lapack", "jacobi"):
        invalid_fields.append("eigensolver")
    if not current.default_powers or any(p <= 0 for p in current.default_powers):
        invalid_fields.append("default_powers")

    if invalid_fields:
        raise ValueError(
            f"Invalid settings: {', '.join(invalid_fields)}")

    return True

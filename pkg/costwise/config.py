# costwise/config.py
import os
from typing import Optional

from dotenv import load_dotenv
from pydantic import BaseModel

# .env in de working directory is leidend; env vars winnen van defaults
load_dotenv()


def _env_float(name: str, default: float) -> float:
    raw = os.getenv(name)
    return float(raw) if raw not in (None, "") else default


def _env_int(name: str, default: int) -> int:
    raw = os.getenv(name)
    return int(raw) if raw not in (None, "") else default


class Settings(BaseModel):

    SEED: int = _env_int("COSTWISE_SEED", 0)
    DNF_CAP: int = _env_int("COSTWISE_DNF_CAP", 10_000)
    SUPPORT_EPS: float = _env_float("COSTWISE_SUPPORT_EPS", 1e-6)

    MAX_ITERS: int = _env_int("COSTWISE_MAX_ITERS", 5000)
    TOL: float = _env_float("COSTWISE_TOL", 1e-6)
    ADMM_RHO: float = _env_float("COSTWISE_ADMM_RHO", 1.0)

    WORKERS: int = _env_int("COSTWISE_WORKERS", 1)
    BOOTSTRAP: int = _env_int("COSTWISE_BOOTSTRAP", 10)
    SPECIFICITY: float = _env_float("COSTWISE_SPECIFICITY", 0.85)

    LOG_LEVEL: str = os.getenv("COSTWISE_LOG_LEVEL", "INFO")
    LOG_FILE: Optional[str] = os.getenv("COSTWISE_LOG_FILE") or None

    # channel that receives lambda_financial; every other SUM channel gets lambda_time
    FINANCIAL_CHANNEL: str = os.getenv("COSTWISE_FINANCIAL_CHANNEL", "financial")


settings = Settings()


def seed_from_env(explicit: Optional[int] = None) -> int:
    """--seed wins; otherwise COSTWISE_SEED (read at call time so tests can monkeypatch it)."""
    if explicit is not None:
        return int(explicit)
    return _env_int("COSTWISE_SEED", settings.SEED)

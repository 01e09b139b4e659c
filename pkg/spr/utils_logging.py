import logging
import os
from typing import Optional, Set

# names handed out by get_logger, so a level read later from settings reaches them all
_LOGGER_NAMES: Set[str] = set()


def _level(name: str) -> int:
    return getattr(logging, name.upper(), logging.INFO)


def get_logger(name: str = __name__, run_id: Optional[str] = None, seed: Optional[int] = None) -> logging.LoggerAdapter:
    logger = logging.getLogger(name)
    logger.setLevel(_level(os.getenv("LOG_LEVEL", "INFO")))
    # Avoid duplicate handlers when modules are re-imported
    if not logger.handlers:
        handler = logging.StreamHandler()
        fmt = "%(asctime)s %(levelname)s %(name)s %(message)s"
        handler.setFormatter(logging.Formatter(fmt))
        logger.addHandler(handler)
    # every spr logger has its own handler; the "spr" parent would print records twice
    logger.propagate = False
    _LOGGER_NAMES.add(name)
    extra = {"run_id": run_id, "seed": seed}
    return logging.LoggerAdapter(logger, extra)


def set_log_level(level: str) -> None:
    """Apply ``level`` to every logger created so far."""
    for name in _LOGGER_NAMES:
        logging.getLogger(name).setLevel(_level(level))


def kv(**kwargs) -> str:
    """Format key=value pairs for structured-ish logs."""
    parts = []
    for k, v in kwargs.items():
        if isinstance(v, float):
            parts.append(f"{k}={v:.6g}")
            continue
        try:
            parts.append(f"{k}={v}")
        except Exception:
            parts.append(f"{k}=<unrepr>")
    return " ".join(parts)

import logging
import os
import uuid
from typing import Optional

_RUN_ID: Optional[str] = None


def current_run_id() -> str:
    """One id per CLI invocation; HYPERGEO_RUN_ID pins it."""
    global _RUN_ID
    if _RUN_ID is None:
        _RUN_ID = (os.getenv("HYPERGEO_RUN_ID", "") or "").strip() or f"run_{uuid.uuid4().hex}"
    return _RUN_ID


def reset_run_id() -> None:
    global _RUN_ID
    _RUN_ID = None


class RunIdFilter(logging.Filter):
    def filter(self, record: logging.LogRecord) -> bool:
        # No pisar si ya viene seteado
        if not hasattr(record, "run_id"):
            record.run_id = current_run_id()
        return True


def configure_logging(level: str) -> None:
    logger = logging.getLogger("hypergeo")
    logger.setLevel(level.upper())

    if not any(isinstance(h, logging.StreamHandler) and getattr(h, "_hypergeo", False) for h in logger.handlers):
        handler = logging.StreamHandler()
        handler._hypergeo = True  # type: ignore[attr-defined]
        handler.addFilter(RunIdFilter())
        handler.setFormatter(logging.Formatter("%(asctime)s %(levelname)s %(run_id)s %(message)s"))
        logger.addHandler(handler)

"""
Logging setup shared by the CLI and the service.

Console output goes through a plain ``StreamHandler``. When a debug log path
is configured, every record is additionally appended to that file as one
JSON object per line (NDJSON) so long sweeps can be inspected afterwards.
"""
from __future__ import annotations

import json
import logging
import os
import time
from typing import Optional

from .config import get_debug_log_path, get_log_level

CONSOLE_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"

# Attributes every LogRecord has; anything else came in through ``extra=``.
_RESERVED = set(vars(logging.makeLogRecord({}))) | {"message", "asctime"}


class NdjsonFormatter(logging.Formatter):
    """Render a record as a single JSON line, carrying ``extra`` fields."""

    def format(self, record: logging.LogRecord) -> str:
        payload = {
            "timestamp": int(record.created * 1000),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
        }
        for key, value in vars(record).items():
            if key not in _RESERVED and not key.startswith("_"):
                payload[key] = value
        if record.exc_info:
            payload["exception"] = self.formatException(record.exc_info)
        return json.dumps(payload, default=str)


def setup_logging(level: Optional[str] = None, debug_log: Optional[str] = None) -> None:
    """Configure the ``mrc_outage`` logger tree.

    ``level`` and ``debug_log`` fall back to the environment
    (see ``config.get_log_level`` / ``config.get_debug_log_path``).
    Calling this twice replaces the handlers instead of stacking them.
    """
    level = (level or get_log_level()).upper()
    debug_log = debug_log or get_debug_log_path()

    root = logging.getLogger("mrc_outage")
    root.setLevel(logging.DEBUG if debug_log else level)
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()

    console = logging.StreamHandler()
    console.setLevel(level)
    formatter = logging.Formatter(CONSOLE_FORMAT)
    formatter.converter = time.gmtime
    console.setFormatter(formatter)
    root.addHandler(console)

    if debug_log:
        directory = os.path.dirname(debug_log)
        if directory:
            os.makedirs(directory, exist_ok=True)
        file_handler = logging.FileHandler(debug_log, mode="a", encoding="utf-8")
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(NdjsonFormatter())
        root.addHandler(file_handler)

    root.propagate = False

"""
Session logging: a DEBUG log file per CLI invocation plus a console handler.
"""

import logging
import os
from datetime import datetime
from typing import Optional

LOG_FORMAT = "%(asctime)s - %(levelname)s - %(message)s"


def _console_level(name: str) -> int:
    level = getattr(logging, name.upper(), None)
    return level if isinstance(level, int) else logging.WARNING


def setup_logging(level: Optional[str] = None, log_dir: Optional[str] = None) -> str:
    """Initialize logging system and return the session log file.

    Args:
        level: console log level name; defaults to the configured level
        log_dir: base directory for session logs; defaults to the configured one
    """
    from cellpm.config import get_log_dir, get_log_level

    session_dir = os.path.join(log_dir or get_log_dir(), "sessions")
    os.makedirs(session_dir, exist_ok=True)
    log_file = os.path.join(
        session_dir, f"{datetime.now().strftime('%Y-%m-%d_%H-%M-%S')}.log"
    )

    root = logging.getLogger()
    root.setLevel(logging.DEBUG)
    for handler in root.handlers:
        if isinstance(handler, logging.FileHandler):
            handler.close()

    file_handler = logging.FileHandler(log_file)
    file_handler.setLevel(logging.DEBUG)
    stream_handler = logging.StreamHandler()
    stream_handler.setLevel(_console_level(level or get_log_level()))

    formatter = logging.Formatter(LOG_FORMAT)
    for handler in (file_handler, stream_handler):
        handler.setFormatter(formatter)
    root.handlers = [file_handler, stream_handler]

    logging.debug("Logging initialized. Writing to %s", log_file)
    return log_file

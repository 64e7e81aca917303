"""
Logging Infrastructure with Appropriate Handlers

The CLI entry point installs a console handler (progress at INFO and above)
and a rotating DEBUG file under the log directory. Tool modules never
configure logging; they only call logging.getLogger(__name__).

SOLID Principles:
- SRP: Only handles logging configuration
- OCP: New handlers can be added without modifying existing code
"""

import logging
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import List, Optional


class LoggingConfig:
    """
    Process-wide handler setup for simulator runs

    The file handler rotates at MAX_BYTES and keeps BACKUP_COUNT old files.
    """

    LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'
    DATE_FORMAT = '%Y-%m-%d %H:%M:%S'

    LOG_DIR = 'logs'
    LOG_FILE = 'simulator.log'
    MAX_BYTES = 10 * 1024 * 1024
    BACKUP_COUNT = 5

    @staticmethod
    def _parse_level(log_level: str) -> int:
        level = logging.getLevelName(log_level.upper())
        if not isinstance(level, int):
            raise ValueError(f"Unknown log level '{log_level}'")
        return level

    @classmethod
    def _handlers(cls, level: int, directory: Path) -> List[logging.Handler]:
        formatter = logging.Formatter(cls.LOG_FORMAT, cls.DATE_FORMAT)

        console = logging.StreamHandler()
        console.setLevel(max(level, logging.INFO))

        rotating = RotatingFileHandler(directory / cls.LOG_FILE, maxBytes=cls.MAX_BYTES, backupCount=cls.BACKUP_COUNT)
        rotating.setLevel(logging.DEBUG)

        for handler in (console, rotating):
            handler.setFormatter(formatter)
        return [console, rotating]

    @classmethod
    def setup_logging(cls, log_level: str = 'INFO', log_dir: Optional[str] = None) -> None:
        """
        Replace the root handlers with a console and a rotating file handler

        Args:
            log_level: Root level name (DEBUG, INFO, WARNING, ERROR, CRITICAL)
            log_dir: Directory of the log file, created if missing (default: logs)

        Raises:
            ValueError: Unknown level name
        """
        level = cls._parse_level(log_level)
        directory = Path(log_dir or cls.LOG_DIR)
        directory.mkdir(parents=True, exist_ok=True)

        root = logging.getLogger()
        for handler in list(root.handlers):
            root.removeHandler(handler)
            handler.close()
        root.setLevel(level)
        for handler in cls._handlers(level, directory):
            root.addHandler(handler)

        root.info("Logging to %s at level %s", directory / cls.LOG_FILE, logging.getLevelName(level))

    @classmethod
    def get_logger(cls, name: str) -> logging.Logger:
        """Logger for a module (pass __name__)"""
        return logging.getLogger(name)


def get_logger(name: str) -> logging.Logger:
    """Module-level shortcut for LoggingConfig.get_logger"""
    return LoggingConfig.get_logger(name)

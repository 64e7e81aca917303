"""
Configuration Management with Environment Variable Support

Runtime settings of the simulator CLI read from environment variables
(optionally from a .env file). Physics parameters live in the TOML run
configuration (models.run_config), not here.

SOLID Principles:
- SRP: Only handles runtime configuration loading
- OCP: New configuration sections can be added without modifying existing code
"""

import os
from dataclasses import dataclass

from dotenv import load_dotenv

# Load environment variables from .env file
load_dotenv()


@dataclass
class RuntimeConfig:
    """Parallelism settings"""
    threads: int


@dataclass
class LoggingSettings:
    """Log level and directory for the rotating log file"""
    level: str
    log_dir: str


@dataclass
class OutputConfig:
    """Artifact output settings"""
    output_dir: str


class Config:
    """
    Main configuration class that loads all settings from environment variables

    SOLID Principles:
    - SRP: Centralizes configuration loading
    - DIP: Provides configuration to other components without them knowing the source
    """

    def __init__(self):
        self.runtime = self._load_runtime_config()
        self.logging = self._load_logging_settings()
        self.output = self._load_output_config()

    def _load_runtime_config(self) -> RuntimeConfig:
        """Load worker count; THREADS below 1 falls back to 1"""
        try:
            threads = int(os.getenv('THREADS', '1'))
        except ValueError:
            threads = 1
        return RuntimeConfig(threads=max(threads, 1))

    def _load_logging_settings(self) -> LoggingSettings:
        """Load logging configuration from environment variables"""
        return LoggingSettings(
            level=os.getenv('LOG_LEVEL', 'INFO'),
            log_dir=os.getenv('LOG_DIR', 'logs'),
        )

    def _load_output_config(self) -> OutputConfig:
        """Load output configuration"""
        return OutputConfig(output_dir=os.getenv('OUTPUT_DIR', 'runs'))


# Global configuration instance
config = Config()

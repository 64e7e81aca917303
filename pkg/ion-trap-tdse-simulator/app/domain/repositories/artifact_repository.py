"""
Artifact Repository Interface (Port)

Defines the contract for persisting run artifacts (tables, JSON summaries
and control fields). Domain layer defines this; infrastructure implements
it (DIP).
"""

from abc import ABC, abstractmethod
from pathlib import Path
from typing import Any, Dict, Optional

import pandas as pd

from models.dynamics import ControlField


class IArtifactRepository(ABC):
    @abstractmethod
    def path(self, name: str) -> Path:
        pass

    @abstractmethod
    def exists(self, name: str) -> bool:
        pass

    @abstractmethod
    def write_table(self, name: str, frame: pd.DataFrame, config_hash: str) -> Path:
        pass

    @abstractmethod
    def read_table(self, name: str) -> pd.DataFrame:
        pass

    @abstractmethod
    def write_json(self, name: str, data: Dict[str, Any], config_hash: str) -> Path:
        pass

    @abstractmethod
    def read_json(self, name: str) -> Dict[str, Any]:
        pass

    @abstractmethod
    def write_field(self, name: str, field: ControlField, config_hash: str) -> Path:
        pass

    @abstractmethod
    def read_field(self, name: str, dt: Optional[float] = None) -> ControlField:
        pass

"""
Filesystem Artifact Repository Implementation (Adapter)

Implements IArtifactRepository on a run directory. CSV files start with a
'# config_hash=...' line, JSON files carry a config_hash key. Every file
is written to a temporary sibling first and renamed into place.
LSP: Substitutable for the interface.
"""

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd

from app.domain.repositories.artifact_repository import IArtifactRepository
from models.dynamics import ControlField
from tools.src.exceptions import ConfigurationError
from tools.src.units import AU_TIME_S, AU_FIELD_VPM

FLOAT_FORMAT = "%.17g"
FIELD_COLUMNS = ["t_au", "t_s", "E_au", "E_Vpm"]


class FilesystemArtifactRepository(IArtifactRepository):

    def __init__(self, root):
        self.root = Path(root)

    def path(self, name: str) -> Path:
        candidate = Path(name)
        return candidate if candidate.is_absolute() else self.root / candidate

    def exists(self, name: str) -> bool:
        return self.path(name).is_file()

    def write_table(self, name: str, frame: pd.DataFrame, config_hash: str) -> Path:
        body = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        return self._write_text(name, f"# config_hash={config_hash}\n{body}")

    def read_table(self, name: str) -> pd.DataFrame:
        target = self._existing(name)
        return pd.read_csv(target, comment="#")

    def write_json(self, name: str, data: Dict[str, Any], config_hash: str) -> Path:
        payload = dict(data)
        payload["config_hash"] = config_hash
        return self._write_text(name, json.dumps(payload, sort_keys=True, indent=2, default=_to_builtin) + "\n")

    def read_json(self, name: str) -> Dict[str, Any]:
        target = self._existing(name)
        with target.open("r", encoding="utf-8") as handle:
            return json.load(handle)

    def write_field(self, name: str, field: ControlField, config_hash: str) -> Path:
        times = field.times
        frame = pd.DataFrame({
            "t_au": times,
            "t_s": times * AU_TIME_S,
            "E_au": field.samples,
            "E_Vpm": field.samples * AU_FIELD_VPM,
        }, columns=FIELD_COLUMNS)
        return self.write_table(name, frame, config_hash)

    def read_field(self, name: str, dt: Optional[float] = None) -> ControlField:
        """
        Read a field CSV; the sample spacing comes from the t_au column unless given

        Raises:
            ConfigurationError: Missing file, missing columns or non-uniform times
        """
        frame = self.read_table(name)
        missing = {"t_au", "E_au"} - set(frame.columns)
        if missing:
            raise ConfigurationError(f"Field file {self.path(name)} lacks columns {sorted(missing)}")

        times = frame["t_au"].to_numpy(dtype=float)
        samples = frame["E_au"].to_numpy(dtype=float)
        if len(times) < 2:
            raise ConfigurationError(f"Field file {self.path(name)} needs at least two samples")
        spacing = np.diff(times)
        if not np.allclose(spacing, spacing[0], rtol=1e-9, atol=0.0):
            raise ConfigurationError(f"Field file {self.path(name)} is not uniformly sampled")
        try:
            return ControlField(samples, float(spacing[0]) if dt is None else dt)
        except ValueError as exc:
            raise ConfigurationError(f"Invalid field in {self.path(name)}: {exc}") from exc

    def _existing(self, name: str) -> Path:
        target = self.path(name)
        if not target.is_file():
            raise ConfigurationError(f"Artifact not found: {target}")
        return target

    def _write_text(self, name: str, text: str) -> Path:
        target = self.path(name)
        target.parent.mkdir(parents=True, exist_ok=True)
        handle, temporary = tempfile.mkstemp(dir=target.parent, prefix=f".{target.name}.", suffix=".tmp")
        try:
            with os.fdopen(handle, "w", encoding="utf-8", newline="") as stream:
                stream.write(text)
            os.replace(temporary, target)
        except BaseException:
            if os.path.exists(temporary):
                os.remove(temporary)
            raise
        return target


def _to_builtin(value: Any) -> Any:
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")

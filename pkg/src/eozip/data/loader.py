from __future__ import annotations

import json
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
import sys
from typing import Dict, Iterable, List, Optional

from ..constants import GOLDEN_FILES

__all__ = [
    "GoldenTable",
    "GoldenRepository",
    "get_repository",
]


@dataclass(slots=True)
class GoldenTable:
    """A frozen JSON table keyed by genus."""

    source_file: Path
    entries: List[dict]
    by_g: Dict[int, dict]

    @classmethod
    def from_entries(cls, source_file: Path, entries: Iterable[dict]) -> "GoldenTable":
        entries_list = sorted(entries, key=lambda entry: entry["g"])
        return cls(source_file=source_file, entries=entries_list, by_g={entry["g"]: entry for entry in entries_list})

    def get(self, g: int) -> Optional[dict]:
        return self.by_g.get(g)


class GoldenRepository:
    """Loads and caches the golden tables shipped under data/golden."""

    def __init__(self, base_path: Optional[Path] = None) -> None:
        self.base_path = (base_path or _default_dataset_path()).resolve()
        if not self.base_path.exists():
            raise FileNotFoundError(f"golden data not found at {self.base_path}")
        self._cache: Dict[str, GoldenTable] = {}

    def resource_path(self, resource: str) -> Path:
        try:
            filename = GOLDEN_FILES[resource]
        except KeyError as exc:
            raise KeyError(f"Unknown golden resource: {resource}") from exc
        return self.base_path / filename

    def load(self, resource: str) -> GoldenTable:
        if resource not in self._cache:
            path = self.resource_path(resource)
            with path.open("r", encoding="utf-8") as handle:
                payload = json.load(handle)
            self._cache[resource] = GoldenTable.from_entries(path, payload)
        return self._cache[resource]

    def weyl_tables(self) -> GoldenTable:
        return self.load("weyl")

    def strata_tables(self) -> GoldenTable:
        return self.load("strata")

    def standard_zips(self) -> GoldenTable:
        return self.load("standard_zips")


@lru_cache(maxsize=1)
def get_repository(base_path: Optional[Path] = None) -> GoldenRepository:
    return GoldenRepository(base_path=base_path)


def _default_dataset_path() -> Path:
    base = Path(getattr(sys, "_MEIPASS", Path(__file__).resolve().parents[3]))
    return base / "data" / "golden"

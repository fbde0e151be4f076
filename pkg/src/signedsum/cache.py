"""Append-only JSONL journal of oracle results.

Each line stores one oracle result keyed by (canonical group literal, m, h,
family token).  Re-storing an existing key with a different value is a hard
integrity error; re-storing the same value is a no-op.
"""

from __future__ import annotations

import json
from pathlib import Path

from .groups import ElementSet
from .search import OracleResult

CACHE_SCHEMA = 1


class CacheLoadError(RuntimeError):
    """The journal file contains a line that cannot be parsed."""


class CacheIntegrityError(RuntimeError):
    """A key was re-stored with a conflicting value."""


def cache_key(group_literal: str, m: int, h: int, family_token: str) -> str:
    return f"{group_literal}|m={m}|h={h}|family={family_token}"


class ResultCache:
    def __init__(self, path: str | Path):
        self.path = Path(path)
        self._entries: dict[str, dict] = {}
        if self.path.exists():
            self._load()

    def _load(self) -> None:
        with self.path.open("r", encoding="utf-8") as fh:
            for lineno, line in enumerate(fh, start=1):
                line = line.strip()
                if not line:
                    continue
                try:
                    entry = json.loads(line)
                    key = entry["key"]
                    int(entry["value"])
                    list(entry["witness"])
                except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                    raise CacheLoadError(
                        f"{self.path}: corrupt journal line {lineno}: {exc}"
                    ) from exc
                prior = self._entries.get(key)
                if prior is not None and prior["value"] != entry["value"]:
                    raise CacheIntegrityError(
                        f"{self.path}: line {lineno} re-stores {key} with value "
                        f"{entry['value']} != {prior['value']}"
                    )
                self._entries[key] = entry

    def __len__(self) -> int:
        return len(self._entries)

    def lookup(
        self, group_literal: str, m: int, h: int, family_token: str
    ) -> OracleResult | None:
        entry = self._entries.get(cache_key(group_literal, m, h, family_token))
        if entry is None:
            return None
        return OracleResult(
            value=int(entry["value"]),
            witness=ElementSet.from_indices(int(entry["order"]), entry["witness"]),
            witness_family=str(entry["witness_family"]),
            enumerated=int(entry["enumerated"]),
        )

    def store(
        self,
        group_literal: str,
        m: int,
        h: int,
        family_token: str,
        result: OracleResult,
    ) -> None:
        key = cache_key(group_literal, m, h, family_token)
        prior = self._entries.get(key)
        if prior is not None:
            if prior["value"] != result.value:
                raise CacheIntegrityError(
                    f"conflicting re-store of {key}: {result.value} != {prior['value']}"
                )
            return
        entry = {
            "schema": CACHE_SCHEMA,
            "key": key,
            "order": result.witness.order,
            "value": result.value,
            "witness": list(result.witness.indices()),
            "witness_family": result.witness_family,
            "enumerated": result.enumerated,
        }
        self._entries[key] = entry
        with self.path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(entry, sort_keys=True, separators=(",", ":")) + "\n")

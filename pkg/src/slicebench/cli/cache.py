"""Content-addressed store for measure entries.

Keys hash the function's canonical bytes, the measure name, and the engine
version, so any engine change invalidates stale results.  Entries are the
exact JSON objects a fresh run would produce, so hits are byte-identical to
the run that filled them.
"""

from __future__ import annotations

import hashlib
import json
import os
from pathlib import Path
from typing import Any

from .. import ENGINE_VERSION
from ..fileio import canonical_function_bytes
from ..slicecore import LabeledFunction

ENV_VAR = "SLICEBENCH_CACHE_DIR"


def default_cache_dir() -> Path:
    override = os.environ.get(ENV_VAR)
    if override:
        return Path(override)
    return Path.home() / ".cache" / "slicebench"


class ResultCache:
    def __init__(self, root: str | Path | None = None):
        self.root = Path(root) if root is not None else default_cache_dir()

    def key(self, f: LabeledFunction, measure: str) -> str:
        h = hashlib.sha256()
        h.update(canonical_function_bytes(f))
        h.update(b"\0")
        h.update(measure.encode())
        h.update(b"\0")
        h.update(ENGINE_VERSION.encode())
        return h.hexdigest()

    def _path(self, key: str) -> Path:
        return self.root / f"{key}.json"

    def get(self, f: LabeledFunction, measure: str) -> dict[str, Any] | None:
        path = self._path(self.key(f, measure))
        try:
            obj = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError):
            return None
        return obj if isinstance(obj, dict) else None

    def put(self, f: LabeledFunction, measure: str, entry: dict[str, Any]) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        path = self._path(self.key(f, measure))
        tmp = path.with_suffix(".tmp")
        tmp.write_text(json.dumps(entry, sort_keys=True))
        os.replace(tmp, path)

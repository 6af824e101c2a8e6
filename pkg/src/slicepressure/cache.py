"""Content-addressed on-disk cache for computed results.

Entries are keyed by (p, q, computation, n, package version).  Integers are
stored as decimal strings so big counts round-trip exactly.  Writes go to a
temporary file that is renamed into place; unreadable or tampered entries are
treated as misses.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Any, Callable

from . import __version__

CACHE_ENV = "SLICEPRESSURE_CACHE_DIR"


def _encode(value: Any) -> Any:
    if isinstance(value, bool) or value is None or isinstance(value, (float, str)):
        return value
    if isinstance(value, int):
        return {"$int": str(value)}
    if isinstance(value, dict):
        return {str(k): _encode(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_encode(v) for v in value]
    raise TypeError(f"cannot cache value of type {type(value).__name__}")


def _decode(value: Any) -> Any:
    if isinstance(value, dict):
        if set(value) == {"$int"}:
            return int(value["$int"])
        return {k: _decode(v) for k, v in value.items()}
    if isinstance(value, list):
        return [_decode(v) for v in value]
    return value


def _digest(payload: Any) -> str:
    return hashlib.sha256(json.dumps(payload, sort_keys=True).encode()).hexdigest()


class ResultCache:
    def __init__(self, directory: str | os.PathLike, version: str = __version__):
        self.directory = Path(directory)
        self.version = version

    @classmethod
    def from_env(cls, directory: str | os.PathLike | None = None) -> "ResultCache | None":
        """Cache at ``directory``, else at ``$SLICEPRESSURE_CACHE_DIR``, else None."""
        target = directory or os.environ.get(CACHE_ENV)
        return cls(target) if target else None

    def _key(self, p: int, q: int, computation: str, n: int | None) -> dict:
        return {"p": p, "q": q, "computation": computation, "n": n, "version": self.version}

    def path_for(self, p: int, q: int, computation: str, n: int | None = None) -> Path:
        return self.directory / f"{_digest(self._key(p, q, computation, n))}.json"

    def get(self, p: int, q: int, computation: str, n: int | None = None) -> Any | None:
        path = self.path_for(p, q, computation, n)
        try:
            entry = json.loads(path.read_text())
            if entry["key"] != self._key(p, q, computation, n):
                return None
            if entry["checksum"] != _digest(entry["value"]):
                return None
            return _decode(entry["value"])
        except (OSError, ValueError, KeyError, TypeError):
            return None

    def put(self, p: int, q: int, computation: str, n: int | None, value: Any) -> None:
        self.directory.mkdir(parents=True, exist_ok=True)
        encoded = _encode(value)
        entry = {"key": self._key(p, q, computation, n), "value": encoded, "checksum": _digest(encoded)}
        atomic_write_text(self.path_for(p, q, computation, n), json.dumps(entry, sort_keys=True))

    def get_or_compute(self, p: int, q: int, computation: str, n: int | None, fn: Callable[[], Any]) -> Any:
        hit = self.get(p, q, computation, n)
        if hit is not None:
            return hit
        value = fn()
        self.put(p, q, computation, n, value)
        return value


def atomic_write_text(path: str | os.PathLike, text: str) -> None:
    """Write ``text`` to a sibling temp file, then rename it over ``path``."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise

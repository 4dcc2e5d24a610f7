"""On-disk cache of quantum multiplication operators.

Each file holds the versioned operator text followed by a ``checksum`` line
with the sha256 of everything above it.  Corrupt or stale files are rebuilt.
"""

from __future__ import annotations

import hashlib
import os
import re
import tempfile
from pathlib import Path

from .gpqh import FORMAT_VERSION, QHOperator, parse_operator, serialize_operator

ENV_VAR = "APERY_CACHE_DIR"


class CacheError(OSError):
    pass


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "qapery"


def _filename(key: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", key) + f".v{FORMAT_VERSION}.qh"


def encode(op: QHOperator) -> str:
    body = serialize_operator(op)
    return body + f"checksum {hashlib.sha256(body.encode()).hexdigest()}\n"


def decode(text: str) -> QHOperator:
    """Parse a cache file; raises ValueError on checksum or version problems."""
    body, sep, last = text.rstrip("\n").rpartition("\n")
    if not sep or not last.startswith("checksum "):
        raise ValueError("missing checksum line")
    body += "\n"
    if hashlib.sha256(body.encode()).hexdigest() != last.split()[1]:
        raise ValueError("checksum mismatch")
    return parse_operator(body)


class OperatorCache:
    def __init__(self, directory: str | os.PathLike | None = None):
        self.directory = Path(directory) if directory is not None else default_cache_dir()
        self.rebuilt: list[str] = []

    def path(self, key: str) -> Path:
        return self.directory / _filename(key)

    def _ensure_dir(self):
        try:
            self.directory.mkdir(parents=True, exist_ok=True)
        except OSError as e:
            raise CacheError(f"cannot create cache directory {self.directory}: {e}") from e
        if not os.access(self.directory, os.W_OK):
            raise CacheError(f"cache directory {self.directory} is not writable")

    def load(self, key: str) -> QHOperator | None:
        p = self.path(key)
        if not p.exists():
            return None
        try:
            return decode(p.read_text(encoding="utf-8"))
        except (ValueError, KeyError, UnicodeDecodeError):
            return None

    def store(self, key: str, op: QHOperator) -> Path:
        self._ensure_dir()
        target = self.path(key)
        fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".qh")
        try:
            with os.fdopen(fd, "w", encoding="utf-8") as fh:
                fh.write(encode(op))
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return target

    def get(self, key: str, build) -> QHOperator:
        """Cached operator for ``key``, calling ``build()`` when missing, stale or corrupt."""
        op = self.load(key)
        if op is not None:
            return op
        if self.path(key).exists():
            self.rebuilt.append(key)
        op = build()
        self.store(key, op)
        return op

    def entries(self) -> list[Path]:
        if not self.directory.exists():
            return []
        return sorted(self.directory.glob("*.qh"))

    def clear(self) -> int:
        n = 0
        for p in self.entries():
            p.unlink()
            n += 1
        return n

    def verify(self) -> dict[str, bool]:
        out = {}
        for p in self.entries():
            try:
                decode(p.read_text(encoding="utf-8"))
                out[p.name] = True
            except (ValueError, KeyError, UnicodeDecodeError):
                out[p.name] = False
        return out


def cache_roundtrip(op: QHOperator) -> bool:
    return decode(encode(op)).op_hash == op.op_hash

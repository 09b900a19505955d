"""On-disk cache of command outputs, keyed by schema, request and source hash."""
from __future__ import annotations

import hashlib
import os
import tempfile
from functools import lru_cache
from pathlib import Path
from typing import Callable

SCHEMA_VERSION = 1
ENV_VAR = "OPENCOMB_CACHE_DIR"


@lru_cache(maxsize=None)
def module_hash() -> str:
    """Digest of every source file in the package; any edit invalidates the cache."""
    root = Path(__file__).resolve().parent
    h = hashlib.sha256()
    for p in sorted(root.rglob("*.py")):
        h.update(str(p.relative_to(root)).encode())
        h.update(b"\0")
        h.update(p.read_bytes())
    return h.hexdigest()[:16]


def default_cache_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or os.path.join(os.path.expanduser("~"), ".cache")
    return Path(base) / "opencomb"


class Cache:
    def __init__(self, root: Path | str | None):
        self.root = Path(root) if root is not None else None

    def path(self, kind: str, key: str) -> Path | None:
        if self.root is None:
            return None
        digest = hashlib.sha256(f"{SCHEMA_VERSION}|{kind}|{key}|{module_hash()}".encode()).hexdigest()
        return self.root / f"v{SCHEMA_VERSION}" / kind / f"{digest[:32]}.txt"

    def get(self, kind: str, key: str) -> str | None:
        p = self.path(kind, key)
        if p is None or not p.is_file():
            return None
        return p.read_text(encoding="utf-8")

    def put(self, kind: str, key: str, text: str) -> None:
        p = self.path(kind, key)
        if p is None:
            return
        p.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=p.parent, prefix=".tmp-")
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as f:
                f.write(text)
            os.replace(tmp, p)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    def get_or_compute(self, kind: str, key: str, compute: Callable[[], str]) -> str:
        hit = self.get(kind, key)
        if hit is not None:
            return hit
        text = compute()
        self.put(kind, key, text)
        return text

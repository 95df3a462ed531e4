"""Content-addressed disk cache for memo vectors and finished character rows.

File names are hashes of (config, lambda, payload key), so a cache built
for one group is never read for another.  Writes go through a temporary
file and ``os.replace``; a file that fails to load is reported and
ignored, and the value is recomputed.
"""

from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from pathlib import Path

import numpy as np

from .roots import GroupConfig, Weight

log = logging.getLogger(__name__)

ENV_VAR = "CHARP_CACHE_DIR"


def _digest(*parts) -> str:
    h = hashlib.sha256(json.dumps(parts, separators=(",", ":")).encode())
    return h.hexdigest()[:32]


class DiskStore:
    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    @classmethod
    def from_env(cls, path=None) -> "DiskStore | None":
        path = path or os.environ.get(ENV_VAR)
        return cls(path) if path else None

    def _path(self, kind: str, config: GroupConfig, lam: Weight, key) -> Path:
        h = _digest(kind, config.key, list(lam), key)
        return self.root / config.key / kind / h[:2] / f"{h}.{'npz' if kind == 'vec' else 'json'}"

    def _write(self, path: Path, write) -> None:
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=path.parent, suffix=".tmp")
        try:
            with os.fdopen(fd, "wb") as fh:
                write(fh)
            os.replace(tmp, path)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise

    # memo vectors

    def save_vector(self, config: GroupConfig, lam: Weight, suffix, value) -> None:
        keys, coefs = value
        path = self._path("vec", config, lam, [list(t) for t in suffix])
        if path.exists():
            return
        self._write(path, lambda fh: np.savez(fh, keys=keys, coefs=coefs.astype(np.uint8)))

    def load_vector(self, config: GroupConfig, lam: Weight, suffix):
        path = self._path("vec", config, lam, [list(t) for t in suffix])
        if not path.exists():
            return None
        try:
            with np.load(path) as z:
                keys = z["keys"].astype(np.int64)
                coefs = z["coefs"].astype(np.int64)
            if keys.shape != coefs.shape or np.any(coefs >= config.prime) or np.any(coefs == 0):
                raise ValueError("inconsistent arrays")
            return keys, coefs
        except Exception as exc:
            log.warning("ignoring corrupt cache file %s (%s)", path, exc)
            return None

    # character rows: {nu: dim L(lam)_nu}

    def save_row(self, config: GroupConfig, lam: Weight, row: dict) -> None:
        path = self._path("row", config, lam, "ch")
        doc = {"config": config.key, "lambda": list(lam),
               "row": [[list(nu), int(m)] for nu, m in sorted(row.items())]}
        data = json.dumps(doc, separators=(",", ":")).encode()
        self._write(path, lambda fh: fh.write(data))

    def load_row(self, config: GroupConfig, lam: Weight) -> dict | None:
        path = self._path("row", config, lam, "ch")
        if not path.exists():
            return None
        try:
            doc = json.loads(path.read_text())
            if doc["config"] != config.key or tuple(doc["lambda"]) != tuple(lam):
                raise ValueError("key mismatch")
            return {tuple(nu): int(m) for nu, m in doc["row"]}
        except Exception as exc:
            log.warning("ignoring corrupt cache file %s (%s)", path, exc)
            return None

    # single weight-space dimensions, so an interrupted row can resume

    def save_dim(self, config: GroupConfig, lam: Weight, nu: Weight, dim: int) -> None:
        path = self._path("dim", config, lam, list(nu))
        data = json.dumps({"lambda": list(lam), "nu": list(nu), "dim": int(dim)}).encode()
        self._write(path, lambda fh: fh.write(data))

    def load_dim(self, config: GroupConfig, lam: Weight, nu: Weight) -> int | None:
        path = self._path("dim", config, lam, list(nu))
        if not path.exists():
            return None
        try:
            doc = json.loads(path.read_text())
            if tuple(doc["nu"]) != tuple(nu) or tuple(doc["lambda"]) != tuple(lam):
                raise ValueError("key mismatch")
            return int(doc["dim"])
        except Exception as exc:
            log.warning("ignoring corrupt cache file %s (%s)", path, exc)
            return None

    def stats(self) -> dict:
        out = {}
        for kind in ("vec", "row", "dim"):
            out[kind] = sum(1 for _ in self.root.glob(f"*/{kind}/*/*"))
        return out

    def clear(self) -> int:
        n = 0
        for path in sorted(self.root.glob("*/*/*/*"), reverse=True):
            if path.is_file():
                path.unlink()
                n += 1
        return n

"""On-disk result store: JSON records plus content-hashed witness files.

Layout under the root (``$LAMBDA_LAB_STORE`` or ``~/.lambda_lab``)::

    records/<key slug>.json
    witnesses/<sha256 of witness json>.json
    tiles/<tile name>.tile

Readers never lock; writers serialize on ``.lock`` and replace files
atomically, so a concurrent reader sees either the old or the new file.
"""

from __future__ import annotations

import hashlib
import json
import os
import time
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Optional, Union

from filelock import FileLock

from .errors import DataIntegrityError
from .keys import InstanceKey
from .labeling import Labeling, verify

ENV_VAR = "LAMBDA_LAB_STORE"


def default_store_dir() -> Path:
    env = os.environ.get(ENV_VAR)
    return Path(env) if env else Path.home() / ".lambda_lab"


@dataclass
class ResultRecord:
    key: str
    claimed: Optional[Union[int, str]]
    computed: Optional[int]  # exact span; None when only bounds are known
    lower: Optional[int] = None
    upper: Optional[int] = None
    method: str = ""
    witness_path: Optional[str] = None
    status: str = ""
    nodes: int = 0
    timestamp: float = field(default_factory=time.time)

    @property
    def exact(self) -> bool:
        return self.computed is not None

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True, indent=1, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "ResultRecord":
        return cls(**json.loads(text))


def _atomic_write(path: Path, data: bytes) -> None:
    tmp = path.with_name(path.name + f".{os.getpid()}.tmp")
    tmp.write_bytes(data)
    os.replace(tmp, path)


class ResultStore:
    def __init__(self, root: Union[str, Path, None] = None):
        self.root = Path(root) if root is not None else default_store_dir()
        self.hits = 0
        self.misses = 0

    @property
    def tiles_dir(self) -> Path:
        return self.root / "tiles"

    def _lock(self) -> FileLock:
        self.root.mkdir(parents=True, exist_ok=True)
        return FileLock(str(self.root / ".lock"))

    def record_path(self, key: InstanceKey) -> Path:
        return self.root / "records" / f"{key.slug}.json"

    def put_witness(self, key: InstanceKey, lab: Labeling) -> str:
        """Write the witness under its content hash; returns the path relative to the root."""
        data = lab.to_json(str(key)).encode("utf-8")
        name = hashlib.sha256(data).hexdigest() + ".json"
        rel = f"witnesses/{name}"
        path = self.root / rel
        with self._lock():
            path.parent.mkdir(parents=True, exist_ok=True)
            if not path.exists():
                _atomic_write(path, data)
        return rel

    def load_witness(self, rel: str) -> Labeling:
        path = self.root / rel
        try:
            data = path.read_bytes()
        except FileNotFoundError:
            raise DataIntegrityError(f"{rel}: witness file missing") from None
        if hashlib.sha256(data).hexdigest() + ".json" != path.name:
            raise DataIntegrityError(f"{rel}: content hash mismatch")
        return Labeling.from_json(data)

    def put(self, key: InstanceKey, rec: ResultRecord, witness: Optional[Labeling] = None) -> ResultRecord:
        if witness is not None:
            rec.witness_path = self.put_witness(key, witness)
        if rec.computed is not None and rec.witness_path is None:
            raise ValueError("an exact record needs a witness")
        path = self.record_path(key)
        with self._lock():
            path.parent.mkdir(parents=True, exist_ok=True)
            _atomic_write(path, rec.to_json().encode("utf-8"))
        return rec

    def get(self, key: InstanceKey, count: bool = True) -> Optional[ResultRecord]:
        path = self.record_path(key)
        if not path.exists():
            if count:
                self.misses += 1
            return None
        try:
            rec = ResultRecord.from_json(path.read_text(encoding="utf-8"))
        except (ValueError, TypeError) as e:
            raise DataIntegrityError(f"{path.name}: corrupt record ({e})") from None
        if count:
            self.hits += 1
        return rec

    def records(self) -> list[ResultRecord]:
        d = self.root / "records"
        if not d.exists():
            return []
        return [ResultRecord.from_json(p.read_text(encoding="utf-8")) for p in sorted(d.glob("*.json"))]

    def check(self, key: InstanceKey) -> list:
        """Reload the stored witness of ``key`` and re-verify it; returns violations."""
        rec = self.get(key, count=False)
        if rec is None or rec.witness_path is None:
            raise DataIntegrityError(f"{key}: no stored witness")
        lab = self.load_witness(rec.witness_path)
        if rec.computed is not None and lab.span != rec.computed:
            raise DataIntegrityError(f"{key}: witness span {lab.span} but record says {rec.computed}")
        return verify(key.target(), lab, key.h, key.k)

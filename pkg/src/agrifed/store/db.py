"""Embedded JSON document store: one file per document, atomic writes.

Writes go to a temp file in the collection directory and are renamed into
place, so concurrent readers always observe a complete document. The store
interface is deliberately small so a server-based document database can be
substituted behind it.
"""

from __future__ import annotations

import json
import os
import re
import tempfile
import threading

_ID_RE = re.compile(r"^[A-Za-z0-9_.-]{1,128}$")


class DocumentStore:
    def __init__(self, root: str):
        self.root = root
        os.makedirs(root, exist_ok=True)
        self._lock = threading.RLock()

    def _path(self, collection: str, doc_id: str) -> str:
        if not _ID_RE.match(collection) or not _ID_RE.match(doc_id):
            raise ValueError(f"invalid collection or document id: {collection}/{doc_id}")
        return os.path.join(self.root, collection, f"{doc_id}.json")

    def put(self, collection: str, doc_id: str, doc: dict) -> None:
        path = self._path(collection, doc_id)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        data = json.dumps(doc, separators=(",", ":"), allow_nan=False).encode("utf-8")
        with self._lock:
            fd, tmp = tempfile.mkstemp(dir=os.path.dirname(path), suffix=".tmp")
            try:
                with os.fdopen(fd, "wb") as fh:
                    fh.write(data)
                os.replace(tmp, path)
            except BaseException:
                if os.path.exists(tmp):
                    os.unlink(tmp)
                raise

    def create(self, collection: str, doc_id: str, doc: dict) -> None:
        """Like put, but fails with FileExistsError if the document exists."""
        path = self._path(collection, doc_id)
        os.makedirs(os.path.dirname(path), exist_ok=True)
        data = json.dumps(doc, separators=(",", ":"), allow_nan=False).encode("utf-8")
        with self._lock:
            fd = os.open(path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
            with os.fdopen(fd, "wb") as fh:
                fh.write(data)

    def get(self, collection: str, doc_id: str) -> dict | None:
        path = self._path(collection, doc_id)
        try:
            with open(path, "rb") as fh:
                return json.loads(fh.read().decode("utf-8"))
        except FileNotFoundError:
            return None

    def delete(self, collection: str, doc_id: str) -> bool:
        path = self._path(collection, doc_id)
        with self._lock:
            try:
                os.unlink(path)
                return True
            except FileNotFoundError:
                return False

    def list_ids(self, collection: str) -> list[str]:
        directory = os.path.join(self.root, collection)
        try:
            names = os.listdir(directory)
        except FileNotFoundError:
            return []
        return sorted(n[: -len(".json")] for n in names if n.endswith(".json"))

    def scan(self, collection: str) -> list[dict]:
        """All documents in a collection; skips files mid-replacement."""
        docs = []
        for doc_id in self.list_ids(collection):
            doc = self.get(collection, doc_id)
            if doc is not None:
                docs.append(doc)
        return docs

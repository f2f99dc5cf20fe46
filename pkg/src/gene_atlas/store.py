"""Persistence for the corpus, favorites, and generated artifacts.

Everything lives in one data directory as line-delimited JSON documents:
``corpus.jsonl``, ``favorites.jsonl``, ``artifacts.jsonl``, each headed by a
format line. Writes go to a temp file in the same directory and are renamed
into place, so a crash never leaves a half-written document. A lock file
guards the directory against concurrent processes; within a process the
store is single-writer, multi-reader.
"""

from __future__ import annotations

import json
import os
import tempfile
from dataclasses import dataclass, field

from .narrative import NarrativeArtifact
from .records import CostumeRecord, DuplicateIdError, from_document, to_document

FORMAT = "gene-atlas/1"

CORPUS_FILE = "corpus.jsonl"
FAVORITES_FILE = "favorites.jsonl"
ARTIFACTS_FILE = "artifacts.jsonl"
LOCK_FILE = "lock"


class MalformedDocumentError(ValueError):
    def __init__(self, path: str, line: int, message: str) -> None:
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


class FormatVersionError(ValueError):
    pass


class LockHeldError(RuntimeError):
    pass


class UnknownCostumeError(KeyError):
    pass


@dataclass
class Corpus:
    records: dict[str, CostumeRecord] = field(default_factory=dict)
    version: int = 0


def _dump_rows(version: int, rows: list[dict]) -> str:
    header = {"format": FORMAT, "version": version}
    lines = [json.dumps(header, ensure_ascii=False, sort_keys=True, separators=(",", ":"))]
    lines.extend(
        json.dumps(row, ensure_ascii=False, sort_keys=True, separators=(",", ":"))
        for row in rows
    )
    return "\n".join(lines) + "\n"


def _atomic_write(path: str, data: str) -> None:
    directory = os.path.dirname(path) or "."
    fd, tmp_path = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".jsonl")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as tmp:
            tmp.write(data)
            tmp.flush()
            os.fsync(tmp.fileno())
        os.replace(tmp_path, path)
    except BaseException:
        try:
            os.unlink(tmp_path)
        except FileNotFoundError:
            pass
        raise


def _load_rows(path: str) -> tuple[int, list[dict]]:
    with open(path, encoding="utf-8") as handle:
        lines = handle.read().split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise MalformedDocumentError(path, 1, "empty document (missing header)")
    rows = []
    header = None
    for number, line in enumerate(lines, start=1):
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise MalformedDocumentError(path, number, f"invalid JSON: {exc.msg}") from exc
        if not isinstance(obj, dict):
            raise MalformedDocumentError(path, number, "expected a JSON object")
        if number == 1:
            header = obj
        else:
            rows.append(obj)
    declared = header.get("format")
    if declared != FORMAT:
        raise FormatVersionError(f"{path}: unknown format {declared!r}, expected {FORMAT!r}")
    version = header.get("version")
    if not isinstance(version, int) or version < 0:
        raise MalformedDocumentError(path, 1, f"invalid version: {version!r}")
    return version, rows


def save_corpus(corpus: Corpus, path: str) -> None:
    rows = [to_document(corpus.records[cid]) for cid in sorted(corpus.records)]
    _atomic_write(path, _dump_rows(corpus.version, rows))


def load_corpus(path: str) -> Corpus:
    version, rows = _load_rows(path)
    records: dict[str, CostumeRecord] = {}
    for offset, row in enumerate(rows):
        record = from_document(row)
        if record.id in records:
            raise MalformedDocumentError(
                path, offset + 2, f"duplicate costume id: {record.id!r}"
            )
        records[record.id] = record
    return Corpus(records=records, version=version)


class CollectionStore:
    """Single source of truth under the index and the API.

    Opening acquires the directory lock; every mutating method persists its
    file before returning, so state after reopen equals exactly the set of
    calls that returned.
    """

    def __init__(self, data_dir: str) -> None:
        os.makedirs(data_dir, exist_ok=True)
        self.data_dir = data_dir
        self._lock_fd: int | None = None
        self._acquire_lock()
        try:
            self.corpus = self._load_corpus()
            self._favorites = self._load_favorites()
            self._artifacts = self._load_artifacts()
        except BaseException:
            self._release_lock()
            raise

    # -- lifecycle ---------------------------------------------------------

    def _acquire_lock(self) -> None:
        path = os.path.join(self.data_dir, LOCK_FILE)
        try:
            fd = os.open(path, os.O_CREAT | os.O_EXCL | os.O_WRONLY)
        except FileExistsError:
            holder = ""
            try:
                with open(path, encoding="utf-8") as handle:
                    holder = handle.read().strip()
            except OSError:
                pass
            raise LockHeldError(
                f"data directory {self.data_dir!r} is locked"
                + (f" by pid {holder}" if holder else "")
            ) from None
        os.write(fd, str(os.getpid()).encode("ascii"))
        self._lock_fd = fd

    def _release_lock(self) -> None:
        if self._lock_fd is None:
            return
        os.close(self._lock_fd)
        self._lock_fd = None
        try:
            os.unlink(os.path.join(self.data_dir, LOCK_FILE))
        except FileNotFoundError:
            pass

    def close(self) -> None:
        self._release_lock()

    def __enter__(self) -> "CollectionStore":
        return self

    def __exit__(self, *exc) -> None:
        self.close()

    # -- loading -----------------------------------------------------------

    def _path(self, name: str) -> str:
        return os.path.join(self.data_dir, name)

    def _load_corpus(self) -> Corpus:
        path = self._path(CORPUS_FILE)
        if not os.path.exists(path):
            return Corpus()
        return load_corpus(path)

    def _load_favorites(self) -> dict[str, list[str]]:
        path = self._path(FAVORITES_FILE)
        if not os.path.exists(path):
            self._favorites_version = 0
            return {}
        version, rows = _load_rows(path)
        self._favorites_version = version
        favorites: dict[str, list[str]] = {}
        for row in rows:
            favorites[row["user_id"]] = list(row["costume_ids"])
        return favorites

    def _load_artifacts(self) -> list[dict]:
        path = self._path(ARTIFACTS_FILE)
        if not os.path.exists(path):
            self._artifacts_version = 0
            return []
        version, rows = _load_rows(path)
        self._artifacts_version = version
        return rows

    # -- corpus ------------------------------------------------------------

    @property
    def records(self) -> dict[str, CostumeRecord]:
        return self.corpus.records

    def add_record(self, record: CostumeRecord) -> None:
        if record.id in self.corpus.records:
            raise DuplicateIdError(f"costume id already in corpus: {record.id!r}")
        self.corpus.records[record.id] = record
        self.corpus.version += 1
        save_corpus(self.corpus, self._path(CORPUS_FILE))

    # -- favorites ---------------------------------------------------------

    def list_favorites(self, user_id: str) -> list[str]:
        return list(self._favorites.get(user_id, []))

    def _save_favorites(self) -> None:
        self._favorites_version += 1
        rows = [
            {"user_id": user_id, "costume_ids": self._favorites[user_id]}
            for user_id in sorted(self._favorites)
        ]
        _atomic_write(
            self._path(FAVORITES_FILE), _dump_rows(self._favorites_version, rows)
        )

    def add_favorite(self, user_id: str, costume_id: str) -> list[str]:
        """Idempotent: re-adding keeps the original position."""
        if not user_id:
            raise ValueError("user_id must be non-empty")
        if costume_id not in self.corpus.records:
            raise UnknownCostumeError(f"unknown costume id: {costume_id!r}")
        current = self._favorites.setdefault(user_id, [])
        if costume_id not in current:
            current.append(costume_id)
            self._save_favorites()
        return list(current)

    def remove_favorite(self, user_id: str, costume_id: str) -> list[str]:
        """Removing an id that is not in the list is a no-op."""
        current = self._favorites.get(user_id, [])
        if costume_id in current:
            current.remove(costume_id)
            self._save_favorites()
        return list(current)

    def dangling_favorites(self) -> list[tuple[str, str]]:
        """Favorites pointing at costumes no longer in the corpus; flagged
        for repair, never removed silently."""
        out = []
        for user_id in sorted(self._favorites):
            for costume_id in self._favorites[user_id]:
                if costume_id not in self.corpus.records:
                    out.append((user_id, costume_id))
        return out

    # -- artifact log ------------------------------------------------------

    def append_artifact(self, artifact: NarrativeArtifact, user_id: str | None = None) -> int:
        """Append to the log and return the assigned dense, ascending id."""
        artifact_id = len(self._artifacts) + 1
        row = {
            "artifact_id": artifact_id,
            "user_id": user_id,
            **artifact.to_document(),
        }
        self._artifacts.append(row)
        self._artifacts_version += 1
        _atomic_write(
            self._path(ARTIFACTS_FILE),
            _dump_rows(self._artifacts_version, self._artifacts),
        )
        return artifact_id

    def list_artifacts(
        self, costume_id: str | None = None, user_id: str | None = None
    ) -> list[dict]:
        rows = self._artifacts
        if costume_id is not None:
            rows = [r for r in rows if r["request"]["costume_id"] == costume_id]
        if user_id is not None:
            rows = [r for r in rows if r.get("user_id") == user_id]
        return [dict(r) for r in rows]

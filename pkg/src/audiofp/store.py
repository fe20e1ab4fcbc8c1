"""Persistence: fingerprint index (JSONL), PCA model (JSON), tags (CSV)."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DuplicateTrack, ParseError, SchemaError, TagsMissing
from .fingerprint import FINGERPRINT_SIZE, PcaModel

SCHEMA_VERSION = 1


@dataclass
class IndexRecord:
    track_id: str
    path: str
    genres: list
    fingerprint: np.ndarray


@dataclass
class TrackTags:
    track_id: str
    path: str
    genres: set


@dataclass
class ModelFile:
    """Fitted model plus the per-track reduced vectors and genre tags."""

    model: PcaModel
    reduced: dict  # track_id -> np.ndarray of n_components values
    genres: dict   # track_id -> list of genre strings
    config: dict = field(default_factory=dict)


def _dump(obj) -> str:
    # Default float repr is the shortest exact round-trip form, which
    # keeps files byte-deterministic and read(write(x)) == x bit-exact.
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def write_index(records: list, path) -> None:
    seen = set()
    for rec in records:
        if rec.track_id in seen:
            raise DuplicateTrack(f"duplicate track_id {rec.track_id!r}")
        seen.add(rec.track_id)
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(_dump({
                "schema": SCHEMA_VERSION,
                "track_id": rec.track_id,
                "path": rec.path,
                "genres": list(rec.genres),
                "fingerprint": list(map(float, rec.fingerprint)),
            }) + "\n")


def read_index(path) -> list:
    records = []
    seen = set()
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ParseError(f"line {lineno}: invalid JSON ({exc})") from None
            if obj.get("schema") != SCHEMA_VERSION:
                raise SchemaError(
                    f"line {lineno}: schema {obj.get('schema')!r}, "
                    f"expected {SCHEMA_VERSION}")
            fp = obj.get("fingerprint")
            if not isinstance(fp, list) or len(fp) != FINGERPRINT_SIZE:
                got = len(fp) if isinstance(fp, list) else type(fp).__name__
                raise ParseError(
                    f"line {lineno}: fingerprint must have "
                    f"{FINGERPRINT_SIZE} values, got {got}")
            tid = obj["track_id"]
            if tid in seen:
                raise DuplicateTrack(f"line {lineno}: duplicate track_id {tid!r}")
            seen.add(tid)
            records.append(IndexRecord(
                track_id=tid, path=obj.get("path", ""),
                genres=list(obj.get("genres", [])),
                fingerprint=np.array(fp, dtype=np.float64)))
    return records


def write_model(mf: ModelFile, path) -> None:
    m = mf.model
    doc = {
        "schema": SCHEMA_VERSION,
        "config": mf.config,
        "variance_target": float(m.variance_target),
        "n_components": int(m.n_components),
        "mean": list(map(float, m.mean)),
        "scale": list(map(float, m.scale)),
        "components": [list(map(float, row)) for row in m.components],
        "explained_variance_ratio": list(map(float, m.explained_variance_ratio)),
        "genres": {tid: list(g) for tid, g in mf.genres.items()},
        "reduced": {tid: list(map(float, vec))
                    for tid, vec in mf.reduced.items()},
    }
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(_dump(doc) + "\n")


def read_model(path) -> ModelFile:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid model JSON: {exc}") from None
    if doc.get("schema") != SCHEMA_VERSION:
        raise SchemaError(f"schema {doc.get('schema')!r}, expected {SCHEMA_VERSION}")
    mean = np.array(doc["mean"], dtype=np.float64)
    dim = len(mean)
    scale = np.array(doc["scale"], dtype=np.float64)
    if len(scale) != dim:
        raise SchemaError(f"scale has {len(scale)} values, expected {dim}")
    try:
        components = np.array(doc["components"], dtype=np.float64)
    except ValueError:
        raise SchemaError("components rows have inconsistent lengths") from None
    if components.ndim != 2 or components.shape[1] != dim:
        raise SchemaError(
            f"components shape {components.shape} inconsistent with "
            f"dimension {dim}")
    n_components = int(doc["n_components"])
    if components.shape[0] != n_components:
        raise SchemaError(
            f"{components.shape[0]} component rows but n_components="
            f"{n_components}")
    ratios = np.array(doc["explained_variance_ratio"], dtype=np.float64)
    if len(ratios) != n_components:
        raise SchemaError("explained_variance_ratio length mismatch")
    genres = {tid: list(g) for tid, g in doc.get("genres", {}).items()}
    reduced = {}
    for tid, vec in doc.get("reduced", {}).items():
        if tid not in genres:
            raise SchemaError(f"reduced entry for unknown track {tid!r}")
        if len(vec) != n_components:
            raise SchemaError(
                f"reduced vector for {tid!r} has {len(vec)} values, "
                f"expected {n_components}")
        reduced[tid] = np.array(vec, dtype=np.float64)
    model = PcaModel(
        mean=mean, scale=scale, components=components,
        explained_variance_ratio=ratios,
        variance_target=float(doc["variance_target"]),
        n_components=n_components)
    return ModelFile(model=model, reduced=reduced, genres=genres,
                     config=dict(doc.get("config", {})))


def load_tags(path) -> list:
    """Read the `track_id,path,genres` CSV; genres are pipe-separated."""
    tags = []
    seen = set()
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"track_id", "path", "genres"}
        if reader.fieldnames is None or not required <= set(reader.fieldnames):
            raise ParseError(
                f"tags CSV must have header track_id,path,genres, "
                f"got {reader.fieldnames}")
        for row in reader:
            tid = row["track_id"].strip()
            if tid in seen:
                raise DuplicateTrack(f"duplicate track_id {tid!r} in tags")
            seen.add(tid)
            genres = {g.strip().lower() for g in row["genres"].split("|")
                      if g.strip()}
            if not genres:
                raise TagsMissing(f"empty genre field for track {tid!r}")
            tags.append(TrackTags(tid, row["path"].strip(), genres))
    return tags

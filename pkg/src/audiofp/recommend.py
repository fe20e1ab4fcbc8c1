"""Euclidean distance matrix, top-K retrieval, and genre-match evaluation."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidK, NotFound, ShapeError, TagsMissing
from .fingerprint import ReducedFingerprint


@dataclass
class DistanceMatrix:
    track_ids: list
    values: np.ndarray

    def index_of(self, track_id: str) -> int:
        try:
            return self.track_ids.index(track_id)
        except ValueError:
            raise NotFound(f"unknown track {track_id!r}") from None


@dataclass
class RecommendationSet:
    target_id: str
    neighbors: list  # (track_id, distance), ascending distance


def distance_matrix(reduced: list) -> DistanceMatrix:
    """Pairwise Euclidean distances over reduced fingerprints."""
    if len(reduced) < 2:
        raise ShapeError("need at least 2 tracks for a distance matrix")
    dims = {len(r.values) for r in reduced}
    if len(dims) != 1:
        raise ShapeError(f"mixed vector lengths: {sorted(dims)}")
    ids = [r.track_id for r in reduced]
    x = np.stack([np.asarray(r.values, dtype=np.float64) for r in reduced])
    n = len(ids)
    values = np.zeros((n, n))
    for i in range(n):
        d = np.linalg.norm(x[i + 1:] - x[i], axis=1)
        values[i, i + 1:] = d
        values[i + 1:, i] = d  # mirror for exact symmetry
    return DistanceMatrix(ids, values)


def top_k(dist: DistanceMatrix, target_id: str, k: int = 3) -> RecommendationSet:
    """The k nearest non-target tracks; ties broken by track_id."""
    i = dist.index_of(target_id)
    n = len(dist.track_ids)
    if k > n - 1:
        raise InvalidK(f"k={k} but only {n - 1} other tracks exist")
    others = [(dist.values[i, j], dist.track_ids[j])
              for j in range(n) if j != i]
    others.sort()
    return RecommendationSet(target_id, [(tid, d) for d, tid in others[:k]])


def evaluate_genre_accuracy(dist: DistanceMatrix, tags: dict, k: int = 3):
    """Fraction of tracks whose top-k contains a genre-sharing neighbor.

    ``tags`` maps track_id to a set of genre strings. Returns
    (accuracy, report) where report lists (track_id, success) per track.
    """
    missing = [tid for tid in dist.track_ids if tid not in tags]
    if missing:
        raise TagsMissing(f"no tags for: {', '.join(sorted(missing))}")
    report = []
    successes = 0
    for tid in dist.track_ids:
        recs = top_k(dist, tid, k)
        target_genres = tags[tid]
        hit = any(target_genres & tags[nid] for nid, _ in recs.neighbors)
        successes += hit
        report.append((tid, bool(hit)))
    return successes / len(dist.track_ids), report

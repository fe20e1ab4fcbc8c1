"""Fingerprint assembly, corpus standardization, and PCA reduction."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InsufficientData, ShapeError

SPEC_MEANS = 1025
MFCC_MEANS = 13
CHROMA_MEANS = 12
TEMPO_VALUES = 12
FINGERPRINT_SIZE = SPEC_MEANS + MFCC_MEANS + CHROMA_MEANS + TEMPO_VALUES

DEFAULT_VARIANCE_TARGET = 0.95
_DEGENERATE_STD = 1e-12


@dataclass
class Fingerprint:
    track_id: str
    values: np.ndarray


@dataclass
class PcaModel:
    """Standardization stats plus the retained principal components.

    ``components`` holds the n_components rows selected by the variance
    target; ``full_variance_ratios`` keeps the ratios of every computed
    component for variance-curve reporting.
    """

    mean: np.ndarray
    scale: np.ndarray
    components: np.ndarray
    explained_variance_ratio: np.ndarray
    variance_target: float
    n_components: int
    full_variance_ratios: np.ndarray = field(default=None, repr=False)


@dataclass
class ReducedFingerprint:
    track_id: str
    values: np.ndarray


def row_means(matrix: np.ndarray) -> np.ndarray:
    """Per-feature mean over frames for a (frames, features) matrix."""
    matrix = np.asarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.shape[0] < 1:
        raise ShapeError(f"expected a non-empty 2-D matrix, got {matrix.shape}")
    return matrix.mean(axis=0)


def assemble_fingerprint(track_id: str, spec_means: np.ndarray,
                         mfcc_means: np.ndarray, chroma_means: np.ndarray,
                         tempo: np.ndarray) -> Fingerprint:
    """Concatenate the four feature blocks in their fixed layout order."""
    expected = (SPEC_MEANS, MFCC_MEANS, CHROMA_MEANS, TEMPO_VALUES)
    parts = (spec_means, mfcc_means, chroma_means, tempo)
    names = ("spectrogram means", "mfcc means", "chroma means", "tempo block")
    for part, want, name in zip(parts, expected, names):
        if len(part) != want:
            raise ShapeError(f"{name}: expected {want} values, got {len(part)}")
    return Fingerprint(track_id, np.concatenate(parts).astype(np.float64))


def standardize(corpus: np.ndarray):
    """Column-wise z-score with population statistics.

    Returns (standardized, mean, scale). Columns with negligible spread
    get scale 1 and standardize to zero.
    """
    corpus = np.asarray(corpus, dtype=np.float64)
    if corpus.ndim != 2 or corpus.shape[0] < 2:
        raise InsufficientData("need at least 2 tracks to standardize")
    mean = corpus.mean(axis=0)
    std = corpus.std(axis=0)
    scale = np.where(std < _DEGENERATE_STD, 1.0, std)
    z = (corpus - mean) / scale
    z[:, std < _DEGENERATE_STD] = 0.0
    return z, mean, scale


def _eigendecompose(z: np.ndarray):
    """Principal axes of centered data, eigenvalues descending.

    Uses the n x n Gram matrix when there are fewer rows than columns
    (the corpus regime), otherwise the d x d covariance. Near-zero
    eigenvalues are dropped, so at most rank(z) components come back.
    Returns (eigenvalues, components, total_variance).
    """
    n, d = z.shape
    z = z - z.mean(axis=0)
    if n < d:
        gram = z @ z.T / n
        evals, evecs = np.linalg.eigh(gram)
        total = np.trace(gram)
        order = np.argsort(evals)[::-1]
        evals, evecs = evals[order], evecs[:, order]
        keep = evals > max(evals[0], 0) * 1e-12
        evals, evecs = evals[keep], evecs[:, keep]
        components = (z.T @ evecs) / np.sqrt(n * evals)
        components = components.T
    else:
        cov = z.T @ z / n
        evals, evecs = np.linalg.eigh(cov)
        total = np.trace(cov)
        order = np.argsort(evals)[::-1]
        evals, evecs = evals[order], evecs[:, order]
        keep = evals > max(evals[0], 0) * 1e-12
        evals = evals[keep]
        components = evecs[:, keep].T
    # Deterministic sign: largest-magnitude entry of each component positive.
    components = np.ascontiguousarray(components)
    flip = components[np.arange(len(components)),
                      np.argmax(np.abs(components), axis=1)] < 0
    components[flip] *= -1.0
    return evals, components, total


def fit_pca(standardized: np.ndarray,
            variance_target: float = DEFAULT_VARIANCE_TARGET,
            mean: np.ndarray = None, scale: np.ndarray = None) -> PcaModel:
    """Fit PCA on an already standardized corpus matrix.

    Keeps the smallest number of components whose cumulative explained
    variance reaches variance_target. Optional mean/scale record the
    standardization applied upstream so raw vectors can be projected.
    """
    z = np.asarray(standardized, dtype=np.float64)
    if z.ndim != 2 or z.shape[0] < 2:
        raise InsufficientData("need at least 2 tracks to fit PCA")
    evals, components, total = _eigendecompose(z)
    ratios = evals / total if total > 0 else np.zeros_like(evals)
    cumulative = np.cumsum(ratios)
    reached = np.nonzero(cumulative >= variance_target - 1e-9)[0]
    n_components = int(reached[0]) + 1 if len(reached) else len(ratios)
    d = z.shape[1]
    if mean is None:
        mean = np.zeros(d)
    if scale is None:
        scale = np.ones(d)
    return PcaModel(
        mean=np.asarray(mean, dtype=np.float64),
        scale=np.asarray(scale, dtype=np.float64),
        components=components[:n_components],
        explained_variance_ratio=ratios[:n_components],
        variance_target=float(variance_target),
        n_components=n_components,
        full_variance_ratios=ratios,
    )


def fit_fingerprint_model(corpus: np.ndarray,
                          variance_target: float = DEFAULT_VARIANCE_TARGET,
                          ) -> PcaModel:
    """Standardize a raw fingerprint matrix and fit PCA on it."""
    z, mean, scale = standardize(corpus)
    return fit_pca(z, variance_target, mean=mean, scale=scale)


def project(model: PcaModel, fp: Fingerprint) -> ReducedFingerprint:
    """Map a raw fingerprint into the reduced component space."""
    values = np.asarray(fp.values, dtype=np.float64)
    if values.shape != model.mean.shape:
        raise ShapeError(
            f"fingerprint length {values.shape} does not match model "
            f"dimension {model.mean.shape}")
    reduced = model.components @ ((values - model.mean) / model.scale)
    return ReducedFingerprint(fp.track_id, reduced)

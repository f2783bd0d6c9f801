"""Standardisation and PCA, fitted on a training split and reused on test data."""
from dataclasses import dataclass

import numpy as np

from .errors import InputError

STD_FLOOR = 1e-12


def _points(points, min_rows=1):
    X = np.asarray(points, dtype=float)
    if X.ndim == 1:
        X = X[:, None]
    if X.ndim != 2 or X.shape[0] < min_rows:
        raise InputError(f"need at least {min_rows} point(s), got shape {X.shape}")
    return X


@dataclass(frozen=True, eq=False)
class StandardizerModel:
    mean: np.ndarray
    std: np.ndarray

    def transform(self, x):
        return apply_standardizer(self, x)


def fit_standardizer(points):
    X = _points(points)
    std = X.std(axis=0, ddof=1) if X.shape[0] > 1 else np.zeros(X.shape[1])
    return StandardizerModel(X.mean(axis=0), np.maximum(std, STD_FLOOR))


def apply_standardizer(m, x):
    """Scale to zero mean and unit variance; features constant in the fitted
    data map to 0 for every input."""
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != m.mean.shape[0]:
        raise InputError(f"expected {m.mean.shape[0]} features, got {x.shape[-1]}")
    z = (x - m.mean) / m.std
    return np.where(m.std > STD_FLOOR, z, 0.0)


@dataclass(frozen=True, eq=False)
class PcaModel:
    mean: np.ndarray
    components: np.ndarray  # (d, k), orthonormal columns
    explained: np.ndarray   # variance fraction of every eigen-direction, descending
    degenerate: bool = False

    @property
    def n_components(self):
        return self.components.shape[1]

    def transform(self, x):
        return apply_pca(self, x)

    def inverse_transform(self, z):
        return np.asarray(z) @ self.components.T + self.mean


def fit_pca(points, variance_threshold=0.95):
    """Keep the fewest leading components covering ``variance_threshold``.

    Each eigenvector's largest-magnitude entry is made positive. Data with an
    all-zero covariance yields a single first-axis component and
    ``degenerate=True``.
    """
    if not 0 < variance_threshold <= 1:
        raise InputError("variance_threshold must lie in (0, 1]")
    X = _points(points, min_rows=2)
    d = X.shape[1]
    mean = X.mean(axis=0)
    cov = np.atleast_2d(np.cov(X, rowvar=False, ddof=1))
    vals, vecs = np.linalg.eigh(cov)
    order = np.argsort(vals)[::-1]
    vals = np.clip(vals[order], 0.0, None)
    vecs = vecs[:, order]
    total = vals.sum()
    if total <= 0.0:
        comp = np.zeros((d, 1))
        comp[0, 0] = 1.0
        explained = np.zeros(d)
        explained[0] = 1.0
        return PcaModel(mean, comp, explained, degenerate=True)
    pivot = np.argmax(np.abs(vecs), axis=0)
    vecs = vecs * np.sign(vecs[pivot, np.arange(d)])
    explained = vals / total
    cum = np.cumsum(explained)
    k = int(np.searchsorted(cum, variance_threshold - 1e-12) + 1)
    k = min(k, d)
    return PcaModel(mean, vecs[:, :k].copy(), explained)


def apply_pca(m, x):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != m.mean.shape[0]:
        raise InputError(f"expected {m.mean.shape[0]} features, got {x.shape[-1]}")
    return (x - m.mean) @ m.components

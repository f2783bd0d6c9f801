"""Density estimators used by the potential functions.

* ``Kde1D``: Gaussian-kernel KDE on the real line, Silverman bandwidth.
* ``GaussianMle``: multivariate normal fitted by maximum likelihood with a
  small ridge so the covariance is always positive definite.
* ``NaiveKde``: product of independent per-axis ``Kde1D`` estimators.
"""
from dataclasses import dataclass

import numpy as np
from scipy.linalg import cholesky, solve_triangular

from .errors import InputError

_INV_SQRT_2PI = 1.0 / np.sqrt(2.0 * np.pi)
_LOG_2PI = np.log(2.0 * np.pi)


def silverman_bandwidth(samples):
    """Silverman's rule of thumb ``0.9 * min(s, IQR/1.34) * n**(-1/5)``.

    ``s`` uses the ``n - 1`` denominator and the quartiles use linear
    interpolation. When the IQR is zero but the spread is not, ``s`` alone is
    used. Degenerate samples (constant values or ``n == 1``) fall back to
    ``max(1e-6, 1e-3 * (1 + max|x|))``.
    """
    x = np.asarray(samples, dtype=float).ravel()
    n = x.size
    if n == 0:
        raise InputError("cannot choose a bandwidth for an empty sample")
    h = 0.0
    if n > 1:
        s = np.std(x, ddof=1)
        q75, q25 = np.percentile(x, [75, 25])
        spread = min(s, (q75 - q25) / 1.34)
        if spread <= 0.0:
            spread = s
        h = 0.9 * spread * n ** (-0.2)
    if not np.isfinite(h) or h <= 0.0:
        h = max(1e-6, 1e-3 * (1.0 + float(np.max(np.abs(x)))))
    return float(h)


@dataclass(frozen=True, eq=False)
class Kde1D:
    samples: np.ndarray
    bandwidth: float

    def __post_init__(self):
        s = np.asarray(self.samples, dtype=float).ravel()
        if s.size == 0:
            raise InputError("Kde1D needs at least one sample")
        if not (self.bandwidth > 0 and np.isfinite(self.bandwidth)):
            raise InputError(f"bandwidth must be positive, got {self.bandwidth}")
        s.setflags(write=False)
        object.__setattr__(self, "samples", s)
        object.__setattr__(self, "bandwidth", float(self.bandwidth))

    @classmethod
    def fit(cls, samples):
        samples = np.asarray(samples, dtype=float).ravel()
        return cls(samples, silverman_bandwidth(samples))

    def __call__(self, t):
        return kde1d_pdf(self, t)


def kde1d_pdf(k, t):
    """Evaluate a 1-D Gaussian KDE at scalar or array ``t``."""
    t_arr = np.asarray(t, dtype=float)
    u = (t_arr[..., None] - k.samples) / k.bandwidth
    with np.errstate(over="ignore"):  # far tails: u*u -> inf, exp -> 0
        out = np.exp(-0.5 * u * u).sum(axis=-1)
    out = out * (_INV_SQRT_2PI / (k.samples.size * k.bandwidth))
    return float(out) if t_arr.ndim == 0 else out


@dataclass(frozen=True, eq=False)
class GaussianMle:
    mean: np.ndarray
    covariance: np.ndarray

    def __post_init__(self):
        mean = np.asarray(self.mean, dtype=float).ravel()
        cov = np.asarray(self.covariance, dtype=float).reshape(mean.size, mean.size)
        if mean.size:
            chol = cholesky(cov, lower=True)
            logdet = 2.0 * np.sum(np.log(np.diag(chol)))
        else:
            chol, logdet = np.empty((0, 0)), 0.0
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)
        object.__setattr__(self, "_chol", chol)
        object.__setattr__(self, "_logdet", logdet)

    @property
    def dim(self):
        return self.mean.size

    @classmethod
    def fit(cls, points):
        return fit_gaussian_mle(points)

    def __call__(self, x):
        return gaussian_pdf(self, x)


def fit_gaussian_mle(points):
    """Maximum-likelihood normal fit (covariance divided by ``n``).

    A ridge ``1e-6 * (1 + trace/dim)`` is added to the diagonal, which keeps
    rank-deficient point sets (fewer points than dimensions) factorisable.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    if pts.ndim != 2:
        raise InputError(f"points must form a 2-D array, got shape {pts.shape}")
    n, k = pts.shape
    if n == 0:
        raise InputError("cannot fit a Gaussian to zero points")
    mean = pts.mean(axis=0)
    if k == 0:
        return GaussianMle(mean, np.empty((0, 0)))
    centred = pts - mean
    cov = centred.T @ centred / n
    cov = 0.5 * (cov + cov.T)
    ridge = 1e-6 * (1.0 + np.trace(cov) / k)
    cov[np.diag_indices(k)] += ridge
    return GaussianMle(mean, cov)


def gaussian_pdf(g, x):
    """Normal density at point(s) ``x`` via the stored Cholesky factor.

    A zero-dimensional Gaussian has density 1 everywhere.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim <= 1
    x = x.reshape(1, -1) if single else x
    if x.shape[1] != g.dim:
        raise InputError(f"expected dimension {g.dim}, got {x.shape[1]}")
    if g.dim == 0:
        out = np.ones(x.shape[0])
    else:
        z = solve_triangular(g._chol, (x - g.mean).T, lower=True)
        with np.errstate(over="ignore"):
            maha = np.sum(z * z, axis=0)
        out = np.exp(-0.5 * (g.dim * _LOG_2PI + g._logdet + maha))
    return float(out[0]) if single else out


@dataclass(frozen=True, eq=False)
class NaiveKde:
    """Per-axis product of 1-D kernel estimators."""

    estimators: tuple

    @property
    def dim(self):
        return len(self.estimators)

    @classmethod
    def fit(cls, points):
        pts = np.asarray(points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.shape[0] == 0:
            raise InputError("cannot fit a KDE to zero points")
        return cls(tuple(Kde1D.fit(pts[:, j]) for j in range(pts.shape[1])))

    def __call__(self, x):
        return naive_kde_pdf(self, x)


def naive_kde_pdf(nk, x):
    x = np.asarray(x, dtype=float)
    single = x.ndim <= 1
    x = x.reshape(1, -1) if single else x
    if x.shape[1] != nk.dim:
        raise InputError(f"expected dimension {nk.dim}, got {x.shape[1]}")
    out = np.ones(x.shape[0])
    for j, est in enumerate(nk.estimators):
        out = out * kde1d_pdf(est, x[:, j])
    return float(out[0]) if single else out

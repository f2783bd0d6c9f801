"""Hyperplane geometry: discriminants, plane bases and projections.

Points are numpy arrays. Functions that act on points accept either a single
vector of shape ``(d,)`` or a batch of shape ``(m, d)``.
"""
from dataclasses import dataclass

import numpy as np

from .errors import InputError

TOL = 1e-9


def _as_vector(a, name="vector"):
    a = np.asarray(a, dtype=float)
    if a.ndim != 1:
        raise InputError(f"{name} must be one-dimensional, got shape {a.shape}")
    return a


def _check_points(x, d):
    x = np.asarray(x, dtype=float)
    if x.ndim not in (1, 2) or x.shape[-1] != d:
        raise InputError(f"expected points of dimension {d}, got shape {x.shape}")
    return x


def dot(a, b):
    """Euclidean dot product of two equal-length vectors."""
    a = _as_vector(a, "a")
    b = _as_vector(b, "b")
    if a.shape != b.shape:
        raise InputError(f"dimension mismatch: {a.shape[0]} vs {b.shape[0]}")
    return float(np.dot(a, b))


@dataclass(frozen=True, eq=False)
class Hyperplane:
    """Decision plane ``<normal, x> + offset = 0`` with a unit normal."""

    normal: np.ndarray
    offset: float

    def __post_init__(self):
        normal = _as_vector(self.normal, "normal")
        if normal.size == 0:
            raise InputError("hyperplane needs dimension >= 1")
        if not (np.all(np.isfinite(normal)) and np.isfinite(self.offset)):
            raise InputError("hyperplane entries must be finite")
        if abs(np.linalg.norm(normal) - 1.0) > TOL:
            raise InputError("hyperplane normal must have unit length")
        normal = normal.copy()
        normal.setflags(write=False)
        object.__setattr__(self, "normal", normal)
        object.__setattr__(self, "offset", float(self.offset))

    @classmethod
    def from_weights(cls, weights, bias):
        """Build a hyperplane from an unnormalised ``(w, b)`` pair.

        Both parts are divided by ``||w||`` so the discriminant becomes a
        signed Euclidean distance.
        """
        w = _as_vector(weights, "weights")
        norm = np.linalg.norm(w)
        if not np.isfinite(norm) or not np.isfinite(bias):
            raise InputError("weights and bias must be finite")
        if norm == 0.0:
            raise InputError("zero normal vector")
        return cls(w / norm, float(bias) / norm)

    @property
    def dim(self):
        return self.normal.shape[0]

    def negated(self):
        return Hyperplane(-self.normal, -self.offset)


def discriminant(h, x):
    """Signed distance ``<n, x> + b`` of point(s) ``x`` to the plane."""
    x = _check_points(x, h.dim)
    out = x @ h.normal + h.offset
    return float(out) if x.ndim == 1 else out


def classify(h, x):
    """Side of the plane as ``+1``/``-1``; points on the plane get ``+1``."""
    w = discriminant(h, x)
    if np.ndim(w) == 0:
        return 1 if w >= 0 else -1
    return np.where(w >= 0, 1, -1)


def plane_basis(h):
    """Orthonormal basis of the plane's direction space, shape ``(d-1, d)``.

    A Householder reflector sending the first axis onto ``-n`` (or ``n`` when
    ``n[0] < 0``) is built; its columns 2..d complete the normal to an
    orthonormal frame. The sign choice avoids cancellation in ``e1 -/+ n``.
    """
    n = h.normal if isinstance(h, Hyperplane) else _as_vector(h, "normal")
    d = n.shape[0]
    norm = np.linalg.norm(n)
    if d == 0 or norm == 0.0:
        raise InputError("zero normal vector")
    n = n / norm
    if d == 1:
        return np.empty((0, 1))
    v = n.copy()
    v[0] += 1.0 if n[0] >= 0 else -1.0
    H = np.eye(d) - 2.0 * np.outer(v, v) / (v @ v)
    basis = np.ascontiguousarray(H[:, 1:].T)
    basis.setflags(write=False)
    return basis


def project_onto_basis(basis, x):
    """Coordinates of point(s) ``x`` along each basis vector.

    For an empty basis (``d == 1``) this returns an empty vector, or an
    ``(m, 0)`` array for a batch.
    """
    basis = np.asarray(basis, dtype=float)
    x = _check_points(x, basis.shape[1])
    norms = np.linalg.norm(basis, axis=1)
    return (x @ basis.T) / norms if basis.shape[0] else x @ basis.T

"""Binary linear trainers returning unit-normal ``LinearModel`` objects.

Labels are ``+1``/``-1``. Every trainer is deterministic given its inputs
(and ``seed`` for the SVM).
"""
from dataclasses import dataclass

import numba
import numpy as np

from . import geometry
from .errors import InputError, TrainingError
from .geometry import Hyperplane


@dataclass(frozen=True, eq=False)
class TrainSet:
    points: np.ndarray
    labels: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        lab = np.asarray(self.labels).astype(int).ravel()
        if pts.ndim != 2 or pts.shape[0] != lab.shape[0]:
            raise InputError(f"{pts.shape[0]} points but {lab.shape[0]} labels")
        if not np.all(np.isin(lab, (-1, 1))):
            raise InputError("labels must be +1 or -1")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", lab)

    def __len__(self):
        return self.labels.shape[0]

    @property
    def dim(self):
        return self.points.shape[1]

    def has_both_classes(self):
        return bool(np.any(self.labels == 1) and np.any(self.labels == -1))

    def subset(self, idx):
        return TrainSet(self.points[idx], self.labels[idx])


@dataclass(frozen=True, eq=False)
class LinearModel:
    """A trained hyperplane plus its plane basis."""

    hyperplane: Hyperplane
    basis: np.ndarray

    @classmethod
    def from_hyperplane(cls, h):
        return cls(h, geometry.plane_basis(h))

    @classmethod
    def from_weights(cls, w, b):
        try:
            h = Hyperplane.from_weights(w, b)
        except InputError as exc:
            raise TrainingError(str(exc)) from exc
        return cls.from_hyperplane(h)

    @property
    def dim(self):
        return self.hyperplane.dim

    def discriminant(self, x):
        return geometry.discriminant(self.hyperplane, x)

    def classify(self, x):
        return geometry.classify(self.hyperplane, x)

    def project(self, x):
        return geometry.project_onto_basis(self.basis, x)


def _split(t):
    if not t.has_both_classes():
        raise TrainingError("training set must contain both classes")
    return t.points[t.labels == 1], t.points[t.labels == -1]


def _ridge(cov):
    k = cov.shape[0]
    return 1e-6 * (1.0 + np.trace(cov) / k)


def train_flda(t):
    """Fisher LDA with a pooled (MLE, size-weighted) within-class covariance.

    The threshold sits at the midpoint of the projected class means.
    """
    pos, neg = _split(t)
    mu_p, mu_n = pos.mean(axis=0), neg.mean(axis=0)
    cp, cn = pos - mu_p, neg - mu_n
    pooled = (cp.T @ cp + cn.T @ cn) / (len(pos) + len(neg))
    pooled[np.diag_indices_from(pooled)] += _ridge(pooled)
    w = np.linalg.solve(pooled, mu_p - mu_n)
    b = -0.5 * (w @ mu_p + w @ mu_n)
    return LinearModel.from_weights(w, b)


def train_nearest_centroid(t):
    """Perpendicular bisector of the two class centroids."""
    pos, neg = _split(t)
    c_p, c_n = pos.mean(axis=0), neg.mean(axis=0)
    w = c_p - c_n
    if not np.any(w):
        raise TrainingError("class centroids coincide")
    return LinearModel.from_weights(w, -0.5 * (w @ c_p + w @ c_n))


LOGISTIC_L2 = 1e-4
LOGISTIC_MAX_ITER = 500
LOGISTIC_GTOL = 1e-6


def _logistic_loss_grad(theta, X, y, lam):
    # theta = (w, b); bias is the last entry and is not penalised.
    margins = y * (X @ theta[:-1] + theta[-1])
    loss = np.mean(np.logaddexp(0.0, -margins)) + 0.5 * lam * (theta[:-1] @ theta[:-1])
    coef = -y * np.exp(-np.logaddexp(0.0, margins)) / len(y)
    grad = np.empty_like(theta)
    grad[:-1] = X.T @ coef + lam * theta[:-1]
    grad[-1] = coef.sum()
    return loss, grad


def fit_logistic(t, l2=LOGISTIC_L2, max_iter=LOGISTIC_MAX_ITER, gtol=LOGISTIC_GTOL):
    """Gradient descent with Armijo backtracking on the L2 logistic loss.

    Returns ``(weights, bias, loss_trace)``; the trace holds the loss after
    every accepted step, starting from the all-zero initial point.
    """
    _split(t)
    X, y = t.points, t.labels.astype(float)
    theta = np.zeros(X.shape[1] + 1)
    loss, grad = _logistic_loss_grad(theta, X, y, l2)
    trace = [loss]
    step = 1.0
    for _ in range(max_iter):
        gnorm2 = grad @ grad
        if not np.isfinite(loss) or not np.isfinite(gnorm2):
            raise TrainingError("logistic loss became non-finite")
        if np.sqrt(gnorm2) < gtol:
            break
        step *= 2.0
        while True:
            cand = theta - step * grad
            cand_loss, cand_grad = _logistic_loss_grad(cand, X, y, l2)
            if cand_loss <= loss - 0.5 * step * gnorm2:
                break
            step *= 0.5
            if step < 1e-16:
                cand, cand_loss, cand_grad = theta, loss, grad
                break
        if cand is theta:
            break
        theta, loss, grad = cand, cand_loss, cand_grad
        trace.append(loss)
    return theta[:-1], theta[-1], np.array(trace)


def train_logistic(t):
    w, b, _ = fit_logistic(t)
    return LinearModel.from_weights(w, b)


SVM_LAMBDA = 1e-3
SVM_EPOCHS = 20


@numba.njit(cache=True)
def _pegasos(X, y, order, lam):
    # X carries a trailing constant column, so the bias is part of w.
    d = X.shape[1]
    w = np.zeros(d)
    for it in range(order.shape[0]):
        i = order[it]
        eta = 1.0 / (lam * (it + 1))
        margin = 0.0
        for j in range(d):
            margin += w[j] * X[i, j]
        margin *= y[i]
        shrink = 1.0 - eta * lam
        for j in range(d):
            w[j] *= shrink
        if margin < 1.0:
            for j in range(d):
                w[j] += eta * y[i] * X[i, j]
    return w


def svm_objective(w, b, t, lam=SVM_LAMBDA):
    margins = t.labels * (t.points @ w + b)
    return 0.5 * lam * (w @ w) + np.mean(np.maximum(0.0, 1.0 - margins))


def fit_linear_svm(t, seed=0, lam=SVM_LAMBDA, epochs=SVM_EPOCHS):
    """Pegasos subgradient descent on ``lam/2 ||w||^2 + mean hinge``.

    The schedule runs ``10 * epochs`` passes of ``n`` steps each; every pass
    visits the points in a fresh permutation drawn from ``seed``. The bias
    is handled as a weight on a constant feature.
    """
    _split(t)
    n = len(t)
    rng = np.random.default_rng(seed)
    order = np.concatenate([rng.permutation(n) for _ in range(10 * epochs)])
    X = np.hstack([t.points, np.ones((n, 1))])
    w = _pegasos(X, t.labels.astype(float), order, float(lam))
    return w[:-1], w[-1]


def train_linear_svm(t, seed=0):
    w, b = fit_linear_svm(t, seed=seed)
    return LinearModel.from_weights(w, b)


TRAINERS = {
    "flda": train_flda,
    "lr": train_logistic,
    "nc": train_nearest_centroid,
    "svm": train_linear_svm,
}


def get_trainer(name):
    try:
        return TRAINERS[name]
    except KeyError:
        raise InputError(f"unknown trainer {name!r}; choose from {sorted(TRAINERS)}") from None


def train(name, t, seed=0):
    """Dispatch by trainer name, forwarding ``seed`` where it is used."""
    trainer = get_trainer(name)
    if trainer is train_linear_svm:
        return trainer(t, seed=seed)
    return trainer(t)

import numpy as np
import pytest
from scipy.linalg import eigh
from scipy.optimize import minimize

from potfuse.errors import InputError, TrainingError
from potfuse.io_data import make_blobs
from potfuse.linear_models import (
    TRAINERS,
    TrainSet,
    fit_linear_svm,
    fit_logistic,
    svm_objective,
    train,
    train_flda,
    train_logistic,
    train_nearest_centroid,
)


def blob_set(n=200, seed=0, dim=2, separation=8.0):
    d = make_blobs(n, 2, separation=separation, dim=dim, seed=seed)
    return TrainSet(d.X, np.where(d.y == 0, 1, -1))


def overlapping_set(seed=0, n=120, d=3):
    rng = np.random.default_rng(seed)
    X = rng.normal(size=(n, d)) * rng.uniform(0.5, 2.0, d)
    y = np.where(X @ rng.normal(size=d) + rng.normal(scale=1.0, size=n) > 0, 1, -1)
    return TrainSet(X, y)


def test_trainset_validation():
    with pytest.raises(InputError):
        TrainSet(np.zeros((3, 2)), [1, -1])
    with pytest.raises(InputError):
        TrainSet(np.zeros((2, 2)), [1, 0])


@pytest.mark.parametrize("name", sorted(TRAINERS))
def test_single_class_is_training_error(name):
    with pytest.raises(TrainingError):
        train(name, TrainSet(np.random.default_rng(0).normal(size=(5, 2)), [1] * 5))


def test_flda_examples():
    rng = np.random.default_rng(0)
    X = np.vstack([rng.normal([-1, 0], 0.3, (200, 2)), rng.normal([1, 0], 0.3, (200, 2))])
    X -= X.mean(axis=0)
    m = train_flda(TrainSet(X, np.repeat([-1, 1], 200)))
    assert abs(abs(m.hyperplane.normal[0]) - 1) < 1e-2
    assert abs(m.hyperplane.offset) < 0.05
    m = train_flda(TrainSet(np.array([-2.0, -1.0, 1.0, 2.0]), [-1, -1, 1, 1]))
    assert m.discriminant(np.array([0.0])) == pytest.approx(0.0, abs=1e-12)


def test_flda_direction_matches_generalised_eigenproblem():
    t = overlapping_set(4)
    pos, neg = t.points[t.labels == 1], t.points[t.labels == -1]
    diff = pos.mean(0) - neg.mean(0)
    Sw = np.cov(pos.T, bias=True) * len(pos) + np.cov(neg.T, bias=True) * len(neg)
    vals, vecs = eigh(np.outer(diff, diff), Sw)
    top = vecs[:, -1] / np.linalg.norm(vecs[:, -1])
    n = train_flda(t).hyperplane.normal
    assert abs(abs(n @ top) - 1) < 1e-8
    assert n @ diff > 0


def test_nearest_centroid_examples():
    m = train_nearest_centroid(TrainSet(np.array([[2.0, 0.0], [0.0, 0.0]]), [1, -1]))
    np.testing.assert_allclose(m.hyperplane.normal, [1, 0])
    assert m.hyperplane.offset == pytest.approx(-1.0)
    a, b = np.array([1.0, 3.0]), np.array([-2.0, 0.5])
    m = train_nearest_centroid(TrainSet(np.array([a, b]), [1, -1]))
    assert m.discriminant((a + b) / 2) == pytest.approx(0.0, abs=1e-12)
    assert m.discriminant(a) == pytest.approx(-m.discriminant(b))
    with pytest.raises(TrainingError):
        train_nearest_centroid(TrainSet(np.array([[1.0, 1.0], [1.0, 1.0]]), [1, -1]))


def test_nearest_centroid_translation_equivariance():
    rng = np.random.default_rng(8)
    t = overlapping_set(8)
    v = rng.normal(scale=10.0, size=t.dim)
    m0 = train_nearest_centroid(t)
    m1 = train_nearest_centroid(TrainSet(t.points + v, t.labels))
    x = rng.normal(size=(50, t.dim))
    np.testing.assert_allclose(m1.discriminant(x + v), m0.discriminant(x), atol=1e-9)


def test_logistic_symmetric_and_separable():
    m = train_logistic(TrainSet(np.array([-1.0, 1.0]), [-1, 1]))
    assert abs(m.hyperplane.offset) < 1e-3
    t = blob_set(400, 1)
    assert np.mean(train_logistic(t).classify(t.points) == t.labels) >= 0.99


def test_logistic_loss_trace_nonincreasing():
    w, b, trace = fit_logistic(overlapping_set(2))
    assert np.all(np.diff(trace) <= 0)
    assert len(trace) > 1


def test_logistic_matches_lbfgs_optimum():
    t = overlapping_set(3)
    X, y, lam = t.points, t.labels.astype(float), 1e-4

    def loss(theta):
        m = y * (X @ theta[:-1] + theta[-1])
        return np.mean(np.log1p(np.exp(-m))) + 0.5 * lam * theta[:-1] @ theta[:-1]

    ref = minimize(loss, np.zeros(X.shape[1] + 1), method="L-BFGS-B", options={"gtol": 1e-10, "ftol": 1e-14})
    w, b, trace = fit_logistic(t)
    assert trace[-1] == pytest.approx(ref.fun, abs=1e-6)
    np.testing.assert_allclose(np.append(w, b), ref.x, atol=1e-2)


def test_svm_symmetric_and_separable():
    m = train("svm", TrainSet(np.array([-1.0, 1.0]), [-1, 1]))
    assert abs(m.discriminant(np.array([0.0]))) < 0.1
    t = blob_set(400, 2)
    assert np.mean(train("svm", t).classify(t.points) == t.labels) >= 0.99


def test_svm_objective_close_to_qp_optimum():
    # oracle: the primal QP in (w, b, slack) solved by SLSQP
    t = overlapping_set(5, n=60, d=2)
    X, y, lam = t.points, t.labels.astype(float), 1e-3
    n, d = X.shape
    w, b = fit_linear_svm(t, seed=0)
    # the trainer regularises the bias as a constant feature
    ours = 0.5 * lam * (w @ w + b * b) + np.mean(np.maximum(0, 1 - y * (X @ w + b)))

    def obj(z):
        return 0.5 * lam * z[:d + 1] @ z[:d + 1] + z[d + 1:].mean()

    cons = [{"type": "ineq", "fun": lambda z: y * (X @ z[:d] + z[d]) - 1 + z[d + 1:]},
            {"type": "ineq", "fun": lambda z: z[d + 1:]}]
    ref = minimize(obj, np.r_[np.zeros(d + 1), np.ones(n)], constraints=cons, method="SLSQP",
                   options={"maxiter": 500, "ftol": 1e-12})
    # plain Pegasos is within O(1 / (lam * steps)) of the optimum
    steps = 10 * 20 * n
    assert ref.fun - 1e-6 <= ours <= ref.fun + 1.0 / (lam * steps)
    assert svm_objective(w, b, t) <= 1.0


@pytest.mark.parametrize("name", sorted(TRAINERS))
def test_label_flip_antisymmetry(name):
    t = overlapping_set(6)
    m = train(name, t, seed=3)
    f = train(name, TrainSet(t.points, -t.labels), seed=3)
    x = np.random.default_rng(1).normal(size=(300, t.dim))
    off = np.abs(m.discriminant(x)) > 1e-9
    np.testing.assert_array_equal(f.classify(x)[off], -m.classify(x)[off])


@pytest.mark.parametrize("name", sorted(TRAINERS))
def test_models_are_valid_and_deterministic(name):
    t = overlapping_set(7, d=4)
    a, b = train(name, t, seed=5), train(name, t, seed=5)
    assert abs(np.linalg.norm(a.hyperplane.normal) - 1) < 1e-9
    assert np.max(np.abs(a.basis @ a.basis.T - np.eye(3))) < 1e-9
    assert np.max(np.abs(a.basis @ a.hyperplane.normal)) < 1e-9
    np.testing.assert_array_equal(a.hyperplane.normal, b.hyperplane.normal)
    assert a.hyperplane.offset == b.hyperplane.offset


def test_unknown_trainer():
    with pytest.raises(InputError):
        train("mlp", blob_set())

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize

from potfuse.errors import InputError
from potfuse.geometry import (
    Hyperplane,
    classify,
    discriminant,
    dot,
    plane_basis,
    project_onto_basis,
)


def random_plane(rng, d):
    n = rng.normal(size=d)
    return Hyperplane(n / np.linalg.norm(n), rng.normal())


@pytest.mark.parametrize(
    "a, b, expected",
    [((1, 0), (0, 1), 0.0), ((0.6, 0.8), (3, 4), 5.0), ((3, 4), (3, 4), 25.0)],
)
def test_dot(a, b, expected):
    assert dot(a, b) == pytest.approx(expected, abs=1e-15)


def test_dot_rejects_mismatch():
    with pytest.raises(InputError):
        dot([1, 2], [1, 2, 3])


@pytest.mark.parametrize(
    "n, b, x, expected",
    [((1, 0), -1, (1, 0), 0.0), ((1, 0), -1, (3, 0), 2.0), ((0, 1), 0, (5, -2), -2.0)],
)
def test_discriminant(n, b, x, expected):
    assert discriminant(Hyperplane(np.array(n, float), b), np.array(x, float)) == expected


def test_discriminant_batch_and_mismatch():
    h = Hyperplane(np.array([0.0, 1.0]), 0.5)
    np.testing.assert_array_equal(discriminant(h, np.array([[0, 0], [1, 2]])), [0.5, 2.5])
    with pytest.raises(InputError):
        discriminant(h, np.zeros(3))


def test_hyperplane_rejects_non_unit_normal():
    with pytest.raises(InputError):
        Hyperplane(np.array([1.0, 1.0]), 0.0)
    with pytest.raises(InputError):
        Hyperplane.from_weights(np.zeros(3), 1.0)


def test_from_weights_normalises():
    h = Hyperplane.from_weights(np.array([3.0, 4.0]), 10.0)
    np.testing.assert_allclose(h.normal, [0.6, 0.8])
    assert h.offset == pytest.approx(2.0)


@pytest.mark.parametrize("omega, label", [(2.5, 1), (-0.1, -1), (0.0, 1)])
def test_classify_sign_and_tie(omega, label):
    h = Hyperplane(np.array([1.0]), 0.0)
    assert classify(h, np.array([omega])) == label


def test_classify_flips_with_negated_plane():
    rng = np.random.default_rng(3)
    for d in (1, 2, 5):
        h = random_plane(rng, d)
        x = rng.normal(size=(200, d))
        np.testing.assert_array_equal(classify(h.negated(), x), -classify(h, x))


def test_discriminant_is_distance_to_plane():
    # oracle: numerically minimise |x - p| over points p = p0 + B u of the plane
    rng = np.random.default_rng(0)
    for d in (2, 3, 6):
        h = random_plane(rng, d)
        B = plane_basis(h)
        p0 = -h.offset * h.normal
        for _ in range(5):
            x = rng.normal(scale=3.0, size=d)
            res = minimize(lambda u: np.sum((p0 + u @ B - x) ** 2), np.zeros(d - 1),
                           method="BFGS", options={"gtol": 1e-12})
            assert abs(discriminant(h, x)) == pytest.approx(np.sqrt(res.fun), abs=1e-6)


def test_discriminant_distance_against_sampled_plane_points():
    rng = np.random.default_rng(1)
    h = random_plane(rng, 2)
    B = plane_basis(h)
    p0 = -h.offset * h.normal
    x = rng.normal(size=2)
    u = np.linspace(-20, 20, 400001)
    pts = p0 + u[:, None] * B[0]
    assert abs(discriminant(h, x)) == pytest.approx(np.min(np.linalg.norm(pts - x, axis=1)), abs=1e-6)


def test_basis_examples():
    B = plane_basis(Hyperplane(np.array([1.0, 0.0, 0.0]), 0.0))
    np.testing.assert_allclose(np.abs(B), [[0, 1, 0], [0, 0, 1]], atol=1e-15)
    B = plane_basis(Hyperplane(np.array([0.0, 1.0]), 0.0))
    assert B.shape == (1, 2)
    assert abs(B[0] @ [0, 1]) < 1e-15 and np.linalg.norm(B[0]) == pytest.approx(1.0)
    assert plane_basis(Hyperplane(np.array([-1.0]), 2.0)).shape == (0, 1)
    with pytest.raises(InputError):
        plane_basis(np.zeros(3))


def test_basis_invariants_random_normals():
    rng = np.random.default_rng(7)
    for k in range(10_000):
        d = 2 + k % 19
        n = rng.normal(size=d)
        n /= np.linalg.norm(n)
        B = plane_basis(n)
        assert B.shape == (d - 1, d)
        assert np.max(np.abs(B @ B.T - np.eye(d - 1))) < 1e-9
        assert np.max(np.abs(B @ n)) < 1e-9


def test_basis_is_shared_by_negated_plane():
    rng = np.random.default_rng(11)
    h = random_plane(rng, 7)
    np.testing.assert_array_equal(plane_basis(h), plane_basis(h.negated()))


def test_projection_examples():
    B = np.array([[0.0, 1.0, 0.0], [0.0, 0.0, 1.0]])
    np.testing.assert_array_equal(project_onto_basis(B, np.array([7.0, 2.0, 3.0])), [2.0, 3.0])
    h = Hyperplane(np.array([0.6, 0.0, 0.8]), 1.0)
    np.testing.assert_allclose(project_onto_basis(plane_basis(h), 4.2 * h.normal), 0.0, atol=1e-12)
    assert project_onto_basis(np.empty((0, 1)), np.array([3.0])).shape == (0,)
    assert project_onto_basis(np.empty((0, 1)), np.ones((4, 1))).shape == (4, 0)


@settings(max_examples=200, deadline=None)
@given(d=st.integers(1, 12), seed=st.integers(0, 2**32 - 1))
def test_reconstruction_from_frame(d, seed):
    rng = np.random.default_rng(seed)
    h = random_plane(rng, d)
    B = plane_basis(h)
    x = rng.normal(scale=5.0, size=d)
    proj = project_onto_basis(B, x)
    back = (discriminant(h, x) - h.offset) * h.normal + proj @ B
    np.testing.assert_allclose(back, x, atol=1e-9)

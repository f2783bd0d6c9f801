from fractions import Fraction

import numpy as np
import pytest
from scipy.integrate import quad
from scipy.special import beta as beta_fn
from scipy.stats import f as f_dist

from potfuse.ensemble import BaggingConfig
from potfuse.errors import InputError
from potfuse.evaluation import (
    CRITERIA,
    Pipeline,
    average_ranks,
    binarized_counts,
    compute_criteria,
    confusion_matrix,
    cross_validate,
    cross_validate_many,
    f_cdf,
    f_sf,
    iman_davenport,
    mcc,
    rank_rows,
    rank_table,
    stratified_folds,
)
from potfuse.io_data import Dataset, make_blobs


def f_pdf(x, d1, d2):
    return (d1 * x) ** (d1 / 2) * d2 ** (d2 / 2) / ((d1 * x + d2) ** ((d1 + d2) / 2) * x * beta_fn(d1 / 2, d2 / 2))


def f_cdf_quadrature(x, d1, d2):
    # substitute x = u^2 so the x^(d1/2 - 1) endpoint singularity disappears
    val, _ = quad(lambda u: 2 * u * f_pdf(u * u, d1, d2), 0, np.sqrt(x), epsabs=1e-14, epsrel=1e-13, limit=200)
    return val


def test_confusion_matrix():
    cm = confusion_matrix([0, 0, 1, 2, 2], [0, 1, 1, 2, 0], 3)
    np.testing.assert_array_equal(cm, [[1, 1, 0], [0, 1, 0], [1, 0, 1]])


def test_perfect_predictions_score_zero():
    c = compute_criteria(np.diag([5, 3, 7]))
    assert all(v == 0.0 for v in c.as_dict().values())


def test_binary_criteria_by_hand():
    # TP=40, FN=10, FP=5, TN=45 for class 0
    c = compute_criteria(np.array([[40, 10], [5, 45]]))
    fdr0, fdr1 = 5 / 45, 10 / 55
    fnr0, fnr1 = 10 / 50, 5 / 50
    m = (40 * 45 - 5 * 10) / np.sqrt(45 * 50 * 55 * 50)
    assert c.macro_fdr == pytest.approx((fdr0 + fdr1) / 2)
    assert c.macro_fnr == pytest.approx((fnr0 + fnr1) / 2)
    assert c.macro_mcc == pytest.approx((1 - m) / 2)
    assert c.micro_fdr == pytest.approx(15 / 100)


def test_zero_denominators():
    assert mcc(5, 0, 0, 0) == 0.0
    c = compute_criteria(np.array([[4, 0], [0, 0]]))
    assert c.macro_fdr == 0.0 and c.macro_fnr == 0.0
    with pytest.raises(InputError):
        compute_criteria(np.zeros((2, 2)))


def test_micro_identities_exact():
    rng = np.random.default_rng(0)
    for _ in range(500):
        C = int(rng.integers(2, 7))
        cm = rng.integers(0, 30, size=(C, C))
        if cm.sum() == 0:
            continue
        c = compute_criteria(cm)
        acc = Fraction(int(np.trace(cm)), int(cm.sum()))
        assert c.micro_fdr == c.micro_fnr == float(1 - acc)
        a = float(acc)
        tp, fp, fn, tn = (v.sum() for v in binarized_counts(cm))
        assert float(mcc(tp, fp, fn, tn)) == pytest.approx(a - (1 - a) / (C - 1), abs=1e-12)
        assert all(0.0 <= v <= 1.0 for v in c.as_dict().values())


def test_stratified_folds_partition():
    y = np.repeat([0, 1, 2], [23, 11, 6])
    f = stratified_folds(y, 5, seed=3)
    assert set(f) == set(range(5))
    sizes = np.bincount(f)
    assert sizes.max() - sizes.min() <= 1
    for c in range(3):
        per = np.bincount(f[y == c], minlength=5)
        assert per.max() - per.min() <= 1
    np.testing.assert_array_equal(f, stratified_folds(y, 5, seed=3))


def test_cross_validate_deterministic_and_pooled():
    d = make_blobs(120, 3, separation=3.0, seed=5)
    p = Pipeline("nc", "kb", BaggingConfig(5))
    a = cross_validate(d, p, folds=4)
    b = cross_validate(d, p, folds=4)
    assert a.folds == 4 and a.pooled_matrix.sum() == 120
    np.testing.assert_array_equal(a.pooled_matrix, sum(a.fold_matrices))
    np.testing.assert_array_equal(a.pooled_matrix, b.pooled_matrix)


def test_shared_models_match_single_runs():
    d = make_blobs(80, 2, separation=2.0, seed=6)
    many = cross_validate_many(d, "lr", ["avg", "ka"], folds=4, bagging=BaggingConfig(3))
    for s in ("avg", "ka"):
        one = cross_validate(d, Pipeline("lr", s, BaggingConfig(3)), folds=4)
        np.testing.assert_array_equal(many[s].pooled_matrix, one.pooled_matrix)


def test_small_classes_reduce_or_skip():
    X = np.random.default_rng(0).normal(size=(23, 2))
    y = np.array([0] * 20 + [1] * 3)
    rep = cross_validate(Dataset("small", X, y, ("a", "b")), Pipeline(bagging=BaggingConfig(3)))
    assert rep.folds == 3 and any("reduced" in n for n in rep.notes)
    y = np.array([0] * 22 + [1])
    rep = cross_validate(Dataset("tiny", X, y, ("a", "b")))
    assert rep.skipped


def test_unknown_strategy():
    with pytest.raises(InputError):
        Pipeline(strategy="majority")


def test_ranks():
    np.testing.assert_array_equal(rank_rows([0.1, 0.2, 0.3]), [[1, 2, 3]])
    np.testing.assert_array_equal(rank_rows([0.1, 0.1, 0.3]), [[1.5, 1.5, 3]])
    np.testing.assert_array_equal(rank_rows([0.4] * 4), [[2.5] * 4])
    np.testing.assert_array_equal(average_ranks([[1, 2], [2, 1], [0, 3]]), [4 / 3, 5 / 3])
    with pytest.raises(InputError):
        rank_rows([[0.1, np.nan]])
    with pytest.raises(InputError):
        rank_rows([[0.1]])


def test_iman_davenport_examples():
    F, p = iman_davenport(np.tile([2.0, 2.0, 2.0], (5, 1)))
    assert F == 0.0 and p == 1.0
    t = rank_table(np.tile([0.1, 0.2, 0.3], (4, 1)))
    assert t.chi2 == pytest.approx(8.0) and t.f_stat == np.inf and t.p_value == 0.0 and t.flagged


def test_iman_davenport_against_scipy_f():
    rng = np.random.default_rng(7)
    for _ in range(20):
        N, k = int(rng.integers(3, 15)), int(rng.integers(3, 8))
        t = rank_table(rng.random((N, k)))
        if t.flagged:
            continue
        chi2 = 12 * N / (k * (k + 1)) * (np.sum(t.average ** 2) - k * (k + 1) ** 2 / 4)
        assert t.chi2 == pytest.approx(chi2)
        assert t.p_value == pytest.approx(f_dist.sf(t.f_stat, k - 1, (k - 1) * (N - 1)), abs=1e-12)


def test_f_cdf_matches_quadrature():
    rng = np.random.default_rng(8)
    for _ in range(20):
        d1, d2, x = int(rng.integers(1, 12)), int(rng.integers(1, 60)), float(rng.uniform(0.01, 8))
        assert abs(f_cdf(x, d1, d2) - f_cdf_quadrature(x, d1, d2)) < 1e-8
        assert f_sf(x, d1, d2) == pytest.approx(1 - f_cdf(x, d1, d2), abs=1e-14)


def test_p_value_monotone_in_f():
    xs = np.linspace(0, 20, 400)
    ps = [f_sf(x, 4, 36) for x in xs]
    assert np.all(np.diff(ps) <= 0) and ps[0] == 1.0


def test_criteria_names():
    assert CRITERIA == ("macro_fdr", "macro_fnr", "macro_mcc", "micro_fdr", "micro_fnr", "micro_mcc")
